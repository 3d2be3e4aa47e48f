#ifndef IOREP_RATFUN_HPP
#define IOREP_RATFUN_HPP

#include "iorep/poly.hpp"

#include <map>
#include <string>

namespace iorep {

/// Rational function num/den in canonical form: gcd(num, den) = 1, den is
/// integer-primitive with positive leading (canonical) coefficient.
class RatFun {
  public:
    RatFun() = default;
    explicit RatFun(Poly num) : num_(std::move(num)) {
        den_ = Poly::one(num_.reg());
    }
    RatFun(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) { reduce(); }

    static RatFun zero(const RegistryPtr &reg) { return RatFun(Poly::zero(reg)); }
    static RatFun one(const RegistryPtr &reg) { return RatFun(Poly::one(reg)); }
    static RatFun constant(const RegistryPtr &reg, const BigRational &c) {
        return RatFun(Poly::constant(reg, c));
    }
    static RatFun variable(const RegistryPtr &reg, int var) {
        return RatFun(Poly::variable(reg, var));
    }

    const Poly &num() const { return num_; }
    const Poly &den() const { return den_; }
    const RegistryPtr &reg() const { return num_.reg(); }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_constant(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    BigRational constant_value() const { return num_.constant_value() / den_.constant_value(); }

    friend RatFun operator+(const RatFun &a, const RatFun &b);
    friend RatFun operator-(const RatFun &a, const RatFun &b);
    friend RatFun operator*(const RatFun &a, const RatFun &b);
    friend RatFun operator/(const RatFun &a, const RatFun &b);
    RatFun operator-() const {
        RatFun r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }
    RatFun &operator+=(const RatFun &o) { return *this = *this + o; }
    RatFun &operator-=(const RatFun &o) { return *this = *this - o; }
    RatFun &operator*=(const RatFun &o) { return *this = *this * o; }
    RatFun &operator/=(const RatFun &o) { return *this = *this / o; }
    RatFun inverse() const;
    static RatFun pow(const RatFun &a, long e);

    bool operator==(const RatFun &o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const RatFun &o) const { return !(*this == o); }
    static int compare(const RatFun &a, const RatFun &b) {
        int c = Poly::compare(a.num_, b.num_);
        return c != 0 ? c : Poly::compare(a.den_, b.den_);
    }

    RatFun derivative(int var) const;
    /// Simultaneous substitution of variables by rational functions.
    RatFun substitute(const std::map<int, RatFun> &repl) const;
    /// Evaluate at a rational point; throws std::domain_error when den vanishes.
    BigRational evaluate(const std::vector<BigRational> &point) const;

    RatFun lifted(const RegistryPtr &to) const { return RatFun(num_.lifted(to), den_.lifted(to)); }
    bool depends_on(int var) const { return num_.depends_on(var) || den_.depends_on(var); }

    std::string str() const;
    size_t hash() const { return num_.hash() * 1000003 + den_.hash(); }

  private:
    void reduce();
    Poly num_, den_;
};

/// Substitute rational functions into a polynomial (denominators combine).
RatFun poly_substitute_ratfun(const Poly &p, const std::map<int, RatFun> &repl);

} // namespace iorep

#endif
