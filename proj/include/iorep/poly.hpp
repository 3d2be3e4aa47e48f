#ifndef IOREP_POLY_HPP
#define IOREP_POLY_HPP

#include "iorep/bigint.hpp"
#include "iorep/order.hpp"
#include "iorep/registry.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace iorep {

/// Canonical monomial comparison: degrevlex over the whole registry, index order.
int canonical_mono_cmp(const Mono &a, const Mono &b);

struct Term {
    Mono m;
    BigRational c;
};

/// Sparse multivariate polynomial over Q. Terms are kept sorted in descending
/// canonical order with no zero coefficients, so equal polynomials have equal
/// representations.
class Poly {
  public:
    Poly() = default;
    explicit Poly(RegistryPtr reg) : reg_(std::move(reg)) {}

    static Poly zero(const RegistryPtr &reg) { return Poly(reg); }
    static Poly constant(const RegistryPtr &reg, const BigRational &c);
    static Poly one(const RegistryPtr &reg) { return constant(reg, BigRational(1)); }
    static Poly variable(const RegistryPtr &reg, int var, uint32_t exp = 1);
    static Poly from_terms(const RegistryPtr &reg, std::vector<Term> terms); // normalizes

    const RegistryPtr &reg() const { return reg_; }
    const std::vector<Term> &terms() const { return t_; }
    int term_count() const { return static_cast<int>(t_.size()); }

    bool is_zero() const { return t_.empty(); }
    bool is_constant() const { return t_.empty() || (t_.size() == 1 && mono_is_one(t_[0].m)); }
    BigRational constant_value() const; // requires is_constant()

    friend Poly operator+(const Poly &a, const Poly &b);
    friend Poly operator-(const Poly &a, const Poly &b);
    friend Poly operator*(const Poly &a, const Poly &b);
    Poly operator-() const;
    Poly &operator+=(const Poly &o) { return *this = *this + o; }
    Poly &operator-=(const Poly &o) { return *this = *this - o; }
    Poly &operator*=(const Poly &o) { return *this = *this * o; }
    Poly scaled(const BigRational &c) const;
    Poly mul_term(const Mono &m, const BigRational &c) const;
    static Poly pow(const Poly &a, uint32_t e);

    bool operator==(const Poly &o) const;
    bool operator!=(const Poly &o) const { return !(*this == o); }
    /// Deterministic total order on polynomials (for sorting outputs).
    static int compare(const Poly &a, const Poly &b);

    Poly derivative(int var) const;
    /// Simultaneous substitution var -> replacement (polynomial).
    Poly substitute(const std::map<int, Poly> &repl) const;
    /// Full rational-point evaluation; every variable present must be assigned.
    BigRational evaluate(const std::vector<BigRational> &point) const;

    uint32_t degree(int var) const;
    uint64_t max_total_degree() const;
    bool depends_on(int var) const { return degree(var) > 0; }
    std::vector<int> vars_present() const;
    /// Coefficient polynomials with respect to one variable: exponent -> Poly.
    std::map<uint32_t, Poly> collect(int var) const;
    Poly coefficient_of(int var, uint32_t k) const;
    /// Group terms by the monomial restricted to `vars`; key monomial has zeros elsewhere.
    std::map<Mono, Poly, bool (*)(const Mono &, const Mono &)> group_by(const std::vector<int> &vars) const;

    /// Leading data w.r.t. an order.
    const Term &leading_term(const MonomialOrder &o) const;

    /// Rational scalar c such that (*this)/c has coprime integer coefficients
    /// with positive leading (canonical) coefficient; 0 for the zero poly.
    BigRational content() const;
    Poly primitive() const; // *this / content()

    /// Move this polynomial to a registry that contains all its variables (by name).
    Poly lifted(const RegistryPtr &to) const;

    std::string str() const;

    size_t hash() const;

  private:
    void normalize(); // sort, merge, drop zeros
    RegistryPtr reg_;
    std::vector<Term> t_;
};

/// Exact polynomial quotient, or nullopt when b does not divide a.
std::optional<Poly> poly_divexact(const Poly &a, const Poly &b);

/// GCD over Q[vars]: integer-primitive with positive leading canonical coefficient.
Poly poly_gcd(const Poly &a, const Poly &b);

/// Pseudo-remainder of a by b with respect to variable `var`:
/// lc_b^k * a = q*b + r with deg_var(r) < deg_var(b).
Poly poly_prem(const Poly &a, const Poly &b, int var);

/// Pairwise-coprime factor base: every input is a product of powers of the
/// returned primitives (constants dropped). Used to keep saturation products
/// small.
std::vector<Poly> gcd_free_basis(const std::vector<Poly> &inputs);

} // namespace iorep

#endif
