#ifndef IOREP_BIGINT_HPP
#define IOREP_BIGINT_HPP

#include <gmp.h>

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>

namespace iorep {

/// Arbitrary-precision signed integer (GMP-backed, value semantics).
class BigInt {
  public:
    BigInt() { mpz_init(v_); }
    BigInt(long n) { mpz_init_set_si(v_, n); } // NOLINT(google-explicit-constructor)
    BigInt(int n) : BigInt(static_cast<long>(n)) {}
    explicit BigInt(const std::string &s) {
        if (mpz_init_set_str(v_, s.c_str(), 10) != 0) {
            mpz_clear(v_);
            throw std::invalid_argument("BigInt: bad integer literal '" + s + "'");
        }
    }
    BigInt(const BigInt &o) { mpz_init_set(v_, o.v_); }
    BigInt(BigInt &&o) noexcept {
        mpz_init(v_);
        mpz_swap(v_, o.v_);
    }
    BigInt &operator=(const BigInt &o) {
        if (this != &o) mpz_set(v_, o.v_);
        return *this;
    }
    BigInt &operator=(BigInt &&o) noexcept {
        mpz_swap(v_, o.v_);
        return *this;
    }
    ~BigInt() { mpz_clear(v_); }

    friend BigInt operator+(const BigInt &a, const BigInt &b) {
        BigInt r;
        mpz_add(r.v_, a.v_, b.v_);
        return r;
    }
    friend BigInt operator-(const BigInt &a, const BigInt &b) {
        BigInt r;
        mpz_sub(r.v_, a.v_, b.v_);
        return r;
    }
    friend BigInt operator*(const BigInt &a, const BigInt &b) {
        BigInt r;
        mpz_mul(r.v_, a.v_, b.v_);
        return r;
    }
    BigInt operator-() const {
        BigInt r;
        mpz_neg(r.v_, v_);
        return r;
    }
    BigInt &operator+=(const BigInt &o) {
        mpz_add(v_, v_, o.v_);
        return *this;
    }
    BigInt &operator-=(const BigInt &o) {
        mpz_sub(v_, v_, o.v_);
        return *this;
    }
    BigInt &operator*=(const BigInt &o) {
        mpz_mul(v_, v_, o.v_);
        return *this;
    }

    /// Truncated division; throws on zero divisor.
    friend BigInt operator/(const BigInt &a, const BigInt &b) {
        if (b.is_zero()) throw std::domain_error("BigInt: division by zero");
        BigInt r;
        mpz_tdiv_q(r.v_, a.v_, b.v_);
        return r;
    }
    friend BigInt operator%(const BigInt &a, const BigInt &b) {
        if (b.is_zero()) throw std::domain_error("BigInt: division by zero");
        BigInt r;
        mpz_tdiv_r(r.v_, a.v_, b.v_);
        return r;
    }
    /// Exact division (caller guarantees divisibility).
    static BigInt divexact(const BigInt &a, const BigInt &b) {
        BigInt r;
        mpz_divexact(r.v_, a.v_, b.v_);
        return r;
    }
    static BigInt gcd(const BigInt &a, const BigInt &b) {
        BigInt r;
        mpz_gcd(r.v_, a.v_, b.v_);
        return r;
    }
    static BigInt lcm(const BigInt &a, const BigInt &b) {
        BigInt r;
        mpz_lcm(r.v_, a.v_, b.v_);
        return r;
    }
    static BigInt pow(const BigInt &a, unsigned long e) {
        BigInt r;
        mpz_pow_ui(r.v_, a.v_, e);
        return r;
    }

    int sign() const { return mpz_sgn(v_); }
    bool is_zero() const { return mpz_sgn(v_) == 0; }
    bool is_one() const { return mpz_cmp_si(v_, 1) == 0; }
    int cmp(const BigInt &o) const { return mpz_cmp(v_, o.v_); }
    friend bool operator==(const BigInt &a, const BigInt &b) { return a.cmp(b) == 0; }
    friend bool operator!=(const BigInt &a, const BigInt &b) { return a.cmp(b) != 0; }
    friend bool operator<(const BigInt &a, const BigInt &b) { return a.cmp(b) < 0; }
    friend bool operator>(const BigInt &a, const BigInt &b) { return a.cmp(b) > 0; }

    bool fits_long() const { return mpz_fits_slong_p(v_) != 0; }
    long to_long() const { return mpz_get_si(v_); }
    std::string str() const {
        char *raw = mpz_get_str(nullptr, 10, v_);
        std::string s(raw);
        void (*freefn)(void *, size_t);
        mp_get_memory_functions(nullptr, nullptr, &freefn);
        freefn(raw, s.size() + 1);
        return s;
    }
    size_t hash() const {
        // cheap: mix limb data
        size_t h = static_cast<size_t>(mpz_sgn(v_)) + 0x9e3779b97f4a7c15ULL;
        for (size_t i = 0; i < mpz_size(v_); ++i)
            h = h * 1099511628211ULL ^ static_cast<size_t>(mpz_getlimbn(v_, i));
        return h;
    }

    mpz_srcptr raw() const { return v_; }
    mpz_ptr raw() { return v_; }

  private:
    mpz_t v_;
};

/// Exact rational number; always canonical (gcd(|num|,den) = 1, den >= 1).
class BigRational {
  public:
    BigRational() { mpq_init(v_); }
    BigRational(long n) { // NOLINT(google-explicit-constructor)
        mpq_init(v_);
        mpq_set_si(v_, n, 1);
    }
    BigRational(int n) : BigRational(static_cast<long>(n)) {}
    BigRational(long num, long den) {
        if (den == 0) throw std::domain_error("BigRational: zero denominator");
        mpq_init(v_);
        mpq_set_si(v_, num, 1);
        mpq_t d;
        mpq_init(d);
        mpq_set_si(d, den, 1);
        mpq_div(v_, v_, d);
        mpq_clear(d);
    }
    BigRational(const BigInt &num, const BigInt &den) {
        if (den.is_zero()) throw std::domain_error("BigRational: zero denominator");
        mpq_init(v_);
        mpz_set(mpq_numref(v_), num.raw());
        mpz_set(mpq_denref(v_), den.raw());
        mpq_canonicalize(v_);
    }
    explicit BigRational(const BigInt &num) {
        mpq_init(v_);
        mpz_set(mpq_numref(v_), num.raw());
    }
    explicit BigRational(const std::string &s) {
        mpq_init(v_);
        if (mpq_set_str(v_, s.c_str(), 10) != 0 || mpz_sgn(mpq_denref(v_)) == 0) {
            mpq_clear(v_);
            throw std::invalid_argument("BigRational: bad rational literal '" + s + "'");
        }
        mpq_canonicalize(v_);
    }
    BigRational(const BigRational &o) {
        mpq_init(v_);
        mpq_set(v_, o.v_);
    }
    BigRational(BigRational &&o) noexcept {
        mpq_init(v_);
        mpq_swap(v_, o.v_);
    }
    BigRational &operator=(const BigRational &o) {
        if (this != &o) mpq_set(v_, o.v_);
        return *this;
    }
    BigRational &operator=(BigRational &&o) noexcept {
        mpq_swap(v_, o.v_);
        return *this;
    }
    ~BigRational() { mpq_clear(v_); }

    friend BigRational operator+(const BigRational &a, const BigRational &b) {
        BigRational r;
        mpq_add(r.v_, a.v_, b.v_);
        return r;
    }
    friend BigRational operator-(const BigRational &a, const BigRational &b) {
        BigRational r;
        mpq_sub(r.v_, a.v_, b.v_);
        return r;
    }
    friend BigRational operator*(const BigRational &a, const BigRational &b) {
        BigRational r;
        mpq_mul(r.v_, a.v_, b.v_);
        return r;
    }
    friend BigRational operator/(const BigRational &a, const BigRational &b) {
        if (b.is_zero()) throw std::domain_error("BigRational: division by zero");
        BigRational r;
        mpq_div(r.v_, a.v_, b.v_);
        return r;
    }
    BigRational operator-() const {
        BigRational r;
        mpq_neg(r.v_, v_);
        return r;
    }
    BigRational &operator+=(const BigRational &o) {
        mpq_add(v_, v_, o.v_);
        return *this;
    }
    BigRational &operator-=(const BigRational &o) {
        mpq_sub(v_, v_, o.v_);
        return *this;
    }
    BigRational &operator*=(const BigRational &o) {
        mpq_mul(v_, v_, o.v_);
        return *this;
    }
    BigRational &operator/=(const BigRational &o) {
        if (o.is_zero()) throw std::domain_error("BigRational: division by zero");
        mpq_div(v_, v_, o.v_);
        return *this;
    }

    BigRational inverse() const {
        if (is_zero()) throw std::domain_error("BigRational: inverse of zero");
        BigRational r;
        mpq_inv(r.v_, v_);
        return r;
    }
    static BigRational pow(const BigRational &a, long e) {
        if (e < 0) return pow(a.inverse(), -e);
        BigRational r(1);
        mpz_pow_ui(mpq_numref(r.v_), mpq_numref(a.v_), static_cast<unsigned long>(e));
        mpz_pow_ui(mpq_denref(r.v_), mpq_denref(a.v_), static_cast<unsigned long>(e));
        return r;
    }

    int sign() const { return mpq_sgn(v_); }
    bool is_zero() const { return mpq_sgn(v_) == 0; }
    bool is_one() const { return mpq_cmp_si(v_, 1, 1) == 0; }
    bool is_integer() const { return mpz_cmp_si(mpq_denref(v_), 1) == 0; }
    int cmp(const BigRational &o) const { return mpq_cmp(v_, o.v_); }
    friend bool operator==(const BigRational &a, const BigRational &b) { return mpq_equal(a.v_, b.v_) != 0; }
    friend bool operator!=(const BigRational &a, const BigRational &b) { return mpq_equal(a.v_, b.v_) == 0; }
    friend bool operator<(const BigRational &a, const BigRational &b) { return a.cmp(b) < 0; }
    friend bool operator>(const BigRational &a, const BigRational &b) { return a.cmp(b) > 0; }

    BigInt numerator() const {
        BigInt n;
        mpz_set(n.raw(), mpq_numref(v_));
        return n;
    }
    BigInt denominator() const {
        BigInt d;
        mpz_set(d.raw(), mpq_denref(v_));
        return d;
    }

    /// "p" or "p/q".
    std::string str() const {
        if (is_integer()) return numerator().str();
        return numerator().str() + "/" + denominator().str();
    }
    size_t hash() const { return numerator().hash() * 31 + denominator().hash(); }

  private:
    mpq_t v_;
};

inline std::ostream &operator<<(std::ostream &os, const BigInt &v);
inline std::ostream &operator<<(std::ostream &os, const BigRational &v);

} // namespace iorep

#include <ostream>
namespace iorep {
inline std::ostream &operator<<(std::ostream &os, const BigInt &v) { return os << v.str(); }
inline std::ostream &operator<<(std::ostream &os, const BigRational &v) { return os << v.str(); }
} // namespace iorep

#endif
