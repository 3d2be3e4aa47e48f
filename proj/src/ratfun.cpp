#include "iorep/ratfun.hpp"

#include <sstream>

namespace iorep {

void RatFun::reduce() {
    if (den_.is_zero()) throw std::domain_error("RatFun: zero denominator");
    if (num_.is_zero()) {
        den_ = Poly::one(num_.reg());
        return;
    }
    if (!den_.is_constant()) {
        Poly g = poly_gcd(num_, den_);
        if (!g.is_constant()) {
            num_ = *poly_divexact(num_, g);
            den_ = *poly_divexact(den_, g);
        }
    }
    BigRational c = den_.content();
    if (!c.is_one()) {
        den_ = den_.scaled(c.inverse());
        num_ = num_.scaled(c.inverse());
    }
}

RatFun operator+(const RatFun &a, const RatFun &b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_ == b.den_) return RatFun(a.num_ + b.num_, a.den_);
    Poly g = poly_gcd(a.den_, b.den_);
    if (g.is_constant()) return RatFun(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    Poly da = *poly_divexact(a.den_, g), db = *poly_divexact(b.den_, g);
    return RatFun(a.num_ * db + b.num_ * da, a.den_ * db);
}

RatFun operator-(const RatFun &a, const RatFun &b) { return a + (-b); }

RatFun operator*(const RatFun &a, const RatFun &b) {
    if (a.is_zero() || b.is_zero()) return RatFun::zero(a.reg() ? a.reg() : b.reg());
    // cross-reduce before multiplying to keep intermediates small
    Poly g1 = poly_gcd(a.num_, b.den_);
    Poly g2 = poly_gcd(b.num_, a.den_);
    Poly n1 = g1.is_constant() ? a.num_ : *poly_divexact(a.num_, g1);
    Poly d2 = g1.is_constant() ? b.den_ : *poly_divexact(b.den_, g1);
    Poly n2 = g2.is_constant() ? b.num_ : *poly_divexact(b.num_, g2);
    Poly d1 = g2.is_constant() ? a.den_ : *poly_divexact(a.den_, g2);
    return RatFun(n1 * n2, d1 * d2);
}

RatFun operator/(const RatFun &a, const RatFun &b) {
    if (b.is_zero()) throw std::domain_error("RatFun: division by zero");
    RatFun binv;
    binv.num_ = b.den_;
    binv.den_ = b.num_;
    binv.reduce();
    return a * binv;
}

RatFun RatFun::inverse() const {
    if (is_zero()) throw std::domain_error("RatFun: inverse of zero");
    return RatFun(den_, num_);
}

RatFun RatFun::pow(const RatFun &a, long e) {
    if (e < 0) return pow(a.inverse(), -e);
    RatFun r = RatFun::one(a.reg());
    RatFun base = a;
    while (e) {
        if (e & 1) r *= base;
        e >>= 1;
        if (e) base *= base;
    }
    return r;
}

RatFun RatFun::derivative(int var) const {
    // (n'd - nd')/d^2, with the common structure d = g*d0 exploited by reduce()
    Poly n1 = num_.derivative(var) * den_ - num_ * den_.derivative(var);
    return RatFun(std::move(n1), den_ * den_);
}

RatFun RatFun::substitute(const std::map<int, RatFun> &repl) const {
    RatFun n = poly_substitute_ratfun(num_, repl);
    RatFun d = poly_substitute_ratfun(den_, repl);
    return n / d;
}

BigRational RatFun::evaluate(const std::vector<BigRational> &point) const {
    BigRational d = den_.evaluate(point);
    if (d.is_zero()) throw std::domain_error("RatFun: denominator vanishes at point");
    return num_.evaluate(point) / d;
}

std::string RatFun::str() const {
    if (is_polynomial()) {
        if (den_.constant_value().is_one()) return num_.str();
        Poly scaled = num_.scaled(den_.constant_value().inverse());
        return scaled.str();
    }
    std::ostringstream os;
    auto atomic = [](const Poly &p) {
        if (p.term_count() != 1) return false;
        const Term &t = p.terms()[0];
        int nvars = 0;
        for (uint32_t e : t.m)
            if (e) ++nvars;
        if (nvars == 0) return true;
        return nvars == 1 && t.c.is_one();
    };
    os << (atomic(num_) || num_.term_count() == 1 ? num_.str() : "(" + num_.str() + ")");
    os << "/";
    os << (atomic(den_) ? den_.str() : "(" + den_.str() + ")");
    return os.str();
}

RatFun poly_substitute_ratfun(const Poly &p, const std::map<int, RatFun> &repl) {
    // split replacements into polynomial ones (fast path) and true fractions
    std::map<int, Poly> poly_repl;
    std::map<int, RatFun> frac_repl;
    for (const auto &kv : repl) {
        if (kv.second.is_polynomial() && kv.second.den().constant_value().is_one())
            poly_repl[kv.first] = kv.second.num();
        else
            frac_repl[kv.first] = kv.second;
    }
    Poly base = poly_repl.empty() ? p : p.substitute(poly_repl);
    if (frac_repl.empty()) return RatFun(base);

    RatFun acc = RatFun::zero(p.reg());
    for (const auto &tm : base.terms()) {
        RatFun term = RatFun::constant(p.reg(), tm.c);
        Mono rest(tm.m.size(), 0);
        for (size_t v = 0; v < tm.m.size(); ++v) {
            uint32_t e = tm.m[v];
            if (!e) continue;
            auto it = frac_repl.find(static_cast<int>(v));
            if (it == frac_repl.end())
                rest[v] = e;
            else
                term *= RatFun::pow(it->second, e);
        }
        term *= RatFun(Poly::from_terms(p.reg(), {{rest, BigRational(1)}}));
        acc += term;
    }
    return acc;
}

} // namespace iorep
