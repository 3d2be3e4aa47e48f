#include "doctest.h"

#include "iorep/poly.hpp"
#include "iorep/ratfun.hpp"

using namespace iorep;

namespace {

RegistryPtr xyreg() {
    return VarRegistry::create({{"x", VarBlock::State, 0}, {"y", VarBlock::State, 0}});
}

uint64_t lcg(uint64_t &s) {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return s >> 16u;
}

Poly random_poly(const RegistryPtr &reg, uint64_t &seed, int terms) {
    std::vector<Term> t;
    for (int i = 0; i < terms; ++i) {
        Mono m(static_cast<size_t>(reg->size()), 0);
        for (auto &e : m) e = static_cast<uint32_t>(lcg(seed) % 3);
        long c = static_cast<long>(lcg(seed) % 9) - 4;
        t.push_back({m, BigRational(c)});
    }
    return Poly::from_terms(reg, t);
}

} // namespace

TEST_CASE("rationals are canonical") {
    BigRational a(6, -4);
    CHECK(a.str() == "-3/2");
    CHECK(a.denominator() > BigInt(0));
    CHECK((a + BigRational(3, 2)).is_zero());
    CHECK(BigRational(BigInt("123456789123456789"), BigInt(3)).str() == "41152263041152263");
    CHECK_THROWS_AS(BigRational(1, 0), std::domain_error);
}

TEST_CASE("difference of squares") {
    auto reg = xyreg();
    Poly x = Poly::variable(reg, 0), y = Poly::variable(reg, 1);
    CHECK((x + y) * (x - y) == x * x - y * y);
    CHECK(((x + y) * Poly::zero(reg)).is_zero());
}

TEST_CASE("two-exponential io polynomial assembles the same from either route") {
    auto reg = VarRegistry::create({{"a", VarBlock::Param, 0},
                                    {"b", VarBlock::Param, 0},
                                    {"y", VarBlock::OutputDeriv, 0},
                                    {"y'", VarBlock::OutputDeriv, 1},
                                    {"y''", VarBlock::OutputDeriv, 2}});
    Poly a = Poly::variable(reg, 0), b = Poly::variable(reg, 1);
    Poly y = Poly::variable(reg, 2), y1 = Poly::variable(reg, 3), y2 = Poly::variable(reg, 4);
    Poly eq = y2 - (a + b) * y1 + a * b * y;
    Poly expanded = y2 - a * y1 - b * y1 + a * b * y;
    CHECK(eq == expanded);
    CHECK(eq.str() == "a*b*y - a*y' - b*y' + y''");
}

TEST_CASE("ring axioms on random triples") {
    auto reg = VarRegistry::create(
        {{"x", VarBlock::State, 0}, {"y", VarBlock::State, 0}, {"z", VarBlock::State, 0}});
    uint64_t seed = 7;
    for (int i = 0; i < 40; ++i) {
        Poly p = random_poly(reg, seed, 4), q = random_poly(reg, seed, 4), r = random_poly(reg, seed, 4);
        CHECK((p * q) * r == p * (q * r));
        CHECK(p * (q + r) == p * q + p * r);
        CHECK(p + q == q + p);
        CHECK((p - p).is_zero());
    }
}

TEST_CASE("gcd and exact division") {
    auto reg = xyreg();
    Poly x = Poly::variable(reg, 0), y = Poly::variable(reg, 1);
    Poly p = (x + y) * (x - y);
    CHECK(poly_gcd(p, x + y) == x + y);
    CHECK(*poly_divexact(p, x + y) == x - y);
    CHECK(!poly_divexact(p, x + Poly::one(reg)).has_value());
    Poly big = (x * y + Poly::one(reg)) * (x + y) * (x + y);
    Poly other = (x * y + Poly::one(reg)) * (x - y);
    CHECK(poly_gcd(big, other) == x * y + Poly::one(reg));
    // content normalization: primitive, positive leading coefficient
    Poly scaled = p.scaled(BigRational(-6, 4));
    CHECK(scaled.primitive() == p);
}

TEST_CASE("ratfun canonical form is idempotent") {
    auto reg = xyreg();
    Poly x = Poly::variable(reg, 0), y = Poly::variable(reg, 1);
    RatFun f(x * x - y * y, (x + y) * (x + y));
    CHECK(f.num() == x - y);
    CHECK(f.den() == x + y);
    RatFun again(f.num(), f.den());
    CHECK(f == again);
    // denominator sign normalization
    RatFun g(x, -y);
    CHECK(g.den() == y);
    CHECK(g.num() == -x);
    CHECK((f + g - g) == f);
    CHECK((f * g / g) == f);
}

TEST_CASE("ratfun calculus") {
    auto reg = xyreg();
    Poly x = Poly::variable(reg, 0), y = Poly::variable(reg, 1);
    RatFun f(Poly::one(reg), x); // 1/x
    RatFun df = f.derivative(0);
    CHECK(df == RatFun(-Poly::one(reg), x * x));
    std::map<int, RatFun> sub{{0, RatFun(y, x)}}; // x -> y/x
    CHECK(f.substitute(sub) == RatFun(x, y));
    CHECK(f.evaluate({BigRational(2), BigRational(1)}) == BigRational(1, 2));
    CHECK_THROWS_AS(f.evaluate({BigRational(0), BigRational(1)}), std::domain_error);
}

TEST_CASE("poly printing") {
    auto reg = xyreg();
    Poly x = Poly::variable(reg, 0), y = Poly::variable(reg, 1);
    Poly p = x * x - y.scaled(BigRational(1, 2)) + Poly::constant(reg, BigRational(-3));
    CHECK(p.str() == "x^2 - 1/2*y - 3");
    CHECK(Poly::zero(reg).str() == "0");
    CHECK((-x).str() == "-x");
}

TEST_CASE("lifting between registries by name") {
    auto small = xyreg();
    auto big = VarRegistry::create(
        {{"a", VarBlock::Param, 0}, {"x", VarBlock::State, 0}, {"y", VarBlock::State, 0}});
    Poly x = Poly::variable(small, 0), y = Poly::variable(small, 1);
    Poly p = x * y + y;
    Poly lifted = p.lifted(big);
    CHECK(lifted.str() == "x*y + y");
    CHECK(lifted.reg() == big);
}
