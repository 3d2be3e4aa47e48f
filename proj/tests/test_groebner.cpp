#include "doctest.h"

#include "iorep/groebner.hpp"

using namespace iorep;

namespace {

RegistryPtr reg_xy() {
    return VarRegistry::create({{"x", VarBlock::State, 0}, {"y", VarBlock::State, 0}});
}

uint64_t lcg(uint64_t &s) {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return s >> 16u;
}

Poly random_poly(const RegistryPtr &reg, uint64_t &seed) {
    std::vector<Term> t;
    int terms = 2 + static_cast<int>(lcg(seed) % 3);
    for (int i = 0; i < terms; ++i) {
        Mono m(static_cast<size_t>(reg->size()), 0);
        for (auto &e : m) e = static_cast<uint32_t>(lcg(seed) % 3);
        long c = static_cast<long>(lcg(seed) % 7) - 3;
        t.push_back({m, BigRational(c)});
    }
    return Poly::from_terms(reg, t);
}

std::string basis_str(const IdealBasis &b) {
    std::string s;
    for (const auto &g : b.gens) s += g.str() + "; ";
    return s;
}

} // namespace

TEST_CASE("principal ideal is already reduced") {
    auto reg = reg_xy();
    Poly x = Poly::variable(reg, 0);
    auto gb = groebner(reg, {x}, MonomialOrder::degrevlex(reg));
    REQUIRE(gb.gens.size() == 1);
    CHECK(gb.gens[0] == x);
}

TEST_CASE("lex back-substitution") {
    auto reg = reg_xy();
    Poly x = Poly::variable(reg, 0), y = Poly::variable(reg, 1), one = Poly::one(reg);
    auto gb = groebner(reg, {x - y, y - one}, MonomialOrder::lex(reg));
    REQUIRE(gb.gens.size() == 2);
    CHECK(gb.gens[0] == y - one);
    CHECK(gb.gens[1] == x - one);
}

TEST_CASE("zero ideal gives an explicit empty basis") {
    auto reg = reg_xy();
    auto gb = groebner(reg, {Poly::zero(reg)}, MonomialOrder::degrevlex(reg));
    CHECK(gb.is_zero_ideal());
    auto el = eliminate(reg, {Poly::zero(reg)}, {0});
    CHECK(el.is_zero_ideal());
}

TEST_CASE("saturation removes a factor") {
    auto reg = reg_xy();
    Poly x = Poly::variable(reg, 0), y = Poly::variable(reg, 1);
    auto sat = saturate(reg, {x * y}, {x});
    REQUIRE(sat.gens.size() == 1);
    CHECK(sat.gens[0] == y);
}

TEST_CASE("saturation of x^2*y - x by x") {
    auto reg = reg_xy();
    Poly x = Poly::variable(reg, 0), y = Poly::variable(reg, 1), one = Poly::one(reg);
    auto sat = saturate(reg, {x * x * y - x}, {x});
    // expected x*y - 1, frozen from the membership oracle below
    REQUIRE(sat.gens.size() == 1);
    CHECK(sat.gens[0] == x * y - one);

    // oracle, both inclusions by normal form membership:
    // (a) every saturation generator times a power of x lies in the input ideal
    auto input_gb = groebner(reg, {x * x * y - x}, MonomialOrder::degrevlex(reg));
    bool found_power = false;
    Poly pw = sat.gens[0];
    for (int k = 0; k <= 3 && !found_power; ++k) {
        if (ideal_member(pw, input_gb)) found_power = true;
        pw = pw * x;
    }
    CHECK(found_power);
    // (b) the input ideal is contained in the saturation
    CHECK(ideal_member(x * x * y - x, sat));
}

TEST_CASE("elimination examples") {
    auto reg = VarRegistry::create({{"x", VarBlock::State, 0}, {"w", VarBlock::NewState, 0}});
    Poly x = Poly::variable(reg, 0), w = Poly::variable(reg, 1), one = Poly::one(reg);
    auto el = eliminate(reg, {w - x, x - one}, {0});
    REQUIRE(el.gens.size() == 1);
    CHECK(el.gens[0] == w - one);
}

TEST_CASE("eliminating the state from x'=a*x, y=x yields y' - a*y") {
    auto reg = VarRegistry::create({{"x", VarBlock::State, 0},
                                    {"a", VarBlock::Param, 0},
                                    {"y", VarBlock::OutputDeriv, 0},
                                    {"y'", VarBlock::OutputDeriv, 1}});
    Poly x = Poly::variable(reg, 0), a = Poly::variable(reg, 1);
    Poly y0 = Poly::variable(reg, 2), y1 = Poly::variable(reg, 3);
    auto el = eliminate(reg, {y0 - x, y1 - a * x}, {0});
    REQUIRE(el.gens.size() == 1);
    // canonical sign has the positive leading coefficient on a*y
    CHECK(el.gens[0] == a * y0 - y1);
}

TEST_CASE("groebner determinism and correctness properties") {
    auto reg = VarRegistry::create(
        {{"x", VarBlock::State, 0}, {"y", VarBlock::State, 0}, {"z", VarBlock::State, 0}});
    uint64_t seed = 3;
    for (int trial = 0; trial < 8; ++trial) {
        std::vector<Poly> gens;
        for (int i = 0; i < 3; ++i) gens.push_back(random_poly(reg, seed));
        auto order = MonomialOrder::degrevlex(reg);
        auto gb1 = groebner(reg, gens, order);
        auto gb2 = groebner(reg, gens, order);
        CHECK(basis_str(gb1) == basis_str(gb2));
        // every input generator reduces to zero
        for (const auto &g : gens) CHECK(ideal_member(g, gb1));
        // S-polynomials of output pairs reduce to zero
        for (size_t i = 0; i < gb1.gens.size(); ++i) {
            for (size_t j = i + 1; j < gb1.gens.size(); ++j) {
                const Poly &f = gb1.gens[i], &g = gb1.gens[j];
                if (f.is_zero() || g.is_zero()) continue;
                const Term &lf = f.leading_term(order), &lg = g.leading_term(order);
                Mono l = mono_lcm(lf.m, lg.m);
                Poly s = f.mul_term(mono_div(l, lf.m), lg.c) - g.mul_term(mono_div(l, lg.m), lf.c);
                CHECK(ideal_member(s, gb1));
            }
        }
    }
}

TEST_CASE("block elimination order eliminates the front block first") {
    auto reg = VarRegistry::create(
        {{"t", VarBlock::Tag, 0}, {"x", VarBlock::State, 0}, {"y", VarBlock::State, 0}});
    auto order = MonomialOrder::block_elim(reg, {0});
    Mono t(3, 0), xy(3, 0);
    t[0] = 1;
    xy[1] = 5;
    xy[2] = 5;
    CHECK(order.greater(t, xy)); // any t beats any t-free monomial
}
