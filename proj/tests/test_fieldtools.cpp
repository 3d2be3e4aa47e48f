#include "doctest.h"

#include "iorep/fieldtools.hpp"

using namespace iorep;

namespace {

RegistryPtr param_reg(std::initializer_list<const char *> names) {
    std::vector<VarInfo> vi;
    for (const char *n : names) vi.push_back({n, VarBlock::Param, 0});
    return VarRegistry::create(vi);
}

} // namespace

TEST_CASE("jacobian rank on linear families") {
    auto reg = VarRegistry::create({{"a", VarBlock::Param, 0},
                                    {"b", VarBlock::Param, 0},
                                    {"x1", VarBlock::State, 0},
                                    {"x2", VarBlock::State, 0}});
    RatFun a = RatFun::variable(reg, 0), b = RatFun::variable(reg, 1);
    RatFun x1 = RatFun::variable(reg, 2), x2 = RatFun::variable(reg, 3);
    CHECK(jacobian_rank({x1 + x2, a * x1 + b * x2}, {2, 3}) == 2);
    CHECK(jacobian_rank({x1, x1 + x1}, {2, 3}) == 1);
    CHECK(jacobian_rank({x1 * x1}, {2, 3}) == 1);
}

TEST_CASE("minimal polynomial over symmetric functions") {
    auto reg = param_reg({"a", "b"});
    RatFun a = RatFun::variable(reg, 0), b = RatFun::variable(reg, 1);
    std::vector<RatFun> gens = {a + b, a * b};

    SUBCASE("a generator has degree 1") {
        auto r = minimal_polynomial(a + b, gens, {0, 1});
        CHECK(!r.transcendental);
        CHECK(r.degree == 1);
        REQUIRE(r.witness.has_value());
    }
    SUBCASE("a root of the pair has degree 2") {
        auto r = minimal_polynomial(a, gens, {0, 1});
        CHECK(!r.transcendental);
        CHECK(r.degree == 2);
        // the minimal polynomial must vanish at T = a under tag substitution
        RegistryPtr mreg = r.minpoly.reg();
        std::map<int, RatFun> sub;
        sub[mreg->require("@T")] = a.lifted(mreg);
        sub[mreg->require("@g1")] = (a + b).lifted(mreg);
        sub[mreg->require("@g2")] = (a * b).lifted(mreg);
        CHECK(poly_substitute_ratfun(r.minpoly, sub).is_zero());
    }
}

TEST_CASE("field tower classification") {
    auto reg = param_reg({"a", "b", "c"});
    RatFun a = RatFun::variable(reg, 0), b = RatFun::variable(reg, 1), c = RatFun::variable(reg, 2);

    SUBCASE("product field") {
        FieldTower t(reg, {a * b}, {0, 1, 2});
        auto g = t.classify(a * b);
        CHECK(g.kind == FieldTower::Classification::Kind::Global);
        auto n = t.classify(a);
        CHECK(n.kind == FieldTower::Classification::Kind::Transcendental);
    }
    SUBCASE("square field: a global, b local of degree 2") {
        FieldTower t(reg, {a, b * b}, {0, 1, 2});
        auto ga = t.classify(a);
        CHECK(ga.kind == FieldTower::Classification::Kind::Global);
        auto gb = t.classify(b);
        CHECK(gb.kind == FieldTower::Classification::Kind::Local);
        CHECK(gb.degree == 2);
        auto gc = t.classify(c);
        CHECK(gc.kind == FieldTower::Classification::Kind::Transcendental);
        auto gb2 = t.classify(b * b * a + a);
        CHECK(gb2.kind == FieldTower::Classification::Kind::Global);
    }
    SUBCASE("rewrite witnesses substitute back exactly") {
        FieldTower t(reg, {a + b, a * b}, {0, 1, 2});
        auto w = t.rewrite(a * a + b * b); // (a+b)^2 - 2ab
        REQUIRE(w.has_value());
        auto joint = reg->extended({{"@g1", VarBlock::Tag, 0}, {"@g2", VarBlock::Tag, 0}});
        std::map<int, RatFun> back;
        back[joint->require("@g1")] = (a + b).lifted(joint);
        back[joint->require("@g2")] = (a * b).lifted(joint);
        CHECK(w->lifted(joint).substitute(back) == (a * a + b * b).lifted(joint));
    }
}

TEST_CASE("degree-two membership in the biohydrogenation generator field") {
    auto reg = param_reg({"k5", "k6", "k7", "k8", "k9", "k10"});
    RatFun k5 = RatFun::variable(reg, 0), k6 = RatFun::variable(reg, 1), k7 = RatFun::variable(reg, 2);
    RatFun k8 = RatFun::variable(reg, 3), k9 = RatFun::variable(reg, 4), k10 = RatFun::variable(reg, 5);
    RatFun two = RatFun::constant(reg, BigRational(2));
    std::vector<RatFun> gens = {k5, k6, k7, k9 * k9, k10 / k9, k9 * (two * k8 + k10) / k10};
    FieldTower t(reg, gens, {0, 1, 2, 3, 4, 5});

    auto ck9 = t.classify(k9);
    CHECK(ck9.kind == FieldTower::Classification::Kind::Local);
    CHECK(ck9.degree == 2);
    // oracle: substituting the generators and T = k9 kills the minimal polynomial
    REQUIRE(ck9.minpoly.has_value());
    RegistryPtr mreg = ck9.minpoly->reg();
    std::map<int, RatFun> sub;
    sub[mreg->require("@T")] = k9.lifted(mreg);
    for (size_t i = 0; i < gens.size(); ++i)
        sub[mreg->require("@g" + std::to_string(i + 1))] = gens[i].lifted(mreg);
    CHECK(poly_substitute_ratfun(*ck9.minpoly, sub).is_zero());

    // k8 and k10 are likewise only locally determined, k5 globally
    CHECK(t.classify(k10).degree == 2);
    CHECK(t.classify(k8).degree == 2);
    CHECK(t.classify(k5).kind == FieldTower::Classification::Kind::Global);
    // 2*k8 + k10 is the product of two generators, hence global
    CHECK(t.classify(two * k8 + k10).kind == FieldTower::Classification::Kind::Global);
    CHECK(t.classify(k8 * (k8 + k10)).kind == FieldTower::Classification::Kind::Global);
}
