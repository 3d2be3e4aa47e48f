#include "doctest.h"

#include "iorep/lie.hpp"

#include <fstream>
#include <functional>
#include <sstream>

using namespace iorep;

namespace {

std::string read_file(const std::string &path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

OdeModel corpus(const char *name) {
    return parse_model(read_file(std::string(IOREP_SOURCE_DIR) + "/models/" + name));
}

// brute-force symbolic rank: largest r with a nonzero r x r minor
int symbolic_rank(const std::vector<std::vector<RatFun>> &m) {
    int rows = static_cast<int>(m.size());
    int cols = rows ? static_cast<int>(m[0].size()) : 0;
    auto det = [&](auto &&self, std::vector<int> rs, std::vector<int> cs) -> RatFun {
        if (rs.size() == 1) return m[static_cast<size_t>(rs[0])][static_cast<size_t>(cs[0])];
        RatFun acc = RatFun::zero(m[0][0].reg());
        for (size_t j = 0; j < cs.size(); ++j) {
            std::vector<int> rs2(rs.begin() + 1, rs.end());
            std::vector<int> cs2;
            for (size_t k = 0; k < cs.size(); ++k)
                if (k != j) cs2.push_back(cs[k]);
            RatFun t = m[static_cast<size_t>(rs[0])][static_cast<size_t>(cs[j])] * self(self, rs2, cs2);
            acc = (j % 2 == 0) ? acc + t : acc - t;
        }
        return acc;
    };
    for (int r = std::min(rows, cols); r >= 1; --r) {
        // enumerate all r x r minors
        std::vector<std::vector<int>> rsets, csets;
        std::function<void(int, std::vector<int>, int, std::vector<std::vector<int>> &)> gen =
            [&](int from, std::vector<int> cur, int limit, std::vector<std::vector<int>> &out) {
                if (static_cast<int>(cur.size()) == r) {
                    out.push_back(cur);
                    return;
                }
                for (int i = from; i < limit; ++i) {
                    auto nxt = cur;
                    nxt.push_back(i);
                    gen(i + 1, nxt, limit, out);
                }
            };
        gen(0, {}, rows, rsets);
        gen(0, {}, cols, csets);
        for (const auto &rs : rsets)
            for (const auto &cs : csets)
                if (!det(det, rs, cs).is_zero()) return r;
    }
    return 0;
}

} // namespace

TEST_CASE("two-exponential lie derivatives") {
    OdeModel m = corpus("toy_ab.model");
    LieContext ctx(m);
    RatFun a = RatFun::variable(ctx.reg(), ctx.reg()->require("a"));
    RatFun b = RatFun::variable(ctx.reg(), ctx.reg()->require("b"));
    RatFun x1 = RatFun::variable(ctx.reg(), ctx.reg()->require("x1"));
    RatFun x2 = RatFun::variable(ctx.reg(), ctx.reg()->require("x2"));
    CHECK(ctx.h(0, 0) == x1 + x2); // zeroth derivative is the output map
    CHECK(ctx.h(0, 1) == a * x1 + b * x2);
    CHECK(ctx.h(0, 2) == a * a * x1 + b * b * x2);
}

TEST_CASE("lotka-volterra second lie derivative") {
    OdeModel m = corpus("lotka_volterra.model");
    LieContext ctx(m);
    RatFun expect = parse_expression(
        "u' - b*d*x1^2*x2 - b*u*x2 + a*u + (b^2*x2^2 + (-2*a + c)*b*x2 + a^2)*x1", ctx.reg());
    CHECK(ctx.h(0, 2) == expect);
}

TEST_CASE("order profiles") {
    SUBCASE("two-exponential model") {
        LieTable t = build_lie_table(corpus("toy_ab.model"));
        CHECK(t.profile.n == std::vector<int>{2});
        CHECK(t.profile.dimV == 2);
        CHECK(!t.profile.embedded);
    }
    SUBCASE("single exponential") {
        OdeModel m = parse_model("states: x\nparams: a\noutputs: y\nx' = a*x\ny = x\n");
        LieTable t = build_lie_table(m);
        CHECK(t.profile.n == std::vector<int>{1});
        CHECK(t.profile.dimV == 1);
    }
    SUBCASE("biohydrogenation has split orders") {
        LieTable t = build_lie_table(corpus("biohydrogenation.model"));
        CHECK(t.profile.n == std::vector<int>{1, 2});
        CHECK(t.profile.dimV == 3);
        CHECK(t.profile.xhat.size() == 3); // x7 never occurs
        CHECK(!t.profile.embedded);
    }
    SUBCASE("constant outputs are rejected") {
        OdeModel m = parse_model("states: x\nparams: a\noutputs: y\nx' = a*x\ny = 3\n");
        CHECK_THROWS_AS(build_lie_table(m), RegimeError);
    }
}

TEST_CASE("bilinear model has order three, confirmed by symbolic minors") {
    OdeModel m = corpus("bilinear_input.model");
    LieTable t = build_lie_table(m);
    CHECK(t.profile.n == std::vector<int>{3});
    CHECK(t.profile.dimV == 3);

    // oracle: brute-force symbolic rank of the Jacobian of h0..h2 over x1..x3
    LieContext ctx(m);
    std::vector<std::vector<RatFun>> jac;
    for (int i = 0; i < 3; ++i) {
        std::vector<RatFun> row;
        for (const char *xn : {"x1", "x2", "x3"})
            row.push_back(ctx.h(0, i).derivative(ctx.reg()->require(xn)));
        jac.push_back(std::move(row));
    }
    CHECK(symbolic_rank(jac) == 3);
}

TEST_CASE("derivation property holds on the corpus tables") {
    for (const char *name : {"toy_ab.model", "toy_detdh.model", "lotka_volterra.model", "crn.model",
                             "biohydrogenation.model", "radical.model"}) {
        OdeModel m = corpus(name);
        LieTable t = build_lie_table(m);
        LieContext ctx(m);
        for (size_t s = 0; s < t.h_raw.size(); ++s)
            for (size_t i = 0; i + 1 < t.h_raw[s].size(); ++i) {
                RatFun d = ctx.total_derivative(t.h_raw[s][i].lifted(ctx.reg()));
                CHECK(d == t.h_raw[s][i + 1].lifted(ctx.reg()));
            }
    }
}

TEST_CASE("linear models match observability-style matrix powers") {
    uint64_t seed = 21;
    auto rnd = [&seed]() {
        seed = seed * 6364136223846793005ULL + 1442695040888963407ULL;
        return (seed >> 16u) % 5;
    };
    for (int trial = 0; trial < 5; ++trial) {
        int n = 2 + static_cast<int>(rnd() % 4); // up to 5 states
        std::ostringstream os;
        os << "states: ";
        for (int i = 0; i < n; ++i) os << (i ? ", " : "") << "x" << i + 1;
        os << "\nparams: ";
        std::vector<std::vector<bool>> used(static_cast<size_t>(n), std::vector<bool>(static_cast<size_t>(n)));
        bool first = true;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                used[static_cast<size_t>(i)][static_cast<size_t>(j)] = rnd() < 3;
                if (used[static_cast<size_t>(i)][static_cast<size_t>(j)]) {
                    os << (first ? "" : ", ") << "m" << i + 1 << j + 1;
                    first = false;
                }
            }
        if (first) continue; // empty matrix, skip
        os << "\noutputs: y\n";
        for (int i = 0; i < n; ++i) {
            os << "x" << i + 1 << "' = 0";
            for (int j = 0; j < n; ++j)
                if (used[static_cast<size_t>(i)][static_cast<size_t>(j)])
                    os << " + m" << i + 1 << j + 1 << "*x" << j + 1;
            os << "\n";
        }
        os << "y = x1\n";
        OdeModel m = parse_model(os.str());
        LieContext ctx(m);
        // CA^i rows computed independently by iterated symbolic products
        std::vector<RatFun> row(static_cast<size_t>(n), RatFun::zero(ctx.reg()));
        row[0] = RatFun::one(ctx.reg());
        for (int i = 0; i <= n; ++i) {
            RatFun expect = RatFun::zero(ctx.reg());
            for (int j = 0; j < n; ++j)
                expect += row[static_cast<size_t>(j)] *
                          RatFun::variable(ctx.reg(), ctx.reg()->require("x" + std::to_string(j + 1)));
            CHECK(ctx.h(0, i) == expect);
            std::vector<RatFun> next(static_cast<size_t>(n), RatFun::zero(ctx.reg()));
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    if (used[static_cast<size_t>(j)][static_cast<size_t>(k)])
                        next[static_cast<size_t>(k)] +=
                            row[static_cast<size_t>(j)] *
                            RatFun::variable(ctx.reg(),
                                             ctx.reg()->require("m" + std::to_string(j + 1) + std::to_string(k + 1)));
            row = std::move(next);
        }
    }
}

TEST_CASE("redundant states force an embedding") {
    OdeModel m = parse_model("states: x1, x2\nparams: a\noutputs: y\nx1' = a*x1\nx2' = a*x2\ny = x1 + x2\n");
    LieTable t = build_lie_table(m);
    CHECK(t.profile.dimV == 1);
    CHECK(t.profile.embedded);
    CHECK(t.profile.xtilde.size() == 1);
    CHECK(t.profile.embedding.size() == 2);
    // the parametrization-form table only involves the x-tilde coordinates
    for (const auto &col : t.h)
        for (const auto &f : col)
            for (int v : t.profile.xhat) CHECK(!f.depends_on(v));
}

TEST_CASE("support decomposition") {
    OdeModel m = corpus("lotka_volterra.model");
    LieContext ctx(m);
    auto dec = support_decomposition(ctx.h(0, 1)); // -b*x1*x2 + a*x1 + u
    REQUIRE(dec.num.size() == 3);
    REQUIRE(dec.den.size() == 1);
    // canonical order is ascending; reassembly identity checked exactly
    Poly reassembled = Poly::zero(ctx.reg());
    for (const auto &[coef, mono] : dec.num)
        reassembled += coef * Poly::from_terms(ctx.reg(), {{mono, BigRational(1)}});
    CHECK(reassembled == ctx.h(0, 1).num());

    auto one = support_decomposition(RatFun::one(ctx.reg()));
    REQUIRE(one.num.size() == 1);
    CHECK(mono_is_one(one.num[0].second));
    CHECK(one.num[0].first == Poly::one(ctx.reg()));
}
