#include "doctest.h"

#include "iorep/reparam.hpp"

#include <fstream>
#include <sstream>

using namespace iorep;

namespace {

OdeModel corpus(const char *name) {
    std::ifstream in(std::string(IOREP_SOURCE_DIR) + "/models/" + name);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return parse_model(os.str());
}

RatFun rf(const PipelineResult &r, const std::string &expr) {
    return parse_expression(expr, r.reparam.reg);
}

bool log_contains(const std::vector<std::string> &log, const std::string &needle) {
    for (const auto &line : log)
        if (line.find(needle) != std::string::npos) return true;
    return false;
}

} // namespace

TEST_CASE("two-exponential reparametrization: exact paper-grade output") {
    PipelineOptions opt;
    opt.verify = true;
    PipelineResult r = run_pipeline(corpus("toy_ab.model"), opt);

    // ansatz: three levels, two slots each
    CHECK(r.ansatz.q() == 6);
    CHECK(r.ansatz.H_str(0, 0) == "z1*w1 + z2*w2");
    CHECK(r.ansatz.H_str(0, 1) == "z3*w1 + z4*w2");
    CHECK(r.ansatz.H_str(0, 2) == "z5*w1 + z6*w2");
    CHECK(r.zsystem.eqs.size() == 2);

    // accepted assignment and its classification
    REQUIRE(r.gamma.found);
    CHECK(r.gamma.all_global);
    CHECK(r.gamma.strategy == "direct");
    std::vector<std::string> zs;
    for (const auto &z : r.gamma.z) zs.push_back(z.str());
    CHECK(zs == std::vector<std::string>{"1", "0", "0", "1", "-a*b", "a + b"});

    // reconstructed system w1' = w2, w2' = (a+b) w2 - ab w1, y = w1
    CHECK(r.reparam.F[0] == rf(r, "w2"));
    CHECK(r.reparam.F[1] == rf(r, "(a + b)*w2 - a*b*w1"));
    CHECK(r.reparam.G[0] == rf(r, "w1"));
    CHECK(r.reparam.all_global);

    // change of variables w1 = x1 + x2, w2 = a x1 + b x2
    REQUIRE(r.change.entries.size() == 2);
    CHECK(r.change.entries[0].rational);
    CHECK(r.change.entries[0].expr.str() == "x1 + x2");
    CHECK(r.change.entries[1].expr.str() == "a*x1 + b*x2");
    CHECK(r.change.verified);

    CHECK(r.verify.ran);
    CHECK(r.verify.equal);
    CHECK(r.reconstruction_certified);
}

TEST_CASE("det dH backtrack on the product-only toy model") {
    PipelineOptions opt;
    opt.verify = true;
    PipelineResult r = run_pipeline(corpus("toy_detdh.model"), opt);

    CHECK(r.ansatz.q() == 3);
    REQUIRE(r.gamma.found);
    // first ladder choice z2 = 0 must be rejected through the singular dH
    CHECK(log_contains(r.gamma.log, "dH singular"));
    std::vector<std::string> zs;
    for (const auto &z : r.gamma.z) zs.push_back(z.str());
    CHECK(zs == std::vector<std::string>{"1", "1", "a*b"});

    CHECK(r.reparam.F[0] == rf(r, "w2"));
    CHECK(r.reparam.F[1] == rf(r, "a*b*w1"));
    CHECK(r.reparam.G[0] == rf(r, "w1"));
    CHECK(r.change.entries[0].expr.str() == "x1");
    CHECK(r.change.entries[1].expr.str() == "a*x2");
    CHECK(r.verify.equal);
}

TEST_CASE("lotka-volterra with input: exact reparametrization") {
    PipelineOptions opt;
    opt.verify = true;
    PipelineResult r = run_pipeline(corpus("lotka_volterra.model"), opt);

    CHECK(r.ansatz.q() == 11);
    CHECK(r.ansatz.H_str(0, 0) == "z1*w1");
    CHECK(r.ansatz.H_str(0, 1) == "z2*w1*w2 + z3*u + z4*w1");
    CHECK(r.ansatz.H_str(0, 2) ==
          "z5*w1^2*w2 + z6*w1*w2^2 + z7*u*w2 + z8*w1*w2 + z9*u + z10*u' + z11*w1");
    CHECK(r.zsystem.eqs.size() == 8);

    REQUIRE(r.gamma.found);
    CHECK(r.gamma.all_global);
    std::vector<std::string> zs;
    for (const auto &z : r.gamma.z) zs.push_back(z.str());
    CHECK(zs == std::vector<std::string>{"1", "1", "1", "a", "d", "1", "1", "2*a - c", "a", "1",
                                         "a^2"});

    CHECK(r.reparam.F[0] == rf(r, "a*w1 + w1*w2 + u"));
    CHECK(r.reparam.F[1] == rf(r, "-c*w2 + d*w1*w2"));
    CHECK(r.reparam.G[0] == rf(r, "w1"));
    CHECK(r.reparam.all_global);

    CHECK(r.change.entries[0].expr.str() == "x1");
    CHECK(r.change.entries[1].expr.str() == "-b*x2");
    CHECK(r.change.verified);
    CHECK(r.verify.equal);
}

TEST_CASE("second lotka-volterra variant verifies") {
    PipelineOptions opt;
    opt.verify = true;
    PipelineResult r = run_pipeline(corpus("lv_input_scaled.model"), opt);
    REQUIRE(r.gamma.found);
    CHECK(r.verify.equal);
    CHECK(r.reparam.all_global);
    CHECK(r.change.entries[0].rational);
    CHECK(r.change.entries[0].expr.str() == "x1");
    CHECK(r.change.entries[1].rational);
    CHECK(r.change.verified);
}

TEST_CASE("radical example: algebraic change of variables") {
    PipelineOptions opt;
    opt.verify = true;
    PipelineResult r = run_pipeline(corpus("radical.model"), opt);
    REQUIRE(r.gamma.found);
    CHECK(r.gamma.all_global);
    CHECK(r.verify.equal);
    // w1 stays rational, w2 needs a square root: degree-2 minimal polynomial
    REQUIRE(r.change.entries.size() == 2);
    CHECK(r.change.entries[0].rational);
    CHECK(r.change.entries[0].expr.str() == "x1");
    CHECK(!r.change.entries[1].rational);
    CHECK(r.change.entries[1].degree == 2);
    CHECK(r.change.verified);
}

TEST_CASE("bilinear model with input: all-global reparametrization") {
    PipelineOptions opt;
    opt.verify = true;
    PipelineResult r = run_pipeline(corpus("bilinear_input.model"), opt);
    REQUIRE(r.gamma.found);
    CHECK(r.gamma.all_global);
    CHECK(r.reparam.all_global);
    CHECK(r.verify.equal);
    // the identifiable field is Q(p1*p3, p2*p4, p1 + p3)
    auto reg = r.field.reg;
    RatFun p1 = RatFun::variable(reg, reg->require("p1")), p2 = RatFun::variable(reg, reg->require("p2"));
    RatFun p3 = RatFun::variable(reg, reg->require("p3")), p4 = RatFun::variable(reg, reg->require("p4"));
    for (const auto &g : {p1 * p3, p2 * p4, p1 + p3})
        CHECK(classify(g, r.field).kind == IdentClass::Global);
    IdentifiableField printed{reg, r.field.param_vars, {}, {p1 * p3, p2 * p4, p1 + p3}, {}};
    for (const auto &g : r.field.gens) CHECK(classify(g, printed).kind == IdentClass::Global);
    // p2 alone is not even locally visible
    CHECK(classify(p2, r.field).kind == IdentClass::Nonidentifiable);
}

TEST_CASE("perturbed reparametrization is detected as unequal") {
    OdeModel orig = corpus("toy_ab.model");
    // correct system with one coefficient off by one
    OdeModel bad = parse_model("states: w1, w2\nparams: a, b\noutputs: y\n"
                               "w1' = w2\nw2' = (a + b + 1)*w2 - a*b*w1\ny = w1\n");
    VerifyReport rep = verify_reparametrization(orig, bad);
    CHECK(rep.ran);
    CHECK(!rep.equal);
    CHECK(!rep.diffs.empty());
}
