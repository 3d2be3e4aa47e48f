#include "doctest.h"

#include "iorep/ioeq.hpp"

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

std::vector<std::string> gen_strings(const IdentifiableField &f) {
    std::vector<std::string> out;
    for (const auto &g : f.gens) out.push_back(g.str());
    return out;
}

} // namespace

TEST_CASE("two-exponential io equation and generators") {
    IoSystem sys = implicitize(build_lie_table(corpus("toy_ab.model")));
    REQUIRE(sys.eqs.size() == 1);
    CHECK(sys.equation_str(0) == "y'' - (a + b)*y' + a*b*y = 0");
    CHECK(sys.presentation_certified);
    IdentifiableField f = extract_generators(sys);
    CHECK(gen_strings(f) == std::vector<std::string>{"a + b", "a*b"});
    // a is only locally identifiable over the field
    auto ca = classify(RatFun::variable(f.reg, f.reg->require("a")), f);
    CHECK(ca.kind == IdentClass::Local);
    CHECK(ca.degree == 2);
}

TEST_CASE("product-only toy io equation") {
    IoSystem sys = implicitize(build_lie_table(corpus("toy_detdh.model")));
    CHECK(sys.equation_str(0) == "y'' - a*b*y = 0");
    IdentifiableField f = extract_generators(sys);
    CHECK(gen_strings(f) == std::vector<std::string>{"a*b"});
}

TEST_CASE("lotka-volterra io equation matches the known expansion") {
    IoSystem sys = implicitize(build_lie_table(corpus("lotka_volterra.model")));
    CHECK(sys.equation_str(0) ==
          "y*y'' - y'^2 - d*y^2*y' + c*y*y' + u*y' + a*d*y^3 + d*u*y^2 - a*c*y^2 - u'*y - c*u*y = 0");
    IdentifiableField f = extract_generators(sys);
    CHECK(gen_strings(f) == std::vector<std::string>{"a", "c", "d"});
    // b is invisible in the io coefficients
    auto cb = classify(RatFun::variable(f.reg, f.reg->require("b")), f);
    CHECK(cb.kind == IdentClass::Nonidentifiable);
}

TEST_CASE("radical example io equation and the square field") {
    IoSystem sys = implicitize(build_lie_table(corpus("radical.model")));
    CHECK(sys.equation_str(0) == "a*y'' + y' - a*y^2 - b^2*y = 0");
    IdentifiableField f = extract_generators(sys);
    CHECK(gen_strings(f) == std::vector<std::string>{"a", "b^2"});
    auto cb = classify(RatFun::variable(f.reg, f.reg->require("b")), f);
    CHECK(cb.kind == IdentClass::Local);
    CHECK(cb.degree == 2);
    auto ca = classify(RatFun::variable(f.reg, f.reg->require("a")), f);
    CHECK(ca.kind == IdentClass::Global);
}

TEST_CASE("single equation with no parameters has an empty generator list") {
    OdeModel m = parse_model("states: x\nparams: a\noutputs: y\nx' = x\ny = x\n");
    IoSystem sys = implicitize(build_lie_table(m));
    CHECK(sys.equation_str(0) == "y' - y = 0");
    IdentifiableField f = extract_generators(sys);
    CHECK(f.gens.empty());
}

TEST_CASE("lotka-volterra saturation is trivial: (E) already prime") {
    // the separant/initial of the io-equation is y; saturating the principal
    // ideal by it changes nothing
    IoSystem sys = implicitize(build_lie_table(corpus("lotka_volterra.model")));
    const Poly &E = sys.eqs[0].primitive;
    int yv = sys.y_var[0][0];
    auto base = groebner(sys.io_reg, {E}, MonomialOrder::degrevlex(sys.io_reg));
    auto sat = saturate(sys.io_reg, {E}, {Poly::variable(sys.io_reg, yv)});
    REQUIRE(base.gens.size() == sat.gens.size());
    for (size_t i = 0; i < base.gens.size(); ++i) CHECK(base.gens[i] == sat.gens[i]);
}

TEST_CASE("biohydrogenation first equation and field") {
    IoSystem sys = implicitize(build_lie_table(corpus("biohydrogenation.model")));
    REQUIRE(sys.eqs.size() == 2);
    CHECK(sys.equation_str(0) == "y1*y1' + k6*y1' + k5*y1 = 0");
    CHECK(sys.eqs[1].leader_var == sys.y_var[1][2]);
    CHECK(!sys.presentation_certified); // two outputs: eliminant basis only
    // the second equation may not contain the first leader (cross-reduced)
    CHECK(sys.eqs[1].primitive.degree(sys.y_var[0][1]) == 0);

    IdentifiableField f = extract_generators(sys);
    // the field must equal Q(k5, k6, k7, k9^2, k10/k9, k9*(2k8+k10)/k10)
    auto reg = f.reg;
    RatFun k5 = RatFun::variable(reg, reg->require("k5")), k6 = RatFun::variable(reg, reg->require("k6")),
           k7 = RatFun::variable(reg, reg->require("k7")), k8 = RatFun::variable(reg, reg->require("k8")),
           k9 = RatFun::variable(reg, reg->require("k9")), k10 = RatFun::variable(reg, reg->require("k10"));
    RatFun two = RatFun::constant(reg, BigRational(2));
    std::vector<RatFun> printed = {k5, k6, k7, k9 * k9, k10 / k9, k9 * (two * k8 + k10) / k10};
    for (const auto &p : printed) CHECK(classify(p, f).kind == IdentClass::Global);
    IdentifiableField printed_field{reg, f.param_vars, printed, printed, {}};
    for (const auto &g : f.gens) CHECK(classify(g, printed_field).kind == IdentClass::Global);
}
