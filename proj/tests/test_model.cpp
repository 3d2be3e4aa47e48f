#include "doctest.h"

#include "iorep/model.hpp"

#include <fstream>
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

std::string model_path(const char *name) {
    return std::string(IOREP_SOURCE_DIR) + "/models/" + name;
}

uint64_t lcg(uint64_t &s) {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return s >> 16u;
}

} // namespace

TEST_CASE("parsing the two-exponential model") {
    OdeModel m = parse_model(read_file(model_path("toy_ab.model")));
    CHECK(m.state_names == std::vector<std::string>{"x1", "x2"});
    CHECK(m.param_names == std::vector<std::string>{"a", "b"});
    CHECK(m.input_names.empty());
    CHECK(m.output_names == std::vector<std::string>{"y"});
    RatFun a = RatFun::variable(m.reg, m.param_var(0));
    RatFun x1 = RatFun::variable(m.reg, m.state_var(0));
    RatFun x2 = RatFun::variable(m.reg, m.state_var(1));
    CHECK(m.rhs[0] == a * x1);
    CHECK(m.outmap[0] == x1 + x2);
}

TEST_CASE("rational right-hand sides keep their denominators") {
    OdeModel m = parse_model(read_file(model_path("biohydrogenation.model")));
    RatFun k6 = RatFun::variable(m.reg, m.reg->require("k6"));
    RatFun x4 = RatFun::variable(m.reg, m.reg->require("x4"));
    CHECK(m.rhs[0].den() == (k6 + x4).num());
    CHECK(m.output_names.size() == 2);
}

TEST_CASE("parse errors carry positions") {
    CHECK_THROWS_WITH_AS(parse_model("outputs: y\ny = x\n"), "line 1, col 1: state list empty",
                         ModelError);
    CHECK_THROWS_AS(parse_model("states: x\noutputs: y\nx' = q*x\ny = x\n"), ModelError);
    // derivative symbols may not appear in a source model
    CHECK_THROWS_AS(parse_model("states: x\nparams: a\ninputs: u\noutputs: y\nx' = a*x + u'\ny = x\n"),
                    ModelError);
    // duplicate state equation
    CHECK_THROWS_AS(parse_model("states: x\nparams: a\noutputs: y\nx' = a*x\nx' = x\ny = x\n"),
                    ModelError);
    // zero denominator
    CHECK_THROWS_AS(parse_model("states: x\nparams: a\noutputs: y\nx' = a/(x - x)\ny = x\n"),
                    ModelError);
    // output referencing an undeclared state
    CHECK_THROWS_AS(parse_model("states: x\nparams: a\noutputs: y\nx' = a*x\ny = z\n"), ModelError);
    // missing output equation
    CHECK_THROWS_AS(parse_model("states: x\nparams: a\noutputs: y\nx' = a*x\n"), ModelError);
}

TEST_CASE("text round-trip is the identity on the corpus") {
    for (const char *name : {"toy_ab.model", "toy_detdh.model", "lotka_volterra.model",
                             "lv_input_scaled.model", "crn.model", "biohydrogenation.model",
                             "bilinear_input.model", "radical.model", "linear3_siso.model"}) {
        OdeModel m = parse_model(read_file(model_path(name)));
        std::string text = serialize_model_text(m);
        OdeModel m2 = parse_model(text);
        CHECK(models_equal(m, m2));
        CHECK(serialize_model_text(m2) == text);
    }
}

TEST_CASE("round-trip on randomized sparse rational models") {
    uint64_t seed = 11;
    for (int trial = 0; trial < 12; ++trial) {
        int ns = 1 + static_cast<int>(lcg(seed) % 5);
        int np = 1 + static_cast<int>(lcg(seed) % 3);
        std::ostringstream os;
        os << "states: ";
        for (int i = 0; i < ns; ++i) os << (i ? ", " : "") << "x" << i + 1;
        os << "\nparams: ";
        for (int i = 0; i < np; ++i) os << (i ? ", " : "") << "p" << i + 1;
        os << "\noutputs: y\n";
        auto rand_term = [&](std::ostream &o) {
            o << "p" << 1 + lcg(seed) % np << "*x" << 1 + lcg(seed) % ns;
            if (lcg(seed) % 2) o << "^" << 1 + lcg(seed) % 3;
        };
        for (int i = 0; i < ns; ++i) {
            os << "x" << i + 1 << "' = ";
            rand_term(os);
            os << " - ";
            rand_term(os);
            if (lcg(seed) % 2) {
                os << " + 1/(1 + x" << 1 + lcg(seed) % ns << ")";
            }
            os << "\n";
        }
        os << "y = x1\n";
        OdeModel m = parse_model(os.str());
        OdeModel m2 = parse_model(serialize_model_text(m));
        CHECK(models_equal(m, m2));
    }
}

TEST_CASE("json serialization exposes the schema keys") {
    OdeModel m = parse_model(read_file(model_path("lotka_volterra.model")));
    std::string j = serialize_model_json(m);
    for (const char *key : {"\"states\"", "\"params\"", "\"inputs\"", "\"outputs\"", "\"equations\""})
        CHECK(j.find(key) != std::string::npos);
}

TEST_CASE("reparametrized models may use input derivatives when allowed") {
    std::string text = "states: w1\nparams: a\ninputs: u\noutputs: y\nw1' = a*w1 + u'\ny = w1\n";
    CHECK_THROWS_AS(parse_model(text), ModelError);
    OdeModel m = parse_model(text, true);
    CHECK(m.reg->has("u'"));
    CHECK(m.rhs[0].num().depends_on(m.reg->require("u'")));
}
