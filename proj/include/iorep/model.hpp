#ifndef IOREP_MODEL_HPP
#define IOREP_MODEL_HPP

#include "iorep/expr.hpp"

#include <string>
#include <vector>

namespace iorep {

/// Parametric rational ODE system with inputs and outputs:
///   x' = f(x, alpha, u),  y = g(x, alpha, u).
/// Reparametrized systems reuse this shape with `allow_input_derivatives`
/// set, in which case u', u'', ... may occur on right-hand sides.
struct OdeModel {
    RegistryPtr reg; // params, then states, then inputs (and their derivatives)
    std::vector<std::string> state_names, param_names, input_names, output_names;
    std::vector<RatFun> rhs;    // one per state
    std::vector<RatFun> outmap; // one per output
    bool allow_input_derivatives = false;

    int state_var(int i) const { return reg->require(state_names.at(static_cast<size_t>(i))); }
    int param_var(int i) const { return reg->require(param_names.at(static_cast<size_t>(i))); }
    int input_var(int i) const { return reg->require(input_names.at(static_cast<size_t>(i))); }
    std::vector<int> state_vars() const;
    std::vector<int> param_vars() const;
    std::vector<int> input_vars() const;
};

OdeModel parse_model(const std::string &text, bool allow_input_derivatives = false);

std::string serialize_model_text(const OdeModel &m);
std::string serialize_model_json(const OdeModel &m);

/// Structural equality: same declarations and identical canonical equations.
bool models_equal(const OdeModel &a, const OdeModel &b);

} // namespace iorep

#endif
