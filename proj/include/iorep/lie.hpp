#ifndef IOREP_LIE_HPP
#define IOREP_LIE_HPP

#include "iorep/fieldtools.hpp"
#include "iorep/model.hpp"

#include <vector>

namespace iorep {

/// Pipeline failure outside the supported regime (rank defects, constant
/// outputs, missing eliminants).
class RegimeError : public std::runtime_error {
  public:
    explicit RegimeError(const std::string &msg) : std::runtime_error(msg) {}
};

/// Cached Lie derivatives of the outputs along the model vector field.
/// Input derivatives are materialized as registry variables up to a bound
/// that the successive differentiation cannot exceed.
class LieContext {
  public:
    explicit LieContext(const OdeModel &m);

    const RegistryPtr &reg() const { return reg_; }
    const OdeModel &model() const { return model_; }

    /// h_{s,i}: h_{s,0} = g_s and h_{s,i+1} = total derivative of h_{s,i}.
    const RatFun &h(int s, int i);

    /// Derivative along the field: sum f_j d/dx_j + sum u^(k+1) d/du^(k).
    RatFun total_derivative(const RatFun &f) const;

  private:
    RegistryPtr reg_;
    OdeModel model_; // lifted into reg_
    std::vector<int> state_vars_;
    std::vector<std::pair<int, int>> u_chain_; // (u^(k) var, u^(k+1) var)
    std::vector<std::vector<RatFun>> cache_;
};

struct OrderProfile {
    std::vector<int> n;   // derivative order per output, n_s
    int dimV = 0;         // = sum of n_s = |x~|
    std::vector<int> xhat;   // state variables occurring in the table (lie registry)
    bool embedded = false;
    std::vector<int> xtilde; // coordinates of the parametrization domain
    std::vector<std::vector<BigRational>> embedding; // xhat = A * xtilde when embedded
};

struct LieTable {
    RegistryPtr reg;                      // lie registry (+ x~ block when embedded)
    std::vector<std::vector<RatFun>> h;   // parametrization form (x~ coordinates)
    std::vector<std::vector<RatFun>> h_raw; // original x-hat form (equal when not embedded)
    OrderProfile profile;
    std::vector<std::string> output_names;
    std::vector<int> u_vars_by_order;     // flattened [input][order] registry vars present
};

/// Step-1 driver: minimal orders under the orderly ranking via incremental
/// Jacobian ranks, dimension, and the linear embedding when |x-hat| > dim V.
LieTable build_lie_table(const OdeModel &m, const JacobianOptions &jopt = {});

struct SupportDecomposition {
    // parameter-coefficient and state/input-monomial pairs, canonical order
    std::vector<std::pair<Poly, Mono>> num, den;
};

/// Exact split of h = sum m(alpha) p(x, u) / sum m(alpha) q(x, u).
SupportDecomposition support_decomposition(const RatFun &h);

} // namespace iorep

#endif
