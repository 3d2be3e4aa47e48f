#ifndef IOREP_REPARAM_HPP
#define IOREP_REPARAM_HPP

#include "iorep/zsolve.hpp"

namespace iorep {

/// Coefficient of the reparametrized system with its identifiability class.
struct CoeffReport {
    std::string where; // equation label
    RatFun value;      // parameter part (denominator-normalized ratio)
    IdentClass kind = IdentClass::Global;
    int degree = 1;
    std::string beta_expr; // over the named beta generators, when global
};

/// Reparametrized ODE system produced by the dH*F = H reconstruction.
struct ReparamModel {
    RegistryPtr reg; // params + inputs (+derivs) + w states
    std::vector<std::string> w_names, output_names;
    std::vector<RatFun> F; // dw/dt
    std::vector<RatFun> G; // outputs
    std::vector<std::string> beta_names;
    std::vector<RatFun> beta; // generators over reg
    std::vector<CoeffReport> coefficients;
    bool all_global = false;

    OdeModel as_model(const OdeModel &source) const;
};

ReparamModel reconstruct_ode(const IoSystem &sys, const Ansatz &a, const ZSolution &gamma,
                             const IdentifiableField &field);

/// The correspondence between the original states and the new ones.
struct ChangeOfVariables {
    RegistryPtr reg; // params + inputs + x~ + w
    struct Entry {
        std::string w_name;
        bool rational = true;
        RatFun expr;  // when rational
        Poly minpoly; // in the w variable over Q(params)(x~), otherwise
        int degree = 1;
    };
    std::vector<Entry> entries;
    bool verified = false; // substitution reproduces the Lie table
    bool embedded = false; // expressed in the x~ coordinates of an embedding
    std::vector<std::string> notes;
};

ChangeOfVariables recover_change_of_variables(const IoSystem &sys, const Ansatz &a,
                                              const ZSolution &gamma);

struct VerifyReport {
    bool ran = false;
    bool equal = false;
    std::vector<std::string> diffs;
};

/// Recompute and compare the io-equations of two models.
VerifyReport verify_reparametrization(const OdeModel &original, const OdeModel &reparametrized,
                                      std::ostream *progress = nullptr);

struct PipelineOptions {
    ZSolveOptions zsolve;
    JacobianOptions jacobian;
    bool verify = false;
    std::ostream *progress = nullptr;
};

/// End-to-end run: lie table, io-equations, identifiable field, ansatz,
/// gamma search, reconstruction, change of variables.
struct PipelineResult {
    OdeModel model;
    IoSystem io;
    IdentifiableField field;
    Ansatz ansatz;
    ZSystem zsystem;
    ZSolution gamma;
    ReparamModel reparam;
    ChangeOfVariables change;
    VerifyReport verify;
    bool reconstruction_certified = false; // dH*F - H == 0
};

PipelineResult run_pipeline(const OdeModel &m, const PipelineOptions &opt = {});

} // namespace iorep

#endif
