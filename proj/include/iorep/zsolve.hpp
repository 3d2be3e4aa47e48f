#ifndef IOREP_ZSOLVE_HPP
#define IOREP_ZSOLVE_HPP

#include "iorep/ansatz.hpp"

namespace iorep {

struct ZSolveOptions {
    int max_attempts = 200;    // complete candidate assignments
    int direct_node_cap = 60;  // nodes before the direct strategy yields
    int node_cap = 4000;       // nodes for the affine strategy
    int gb_var_cap = 8;        // groebner only below this many live unknowns
    size_t gb_pair_cap = 150;  // work cap per basis computation in the search
    int stall_var_cap = 20;    // direct search aborts on bigger stalled systems
    uint64_t seed = 0;
    bool prefer_global = true;
};

/// Search-budget exhaustion without an acceptable solution.
class BudgetError : public std::runtime_error {
  public:
    explicit BudgetError(const std::string &msg) : std::runtime_error(msg) {}
};

struct ZCoordinateClass {
    IdentClass kind = IdentClass::Global;
    int degree = 1;
    std::string beta_expr; // witness over the beta generators, when global
    bool is_block_scale = false;
};

struct ZSolution {
    bool found = false;
    bool all_global = false;
    std::vector<RatFun> z;                 // over the ansatz registry
    std::vector<ZCoordinateClass> zclass;  // aligned with z
    std::string strategy;                  // "direct" or "affine"
    std::vector<std::string> log;          // search events for the report
    int attempts = 0;
    bool budget_exhausted = false;
    std::vector<std::string> failed_constraints;
};

ZSolution solve_z(const IoSystem &sys, const Ansatz &a, const ZSystem &zs,
                  const IdentifiableField &field, const ZSolveOptions &opt = {});

} // namespace iorep

#endif
