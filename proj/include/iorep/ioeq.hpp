#ifndef IOREP_IOEQ_HPP
#define IOREP_IOEQ_HPP

#include "iorep/groebner.hpp"
#include "iorep/lie.hpp"

#include <iosfwd>
#include <memory>

namespace iorep {

/// One input-output equation: a polynomial in the output-derivative
/// indeterminates and input derivatives whose coefficients are rational in
/// the parameters, normalized so the ranking-maximal monomial has
/// coefficient one.
struct IoEquation {
    int output = 0;       // s
    int leader_var = -1;  // Y_{s, n_s} in the io registry
    int leader_degree = 1;
    Poly primitive;       // integer-primitive form, positive ranking-leading coefficient
    std::vector<std::pair<Mono, RatFun>> monic; // monomial (Y/u part) -> parameter coefficient
};

struct IoSystem {
    RegistryPtr io_reg;        // x~ + Y + u + params (x~ only used internally)
    RegistryPtr lie_reg;       // registry of the source lie table
    LieTable lie;
    std::vector<IoEquation> eqs;                 // one per output
    std::vector<std::vector<int>> y_var;         // y_var[s][i] -> io registry index
    std::vector<int> u_vars;                     // input-derivative vars in io_reg
    bool presentation_certified = false;         // single output: certified

    int rank_of(int var) const;                  // orderly rank helper
    std::string equation_str(int s) const;       // ranking-lex descending print
};

/// Step-1 implicitization: saturate the Lie graph ideal at the denominators,
/// eliminate the state coordinates, select the per-output eliminants,
/// cross-reduce, normalize monic, and verify the substitution identity.
IoSystem implicitize(const LieTable &table, std::ostream *progress = nullptr);

/// The field generated by the non-leading IO coefficients.
struct IdentifiableField {
    RegistryPtr reg;                 // lie registry (parameters live here)
    std::vector<int> param_vars;
    std::vector<RatFun> raw;         // deduplicated coefficients, canonical order
    std::vector<RatFun> gens;        // heuristically simplified generating set
    std::vector<std::string> provenance; // one entry per gens element
};

IdentifiableField extract_generators(const IoSystem &sys);

enum class IdentClass { Global, Local, Nonidentifiable };
struct ClassifyResult {
    IdentClass kind = IdentClass::Nonidentifiable;
    int degree = 0;
    std::optional<RatFun> witness; // over the tower's tag registry when global
};

/// Membership of f in Q(field.gens), its algebraic closure, or neither.
ClassifyResult classify(const RatFun &f, const IdentifiableField &field);

/// Shared tower for repeated classifications against the same field.
std::shared_ptr<FieldTower> make_tower(const IdentifiableField &field,
                                       const std::vector<int> &extra_base_vars = {});

} // namespace iorep

#endif
