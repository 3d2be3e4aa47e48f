#ifndef IOREP_ANSATZ_HPP
#define IOREP_ANSATZ_HPP

#include "iorep/fpoly.hpp"
#include "iorep/ioeq.hpp"

namespace iorep {

/// One undetermined coefficient of the ansatz: the z variable attached to a
/// parameter-monomial slot of some Lie derivative. Monomials sharing the
/// same non-constant parameter coefficient belong to one slot, whose shape
/// is then a rational-coefficient polynomial in (w, u).
struct AnsatzSlot {
    int output = 0, order = 0;
    bool in_denominator = false;
    Poly shape;             // w/u polynomial over the ansatz registry
    Mono lead;              // leading shape monomial (slot-order maximal)
    int zvar = -1;          // registry index of the z variable
    bool nonzero = false;   // nondegeneracy constraint
    std::string constraint; // reason, when nonzero is set
    RatFun taut;            // tautological value (original coefficient)
};

/// Copies of the Lie derivatives with states renamed to new indeterminates w
/// and every coefficient slot replaced by a fresh z.
struct Ansatz {
    RegistryPtr zreg; // params + inputs + w + z (+ one reserved tag, last)
    std::vector<int> wvars, zvars, param_vars, u_vars;
    int tag_var = -1;
    std::vector<AnsatzSlot> slots; // indexed by z ordinal
    std::vector<std::vector<Poly>> Hnum, Hden; // per (s, i), z-linear over zreg
    std::vector<std::vector<bool>> rational;   // per (s, i): true if den slots exist

    int q() const { return static_cast<int>(slots.size()); }
    std::string H_str(int s, int i) const;
    /// H_{s,i} with z replaced by concrete values.
    RatFun H_at(int s, int i, const std::vector<RatFun> &z) const;
};

Ansatz build_ansatz(const IoSystem &sys);

/// The polynomial system in z obtained by substituting H into the
/// io-equations, clearing denominators, and collecting coefficients of the
/// w-monomials (inputs stay in the ground field).
struct ZSystem {
    FPoly::CtxPtr zctx;             // main = z variables
    std::vector<FPoly> eqs;         // monic, deterministic order
    std::vector<Poly> report_forms; // integer-primitive, paired with w-monomials
    std::vector<Mono> wmonos;       // the w-monomial indexing each equation
};

ZSystem assemble_z_system(const IoSystem &sys, const Ansatz &a);

} // namespace iorep

#endif
