#ifndef IOREP_GROEBNER_HPP
#define IOREP_GROEBNER_HPP

#include "iorep/poly.hpp"

#include <vector>

namespace iorep {

/// Generating set of a polynomial ideal together with the order it was
/// computed under. When `reduced` is set the generators are the unique
/// reduced Groebner basis (integer-primitive, positive leading coefficient,
/// sorted by ascending leading monomial).
struct IdealBasis {
    RegistryPtr reg;
    std::vector<Poly> gens;
    MonomialOrder order;
    bool reduced = false;

    bool is_zero_ideal() const { return gens.empty(); }
};

/// Buchberger with normal selection strategy and full reductions.
IdealBasis groebner(const RegistryPtr &reg, std::vector<Poly> gens, const MonomialOrder &order);

/// Full normal form (every term reduced) of p against a basis.
Poly normal_form(const Poly &p, const IdealBasis &basis);

bool ideal_member(const Poly &p, const IdealBasis &basis);

/// Saturation (gens) : (prod multipliers)^inf via one Rabinowitsch tag in a
/// front elimination block. Result is a reduced basis under `out_order`.
IdealBasis saturate(const RegistryPtr &reg, const std::vector<Poly> &gens,
                    const std::vector<Poly> &multipliers, const MonomialOrder &out_order);
IdealBasis saturate(const RegistryPtr &reg, const std::vector<Poly> &gens,
                    const std::vector<Poly> &multipliers);

/// Generators of the elimination ideal: intersection with the subring of the
/// variables not in `drop`. Empty result means the elimination ideal is zero.
IdealBasis eliminate(const RegistryPtr &reg, const std::vector<Poly> &gens,
                     const std::vector<int> &drop);

} // namespace iorep

#endif
