#ifndef IOREP_FIELDTOOLS_HPP
#define IOREP_FIELDTOOLS_HPP

#include "iorep/groebner.hpp"
#include "iorep/ratfun.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace iorep {

struct JacobianOptions {
    int probes = 3;
    uint64_t seed = 0;
    int max_point_retries = 40;
};

/// Generic rank of the Jacobian of `fns` with respect to `vars`: maximum rank
/// over random rational probe points, certified by a nonzero symbolic minor.
int jacobian_rank(const std::vector<RatFun> &fns, const std::vector<int> &vars,
                  const JacobianOptions &opt = {});

struct MinPolyResult {
    bool transcendental = false;
    int degree = 0;                 // algebraic degree when !transcendental
    Poly minpoly;                   // in T and the generator tags, primitive form
    RegistryPtr tag_reg;            // tags t1..tg (+ fresh T in minpoly's registry)
    std::optional<RatFun> witness;  // degree 1: f as a rational function of the tags
};

/// Membership and algebraic-degree queries for the subfield Q(gens) of the
/// rational function field over the base variables.
class FieldTower {
  public:
    struct Classification {
        enum class Kind { Global, Local, Transcendental };
        Kind kind = Kind::Transcendental;
        int degree = 0;
        std::optional<RatFun> witness; // over tag registry, when kind == Global
        std::optional<Poly> minpoly;   // in T + tags, when kind == Local
    };

    /// Q(gens)(ground_vars) inside the rational functions of base_vars plus
    /// ground_vars. Ground variables (typically the inputs) belong to the
    /// subfield as themselves and need no tags.
    FieldTower(RegistryPtr base_reg, std::vector<RatFun> gens, std::vector<int> base_vars,
               std::vector<std::string> tag_names = {}, std::vector<int> ground_vars = {});

    const std::vector<RatFun> &gens() const { return gens_; }
    const RegistryPtr &tag_reg() const { return tag_reg_; }
    const std::vector<int> &base_vars() const { return base_vars_; }

    /// Fast membership path: normal-form rewriting against the shared basis.
    /// Sufficient, not complete: nullopt does not mean "not a member".
    std::optional<RatFun> rewrite(const RatFun &f) const;

    /// Exact classification via minimal polynomial over Q(gens).
    Classification classify(const RatFun &f) const;

    MinPolyResult minimal_polynomial(const RatFun &f) const;

  private:
    void build();

    RegistryPtr base_reg_;
    std::vector<RatFun> gens_;     // over base_reg
    std::vector<int> base_vars_;   // registry indices the field lives over
    std::vector<std::string> tag_names_;
    std::vector<int> ground_vars_; // subfield members kept as themselves

    RegistryPtr work_;             // sat tag + eliminated base vars + T + tags + ground
    RegistryPtr tag_reg_;          // gen tags + ground vars
    int sat_var_ = -1, T_var_ = -1;
    std::vector<int> work_elim_;   // base vars to eliminate, in work_
    std::vector<int> work_tags_;   // tag vars in work_
    std::vector<int> work_ground_; // ground vars in work_
    std::vector<Poly> defining_;   // num_i - t_i den_i rows in work_
    Poly den_product_;             // product of generator denominators in work_
    IdealBasis rewrite_gb_;        // for the fast path
    IdealBasis relations_;         // P = relations among the gens (tag vars)
    mutable int gens_rank_ = -1;   // cached generic Jacobian rank of the gens
    mutable std::map<std::string, Classification> cache_;
};

/// Convenience wrapper matching the spec operation: minimal polynomial of f
/// over Q(gens), both given over the same registry.
MinPolyResult minimal_polynomial(const RatFun &f, const std::vector<RatFun> &gens,
                                 const std::vector<int> &base_vars);

} // namespace iorep

#endif
