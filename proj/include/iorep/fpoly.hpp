#ifndef IOREP_FPOLY_HPP
#define IOREP_FPOLY_HPP

#include "iorep/ratfun.hpp"

#include <map>
#include <memory>
#include <vector>

namespace iorep {

/// Polynomial in a designated subset of "main" variables whose coefficients
/// are rational functions of the remaining registry variables. Terms are
/// kept sorted descending by the context order on the main variables; a
/// normalized (monic) polynomial has leading coefficient 1.
class FPoly {
  public:
    struct Context {
        RegistryPtr reg;
        std::vector<int> main;     // ascending registry indices
        std::vector<int> front;    // elimination block (subset of main), may be empty
        std::vector<char> is_main; // size() == reg->size()
    };
    using CtxPtr = std::shared_ptr<const Context>;

    static CtxPtr make_context(const RegistryPtr &reg, std::vector<int> main,
                               std::vector<int> front = {});

    FPoly() = default;
    explicit FPoly(CtxPtr ctx) : ctx_(std::move(ctx)) {}

    static FPoly zero(const CtxPtr &ctx) { return FPoly(ctx); }
    static FPoly constant(const CtxPtr &ctx, RatFun c);
    static FPoly variable(const CtxPtr &ctx, int var);
    static FPoly from_terms(const CtxPtr &ctx, std::vector<std::pair<Mono, RatFun>> terms);
    /// Split a polynomial into main monomials with parameter coefficients.
    static FPoly from_poly(const CtxPtr &ctx, const Poly &p);
    /// Same terms under a different context (identical registry).
    FPoly with_context(const CtxPtr &ctx) const;

    const CtxPtr &ctx() const { return ctx_; }
    const std::vector<std::pair<Mono, RatFun>> &terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    bool is_constant() const { return t_.empty() || (t_.size() == 1 && main_degree(t_[0].first) == 0); }
    RatFun constant_value() const;
    uint64_t main_degree(const Mono &m) const;

    const Mono &lm() const { return t_.front().first; }
    const RatFun &lc() const { return t_.front().second; }

    friend FPoly operator+(const FPoly &a, const FPoly &b);
    friend FPoly operator-(const FPoly &a, const FPoly &b);
    friend FPoly operator*(const FPoly &a, const FPoly &b);
    FPoly operator-() const;
    FPoly scaled(const RatFun &c) const;
    FPoly mul_term(const Mono &m, const RatFun &c) const;
    FPoly monic() const; // divide by lc

    bool operator==(const FPoly &o) const;
    static int compare(const FPoly &a, const FPoly &b);

    uint32_t degree(int var) const;
    uint64_t max_total_degree() const; // in the main variables
    bool depends_on(int var) const { return degree(var) > 0; }
    std::vector<int> main_vars_present() const;

    /// Substitute a main variable by a coefficient-field value.
    FPoly substitute_value(int var, const RatFun &value) const;
    /// Substitute a main variable by a polynomial in other main variables.
    FPoly substitute_poly(int var, const FPoly &repl) const;

    /// Coefficient layers with respect to one main variable.
    std::map<uint32_t, FPoly> collect(int var) const;
    FPoly coefficient_of(int var, uint32_t k) const;

    std::string str() const;

  private:
    void normalize();
    CtxPtr ctx_;
    std::vector<std::pair<Mono, RatFun>> t_;
};

/// Thrown when a coefficient-field basis computation exceeds its work cap.
class GroebnerBudget : public std::runtime_error {
  public:
    explicit GroebnerBudget(const std::string &msg) : std::runtime_error(msg) {}
};

/// Reduced Groebner basis over the coefficient field under the context order
/// (monic generators, deterministic output). Throws GroebnerBudget after
/// `pair_cap` processed pairs.
std::vector<FPoly> fgroebner(std::vector<FPoly> gens, size_t pair_cap = 100000);

FPoly fnormal_form(const FPoly &p, const std::vector<FPoly> &basis, size_t step_cap = SIZE_MAX);

/// Saturation (gens) : g^inf via a reserved tag variable of the registry.
std::vector<FPoly> fsaturate(const std::vector<FPoly> &gens, const FPoly &g, int tag_var,
                             size_t pair_cap = 100000);

} // namespace iorep

#endif
