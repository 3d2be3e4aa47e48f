#include "iorep/zsolve.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace iorep {

namespace {

std::vector<BigRational> ladder_values(bool constrained) {
    if (constrained) return {BigRational(1), BigRational(-1), BigRational(2), BigRational(-2)};
    return {BigRational(0), BigRational(1), BigRational(-1), BigRational(2), BigRational(-2)};
}

/// Backtracking solver for a polynomial system over the coefficient field:
/// propagation (values and linear eliminations), univariate roots,
/// triangularization with guard saturation, and ladder assignment of the
/// free coordinates. Shared by the direct z-search and the affine search.
struct SystemSearch {
    FPoly::CtxPtr ctx;
    std::vector<int> vars;           // ordinals -> registry vars
    std::vector<char> nonzero;       // per ordinal
    std::vector<int> level;          // elimination preference (higher first)
    std::vector<FPoly> guards;       // flattened nonvanishing requirements
    // each group demands that at least one member stays nonzero
    std::vector<std::vector<FPoly>> guard_groups;
    std::vector<std::string> guard_labels; // one per group, for the log
    int prune_logs = 0;
    int tag_var = -1;

    // shared budget
    int *nodes = nullptr;
    int node_cap = 5000;
    bool *stop = nullptr;   // set externally when the caller is satisfied
    bool aborted = false;
    int gb_var_cap = 8;
    size_t gb_pair_cap = 150;
    int stall_var_cap = 20;
    std::vector<std::string> *log = nullptr;

    struct Elim {
        int ordinal;
        FPoly expr;
    };
    struct State {
        std::vector<FPoly> eqs;
        std::vector<signed char> kind; // 0 free, 1 value, 2 eliminated
        std::vector<RatFun> value;
        std::vector<Elim> elims;
    };

    // emit a complete assignment; returns true to stop the whole search
    std::function<bool(const std::vector<RatFun> &)> emit;
    // extra finalize candidates for a free ordinal under the current state
    std::function<std::vector<RatFun>(int, const State &)> extra_candidates;

    int ordinal_of(int var) const {
        for (size_t k = 0; k < vars.size(); ++k)
            if (vars[k] == var) return static_cast<int>(k);
        return -1;
    }

    bool run(std::vector<FPoly> eqs) {
        State st;
        st.eqs = std::move(eqs);
        st.kind.assign(vars.size(), 0);
        st.value.assign(vars.size(), RatFun::zero(ctx->reg));
        return search(std::move(st));
    }

    enum class Prop { Ok, Fail };

    Prop propagate(State &st) {
        bool changed = true;
        while (changed) {
            changed = false;
            std::vector<FPoly> next;
            for (auto &eq : st.eqs) {
                if (eq.is_zero()) continue;
                if (eq.is_constant()) return Prop::Fail;
                next.push_back(eq.monic());
            }
            std::sort(next.begin(), next.end(),
                      [](const FPoly &x, const FPoly &y) { return FPoly::compare(x, y) < 0; });
            next.erase(std::unique(next.begin(), next.end(),
                                   [](const FPoly &x, const FPoly &y) { return x == y; }),
                       next.end());
            st.eqs = std::move(next);

            // hard determined values
            for (size_t e = 0; e < st.eqs.size() && !changed; ++e) {
                std::vector<int> vs = st.eqs[e].main_vars_present();
                if (vs.size() == 1 && st.eqs[e].degree(vs[0]) == 1) {
                    int v = vs[0];
                    int ord = ordinal_of(v);
                    RatFun c1 = st.eqs[e].coefficient_of(v, 1).constant_value();
                    RatFun c0 = st.eqs[e].coefficient_of(v, 0).constant_value();
                    RatFun val = -c0 / c1;
                    if (nonzero[static_cast<size_t>(ord)] && val.is_zero()) return Prop::Fail;
                    st.kind[static_cast<size_t>(ord)] = 1;
                    st.value[static_cast<size_t>(ord)] = val;
                    for (auto &eq : st.eqs) eq = eq.substitute_value(v, val);
                    changed = true;
                }
            }
            if (changed) continue;
            // linear elimination with a ground-field coefficient: prefer the
            // highest-level unknown (the top Lie slots are the solved-for
            // ones), then the smallest ordinal
            int best_ord = -1;
            size_t best_eq = 0;
            for (size_t e = 0; e < st.eqs.size(); ++e) {
                for (int v : st.eqs[e].main_vars_present()) {
                    if (st.eqs[e].degree(v) != 1) continue;
                    if (!st.eqs[e].coefficient_of(v, 1).is_constant()) continue;
                    int ord = ordinal_of(v);
                    if (best_ord < 0 ||
                        level[static_cast<size_t>(ord)] > level[static_cast<size_t>(best_ord)] ||
                        (level[static_cast<size_t>(ord)] == level[static_cast<size_t>(best_ord)] &&
                         ord < best_ord)) {
                        best_ord = ord;
                        best_eq = e;
                    }
                }
            }
            if (best_ord >= 0) {
                int v = vars[static_cast<size_t>(best_ord)];
                FPoly c1 = st.eqs[best_eq].coefficient_of(v, 1);
                FPoly expr = (-st.eqs[best_eq].coefficient_of(v, 0)).scaled(c1.constant_value().inverse());
                st.kind[static_cast<size_t>(best_ord)] = 2;
                st.elims.push_back({best_ord, expr});
                std::vector<FPoly> next2;
                for (size_t e2 = 0; e2 < st.eqs.size(); ++e2) {
                    if (e2 == best_eq) continue;
                    next2.push_back(st.eqs[e2].substitute_poly(v, expr));
                }
                st.eqs = std::move(next2);
                changed = true;
            }
        }
        return Prop::Ok;
    }

    std::vector<RatFun> k_roots(const FPoly &eq, int v, bool constrained) const {
        std::vector<RatFun> roots;
        auto push = [&](const RatFun &r) {
            for (const auto &x : roots)
                if (x == r) return;
            roots.push_back(r);
        };
        auto layers = eq.collect(v);
        uint32_t low = 0;
        for (const auto &kv : layers)
            if (!kv.second.is_zero()) {
                low = kv.first;
                break;
            }
        if (low > 0 && !constrained) push(RatFun::zero(ctx->reg));
        FPoly stripped(ctx);
        for (const auto &kv : layers) {
            if (kv.second.is_zero()) continue;
            Mono m(static_cast<size_t>(ctx->reg->size()), 0);
            m[static_cast<size_t>(v)] = kv.first - low;
            stripped = stripped + kv.second.mul_term(m, RatFun::one(ctx->reg));
        }
        if (stripped.degree(v) == 1) {
            RatFun c1 = stripped.coefficient_of(v, 1).constant_value();
            RatFun val = -stripped.coefficient_of(v, 0).constant_value() / c1;
            if (!(constrained && val.is_zero())) push(val);
        } else if (stripped.degree(v) > 1) {
            for (const BigRational &c : ladder_values(constrained)) {
                RatFun val = RatFun::constant(ctx->reg, c);
                if (stripped.substitute_value(v, val).is_zero()) push(val);
            }
        }
        return roots;
    }

    FPoly substituted_guard(const FPoly &guard, const State &st) const {
        FPoly g = guard;
        for (size_t k = 0; k < st.kind.size() && !g.is_zero(); ++k) {
            int v = vars[k];
            if (!g.depends_on(v)) continue;
            if (st.kind[k] == 1) {
                g = g.substitute_value(v, st.value[k]);
            } else if (st.kind[k] == 2) {
                for (const auto &el : st.elims)
                    if (el.ordinal == static_cast<int>(k)) {
                        g = g.substitute_poly(v, el.expr);
                        break;
                    }
            }
        }
        return g;
    }

    bool emit_state(State cand) {
        bool ok = true;
        for (auto it = cand.elims.rbegin(); it != cand.elims.rend() && ok; ++it) {
            FPoly e = it->expr;
            for (size_t k = 0; k < cand.kind.size() && !e.is_zero(); ++k) {
                if (!e.depends_on(vars[k])) continue;
                if (cand.kind[k] != 1) {
                    ok = false;
                    break;
                }
                e = e.substitute_value(vars[k], cand.value[k]);
            }
            if (!ok) break;
            if (!e.is_constant()) {
                ok = false;
                break;
            }
            cand.kind[static_cast<size_t>(it->ordinal)] = 1;
            cand.value[static_cast<size_t>(it->ordinal)] = e.constant_value();
        }
        if (!ok) return false;
        for (size_t k = 0; k < cand.value.size(); ++k)
            if (nonzero[k] && cand.value[k].is_zero()) return false;
        if (emit(cand.value)) return true;
        return stop && *stop;
    }

    bool finalize(const State &st) {
        std::vector<int> free;
        for (size_t k = 0; k < st.kind.size(); ++k)
            if (st.kind[k] == 0) free.push_back(static_cast<int>(k));

        // guard groups under the current eliminations: a completion can only
        // keep det dH (or a denominator) alive if some member survives
        std::vector<std::vector<FPoly>> groups;
        for (const auto &grp : guard_groups) {
            std::vector<FPoly> g2;
            for (const auto &g : grp) {
                FPoly s = substituted_guard(g, st);
                if (!s.is_zero()) g2.push_back(std::move(s));
            }
            groups.push_back(std::move(g2));
        }
        // a group that already died under the eliminations admits no completion
        for (size_t gi = 0; gi < groups.size(); ++gi)
            if (groups[gi].empty() && !guard_groups[gi].empty()) return false;

        std::function<bool(size_t, State &, std::vector<std::vector<FPoly>> &)> rec =
            [&](size_t pos, State &cand, std::vector<std::vector<FPoly>> &live) -> bool {
            if (pos == free.size()) return emit_state(cand);
            int ord = free[pos];
            int v = vars[static_cast<size_t>(ord)];
            // candidates: the ladder, then values suggested by the hook
            // under the assignments made so far
            std::vector<RatFun> choice;
            for (const BigRational &c : ladder_values(nonzero[static_cast<size_t>(ord)]))
                choice.push_back(RatFun::constant(ctx->reg, c));
            if (extra_candidates)
                for (const auto &e : extra_candidates(ord, cand)) {
                    bool dup = false;
                    for (const auto &x : choice)
                        if (x == e) dup = true;
                    if (!dup && !(nonzero[static_cast<size_t>(ord)] && e.is_zero()))
                        choice.push_back(e);
                }
            for (const auto &val : choice) {
                cand.kind[static_cast<size_t>(ord)] = 1;
                cand.value[static_cast<size_t>(ord)] = val;
                std::vector<std::vector<FPoly>> next(live.size());
                bool dead = false;
                for (size_t gi = 0; gi < live.size() && !dead; ++gi) {
                    for (const auto &g : live[gi]) {
                        FPoly s = g.depends_on(v) ? g.substitute_value(v, val) : g;
                        if (!s.is_zero()) next[gi].push_back(std::move(s));
                    }
                    if (next[gi].empty() && !live[gi].empty()) {
                        dead = true;
                        if (log && ++prune_logs <= 60)
                            log->push_back(ctx->reg->name(v) + " = " + val.str() + ": rejected (" +
                                           (gi < guard_labels.size() ? guard_labels[gi]
                                                                     : std::string("degenerate")) +
                                           ")");
                        else if (log && prune_logs == 61)
                            log->push_back("(further rejected choices elided)");
                    }
                }
                if (!dead && rec(pos + 1, cand, next)) return true;
                if (stop && *stop) return true;
            }
            cand.kind[static_cast<size_t>(ord)] = 0;
            return false;
        };
        State cand = st;
        return rec(0, cand, groups);
    }

    bool search(State st) {
        if (stop && *stop) return true;
        if (++(*nodes) > node_cap) {
            aborted = true;
            return false;
        }
        if (propagate(st) == Prop::Fail) return false;
        if (st.eqs.empty()) return finalize(std::move(st));

        std::vector<int> live;
        for (const auto &eq : st.eqs)
            for (int v : eq.main_vars_present())
                if (std::find(live.begin(), live.end(), v) == live.end()) live.push_back(v);
        std::sort(live.begin(), live.end());

        // univariate equations branch on their rational roots
        for (const auto &eq : st.eqs) {
            std::vector<int> vs = eq.main_vars_present();
            if (vs.size() != 1) continue;
            int v = vs[0];
            int ord = ordinal_of(v);
            auto roots = k_roots(eq, v, nonzero[static_cast<size_t>(ord)] != 0);
            for (const auto &r : roots) {
                State child = st;
                child.kind[static_cast<size_t>(ord)] = 1;
                child.value[static_cast<size_t>(ord)] = r;
                for (auto &ce : child.eqs) ce = ce.substitute_value(v, r);
                if (search(std::move(child))) return true;
                if (aborted || (stop && *stop)) return false;
            }
            return false;
        }

        // slice nonzero-constrained unknowns first: their small nonzero
        // values defuse the scaling freedom cheaply and keep the groebner
        // phase for genuinely coupled residual systems
        for (int v : live) {
            int ord = ordinal_of(v);
            if (!nonzero[static_cast<size_t>(ord)]) continue;
            for (const BigRational &c : ladder_values(true)) {
                State child = st;
                child.kind[static_cast<size_t>(ord)] = 1;
                child.value[static_cast<size_t>(ord)] = RatFun::constant(ctx->reg, c);
                for (auto &ce : child.eqs)
                    ce = ce.substitute_value(v, child.value[static_cast<size_t>(ord)]);
                if (search(std::move(child))) return true;
                if (aborted || (stop && *stop)) return false;
            }
            return false;
        }

        size_t total_terms = 0;
        for (const auto &eq : st.eqs) total_terms += eq.terms().size();
        if (static_cast<int>(live.size()) <= gb_var_cap && total_terms <= 250) {
            try {
                std::vector<FPoly> gb = fgroebner(st.eqs, gb_pair_cap);
                for (const auto &g : gb)
                    if (g.is_constant() && !g.is_zero()) return false;
                bool same = gb.size() == st.eqs.size();
                if (same)
                    for (size_t i = 0; i < gb.size(); ++i)
                        if (!(gb[i] == st.eqs[i])) {
                            same = false;
                            break;
                        }
                if (!same) {
                    State child = st;
                    child.eqs = std::move(gb);
                    return search(std::move(child));
                }
                // component surfacing: saturate at each nondegeneracy guard
                for (const auto &guard : guards) {
                    FPoly g = substituted_guard(guard, st);
                    if (g.is_zero() || g.is_constant()) continue;
                    std::vector<FPoly> sat = fsaturate(st.eqs, g.monic(), tag_var, gb_pair_cap);
                    bool changed = sat.size() != st.eqs.size();
                    if (!changed)
                        for (size_t i = 0; i < sat.size(); ++i)
                            if (!(sat[i] == st.eqs[i])) {
                                changed = true;
                                break;
                            }
                    if (!changed) continue;
                    bool inconsistent = false;
                    for (const auto &p : sat)
                        if (p.is_constant() && !p.is_zero()) inconsistent = true;
                    if (inconsistent) continue;
                    State child = st;
                    child.eqs = std::move(sat);
                    if (search(std::move(child))) return true;
                    if (aborted || (stop && *stop)) return false;
                }
            } catch (const GroebnerBudget &) {
                aborted = true;
                if (log) log->push_back("search: basis computation exceeded its work cap");
                return false;
            }
        } else if (static_cast<int>(live.size()) > stall_var_cap || total_terms > 250) {
            aborted = true;
            if (log)
                log->push_back("search stalled with " + std::to_string(live.size()) +
                               " coupled unknowns (" + std::to_string(total_terms) + " terms)");
            return false;
        }

        // ladder branching: highest degree unknown first, then by index
        auto deg_of = [&](int v) {
            uint32_t d = 0;
            for (const auto &eq : st.eqs) d = std::max(d, eq.degree(v));
            return d;
        };
        std::vector<int> order = live;
        std::sort(order.begin(), order.end(), [&](int x, int y) {
            uint32_t dx = deg_of(x), dy = deg_of(y);
            if (dx != dy) return dx > dy;
            return x < y;
        });
        int tried = 0;
        for (int v : order) {
            if (tried++ >= 3) break;
            int ord = ordinal_of(v);
            for (const BigRational &c : ladder_values(nonzero[static_cast<size_t>(ord)] != 0)) {
                State child = st;
                child.kind[static_cast<size_t>(ord)] = 1;
                child.value[static_cast<size_t>(ord)] = RatFun::constant(ctx->reg, c);
                for (auto &ce : child.eqs)
                    ce = ce.substitute_value(v, child.value[static_cast<size_t>(ord)]);
                if (search(std::move(child))) return true;
                if (aborted || (stop && *stop)) return false;
            }
        }
        return false;
    }
};

struct Driver {
    const IoSystem &sys;
    const Ansatz &a;
    const ZSystem &zs;
    const IdentifiableField &field;
    ZSolveOptions opt;

    std::shared_ptr<FieldTower> tower;
    Poly detM; // numerator of det dH over the ansatz registry
    std::vector<FPoly> guards;
    std::vector<std::vector<FPoly>> guard_groups;
    std::vector<std::string> guard_labels;

    int attempts = 0;
    int nodes = 0;
    bool stop_flag = false;
    bool exhausted = false;
    bool direct_aborted = false;
    std::vector<std::string> log;
    std::optional<ZSolution> found_global;
    std::optional<ZSolution> best_local;

    Driver(const IoSystem &s, const Ansatz &an, const ZSystem &z, const IdentifiableField &f,
           const ZSolveOptions &o)
        : sys(s), a(an), zs(z), field(f), opt(o) {
        std::vector<RatFun> gens;
        std::vector<std::string> names;
        for (size_t i = 0; i < field.gens.size(); ++i) {
            gens.push_back(field.gens[i].lifted(a.zreg));
            names.push_back("b" + std::to_string(i + 1));
        }
        std::vector<int> base = a.param_vars;
        for (int v : a.u_vars) base.push_back(v);
        tower = std::make_shared<FieldTower>(a.zreg, gens, base, names, a.u_vars);
        build_guards();
    }

    void build_guards() {
        int n = static_cast<int>(a.wvars.size());
        std::vector<std::vector<Poly>> M;
        for (size_t s = 0; s < a.Hnum.size(); ++s) {
            for (size_t i = 0; i + 1 < a.Hnum[s].size(); ++i) {
                std::vector<Poly> row;
                const Poly &num = a.Hnum[s][i];
                const Poly &den = a.Hden[s][i];
                for (int l = 0; l < n; ++l) {
                    int wv = a.wvars[static_cast<size_t>(l)];
                    row.push_back(num.derivative(wv) * den - num * den.derivative(wv));
                }
                M.push_back(std::move(row));
            }
        }
        std::function<Poly(std::vector<size_t>, std::vector<size_t>)> det =
            [&](std::vector<size_t> rows, std::vector<size_t> cols) -> Poly {
            if (rows.size() == 1) return M[rows[0]][cols[0]];
            Poly acc = Poly::zero(a.zreg);
            for (size_t j = 0; j < cols.size(); ++j) {
                const Poly &e = M[rows[0]][cols[j]];
                if (e.is_zero()) continue;
                std::vector<size_t> r2(rows.begin() + 1, rows.end());
                std::vector<size_t> c2;
                for (size_t k = 0; k < cols.size(); ++k)
                    if (k != j) c2.push_back(cols[k]);
                Poly t = e * det(r2, c2);
                acc = (j % 2 == 0) ? acc + t : acc - t;
            }
            return acc;
        };
        std::vector<size_t> rc(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) rc[static_cast<size_t>(i)] = static_cast<size_t>(i);
        detM = det(rc, rc);

        std::vector<int> wu = a.wvars;
        for (int v : a.u_vars) wu.push_back(v);
        std::vector<FPoly> det_group;
        for (const auto &kv : detM.group_by(wu)) {
            if (kv.second.is_zero()) continue;
            det_group.push_back(FPoly::from_poly(zs.zctx, kv.second).monic());
        }
        guards = det_group;
        guard_groups.push_back(std::move(det_group));
        guard_labels.push_back("dH singular");
        for (size_t s = 0; s < a.Hden.size(); ++s)
            for (size_t i = 0; i < a.Hden[s].size(); ++i) {
                if (!a.rational[s][i]) continue;
                std::vector<FPoly> den_group;
                for (const auto &slot : a.slots)
                    if (slot.output == static_cast<int>(s) && slot.order == static_cast<int>(i) &&
                        slot.in_denominator)
                        den_group.push_back(FPoly::variable(zs.zctx, slot.zvar));
                for (const auto &g : den_group) guards.push_back(g);
                guard_groups.push_back(std::move(den_group));
                guard_labels.push_back("denominator of H[" + sys.lie.output_names[s] + "," +
                                       std::to_string(i) + "] vanishes");
            }
        std::sort(guards.begin(), guards.end(),
                  [](const FPoly &x, const FPoly &y) { return FPoly::compare(x, y) < 0; });
        guards.erase(std::unique(guards.begin(), guards.end(),
                                 [](const FPoly &x, const FPoly &y) { return x == y; }),
                     guards.end());
    }

    int prechecks = 0;
    static constexpr int kPrecheckCap = 20000;
    static constexpr int kRejectLogCap = 40;

    void log_reject(const std::string &why) {
        if (prechecks <= kRejectLogCap)
            log.push_back("candidate " + std::to_string(prechecks) + ": rejected (" + why + ")");
        else if (prechecks == kRejectLogCap + 1)
            log.push_back("(further rejected candidates elided)");
    }

    bool offer(const std::vector<RatFun> &zvals, const std::string &origin) {
        // cheap nondegeneracy pre-checks; these do not consume the budget
        if (++prechecks > kPrecheckCap) {
            exhausted = true;
            stop_flag = true;
            return true;
        }
        for (size_t k = 0; k < a.slots.size(); ++k) {
            if (a.slots[k].nonzero && zvals[k].is_zero()) {
                log_reject(a.zreg->name(a.slots[k].zvar) + " = 0 violates " + a.slots[k].constraint);
                return false;
            }
        }
        std::map<int, RatFun> sub;
        for (size_t k = 0; k < a.slots.size(); ++k) sub[a.slots[k].zvar] = zvals[k];
        for (size_t s = 0; s < a.Hden.size(); ++s)
            for (size_t i = 0; i < a.Hden[s].size(); ++i) {
                if (!a.rational[s][i]) continue;
                if (poly_substitute_ratfun(a.Hden[s][i], sub).is_zero()) {
                    log_reject("denominator of H[" + sys.lie.output_names[s] + "," +
                               std::to_string(i) + "] vanishes");
                    return false;
                }
            }
        if (poly_substitute_ratfun(detM, sub).is_zero()) {
            log_reject("dH singular");
            return false;
        }
        if (attempts >= opt.max_attempts) {
            exhausted = true;
            stop_flag = true;
            return true;
        }
        ++attempts;
        for (const auto &eq : zs.eqs) {
            FPoly r = eq;
            for (size_t k = 0; k < a.slots.size(); ++k)
                if (r.depends_on(a.slots[k].zvar)) r = r.substitute_value(a.slots[k].zvar, zvals[k]);
            if (!r.is_zero()) {
                log.push_back("attempt " + std::to_string(attempts) + ": rejected (z-system residual)");
                return false;
            }
        }
        std::vector<RatFun> normalized = zvals;
        std::vector<char> is_scale(zvals.size(), 0);
        for (size_t s = 0; s < a.Hden.size(); ++s)
            for (size_t i = 0; i < a.Hden[s].size(); ++i) {
                if (!a.rational[s][i]) continue;
                int pivot = -1;
                for (size_t k = 0; k < a.slots.size(); ++k) {
                    const auto &sl = a.slots[k];
                    if (sl.output == static_cast<int>(s) && sl.order == static_cast<int>(i) &&
                        sl.in_denominator && !zvals[k].is_zero()) {
                        pivot = static_cast<int>(k);
                        break;
                    }
                }
                if (pivot < 0) return false;
                is_scale[static_cast<size_t>(pivot)] = 1;
                RatFun inv = zvals[static_cast<size_t>(pivot)].inverse();
                for (size_t k = 0; k < a.slots.size(); ++k) {
                    const auto &sl = a.slots[k];
                    if (sl.output == static_cast<int>(s) && sl.order == static_cast<int>(i))
                        normalized[k] = zvals[k] * inv;
                }
            }
        std::vector<ZCoordinateClass> zc(zvals.size());
        bool all_global = true;
        for (size_t k = 0; k < zvals.size(); ++k) {
            zc[k].is_block_scale = is_scale[k] != 0;
            if (is_scale[k]) continue;
            auto c = tower->classify(normalized[k]);
            if (c.kind == FieldTower::Classification::Kind::Global) {
                zc[k].kind = IdentClass::Global;
                zc[k].degree = 1;
                if (c.witness) zc[k].beta_expr = c.witness->str();
            } else if (c.kind == FieldTower::Classification::Kind::Local) {
                zc[k].kind = IdentClass::Local;
                zc[k].degree = c.degree;
                all_global = false;
            } else {
                log.push_back("attempt " + std::to_string(attempts) + ": rejected (" +
                              a.zreg->name(a.slots[k].zvar) +
                              " transcendental over the identifiable field)");
                return false;
            }
        }
        ZSolution sol;
        sol.found = true;
        sol.all_global = all_global;
        sol.z = zvals;
        sol.zclass = std::move(zc);
        sol.strategy = origin;
        log.push_back("attempt " + std::to_string(attempts) + ": accepted (" +
                      (all_global ? "all coordinates globally identifiable"
                                  : "coordinates at least locally identifiable") + ")");
        if (all_global) {
            found_global = std::move(sol);
            stop_flag = true;
            return true;
        }
        if (!best_local) best_local = std::move(sol);
        return !opt.prefer_global;
    }

    void run_direct() {
        log.push_back("direct search over " + std::to_string(a.q()) + " ansatz coefficients");
        SystemSearch ss;
        ss.ctx = zs.zctx;
        ss.vars = a.zvars;
        ss.nonzero.assign(a.slots.size(), 0);
        ss.level.assign(a.slots.size(), 0);
        for (size_t k = 0; k < a.slots.size(); ++k) {
            ss.nonzero[k] = a.slots[k].nonzero ? 1 : 0;
            ss.level[k] = a.slots[k].order;
        }
        ss.guards = guards;
        ss.guard_groups = guard_groups;
        ss.guard_labels = guard_labels;
        ss.tag_var = a.tag_var;
        ss.nodes = &nodes;
        ss.node_cap = opt.direct_node_cap;
        ss.stop = &stop_flag;
        ss.gb_var_cap = opt.gb_var_cap;
        ss.gb_pair_cap = opt.gb_pair_cap;
        ss.stall_var_cap = opt.stall_var_cap;
        ss.log = &log;
        ss.emit = [&](const std::vector<RatFun> &zv) { return offer(zv, "direct"); };
        ss.run(zs.eqs);
        direct_aborted = ss.aborted;
        if (ss.aborted && nodes > opt.node_cap)
            log.push_back("direct search: node budget exhausted");
    }

    // ---- affine change-of-variables search --------------------------------

    void run_affine() {
        const LieTable &t = sys.lie;
        int n = static_cast<int>(a.wvars.size());
        log.push_back("affine change-of-variables search over " + std::to_string(n * n + n) +
                      " matrix entries");

        // registry: params, inputs, x~, w, Lambda, c, tag
        std::vector<VarInfo> vi;
        for (int v : a.param_vars) vi.push_back(a.zreg->info(v));
        for (int v : a.u_vars) vi.push_back(a.zreg->info(v));
        for (int v : t.profile.xtilde) vi.push_back(t.reg->info(v));
        for (int v : a.wvars) vi.push_back(a.zreg->info(v));
        std::vector<std::string> names;
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) names.push_back("@L" + std::to_string(r + 1) + "_" + std::to_string(c + 1));
        for (int r = 0; r < n; ++r) names.push_back("@c" + std::to_string(r + 1));
        for (const auto &nm : names) vi.push_back({nm, VarBlock::AnsatzZ, 0});
        vi.push_back({"@at", VarBlock::Tag, 0});
        RegistryPtr reg2 = VarRegistry::create(vi);
        std::vector<int> lc_vars;
        for (const auto &nm : names) lc_vars.push_back(reg2->require(nm));
        int tag2 = reg2->require("@at");
        auto actx = FPoly::make_context(reg2, lc_vars);

        // substitution x~_k -> sum Lambda_k,l w_l + c_k
        std::map<int, Poly> sub;
        for (int k = 0; k < n; ++k) {
            Poly acc = Poly::variable(reg2, reg2->require("@c" + std::to_string(k + 1)));
            for (int l = 0; l < n; ++l)
                acc += Poly::variable(reg2, reg2->require("@L" + std::to_string(k + 1) + "_" +
                                                          std::to_string(l + 1))) *
                       Poly::variable(reg2, reg2->require(a.zreg->name(a.wvars[static_cast<size_t>(l)])));
            sub[reg2->require(t.reg->name(t.profile.xtilde[static_cast<size_t>(k)]))] = acc;
        }
        std::vector<int> wu2;
        for (int v : a.wvars) wu2.push_back(reg2->require(a.zreg->name(v)));
        for (int v : a.u_vars) wu2.push_back(reg2->require(a.zreg->name(v)));

        auto mono_to_reg2 = [&](const Mono &m) {
            Mono out(static_cast<size_t>(reg2->size()), 0);
            for (size_t v = 0; v < m.size(); ++v)
                if (m[v]) out[static_cast<size_t>(reg2->require(a.zreg->name(static_cast<int>(v))))] = m[v];
            return out;
        };

        // composed numerators/denominators with symbolic matrix entries
        std::vector<std::vector<Poly>> num2(t.h.size()), den2(t.h.size());
        std::vector<FPoly> support_eqs;
        std::vector<std::pair<int, Poly>> slot_coeffs; // (slot ordinal, composed lead coefficient)
        for (size_t s = 0; s < t.h.size(); ++s) {
            num2[s].resize(t.h[s].size(), Poly::zero(reg2));
            den2[s].resize(t.h[s].size(), Poly::one(reg2));
            for (size_t i = 0; i < t.h[s].size(); ++i) {
                Poly nn = t.h[s][i].num().lifted(reg2).substitute(sub);
                Poly dd = t.h[s][i].den().lifted(reg2).substitute(sub);
                num2[s][i] = nn;
                den2[s][i] = dd;
                auto add_support_eqs = [&](const Poly &p, bool in_den) {
                    auto groups = p.group_by(wu2);
                    auto coeff_at = [&](const Mono &m) {
                        auto it = groups.find(m);
                        return it == groups.end() ? Poly::zero(reg2) : it->second;
                    };
                    // slots owning each monomial, plus tied-shape proportions
                    std::vector<Mono> owned;
                    for (size_t k = 0; k < a.slots.size(); ++k) {
                        const auto &slot = a.slots[k];
                        if (slot.output != static_cast<int>(s) || slot.order != static_cast<int>(i) ||
                            slot.in_denominator != in_den)
                            continue;
                        Mono lead2 = mono_to_reg2(slot.lead);
                        owned.push_back(lead2);
                        Poly lead_coeff = coeff_at(lead2);
                        slot_coeffs.push_back({static_cast<int>(k), lead_coeff});
                        for (const auto &tm : slot.shape.terms()) {
                            Mono m2 = mono_to_reg2(tm.m);
                            if (canonical_mono_cmp(m2, lead2) == 0) continue;
                            owned.push_back(m2);
                            // coefficient(member) = scale * coefficient(lead)
                            Poly prop = coeff_at(m2) - lead_coeff.scaled(tm.c);
                            if (!prop.is_zero()) support_eqs.push_back(FPoly::from_poly(actx, prop).monic());
                        }
                    }
                    for (const auto &[mono, coeff] : groups) {
                        bool found = false;
                        for (const auto &m : owned)
                            if (canonical_mono_cmp(m, mono) == 0) found = true;
                        if (!found && !coeff.is_zero())
                            support_eqs.push_back(FPoly::from_poly(actx, coeff).monic());
                    }
                };
                add_support_eqs(nn, false);
                if (a.rational[s][i]) add_support_eqs(dd, true);
            }
        }
        std::sort(support_eqs.begin(), support_eqs.end(),
                  [](const FPoly &x, const FPoly &y) { return FPoly::compare(x, y) < 0; });
        support_eqs.erase(std::unique(support_eqs.begin(), support_eqs.end(),
                                      [](const FPoly &x, const FPoly &y) { return x == y; }),
                          support_eqs.end());

        // det Lambda as a guard
        std::function<Poly(std::vector<int>, std::vector<int>)> det =
            [&](std::vector<int> rows, std::vector<int> cols) -> Poly {
            if (rows.size() == 1)
                return Poly::variable(reg2, reg2->require("@L" + std::to_string(rows[0] + 1) + "_" +
                                                          std::to_string(cols[0] + 1)));
            Poly acc = Poly::zero(reg2);
            for (size_t j = 0; j < cols.size(); ++j) {
                std::vector<int> r2(rows.begin() + 1, rows.end());
                std::vector<int> c2;
                for (size_t k = 0; k < cols.size(); ++k)
                    if (k != static_cast<size_t>(j)) c2.push_back(cols[k]);
                Poly t2 = Poly::variable(reg2, reg2->require("@L" + std::to_string(rows[0] + 1) + "_" +
                                                             std::to_string(cols[static_cast<size_t>(j)] + 1))) *
                          det(r2, c2);
                acc = (j % 2 == 0) ? acc + t2 : acc - t2;
            }
            return acc;
        };
        std::vector<int> idxs(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) idxs[static_cast<size_t>(i)] = i;
        Poly detL = det(idxs, idxs);
        FPoly detL_guard = FPoly::from_poly(actx, detL);

        SystemSearch ss;
        ss.ctx = actx;
        ss.vars = lc_vars;
        ss.nonzero.assign(lc_vars.size(), 0);
        ss.level.assign(lc_vars.size(), 0);
        ss.guards = {detL_guard};
        ss.guard_groups = {{detL_guard}};
        ss.guard_labels = {"singular change of variables"};
        ss.tag_var = tag2;
        ss.nodes = &nodes;
        ss.node_cap = opt.node_cap;
        ss.stop = &stop_flag;
        ss.gb_var_cap = opt.gb_var_cap;
        ss.gb_pair_cap = opt.gb_pair_cap;
        ss.stall_var_cap = opt.stall_var_cap;
        ss.log = &log;
        std::vector<std::pair<int, FPoly>> slot_fpolys;
        for (const auto &[slot_ord, coeff] : slot_coeffs)
            slot_fpolys.push_back({slot_ord, FPoly::from_poly(actx, coeff)});
        ss.extra_candidates = [&ss, this, slot_fpolys, lc_vars,
                               reg2](int ord, const SystemSearch::State &st) {
            // value suggestions: zero a slot coefficient, or normalize it to
            // +-1, whenever the resulting value is parameter-only
            std::vector<RatFun> out;
            int v = lc_vars[static_cast<size_t>(ord)];
            auto param_only = [&](const RatFun &r) {
                for (int lv : lc_vars)
                    if (r.depends_on(lv)) return false;
                return true;
            };
            for (const auto &[slot_ord, coeff0] : slot_fpolys) {
                (void)slot_ord;
                FPoly coeff = ss.substituted_guard(coeff0, st);
                if (coeff.is_zero() || coeff.degree(v) != 1) continue;
                RatFun c1f = RatFun::zero(reg2), c0f = RatFun::zero(reg2);
                FPoly c1 = coeff.coefficient_of(v, 1);
                FPoly c0 = coeff.coefficient_of(v, 0);
                // only usable when the ratio collapses to parameters
                if (!c1.is_constant() || !c0.is_constant()) {
                    // a shared free unknown may cancel between the two parts
                    if (c1.terms().size() == 1 && c0.terms().size() == 1 &&
                        canonical_mono_cmp(c0.terms()[0].first, c1.terms()[0].first) == 0) {
                        c0f = c0.terms()[0].second;
                        c1f = c1.terms()[0].second;
                    } else {
                        continue;
                    }
                } else {
                    c1f = c1.constant_value();
                    c0f = c0.constant_value();
                }
                if (c1f.is_zero()) continue;
                RatFun zero_root = (-c0f) / c1f;
                RatFun plus = (RatFun::one(reg2) - c0f) / c1f;
                RatFun minus = (RatFun::constant(reg2, BigRational(-1)) - c0f) / c1f;
                for (const auto &r : {zero_root, plus, minus})
                    if (param_only(r)) out.push_back(r);
                if (out.size() > 16) break;
            }
            std::sort(out.begin(), out.end(),
                      [](const RatFun &x, const RatFun &y) { return RatFun::compare(x, y) < 0; });
            out.erase(std::unique(out.begin(), out.end()), out.end());
            return out;
        };
        ss.emit = [&](const std::vector<RatFun> &lc_vals) {
            // invertibility first (cheap)
            std::map<int, RatFun> valsub;
            for (size_t k = 0; k < lc_vars.size(); ++k) valsub[lc_vars[k]] = lc_vals[k];
            if (poly_substitute_ratfun(detL, valsub).is_zero()) return false;
            // compose h with the numeric substitution and read the slots
            std::map<int, RatFun> subv;
            for (int k = 0; k < n; ++k) {
                RatFun acc = valsub[reg2->require("@c" + std::to_string(k + 1))];
                for (int l = 0; l < n; ++l)
                    acc += valsub[reg2->require("@L" + std::to_string(k + 1) + "_" + std::to_string(l + 1))] *
                           RatFun::variable(reg2, wu2[static_cast<size_t>(l)]);
                subv[reg2->require(t.reg->name(t.profile.xtilde[static_cast<size_t>(k)]))] = acc;
            }
            std::vector<RatFun> zvals(a.slots.size(), RatFun::zero(a.zreg));
            for (size_t s = 0; s < t.h.size(); ++s) {
                for (size_t i = 0; i < t.h[s].size(); ++i) {
                    RatFun nv = poly_substitute_ratfun(t.h[s][i].num().lifted(reg2), subv);
                    RatFun dv = poly_substitute_ratfun(t.h[s][i].den().lifted(reg2), subv);
                    // read each slot's value off its leading shape monomial
                    auto read_side = [&](const RatFun &side, bool in_den) {
                        auto groups = side.num().group_by(wu2);
                        for (size_t k = 0; k < a.slots.size(); ++k) {
                            const auto &slot = a.slots[k];
                            if (slot.output != static_cast<int>(s) ||
                                slot.order != static_cast<int>(i) || slot.in_denominator != in_den)
                                continue;
                            auto it = groups.find(mono_to_reg2(slot.lead));
                            if (it == groups.end()) continue;
                            RatFun value = RatFun(it->second) / RatFun(side.den());
                            zvals[k] = value.lifted(a.zreg);
                        }
                    };
                    if (a.rational[s][i]) {
                        read_side(nv, false);
                        read_side(dv, true);
                    } else {
                        // denominator is a parameter unit: divide through
                        read_side(nv / dv, false);
                    }
                }
            }
            return offer(zvals, "affine");
        };
        ss.run(support_eqs);
    }
};

} // namespace

ZSolution solve_z(const IoSystem &sys, const Ansatz &a, const ZSystem &zs,
                  const IdentifiableField &field, const ZSolveOptions &opt) {
    Driver d(sys, a, zs, field, opt);
    d.run_direct();
    if (!d.found_global && !d.exhausted) {
        d.stop_flag = false;
        d.nodes = 0;
        d.run_affine();
    }
    ZSolution out;
    if (d.found_global)
        out = std::move(*d.found_global);
    else if (d.best_local)
        out = std::move(*d.best_local);
    out.attempts = d.attempts;
    out.log = std::move(d.log);
    out.budget_exhausted = d.exhausted;
    if (!out.found) {
        out.failed_constraints.push_back(
            d.exhausted ? "attempt budget exhausted before an acceptable solution"
                        : "no acceptable solution found in the searched families");
    }
    return out;
}

} // namespace iorep
