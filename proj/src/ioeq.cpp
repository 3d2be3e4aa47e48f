#include "iorep/ioeq.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace iorep {

namespace {

// orderly ranking on (s, i): derivative order first, then output index
struct YInfo {
    int s, i, var;
};

struct ImplicitSetup {
    RegistryPtr reg;                       // io registry incl. x~ block
    std::vector<int> xt;                   // x~ vars in io reg
    std::vector<std::vector<int>> y_var;   // (s,i) -> var
    std::vector<int> u_vars;
    std::vector<int> params;
    std::vector<YInfo> ys;                 // ordered by rank ascending
};

ImplicitSetup build_setup(const LieTable &t) {
    ImplicitSetup st;
    const RegistryPtr &lreg = t.reg;
    std::vector<VarInfo> vi;
    for (int v : t.profile.xtilde) vi.push_back(lreg->info(v));
    st.y_var.resize(t.h.size());
    for (size_t s = 0; s < t.h.size(); ++s) {
        std::string base = t.output_names[s];
        std::string nm = base;
        for (int i = 0; i <= t.profile.n[s]; ++i) {
            vi.push_back({nm, VarBlock::OutputDeriv, i});
            nm += "'";
        }
    }
    for (int v : t.u_vars_by_order) vi.push_back(lreg->info(v));
    for (int v = 0; v < lreg->size(); ++v)
        if (lreg->block(v) == VarBlock::Param) vi.push_back(lreg->info(v));
    st.reg = VarRegistry::create(vi);
    for (int v : t.profile.xtilde) st.xt.push_back(st.reg->require(lreg->name(v)));
    for (size_t s = 0; s < t.h.size(); ++s) {
        std::string nm = t.output_names[s];
        for (int i = 0; i <= t.profile.n[s]; ++i) {
            st.y_var[s].push_back(st.reg->require(nm));
            nm += "'";
        }
    }
    for (int v : t.u_vars_by_order) st.u_vars.push_back(st.reg->require(lreg->name(v)));
    for (int v = 0; v < lreg->size(); ++v)
        if (lreg->block(v) == VarBlock::Param) st.params.push_back(st.reg->require(lreg->name(v)));
    for (size_t s = 0; s < st.y_var.size(); ++s)
        for (size_t i = 0; i < st.y_var[s].size(); ++i)
            st.ys.push_back({static_cast<int>(s), static_cast<int>(i), st.y_var[s][i]});
    std::sort(st.ys.begin(), st.ys.end(), [](const YInfo &a, const YInfo &b) {
        return a.i != b.i ? a.i < b.i : a.s < b.s;
    });
    return st;
}

// ranking-lex comparator over Y (rank descending) then u (order descending)
std::vector<int> ranking_significance(const ImplicitSetup &st) {
    std::vector<int> sig;
    for (auto it = st.ys.rbegin(); it != st.ys.rend(); ++it) sig.push_back(it->var);
    std::vector<int> us = st.u_vars;
    std::sort(us.begin(), us.end(), [&](int a, int b) {
        int da = st.reg->info(a).deriv_order, db = st.reg->info(b).deriv_order;
        if (da != db) return da > db;
        return st.reg->name(a) < st.reg->name(b);
    });
    for (int v : us) sig.push_back(v);
    return sig;
}

int cmp_ranklex(const Mono &a, const Mono &b, const std::vector<int> &sig) {
    for (int v : sig) {
        uint32_t ea = a[static_cast<size_t>(v)], eb = b[static_cast<size_t>(v)];
        if (ea != eb) return ea > eb ? 1 : -1;
    }
    return 0;
}

// strip the parameter-polynomial content (gcd of the Y/u-monomial coefficients)
Poly strip_param_content(const Poly &p, const ImplicitSetup &st) {
    std::vector<int> main_vars;
    for (const auto &y : st.ys) main_vars.push_back(y.var);
    for (int v : st.u_vars) main_vars.push_back(v);
    auto groups = p.group_by(main_vars);
    Poly g = Poly::zero(p.reg());
    for (const auto &kv : groups) {
        g = poly_gcd(g, kv.second);
        if (g.is_constant() && !g.is_zero()) break;
    }
    if (g.is_constant() || g.is_zero()) return p.primitive();
    return poly_divexact(p, g)->primitive();
}

} // namespace

int IoSystem::rank_of(int var) const {
    for (size_t s = 0; s < y_var.size(); ++s)
        for (size_t i = 0; i < y_var[s].size(); ++i)
            if (y_var[s][i] == var) return static_cast<int>(i) * 1000 + static_cast<int>(s);
    return -1;
}

IoSystem implicitize(const LieTable &table, std::ostream *progress) {
    ImplicitSetup st = build_setup(table);
    const RegistryPtr &reg = st.reg;

    auto depends_on_any = [](const Poly &p, const std::vector<int> &vars) {
        for (int v : vars)
            if (p.depends_on(v)) return true;
        return false;
    };

    // graph generators den*Y - num; denominators split into a gcd-free factor
    // base used for saturation and for stripping spurious eliminant factors
    std::vector<Poly> gens;
    std::vector<Poly> raw_dens;
    for (size_t s = 0; s < table.h.size(); ++s) {
        for (size_t i = 0; i < table.h[s].size(); ++i) {
            Poly num = table.h[s][i].num().lifted(reg);
            Poly den = table.h[s][i].den().lifted(reg);
            gens.push_back(den * Poly::variable(reg, st.y_var[s][i]) - num);
            if (!den.is_constant()) raw_dens.push_back(den);
        }
    }
    std::vector<Poly> factors = gcd_free_basis(raw_dens);
    // parameter-only factors are units over Q(alpha); drop them
    std::vector<int> nonparam;
    for (const auto &y : st.ys) nonparam.push_back(y.var);
    for (int v : st.u_vars) nonparam.push_back(v);
    for (int v : st.xt) nonparam.push_back(v);
    factors.erase(std::remove_if(factors.begin(), factors.end(),
                                 [&](const Poly &f) { return !depends_on_any(f, nonparam); }),
                  factors.end());

    // presolve: eliminate x~ variables occurring linearly with a constant
    // coefficient (typical for y = x outputs)
    std::vector<int> remaining = st.xt;
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t gi = 0; gi < gens.size() && !changed; ++gi) {
            for (size_t xi = 0; xi < remaining.size(); ++xi) {
                int xv = remaining[xi];
                if (gens[gi].degree(xv) != 1) continue;
                Poly c = gens[gi].coefficient_of(xv, 1);
                if (!c.is_constant()) continue;
                Poly rest = gens[gi].coefficient_of(xv, 0);
                Poly repl = rest.scaled(-c.constant_value().inverse());
                std::map<int, Poly> sub{{xv, repl}};
                std::vector<Poly> next;
                for (size_t gj = 0; gj < gens.size(); ++gj) {
                    if (gj == gi) continue;
                    Poly g2 = gens[gj].substitute(sub);
                    if (!g2.is_zero()) next.push_back(g2);
                }
                std::vector<Poly> fnext;
                for (auto &f : factors) {
                    Poly f2 = f.substitute(sub);
                    if (!f2.is_constant() && depends_on_any(f2, nonparam)) fnext.push_back(f2.primitive());
                }
                factors = std::move(fnext);
                gens = std::move(next);
                remaining.erase(remaining.begin() + static_cast<long>(xi));
                changed = true;
                break;
            }
        }
    }

    // rational substitution rounds: a generator linear in some remaining x~
    // variable solves it as a rational function; clearing denominators keeps
    // every other generator inside the saturated ideal. The linear
    // coefficient must not vanish on the variety (checked on the
    // parametrization), and is recorded as a strip guard.
    auto h_value_of = [&](const Poly &p) {
        RatFun acc = RatFun::zero(table.reg);
        for (const auto &tm : p.terms()) {
            RatFun term = RatFun::constant(table.reg, tm.c);
            for (size_t v = 0; v < tm.m.size(); ++v) {
                uint32_t e = tm.m[v];
                if (!e) continue;
                int var = static_cast<int>(v);
                bool handled = false;
                for (size_t sv = 0; sv < st.y_var.size() && !handled; ++sv)
                    for (size_t iv = 0; iv < st.y_var[sv].size(); ++iv)
                        if (st.y_var[sv][iv] == var) {
                            term *= RatFun::pow(table.h[sv][iv], static_cast<long>(e));
                            handled = true;
                            break;
                        }
                if (!handled) {
                    int lv = table.reg->require(reg->name(var));
                    term *= RatFun::pow(RatFun::variable(table.reg, lv), static_cast<long>(e));
                }
            }
            acc += term;
        }
        return acc;
    };

    std::vector<Poly> guards; // x~-free, generically nonzero on V
    changed = true;
    while (changed && !remaining.empty()) {
        changed = false;
        // deterministic choice: smallest coefficient degree, then var, then poly
        size_t best_g = gens.size();
        int best_x = -1;
        uint64_t best_key = ~0ULL;
        for (size_t gi = 0; gi < gens.size(); ++gi) {
            for (int xv : remaining) {
                if (gens[gi].degree(xv) != 1) continue;
                Poly c1 = gens[gi].coefficient_of(xv, 1);
                uint64_t key = c1.max_total_degree() * 10000 + static_cast<uint64_t>(c1.term_count());
                if (key < best_key) {
                    best_key = key;
                    best_g = gi;
                    best_x = xv;
                }
            }
        }
        if (best_g < gens.size()) {
            Poly c1 = gens[best_g].coefficient_of(best_x, 1);
            if (!h_value_of(c1).is_zero()) {
                RatFun repl(-gens[best_g].coefficient_of(best_x, 0), c1);
                std::vector<Poly> next;
                for (size_t gj = 0; gj < gens.size(); ++gj) {
                    if (gj == best_g) continue;
                    Poly g2 = poly_substitute_ratfun(gens[gj], {{best_x, repl}}).num();
                    if (!g2.is_zero()) next.push_back(g2.primitive());
                }
                std::vector<Poly> fnext;
                fnext.push_back(c1.primitive());
                for (auto &f : factors) {
                    Poly f2 = poly_substitute_ratfun(f, {{best_x, repl}}).num();
                    if (!f2.is_constant() && depends_on_any(f2, nonparam)) fnext.push_back(f2.primitive());
                }
                factors = std::move(fnext);
                gens = std::move(next);
                remaining.erase(std::find(remaining.begin(), remaining.end(), best_x));
                changed = true;
            }
        }
    }

    // move x~-free factors to the guard list
    for (auto it = factors.begin(); it != factors.end();) {
        if (!depends_on_any(*it, remaining)) {
            guards.push_back(*it);
            it = factors.erase(it);
        } else {
            ++it;
        }
    }

    std::vector<Poly> elim;
    for (const auto &g : gens)
        if (!depends_on_any(g, remaining)) elim.push_back(g);

    if (!remaining.empty()) {
        if (progress)
            *progress << "implicitize: groebner elimination of " << remaining.size()
                      << " state coordinate(s)\n";
        std::vector<Poly> elim_gens;
        for (const auto &g : gens)
            if (depends_on_any(g, remaining)) elim_gens.push_back(g);
        std::vector<int> front = remaining;
        RegistryPtr work = reg;
        std::vector<Poly> sat_factors;
        for (const auto &f : factors)
            if (depends_on_any(f, remaining)) sat_factors.push_back(f);
        if (!sat_factors.empty()) {
            std::string tagname = "@sat";
            while (work->has(tagname)) tagname += "_";
            work = reg->extended({{tagname, VarBlock::Tag, 0}});
            int tv = work->require(tagname);
            for (auto &g : elim_gens) g = g.lifted(work);
            Poly prod = Poly::variable(work, tv);
            for (const auto &d : sat_factors) prod *= d.lifted(work);
            elim_gens.push_back(prod - Poly::one(work));
            front.clear();
            front.push_back(tv);
            for (int v : remaining) front.push_back(work->require(reg->name(v)));
        }
        IdealBasis gb = groebner(work, elim_gens, MonomialOrder::block_elim(work, front));
        for (const auto &g : gb.gens) {
            bool clean = true;
            for (int v : front)
                if (g.depends_on(v)) {
                    clean = false;
                    break;
                }
            if (clean) elim.push_back(work == reg ? g : g.lifted(reg));
        }
    }
    if (progress) *progress << "implicitize: " << elim.size() << " eliminant candidate(s)\n";

    // strip guard factors (nonzero on V) and parameter content
    auto strip_guards = [&](Poly p) {
        if (p.is_zero()) return p;
        p = strip_param_content(p, st);
        for (const auto &phi : guards) {
            for (;;) {
                Poly g = poly_gcd(p, phi);
                if (g.is_constant()) break;
                p = *poly_divexact(p, g);
            }
        }
        return strip_param_content(p, st);
    };
    for (auto &g : elim) g = strip_guards(g);

    // per-output selection by ranking leader
    auto leader_of = [&](const Poly &p) -> int {
        int best = -1, best_rank = -1;
        for (const auto &y : st.ys) {
            if (!p.depends_on(y.var)) continue;
            int r = y.i * 1000 + y.s;
            if (r > best_rank) {
                best_rank = r;
                best = y.var;
            }
        }
        return best;
    };

    IoSystem sys;
    sys.io_reg = reg;
    sys.lie_reg = table.reg;
    sys.lie = table;
    sys.y_var = st.y_var;
    sys.u_vars = st.u_vars;
    sys.presentation_certified = table.h.size() == 1;

    std::vector<Poly> chosen(table.h.size(), Poly::zero(reg));
    for (size_t s = 0; s < table.h.size(); ++s) {
        int want = st.y_var[s].back();
        const Poly *best = nullptr;
        uint32_t best_deg = 0;
        for (const auto &g : elim) {
            if (leader_of(g) != want) continue;
            uint32_t d = g.degree(want);
            if (!best || d < best_deg || (d == best_deg && Poly::compare(g, *best) < 0)) {
                best = &g;
                best_deg = d;
            }
        }
        if (!best)
            throw RegimeError("no eliminant with leader " + reg->name(want) +
                              "; the model is outside the supported regime");
        chosen[s] = *best;
    }

    // cross-reduce by the other equations' leaders (pseudo-remainders)
    if (chosen.size() > 1) {
        bool again = true;
        int rounds = 0;
        while (again && ++rounds < 10) {
            again = false;
            for (size_t s = 0; s < chosen.size(); ++s) {
                for (size_t s2 = 0; s2 < chosen.size(); ++s2) {
                    if (s == s2) continue;
                    int lv = st.y_var[s2].back();
                    uint32_t db = chosen[s2].degree(lv);
                    if (chosen[s].degree(lv) >= db) {
                        chosen[s] = poly_prem(chosen[s], chosen[s2], lv);
                        chosen[s] = strip_guards(chosen[s]);
                        again = true;
                    }
                }
            }
        }
    }

    // identity-preserving square-free reduction: repeated factors of an
    // eliminant are spurious whenever the reduced polynomial still vanishes
    // under the Lie substitution
    for (size_t s = 0; s < chosen.size(); ++s) {
        int lv = st.y_var[s].back();
        for (;;) {
            Poly d = chosen[s].derivative(lv);
            if (d.is_zero()) break;
            Poly g = poly_gcd(chosen[s], d);
            if (g.is_constant()) break;
            Poly candidate = *poly_divexact(chosen[s], g);
            if (!h_value_of(candidate).is_zero()) break;
            chosen[s] = strip_guards(candidate);
        }
    }

    std::vector<int> sig = ranking_significance(st);
    for (size_t s = 0; s < chosen.size(); ++s) {
        Poly p = strip_param_content(chosen[s], st);
        // group by the Y/u part
        std::vector<int> main_vars;
        for (const auto &y : st.ys) main_vars.push_back(y.var);
        for (int v : st.u_vars) main_vars.push_back(v);
        auto groups = p.group_by(main_vars);
        // ranking-lex leading monomial
        const Mono *lead = nullptr;
        for (const auto &kv : groups)
            if (!lead || cmp_ranklex(kv.first, *lead, sig) > 0) lead = &kv.first;
        if (!lead) throw RegimeError("empty eliminant");
        RatFun lead_coeff = RatFun(groups.find(*lead)->second);
        // sign: positive canonical leading coefficient on the leading monomial
        if (groups.find(*lead)->second.content().sign() < 0) p = -p;

        IoEquation eq;
        eq.output = static_cast<int>(s);
        eq.leader_var = st.y_var[s].back();
        eq.leader_degree = static_cast<int>(p.degree(eq.leader_var));
        eq.primitive = p;
        auto groups2 = p.group_by(main_vars);
        RatFun lc2 = RatFun(groups2.find(*lead)->second);
        std::vector<std::pair<Mono, RatFun>> monic;
        for (const auto &kv : groups2) monic.push_back({kv.first, RatFun(kv.second) / lc2});
        // descending ranking-lex order for deterministic reporting
        std::sort(monic.begin(), monic.end(), [&](const auto &a, const auto &b) {
            return cmp_ranklex(a.first, b.first, sig) > 0;
        });
        eq.monic = std::move(monic);
        sys.eqs.push_back(std::move(eq));
    }

    // substitution identity: plugging the Lie derivatives into each monic
    // equation must give the zero rational function
    for (size_t s = 0; s < sys.eqs.size(); ++s) {
        RatFun acc = RatFun::zero(table.reg);
        for (const auto &[mono, coeff] : sys.eqs[s].monic) {
            RatFun term = coeff.lifted(table.reg);
            for (size_t sv = 0; sv < st.y_var.size(); ++sv)
                for (size_t iv = 0; iv < st.y_var[sv].size(); ++iv) {
                    uint32_t e = mono[static_cast<size_t>(st.y_var[sv][iv])];
                    if (e) term *= RatFun::pow(table.h[sv][iv], static_cast<long>(e));
                }
            for (size_t ui = 0; ui < st.u_vars.size(); ++ui) {
                uint32_t e = mono[static_cast<size_t>(st.u_vars[ui])];
                if (e)
                    term *= RatFun::pow(
                        RatFun::variable(table.reg, table.u_vars_by_order[ui]), static_cast<long>(e));
            }
            acc += term;
        }
        if (!acc.is_zero())
            throw RegimeError("substitution identity failed for the " + std::to_string(s + 1) +
                              "-th io-equation");
    }
    if (progress) *progress << "implicitize: substitution identity verified\n";
    return sys;
}

std::string IoSystem::equation_str(int s) const {
    const IoEquation &eq = eqs.at(static_cast<size_t>(s));
    std::ostringstream os;
    // print the primitive form in ranking-lex descending term order
    std::vector<int> sig;
    {
        std::vector<YInfo> ys;
        for (size_t sv = 0; sv < y_var.size(); ++sv)
            for (size_t iv = 0; iv < y_var[sv].size(); ++iv)
                ys.push_back({static_cast<int>(sv), static_cast<int>(iv), y_var[sv][iv]});
        std::sort(ys.begin(), ys.end(),
                  [](const YInfo &a, const YInfo &b) { return a.i != b.i ? a.i > b.i : a.s < b.s; });
        for (const auto &y : ys) sig.push_back(y.var);
        std::vector<int> us = u_vars;
        std::sort(us.begin(), us.end(), [&](int a, int b) {
            int da = io_reg->info(a).deriv_order, db = io_reg->info(b).deriv_order;
            if (da != db) return da > db;
            return io_reg->name(a) < io_reg->name(b);
        });
        for (int v : us) sig.push_back(v);
    }
    std::vector<int> main_vars = sig;
    // inside a monomial, inputs print first (ascending order), then the
    // output derivatives by ascending rank
    std::vector<int> print_order;
    {
        std::vector<int> us = u_vars;
        std::sort(us.begin(), us.end(), [&](int a, int b) {
            int da = io_reg->info(a).deriv_order, db = io_reg->info(b).deriv_order;
            if (da != db) return da < db;
            return io_reg->name(a) < io_reg->name(b);
        });
        print_order = us;
        for (auto it = sig.rbegin(); it != sig.rend(); ++it)
            if (std::find(us.begin(), us.end(), *it) == us.end()) print_order.push_back(*it);
    }
    auto groups = eq.primitive.group_by(main_vars);
    std::vector<std::pair<Mono, Poly>> terms(groups.begin(), groups.end());
    std::sort(terms.begin(), terms.end(),
              [&](const auto &a, const auto &b) { return cmp_ranklex(a.first, b.first, sig) > 0; });
    bool started = false;
    for (const auto &[mono, coeff] : terms) {
        Poly c = coeff;
        bool neg = c.content().sign() < 0;
        if (neg) c = -c;
        os << (started ? (neg ? " - " : " + ") : (neg ? "-" : ""));
        started = true;
        std::string cs = c.str();
        bool coeff_is_one = c.is_constant() && c.constant_value().is_one();
        bool mono_one = mono_is_one(mono);
        if (!coeff_is_one || mono_one) {
            if (c.term_count() > 1)
                os << "(" << cs << ")";
            else
                os << cs;
            if (!mono_one) os << "*";
        }
        bool first_var = true;
        for (int v : print_order) {
            uint32_t e = mono[static_cast<size_t>(v)];
            if (!e) continue;
            if (!first_var) os << "*";
            first_var = false;
            os << io_reg->name(v);
            if (e > 1) os << "^" << e;
        }
    }
    os << " = 0";
    return os.str();
}

IdentifiableField extract_generators(const IoSystem &sys) {
    IdentifiableField field;
    field.reg = sys.lie_reg;
    for (int v = 0; v < sys.lie_reg->size(); ++v)
        if (sys.lie_reg->block(v) == VarBlock::Param) field.param_vars.push_back(v);

    auto normalize = [](RatFun f) {
        // unit-normalize: integer-primitive numerator and denominator with a
        // positive numerator sign, so Q-multiples collapse
        if (f.is_zero()) return f;
        Poly n = f.num().primitive(), d = f.den().primitive();
        return RatFun(n, d);
    };

    std::vector<RatFun> raw;
    for (const auto &eq : sys.eqs) {
        for (const auto &[mono, coeff] : eq.monic) {
            if (coeff.is_constant()) continue;
            raw.push_back(normalize(coeff.lifted(sys.lie_reg)));
        }
    }
    auto complexity_less = [](const RatFun &a, const RatFun &b) {
        uint64_t da = a.num().max_total_degree() + a.den().max_total_degree();
        uint64_t db = b.num().max_total_degree() + b.den().max_total_degree();
        if (da != db) return da < db;
        size_t ta = static_cast<size_t>(a.num().term_count() + a.den().term_count());
        size_t tb = static_cast<size_t>(b.num().term_count() + b.den().term_count());
        if (ta != tb) return ta < tb;
        return a.str() < b.str();
    };
    std::sort(raw.begin(), raw.end(), complexity_less);
    raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
    field.raw = raw;

    auto tower_for = [&](const std::vector<RatFun> &g) {
        return FieldTower(sys.lie_reg, g, field.param_vars);
    };

    // reduce to a generating subset first: a transcendence basis by greedy
    // numeric rank, then exact membership checks pull in anything the basis
    // misses; every dropped coefficient carries a membership certificate
    std::vector<RatFun> gens;
    std::vector<std::string> prov;
    if (raw.size() > 1) {
        int rank = 0;
        for (const auto &g : raw) {
            std::vector<RatFun> cand = gens;
            cand.push_back(g);
            int r = jacobian_rank(cand, field.param_vars);
            if (r > rank) {
                rank = r;
                gens.push_back(g);
                prov.push_back("io-equation coefficient");
            }
        }
        for (bool grew = true; grew;) {
            grew = false;
            FieldTower t = tower_for(gens);
            for (const auto &g : raw) {
                bool have = false;
                for (const auto &k : gens)
                    if (k == g) {
                        have = true;
                        break;
                    }
                if (have) continue;
                if (t.classify(g).kind != FieldTower::Classification::Kind::Global) {
                    gens.push_back(g);
                    prov.push_back("io-equation coefficient");
                    grew = true;
                    break;
                }
            }
        }
    } else {
        gens = raw;
        prov.assign(gens.size(), "io-equation coefficient");
    }

    // replacement pass: swap a generator for a single parameter (or its
    // square) when the generated field provably stays the same
    for (size_t gi = gens.size(); gi-- > 0;) {
        std::vector<int> cand_vars = gens[gi].num().vars_present();
        for (int v : gens[gi].den().vars_present()) cand_vars.push_back(v);
        std::sort(cand_vars.begin(), cand_vars.end());
        cand_vars.erase(std::unique(cand_vars.begin(), cand_vars.end()), cand_vars.end());
        std::vector<RatFun> cands;
        for (int v : cand_vars)
            if (sys.lie_reg->block(v) == VarBlock::Param)
                cands.push_back(RatFun::variable(sys.lie_reg, v));
        {
            size_t singles = cands.size();
            for (size_t k = 0; k < singles; ++k) cands.push_back(cands[k] * cands[k]);
        }
        FieldTower cur = tower_for(gens);
        for (const auto &cand : cands) {
            if (cand == gens[gi]) break;
            bool already = false;
            for (const auto &g : gens)
                if (g == cand) {
                    already = true;
                    break;
                }
            if (already) continue;
            if (cur.classify(cand).kind != FieldTower::Classification::Kind::Global) continue;
            std::vector<RatFun> swapped = gens;
            swapped[gi] = cand;
            FieldTower alt = tower_for(swapped);
            if (alt.classify(gens[gi]).kind != FieldTower::Classification::Kind::Global) continue;
            prov[gi] = "simplified from " + gens[gi].str() + " (mutual membership verified)";
            gens[gi] = cand;
            break;
        }
    }

    // redundancy pass: drop generators expressible in the remaining ones
    for (size_t gi = gens.size(); gi-- > 0;) {
        if (gens.size() == 1) break;
        std::vector<RatFun> rest;
        for (size_t j = 0; j < gens.size(); ++j)
            if (j != gi) rest.push_back(gens[j]);
        FieldTower t = tower_for(rest);
        if (t.classify(gens[gi]).kind == FieldTower::Classification::Kind::Global) {
            gens.erase(gens.begin() + static_cast<long>(gi));
            prov.erase(prov.begin() + static_cast<long>(gi));
        }
    }

    // final canonical order
    std::vector<size_t> perm(gens.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(),
              [&](size_t a, size_t b) { return complexity_less(gens[a], gens[b]); });
    for (size_t i : perm) {
        field.gens.push_back(gens[i]);
        field.provenance.push_back(prov[i]);
    }
    return field;
}

ClassifyResult classify(const RatFun &f, const IdentifiableField &field) {
    FieldTower tower(field.reg, field.gens, field.param_vars);
    auto c = tower.classify(f);
    ClassifyResult r;
    switch (c.kind) {
    case FieldTower::Classification::Kind::Global:
        r.kind = IdentClass::Global;
        r.degree = 1;
        r.witness = c.witness;
        break;
    case FieldTower::Classification::Kind::Local:
        r.kind = IdentClass::Local;
        r.degree = c.degree;
        break;
    case FieldTower::Classification::Kind::Transcendental:
        r.kind = IdentClass::Nonidentifiable;
        break;
    }
    return r;
}

std::shared_ptr<FieldTower> make_tower(const IdentifiableField &field,
                                       const std::vector<int> &extra_base_vars) {
    std::vector<int> base = field.param_vars;
    for (int v : extra_base_vars) base.push_back(v);
    // known inputs are adjoined to the field as themselves
    return std::make_shared<FieldTower>(field.reg, field.gens, base, std::vector<std::string>{},
                                        extra_base_vars);
}

} // namespace iorep
