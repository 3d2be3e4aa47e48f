#include "iorep/ansatz.hpp"

#include <algorithm>
#include <sstream>

namespace iorep {

namespace {

std::string fresh_name(const RegistryPtr &taken, const std::string &base) {
    std::string nm = base;
    while (taken->has(nm)) nm += "_";
    return nm;
}

} // namespace

Ansatz build_ansatz(const IoSystem &sys) {
    const LieTable &t = sys.lie;
    const RegistryPtr &lreg = t.reg;
    Ansatz a;

    // discover the slots in the lie registry first; monomials with the same
    // non-constant parameter coefficient share one slot (the substitution is
    // per parameter monomial)
    struct RawSlot {
        int s, i;
        bool in_den;
        Poly shape; // over lreg, rational coefficients in (x~, u)
        Mono lead;  // slot-order maximal monomial
        Poly coeff; // primitive parameter coefficient over lreg
    };
    std::vector<RawSlot> raw;
    int dimV = t.profile.dimV;
    std::vector<std::vector<bool>> rational(t.h.size());

    auto slot_mono_less = [&](const Mono &x, const Mono &y) {
        uint64_t dx = total_degree(x), dy = total_degree(y);
        if (dx != dy) return dx < dy;
        for (int v : t.u_vars_by_order) {
            uint32_t ex = x[static_cast<size_t>(v)], ey = y[static_cast<size_t>(v)];
            if (ex != ey) return ex < ey;
        }
        for (int v : t.profile.xtilde) {
            uint32_t ex = x[static_cast<size_t>(v)], ey = y[static_cast<size_t>(v)];
            if (ex != ey) return ex < ey;
        }
        return false;
    };

    for (size_t s = 0; s < t.h.size(); ++s) {
        rational[s].resize(t.h[s].size(), false);
        for (size_t i = 0; i < t.h[s].size(); ++i) {
            SupportDecomposition dec = support_decomposition(t.h[s][i]);
            bool den_trivial = dec.den.size() == 1 && mono_is_one(dec.den[0].second);
            rational[s][i] = !den_trivial;

            auto add_side = [&](const std::vector<std::pair<Poly, Mono>> &side, bool in_den) {
                // group by the primitive coefficient (non-constant ones only)
                struct Group {
                    Poly key;
                    Poly shape;
                    Mono lead;
                };
                std::vector<Group> groups;
                for (const auto &[coeff, mono] : side) {
                    Poly key = coeff.primitive();
                    BigRational scale = coeff.content();
                    Poly member = Poly::from_terms(lreg, {{mono, scale}});
                    bool merged = false;
                    if (!key.is_constant()) {
                        for (auto &g : groups) {
                            if (g.key == key) {
                                g.shape += member;
                                if (slot_mono_less(g.lead, mono)) g.lead = mono;
                                merged = true;
                                break;
                            }
                        }
                    }
                    if (!merged) {
                        Group g;
                        g.key = key.is_constant() ? Poly::one(lreg) : key;
                        g.shape = member;
                        g.lead = mono;
                        groups.push_back(std::move(g));
                    }
                }
                // normalize each shape so its leading member has coefficient 1
                for (auto &g : groups) {
                    BigRational lead_c(0);
                    for (const auto &tm : g.shape.terms())
                        if (canonical_mono_cmp(tm.m, g.lead) == 0) lead_c = tm.c;
                    Poly key_scaled = g.key.scaled(lead_c);
                    g.shape = g.shape.scaled(lead_c.inverse());
                    g.key = key_scaled;
                }
                std::sort(groups.begin(), groups.end(),
                          [&](const Group &x, const Group &y) { return slot_mono_less(y.lead, x.lead); });
                for (auto &g : groups)
                    raw.push_back({static_cast<int>(s), static_cast<int>(i), in_den, g.shape, g.lead,
                                   g.key});
            };
            add_side(dec.num, false);
            if (!den_trivial) add_side(dec.den, true);
        }
    }

    // ansatz registry: params, inputs, w, z, one reserved tag
    std::vector<VarInfo> vi;
    for (int v = 0; v < lreg->size(); ++v)
        if (lreg->block(v) == VarBlock::Param) vi.push_back(lreg->info(v));
    for (int v : t.u_vars_by_order) vi.push_back(lreg->info(v));
    RegistryPtr partial = VarRegistry::create(vi);
    std::vector<std::string> wnames, znames;
    for (int l = 0; l < dimV; ++l) {
        std::string nm = fresh_name(partial, "w" + std::to_string(l + 1));
        wnames.push_back(nm);
        vi.push_back({nm, VarBlock::NewState, 0});
        partial = VarRegistry::create(vi);
    }
    for (size_t k = 0; k < raw.size(); ++k) {
        std::string nm = fresh_name(partial, "z" + std::to_string(k + 1));
        znames.push_back(nm);
        vi.push_back({nm, VarBlock::AnsatzZ, 0});
        partial = VarRegistry::create(vi);
    }
    vi.push_back({fresh_name(partial, "@zt"), VarBlock::Tag, 0});
    a.zreg = VarRegistry::create(vi);
    a.tag_var = a.zreg->size() - 1;
    for (const auto &nm : wnames) a.wvars.push_back(a.zreg->require(nm));
    for (const auto &nm : znames) a.zvars.push_back(a.zreg->require(nm));
    for (int v = 0; v < a.zreg->size(); ++v)
        if (a.zreg->block(v) == VarBlock::Param) a.param_vars.push_back(v);
    for (int v : t.u_vars_by_order) a.u_vars.push_back(a.zreg->require(lreg->name(v)));

    // translate (x~, u) monomials into (w, u) monomials of the ansatz registry
    auto translate_mono = [&](const Mono &lm) {
        Mono m(static_cast<size_t>(a.zreg->size()), 0);
        for (size_t v = 0; v < lm.size(); ++v) {
            if (!lm[v]) continue;
            int lv = static_cast<int>(v);
            auto xt = std::find(t.profile.xtilde.begin(), t.profile.xtilde.end(), lv);
            if (xt != t.profile.xtilde.end())
                m[static_cast<size_t>(a.wvars[static_cast<size_t>(xt - t.profile.xtilde.begin())])] = lm[v];
            else
                m[static_cast<size_t>(a.zreg->require(lreg->name(lv)))] = lm[v];
        }
        return m;
    };
    auto translate_shape = [&](const Poly &p) {
        std::vector<Term> terms;
        for (const auto &tm : p.terms()) terms.push_back({translate_mono(tm.m), tm.c});
        return Poly::from_terms(a.zreg, std::move(terms));
    };

    a.rational = rational;
    a.Hnum.resize(t.h.size());
    a.Hden.resize(t.h.size());
    for (size_t s = 0; s < t.h.size(); ++s) {
        a.Hnum[s].assign(t.h[s].size(), Poly::zero(a.zreg));
        a.Hden[s].assign(t.h[s].size(), Poly::zero(a.zreg));
    }
    for (size_t k = 0; k < raw.size(); ++k) {
        const RawSlot &r = raw[k];
        AnsatzSlot slot;
        slot.output = r.s;
        slot.order = r.i;
        slot.in_denominator = r.in_den;
        slot.shape = translate_shape(r.shape);
        slot.lead = translate_mono(r.lead);
        slot.zvar = a.zvars[k];
        SupportDecomposition dec =
            support_decomposition(t.h[static_cast<size_t>(r.s)][static_cast<size_t>(r.i)]);
        bool den_trivial = dec.den.size() == 1 && mono_is_one(dec.den[0].second);
        RatFun taut_value = RatFun(r.coeff.lifted(a.zreg));
        if (den_trivial && !r.in_den) taut_value = taut_value / RatFun(dec.den[0].first.lifted(a.zreg));
        slot.taut = taut_value;
        Poly term = Poly::variable(a.zreg, slot.zvar) * slot.shape;
        if (r.in_den)
            a.Hden[static_cast<size_t>(r.s)][static_cast<size_t>(r.i)] += term;
        else
            a.Hnum[static_cast<size_t>(r.s)][static_cast<size_t>(r.i)] += term;
        a.slots.push_back(std::move(slot));
    }
    for (size_t s = 0; s < t.h.size(); ++s)
        for (size_t i = 0; i < t.h[s].size(); ++i)
            if (!rational[s][i]) a.Hden[s][i] = Poly::one(a.zreg);

    // nondegeneracy constraints
    for (size_t s = 0; s < t.h.size(); ++s) {
        for (auto &slot : a.slots) {
            if (slot.output == static_cast<int>(s) && slot.order == 0 && !slot.in_denominator) {
                slot.nonzero = true;
                slot.constraint = "leading slot of H[" + t.output_names[s] + ",0]";
                break;
            }
        }
    }
    for (auto &slot : a.slots) {
        bool has_w = false, has_u = false;
        for (const auto &tm : slot.shape.terms()) {
            for (int v : a.wvars) has_w |= tm.m[static_cast<size_t>(v)] > 0;
            for (int v : a.u_vars) has_u |= tm.m[static_cast<size_t>(v)] > 0;
        }
        if (has_u && !has_w && !slot.in_denominator) {
            slot.nonzero = true;
            slot.constraint = "input slot";
        }
    }
    return a;
}

std::string Ansatz::H_str(int s, int i) const {
    auto shape_str = [&](const Poly &shape) {
        // print the shape without a leading coefficient marker, e.g. w2^2 + w2
        return shape.str();
    };
    auto side_str = [&](bool den) {
        std::ostringstream os;
        bool first = true;
        for (const auto &slot : slots) {
            if (slot.output != s || slot.order != i || slot.in_denominator != den) continue;
            if (!first) os << " + ";
            first = false;
            os << zreg->name(slot.zvar);
            if (slot.shape.term_count() == 1 && slot.shape.terms()[0].c.is_one()) {
                const Mono &m = slot.shape.terms()[0].m;
                if (!mono_is_one(m)) {
                    for (int v = 0; v < zreg->size(); ++v) {
                        uint32_t e = m[static_cast<size_t>(v)];
                        if (!e) continue;
                        os << "*" << zreg->name(v);
                        if (e > 1) os << "^" << e;
                    }
                }
            } else {
                os << "*(" << shape_str(slot.shape) << ")";
            }
        }
        if (first) os << "1";
        return os.str();
    };
    if (!rational[static_cast<size_t>(s)][static_cast<size_t>(i)]) return side_str(false);
    return "(" + side_str(false) + ")/(" + side_str(true) + ")";
}

RatFun Ansatz::H_at(int s, int i, const std::vector<RatFun> &z) const {
    std::map<int, RatFun> sub;
    for (size_t k = 0; k < slots.size(); ++k) sub[slots[k].zvar] = z[k];
    RatFun num = poly_substitute_ratfun(Hnum[static_cast<size_t>(s)][static_cast<size_t>(i)], sub);
    if (!rational[static_cast<size_t>(s)][static_cast<size_t>(i)]) return num;
    RatFun den = poly_substitute_ratfun(Hden[static_cast<size_t>(s)][static_cast<size_t>(i)], sub);
    return num / den;
}

ZSystem assemble_z_system(const IoSystem &sys, const Ansatz &a) {
    ZSystem out;
    out.zctx = FPoly::make_context(a.zreg, a.zvars);

    std::vector<Poly> substituted;
    for (const auto &eq : sys.eqs) {
        std::map<std::pair<int, int>, uint32_t> maxdeg;
        for (size_t s = 0; s < sys.y_var.size(); ++s)
            for (size_t i = 0; i < sys.y_var[s].size(); ++i)
                maxdeg[{static_cast<int>(s), static_cast<int>(i)}] =
                    eq.primitive.degree(sys.y_var[s][i]);
        Poly acc = Poly::zero(a.zreg);
        std::vector<int> main;
        for (size_t s = 0; s < sys.y_var.size(); ++s)
            for (int v : sys.y_var[s]) main.push_back(v);
        for (int v : sys.u_vars) main.push_back(v);
        for (const auto &[mono, coeff] : eq.primitive.group_by(main)) {
            Poly term = coeff.lifted(a.zreg);
            for (size_t ui = 0; ui < sys.u_vars.size(); ++ui) {
                uint32_t e = mono[static_cast<size_t>(sys.u_vars[ui])];
                if (e) term *= Poly::pow(Poly::variable(a.zreg, a.u_vars[ui]), e);
            }
            for (size_t s = 0; s < sys.y_var.size(); ++s) {
                for (size_t i = 0; i < sys.y_var[s].size(); ++i) {
                    uint32_t e = mono[static_cast<size_t>(sys.y_var[s][i])];
                    uint32_t cap = maxdeg[{static_cast<int>(s), static_cast<int>(i)}];
                    if (e) term *= Poly::pow(a.Hnum[s][i], e);
                    if (cap > e && a.rational[s][i]) term *= Poly::pow(a.Hden[s][i], cap - e);
                }
            }
            acc += term;
        }
        substituted.push_back(acc);
    }

    for (const auto &p : substituted) {
        for (const auto &[wmono, coeff] : p.group_by(a.wvars)) {
            if (coeff.is_zero()) continue;
            FPoly f = FPoly::from_poly(out.zctx, coeff);
            out.eqs.push_back(f.monic());
            out.report_forms.push_back(coeff.primitive());
            out.wmonos.push_back(wmono);
        }
    }
    std::vector<size_t> perm(out.eqs.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(), [&](size_t x, size_t y) {
        for (int v : a.wvars) {
            uint32_t ex = out.wmonos[x][static_cast<size_t>(v)], ey = out.wmonos[y][static_cast<size_t>(v)];
            if (ex != ey) return ex > ey;
        }
        return x < y;
    });
    ZSystem sorted;
    sorted.zctx = out.zctx;
    for (size_t i : perm) {
        sorted.eqs.push_back(out.eqs[i]);
        sorted.report_forms.push_back(out.report_forms[i]);
        sorted.wmonos.push_back(out.wmonos[i]);
    }
    for (size_t i = 0; i < sorted.eqs.size(); ++i) {
        for (size_t j = sorted.eqs.size(); j-- > i + 1;) {
            if (sorted.eqs[i] == sorted.eqs[j]) {
                sorted.eqs.erase(sorted.eqs.begin() + static_cast<long>(j));
                sorted.report_forms.erase(sorted.report_forms.begin() + static_cast<long>(j));
                sorted.wmonos.erase(sorted.wmonos.begin() + static_cast<long>(j));
            }
        }
    }
    return sorted;
}

} // namespace iorep
