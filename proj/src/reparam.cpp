#include "iorep/reparam.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace iorep {

namespace {

// exact linear solve A x = b over the rational function field
std::vector<RatFun> linear_solve(std::vector<std::vector<RatFun>> A, std::vector<RatFun> b) {
    size_t n = A.size();
    std::vector<int> perm(n);
    for (size_t i = 0; i < n; ++i) perm[i] = static_cast<int>(i);
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && A[piv][col].is_zero()) ++piv;
        if (piv == n) throw std::runtime_error("linear_solve: singular matrix");
        std::swap(A[piv], A[col]);
        std::swap(b[piv], b[col]);
        RatFun inv = A[col][col].inverse();
        for (size_t c = col; c < n; ++c) A[col][c] *= inv;
        b[col] *= inv;
        for (size_t r = 0; r < n; ++r) {
            if (r == col || A[r][col].is_zero()) continue;
            RatFun f = A[r][col];
            for (size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
            b[r] -= f * b[col];
        }
    }
    return b;
}

} // namespace

OdeModel ReparamModel::as_model(const OdeModel &source) const {
    std::ostringstream os;
    os << "states: ";
    for (size_t i = 0; i < w_names.size(); ++i) os << (i ? ", " : "") << w_names[i];
    os << "\n";
    if (!source.param_names.empty()) {
        os << "params: ";
        for (size_t i = 0; i < source.param_names.size(); ++i)
            os << (i ? ", " : "") << source.param_names[i];
        os << "\n";
    }
    if (!source.input_names.empty()) {
        os << "inputs: ";
        for (size_t i = 0; i < source.input_names.size(); ++i)
            os << (i ? ", " : "") << source.input_names[i];
        os << "\n";
    }
    os << "outputs: ";
    for (size_t i = 0; i < output_names.size(); ++i) os << (i ? ", " : "") << output_names[i];
    os << "\n";
    for (size_t i = 0; i < w_names.size(); ++i) os << w_names[i] << "' = " << F[i].str() << "\n";
    for (size_t i = 0; i < output_names.size(); ++i) os << output_names[i] << " = " << G[i].str() << "\n";
    return parse_model(os.str(), true);
}

ReparamModel reconstruct_ode(const IoSystem &sys, const Ansatz &a, const ZSolution &gamma,
                             const IdentifiableField &field) {
    if (!gamma.found) throw std::logic_error("reconstruct_ode: no accepted gamma");
    const LieTable &t = sys.lie;
    int n = static_cast<int>(a.wvars.size());

    // H values at gamma
    std::vector<std::vector<RatFun>> H(t.h.size());
    for (size_t s = 0; s < t.h.size(); ++s)
        for (size_t i = 0; i < t.h[s].size(); ++i)
            H[s].push_back(a.H_at(static_cast<int>(s), static_cast<int>(i), gamma.z));

    // u-derivative chain in the ansatz registry
    std::vector<std::pair<int, int>> u_chain;
    for (int v : a.u_vars) {
        std::string next = a.zreg->name(v) + "'";
        if (a.zreg->has(next)) u_chain.push_back({v, a.zreg->require(next)});
    }

    // rows: s-major, i-minor over i = 1..n_s
    std::vector<std::vector<RatFun>> dH;
    std::vector<RatFun> rhs;
    for (size_t s = 0; s < H.size(); ++s) {
        for (size_t i = 0; i + 1 < H[s].size(); ++i) {
            std::vector<RatFun> row;
            for (int l = 0; l < n; ++l) row.push_back(H[s][i].derivative(a.wvars[static_cast<size_t>(l)]));
            dH.push_back(std::move(row));
            RatFun b = H[s][i + 1];
            for (const auto &[uk, uk1] : u_chain)
                if (H[s][i].depends_on(uk))
                    b -= H[s][i].derivative(uk) * RatFun::variable(a.zreg, uk1);
            rhs.push_back(b);
        }
    }
    std::vector<RatFun> F = linear_solve(dH, rhs);

    // certificate: dH*F - H must vanish identically
    for (size_t r = 0; r < dH.size(); ++r) {
        RatFun acc = RatFun::zero(a.zreg);
        for (int l = 0; l < n; ++l) acc += dH[r][static_cast<size_t>(l)] * F[static_cast<size_t>(l)];
        if (acc != rhs[r]) throw std::logic_error("reconstruct_ode: residual dH*F - H is nonzero");
    }

    ReparamModel rm;
    rm.reg = a.zreg;
    for (int v : a.wvars) rm.w_names.push_back(a.zreg->name(v));
    rm.output_names = t.output_names;
    rm.F = std::move(F);
    for (size_t s = 0; s < H.size(); ++s) rm.G.push_back(H[s][0]);

    // identifiability classification of every coefficient (denominator-
    // normalized ratios, inputs adjoined to the field)
    std::vector<RatFun> gens;
    std::vector<std::string> names;
    for (size_t i = 0; i < field.gens.size(); ++i) {
        gens.push_back(field.gens[i].lifted(a.zreg));
        names.push_back("b" + std::to_string(i + 1));
        rm.beta.push_back(gens.back());
        rm.beta_names.push_back(names.back());
    }
    std::vector<int> base = a.param_vars;
    for (int v : a.u_vars) base.push_back(v);
    FieldTower tower(a.zreg, gens, base, names, a.u_vars);

    rm.all_global = true;
    auto classify_into = [&](const RatFun &f, const std::string &where) {
        SupportDecomposition dec = support_decomposition(f);
        RatFun pivot = RatFun(dec.den.front().first.lifted(a.zreg));
        auto handle = [&](const std::vector<std::pair<Poly, Mono>> &side) {
            for (const auto &[coeff, mono] : side) {
                (void)mono;
                RatFun ratio = RatFun(coeff.lifted(a.zreg)) / pivot;
                if (ratio.is_constant()) continue;
                CoeffReport cr;
                cr.where = where;
                cr.value = ratio;
                auto c = tower.classify(ratio);
                if (c.kind == FieldTower::Classification::Kind::Global) {
                    cr.kind = IdentClass::Global;
                    cr.degree = 1;
                    if (c.witness) cr.beta_expr = c.witness->str();
                } else if (c.kind == FieldTower::Classification::Kind::Local) {
                    cr.kind = IdentClass::Local;
                    cr.degree = c.degree;
                    rm.all_global = false;
                } else {
                    cr.kind = IdentClass::Nonidentifiable;
                    cr.degree = 0;
                    rm.all_global = false;
                }
                bool dup = false;
                for (const auto &old : rm.coefficients)
                    if (old.value == cr.value && old.where == cr.where) dup = true;
                if (!dup) rm.coefficients.push_back(std::move(cr));
            }
        };
        handle(dec.num);
        handle(dec.den);
    };
    for (size_t i = 0; i < rm.F.size(); ++i) classify_into(rm.F[i], rm.w_names[i] + "'");
    for (size_t s = 0; s < rm.G.size(); ++s) classify_into(rm.G[s], rm.output_names[s]);
    return rm;
}

ChangeOfVariables recover_change_of_variables(const IoSystem &sys, const Ansatz &a,
                                              const ZSolution &gamma) {
    const LieTable &t = sys.lie;
    int n = static_cast<int>(a.wvars.size());

    // registry: params + inputs + x~ + w (+ tag)
    std::vector<VarInfo> vi;
    for (int v : a.param_vars) vi.push_back(a.zreg->info(v));
    for (int v : a.u_vars) vi.push_back(a.zreg->info(v));
    for (int v : t.profile.xtilde) vi.push_back(t.reg->info(v));
    for (int v : a.wvars) vi.push_back(a.zreg->info(v));
    vi.push_back({"@ct", VarBlock::Tag, 0});
    RegistryPtr reg = VarRegistry::create(vi);
    int tag = reg->require("@ct");

    ChangeOfVariables cov;
    cov.reg = reg;
    cov.embedded = t.profile.embedded;
    if (cov.embedded) cov.notes.push_back("expressed in the embedded coordinates");

    std::vector<int> wv;
    for (int v : a.wvars) wv.push_back(reg->require(a.zreg->name(v)));

    // equations H_{s,i}(gamma, w) = h_{s,i}(x~): cleared numerators
    std::vector<Poly> eqs;
    for (size_t s = 0; s < t.h.size(); ++s) {
        for (size_t i = 0; i < t.h[s].size(); ++i) {
            RatFun Hv = a.H_at(static_cast<int>(s), static_cast<int>(i), gamma.z).lifted(reg);
            RatFun hv = t.h[s][i].lifted(reg);
            Poly cleared = Hv.num() * hv.den() - hv.num() * Hv.den();
            if (!cleared.is_zero()) eqs.push_back(cleared.primitive());
        }
    }

    // solve for each w_l by eliminating the other w's over Q(params, u, x~)
    for (int l = 0; l < n; ++l) {
        std::vector<int> main{wv[static_cast<size_t>(l)]};
        std::vector<int> front;
        for (int k = 0; k < n; ++k)
            if (k != l) {
                main.push_back(wv[static_cast<size_t>(k)]);
                front.push_back(wv[static_cast<size_t>(k)]);
            }
        auto ctx = FPoly::make_context(reg, main, front);
        std::vector<FPoly> feqs;
        for (const auto &e : eqs) feqs.push_back(FPoly::from_poly(ctx, e));
        std::vector<FPoly> gb = fgroebner(feqs);
        const FPoly *best = nullptr;
        uint32_t best_deg = 0;
        for (const auto &g : gb) {
            bool clean = true;
            for (int fv : front)
                if (g.depends_on(fv)) {
                    clean = false;
                    break;
                }
            if (!clean) continue;
            uint32_t d = g.degree(wv[static_cast<size_t>(l)]);
            if (d == 0) continue;
            if (!best || d < best_deg) {
                best = &g;
                best_deg = d;
            }
        }
        if (!best)
            throw std::logic_error("recover_change_of_variables: no relation for " +
                                   a.zreg->name(a.wvars[static_cast<size_t>(l)]));
        ChangeOfVariables::Entry entry;
        entry.w_name = a.zreg->name(a.wvars[static_cast<size_t>(l)]);
        entry.degree = static_cast<int>(best_deg);
        if (best_deg == 1) {
            RatFun c1 = best->coefficient_of(wv[static_cast<size_t>(l)], 1).constant_value();
            RatFun c0 = best->coefficient_of(wv[static_cast<size_t>(l)], 0).constant_value();
            entry.rational = true;
            entry.expr = -c0 / c1;
        } else {
            entry.rational = false;
            // integer-primitive polynomial in (w_l; x~, params)
            Poly den_lcm = Poly::one(reg);
            for (const auto &[mono, coeff] : best->terms()) {
                (void)mono;
                Poly g = poly_gcd(den_lcm, coeff.den());
                den_lcm = den_lcm * (*poly_divexact(coeff.den(), g));
            }
            Poly cleared = Poly::zero(reg);
            for (const auto &[mono, coeff] : best->terms()) {
                RatFun scaled = coeff * RatFun(den_lcm);
                cleared += scaled.num().scaled(scaled.den().constant_value().inverse()) *
                           Poly::from_terms(reg, {{mono, BigRational(1)}});
            }
            entry.minpoly = cleared.primitive();
        }
        cov.entries.push_back(std::move(entry));
    }

    // verification: substitute the rational entries, reduce by the minimal
    // polynomials of the algebraic ones
    std::vector<Poly> reducers;
    std::map<int, RatFun> rational_sub;
    for (int l = 0; l < n; ++l) {
        if (cov.entries[static_cast<size_t>(l)].rational)
            rational_sub[wv[static_cast<size_t>(l)]] = cov.entries[static_cast<size_t>(l)].expr;
        else
            reducers.push_back(cov.entries[static_cast<size_t>(l)].minpoly);
    }
    cov.verified = true;
    for (const auto &e : eqs) {
        RatFun r = poly_substitute_ratfun(e, rational_sub);
        Poly num = r.num();
        for (size_t k = 0; k < reducers.size() && !num.is_zero(); ++k) {
            int wvar = -1;
            for (int l = 0; l < n; ++l)
                if (!cov.entries[static_cast<size_t>(l)].rational &&
                    reducers[k].depends_on(wv[static_cast<size_t>(l)]))
                    wvar = wv[static_cast<size_t>(l)];
            if (wvar >= 0) num = poly_prem(num, reducers[k], wvar);
        }
        if (!num.is_zero()) {
            cov.verified = false;
            cov.notes.push_back("roundtrip residue for one equation");
            break;
        }
    }
    (void)tag;
    return cov;
}

VerifyReport verify_reparametrization(const OdeModel &original, const OdeModel &reparametrized,
                                      std::ostream *progress) {
    VerifyReport rep;
    rep.ran = true;
    IoSystem a = implicitize(build_lie_table(original), progress);
    IoSystem b = implicitize(build_lie_table(reparametrized), progress);
    if (a.eqs.size() != b.eqs.size()) {
        rep.equal = false;
        rep.diffs.push_back("different numbers of io-equations");
        return rep;
    }
    rep.equal = true;
    for (size_t s = 0; s < a.eqs.size(); ++s) {
        std::string ea = a.equation_str(static_cast<int>(s));
        std::string eb = b.equation_str(static_cast<int>(s));
        if (ea != eb) {
            rep.equal = false;
            rep.diffs.push_back("output " + a.lie.output_names[s] + ": " + ea + "  !=  " + eb);
        }
    }
    return rep;
}

PipelineResult run_pipeline(const OdeModel &m, const PipelineOptions &opt) {
    PipelineResult r;
    r.model = m;
    if (opt.progress) *opt.progress << "building lie table\n";
    LieTable lt = build_lie_table(m, opt.jacobian);
    if (opt.progress) *opt.progress << "computing io-equations\n";
    r.io = implicitize(lt, opt.progress);
    if (opt.progress) *opt.progress << "extracting identifiable functions\n";
    r.field = extract_generators(r.io);
    r.ansatz = build_ansatz(r.io);
    if (opt.progress) *opt.progress << "assembling the z-system\n";
    r.zsystem = assemble_z_system(r.io, r.ansatz);
    if (opt.progress) *opt.progress << "searching for an identifiable solution\n";
    r.gamma = solve_z(r.io, r.ansatz, r.zsystem, r.field, opt.zsolve);
    if (!r.gamma.found) {
        std::string msg = "no acceptable reparametrization found";
        if (r.gamma.budget_exhausted) msg += " within the attempt budget";
        throw BudgetError(msg);
    }
    if (opt.progress) *opt.progress << "reconstructing the ode system\n";
    r.reparam = reconstruct_ode(r.io, r.ansatz, r.gamma, r.field);
    r.reconstruction_certified = true; // reconstruct_ode throws otherwise
    r.change = recover_change_of_variables(r.io, r.ansatz, r.gamma);
    if (opt.verify) {
        if (opt.progress) *opt.progress << "verifying the io-equations of the new system\n";
        OdeModel rm = r.reparam.as_model(m);
        r.verify = verify_reparametrization(m, rm, opt.progress);
    }
    return r;
}

} // namespace iorep
