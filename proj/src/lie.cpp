#include "iorep/lie.hpp"

#include <algorithm>

namespace iorep {

namespace {

uint64_t lcg(uint64_t &s) {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return s >> 16u;
}

} // namespace

LieContext::LieContext(const OdeModel &m) {
    // bound on input-derivative orders reachable by differentiation: each Lie
    // step raises the order by at most one, and at most |x| + 1 steps are taken
    int steps = static_cast<int>(m.state_names.size()) + 2;
    int existing_max = 0;
    for (int i = 0; i < m.reg->size(); ++i)
        if (m.reg->block(i) == VarBlock::InputDeriv)
            existing_max = std::max(existing_max, m.reg->info(i).deriv_order);
    std::vector<VarInfo> extra;
    for (const auto &u : m.input_names) {
        std::string nm = u;
        for (int k = 1; k <= existing_max + steps; ++k) {
            nm += "'";
            if (!m.reg->has(nm)) extra.push_back({nm, VarBlock::InputDeriv, k});
        }
    }
    reg_ = extra.empty() ? m.reg : m.reg->extended(extra);
    model_ = m;
    model_.reg = reg_;
    for (auto &f : model_.rhs) f = f.lifted(reg_);
    for (auto &g : model_.outmap) g = g.lifted(reg_);
    for (const auto &n : m.state_names) state_vars_.push_back(reg_->require(n));
    for (const auto &u : m.input_names) {
        std::string nm = u;
        for (int k = 0; k < existing_max + steps; ++k) {
            std::string next = nm + "'";
            u_chain_.push_back({reg_->require(nm), reg_->require(next)});
            nm = next;
        }
    }
    cache_.resize(m.output_names.size());
}

RatFun LieContext::total_derivative(const RatFun &f) const {
    RatFun acc = RatFun::zero(reg_);
    for (size_t j = 0; j < state_vars_.size(); ++j) {
        if (!f.depends_on(state_vars_[j])) continue;
        acc += f.derivative(state_vars_[j]) * model_.rhs[j];
    }
    for (const auto &[uk, uk1] : u_chain_) {
        if (!f.depends_on(uk)) continue;
        acc += f.derivative(uk) * RatFun::variable(reg_, uk1);
    }
    return acc;
}

const RatFun &LieContext::h(int s, int i) {
    auto &col = cache_.at(static_cast<size_t>(s));
    while (static_cast<int>(col.size()) <= i) {
        if (col.empty())
            col.push_back(model_.outmap.at(static_cast<size_t>(s)));
        else
            col.push_back(total_derivative(col.back()));
    }
    return col[static_cast<size_t>(i)];
}

LieTable build_lie_table(const OdeModel &m, const JacobianOptions &jopt) {
    LieContext ctx(m);
    int S = static_cast<int>(m.output_names.size());
    std::vector<int> n(S, -1);
    std::vector<RatFun> rows;
    int rank = 0;

    // orderly, round-robin: raise the derivative order of every still-active
    // output; n_s is the first order whose Lie derivative adds no rank
    for (int order = 0;; ++order) {
        bool any_active = false;
        for (int s = 0; s < S; ++s) {
            if (n[s] >= 0) continue;
            any_active = true;
            std::vector<RatFun> cand = rows;
            cand.push_back(ctx.h(s, order));
            int r = jacobian_rank(cand, ctx.model().state_vars(), jopt);
            if (r > rank) {
                rank = r;
                rows = std::move(cand);
            } else {
                n[s] = order;
            }
        }
        if (!any_active) break;
        if (order > static_cast<int>(m.state_names.size()) + 1)
            throw RegimeError("order determination exceeded the state count");
    }

    OrderProfile profile;
    profile.n = n;
    profile.dimV = rank;
    if (rank == 0) throw RegimeError("all outputs are constant along the dynamics; no IO-equation exists");

    LieTable table;
    table.reg = ctx.reg();
    table.output_names = m.output_names;
    table.h_raw.resize(static_cast<size_t>(S));
    for (int s = 0; s < S; ++s)
        for (int i = 0; i <= n[s]; ++i) table.h_raw[static_cast<size_t>(s)].push_back(ctx.h(s, i));

    // states actually occurring
    std::vector<char> seen(static_cast<size_t>(ctx.reg()->size()), 0);
    for (const auto &col : table.h_raw)
        for (const auto &f : col) {
            for (int v : f.num().vars_present()) seen[static_cast<size_t>(v)] = 1;
            for (int v : f.den().vars_present()) seen[static_cast<size_t>(v)] = 1;
        }
    for (int v : ctx.model().state_vars())
        if (seen[static_cast<size_t>(v)]) profile.xhat.push_back(v);

    for (int i = 0; i < ctx.reg()->size(); ++i)
        if (ctx.reg()->block(i) == VarBlock::InputDeriv && seen[static_cast<size_t>(i)])
            table.u_vars_by_order.push_back(i);

    if (static_cast<int>(profile.xhat.size()) < rank)
        throw RegimeError("rank exceeds the number of occurring states");

    if (static_cast<int>(profile.xhat.size()) == rank) {
        profile.embedded = false;
        profile.xtilde = profile.xhat;
        table.h = table.h_raw;
    } else {
        // linear change x-hat = A x-tilde with rank(d(h o L)) = dim V
        profile.embedded = true;
        std::vector<VarInfo> extra;
        for (int l = 0; l < rank; ++l) {
            std::string nm = "xt" + std::to_string(l + 1);
            while (ctx.reg()->has(nm)) nm += "_";
            extra.push_back({nm, VarBlock::State, 0});
        }
        RegistryPtr ext = ctx.reg()->extended(extra);
        table.reg = ext;
        for (int l = 0; l < rank; ++l) profile.xtilde.push_back(ext->require(extra[static_cast<size_t>(l)].name));

        uint64_t seed = jopt.seed * 7919 + 17;
        bool ok = false;
        for (int attempt = 0; attempt < 20 && !ok; ++attempt) {
            profile.embedding.assign(profile.xhat.size(), std::vector<BigRational>(static_cast<size_t>(rank)));
            std::map<int, RatFun> sub;
            for (size_t k = 0; k < profile.xhat.size(); ++k) {
                Poly comb = Poly::zero(ext);
                for (int l = 0; l < rank; ++l) {
                    long e = static_cast<long>(lcg(seed) % 7) - 3;
                    profile.embedding[k][static_cast<size_t>(l)] = BigRational(e);
                    comb += Poly::variable(ext, profile.xtilde[static_cast<size_t>(l)]).scaled(BigRational(e));
                }
                sub[ext->require(ctx.reg()->name(profile.xhat[k]))] = RatFun(comb);
            }
            table.h.assign(static_cast<size_t>(S), {});
            std::vector<RatFun> embedded_rows;
            bool domain_ok = true;
            try {
                for (int s = 0; s < S && domain_ok; ++s) {
                    for (int i = 0; i <= n[s]; ++i) {
                        RatFun hi = table.h_raw[static_cast<size_t>(s)][static_cast<size_t>(i)].lifted(ext);
                        RatFun sub_hi = hi.substitute(sub);
                        table.h[static_cast<size_t>(s)].push_back(sub_hi);
                        if (i < n[s]) embedded_rows.push_back(sub_hi);
                    }
                }
            } catch (const std::domain_error &) {
                domain_ok = false; // a denominator collapsed to zero, retry
            }
            if (domain_ok && jacobian_rank(embedded_rows, profile.xtilde, jopt) == rank) ok = true;
        }
        if (!ok) throw RegimeError("no embedding matrix of rank dim V found in 20 attempts");
        for (auto &col : table.h_raw)
            for (auto &f : col) f = f.lifted(ext);
    }
    table.profile = profile;
    return table;
}

SupportDecomposition support_decomposition(const RatFun &h) {
    const RegistryPtr &reg = h.reg();
    std::vector<int> main_vars;
    for (int v = 0; v < reg->size(); ++v) {
        VarBlock b = reg->block(v);
        if (b == VarBlock::State || b == VarBlock::InputDeriv || b == VarBlock::NewState)
            main_vars.push_back(v);
    }
    SupportDecomposition out;
    for (auto &kv : h.num().group_by(main_vars)) out.num.push_back({kv.second, kv.first});
    for (auto &kv : h.den().group_by(main_vars)) out.den.push_back({kv.second, kv.first});
    return out;
}

} // namespace iorep
