#include "iorep/fpoly.hpp"

#include <algorithm>
#include <list>
#include <sstream>

namespace iorep {

namespace {

// front block (degrevlex) then the remaining main variables (degrevlex)
int main_cmp(const Mono &a, const Mono &b, const FPoly::Context &ctx) {
    auto block_cmp = [&](const std::vector<int> &vars) -> int {
        uint64_t da = 0, db = 0;
        for (int v : vars) {
            da += a[static_cast<size_t>(v)];
            db += b[static_cast<size_t>(v)];
        }
        if (da != db) return da > db ? 1 : -1;
        for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
            uint32_t ea = a[static_cast<size_t>(*it)], eb = b[static_cast<size_t>(*it)];
            if (ea != eb) return ea < eb ? 1 : -1;
        }
        return 0;
    };
    if (!ctx.front.empty()) {
        int c = block_cmp(ctx.front);
        if (c != 0) return c;
        std::vector<int> rest;
        for (int v : ctx.main)
            if (std::find(ctx.front.begin(), ctx.front.end(), v) == ctx.front.end()) rest.push_back(v);
        return block_cmp(rest);
    }
    return block_cmp(ctx.main);
}

} // namespace

FPoly::CtxPtr FPoly::make_context(const RegistryPtr &reg, std::vector<int> main,
                                  std::vector<int> front) {
    auto ctx = std::make_shared<Context>();
    ctx->reg = reg;
    std::sort(main.begin(), main.end());
    main.erase(std::unique(main.begin(), main.end()), main.end());
    ctx->main = std::move(main);
    ctx->front = std::move(front);
    ctx->is_main.assign(static_cast<size_t>(reg->size()), 0);
    for (int v : ctx->main) ctx->is_main[static_cast<size_t>(v)] = 1;
    return ctx;
}

FPoly FPoly::constant(const CtxPtr &ctx, RatFun c) {
    FPoly p(ctx);
    if (!c.is_zero()) p.t_.push_back({Mono(static_cast<size_t>(ctx->reg->size()), 0), std::move(c)});
    return p;
}

FPoly FPoly::variable(const CtxPtr &ctx, int var) {
    FPoly p(ctx);
    Mono m(static_cast<size_t>(ctx->reg->size()), 0);
    m[static_cast<size_t>(var)] = 1;
    p.t_.push_back({std::move(m), RatFun::one(ctx->reg)});
    return p;
}

FPoly FPoly::from_terms(const CtxPtr &ctx, std::vector<std::pair<Mono, RatFun>> terms) {
    FPoly p(ctx);
    p.t_ = std::move(terms);
    p.normalize();
    return p;
}

FPoly FPoly::from_poly(const CtxPtr &ctx, const Poly &p) {
    FPoly out(ctx);
    auto groups = p.group_by(ctx->main);
    for (auto &kv : groups)
        if (!kv.second.is_zero()) out.t_.push_back({kv.first, RatFun(kv.second)});
    out.normalize();
    return out;
}

FPoly FPoly::with_context(const CtxPtr &ctx) const {
    FPoly out(ctx);
    out.t_ = t_;
    out.normalize();
    return out;
}

uint64_t FPoly::main_degree(const Mono &m) const {
    uint64_t d = 0;
    for (int v : ctx_->main) d += m[static_cast<size_t>(v)];
    return d;
}

RatFun FPoly::constant_value() const {
    if (t_.empty()) return RatFun::zero(ctx_->reg);
    return t_[0].second;
}

void FPoly::normalize() {
    std::sort(t_.begin(), t_.end(),
              [&](const auto &a, const auto &b) { return main_cmp(a.first, b.first, *ctx_) > 0; });
    std::vector<std::pair<Mono, RatFun>> out;
    for (auto &tm : t_) {
        // scrub non-main exponents into the coefficient? they must not occur:
        // from_poly splits them; arithmetic preserves the invariant
        if (!out.empty() && main_cmp(out.back().first, tm.first, *ctx_) == 0) {
            out.back().second += tm.second;
            if (out.back().second.is_zero()) out.pop_back();
        } else if (!tm.second.is_zero()) {
            out.push_back(std::move(tm));
        }
    }
    t_ = std::move(out);
}

FPoly operator+(const FPoly &a, const FPoly &b) {
    FPoly r(a.ctx_ ? a.ctx_ : b.ctx_);
    const auto &ctx = *r.ctx_;
    r.t_.reserve(a.t_.size() + b.t_.size());
    size_t i = 0, j = 0;
    while (i < a.t_.size() && j < b.t_.size()) {
        int c = main_cmp(a.t_[i].first, b.t_[j].first, ctx);
        if (c > 0) {
            r.t_.push_back(a.t_[i++]);
        } else if (c < 0) {
            r.t_.push_back(b.t_[j++]);
        } else {
            RatFun s = a.t_[i].second + b.t_[j].second;
            if (!s.is_zero()) r.t_.push_back({a.t_[i].first, std::move(s)});
            ++i;
            ++j;
        }
    }
    for (; i < a.t_.size(); ++i) r.t_.push_back(a.t_[i]);
    for (; j < b.t_.size(); ++j) r.t_.push_back(b.t_[j]);
    return r;
}

FPoly operator-(const FPoly &a, const FPoly &b) { return a + (-b); }

FPoly FPoly::operator-() const {
    FPoly r(ctx_);
    r.t_.reserve(t_.size());
    for (const auto &tm : t_) r.t_.push_back({tm.first, -tm.second});
    return r;
}

FPoly FPoly::scaled(const RatFun &c) const {
    if (c.is_zero()) return FPoly(ctx_);
    FPoly r(ctx_);
    r.t_.reserve(t_.size());
    for (const auto &tm : t_) r.t_.push_back({tm.first, tm.second * c});
    return r;
}

FPoly FPoly::mul_term(const Mono &m, const RatFun &c) const {
    if (c.is_zero()) return FPoly(ctx_);
    FPoly r(ctx_);
    r.t_.reserve(t_.size());
    for (const auto &tm : t_) r.t_.push_back({mono_mul(tm.first, m), tm.second * c});
    return r; // multiplying by a fixed monomial preserves the order
}

FPoly FPoly::monic() const {
    if (t_.empty()) return *this;
    return scaled(lc().inverse());
}

FPoly operator*(const FPoly &a, const FPoly &b) {
    FPoly r(a.ctx_ ? a.ctx_ : b.ctx_);
    if (a.is_zero() || b.is_zero()) return r;
    const FPoly &small = a.t_.size() <= b.t_.size() ? a : b;
    const FPoly &big = a.t_.size() <= b.t_.size() ? b : a;
    for (const auto &ts : small.t_) r = r + big.mul_term(ts.first, ts.second);
    return r;
}

bool FPoly::operator==(const FPoly &o) const {
    if (t_.size() != o.t_.size()) return false;
    for (size_t i = 0; i < t_.size(); ++i)
        if (main_cmp(t_[i].first, o.t_[i].first, *ctx_) != 0 || t_[i].second != o.t_[i].second)
            return false;
    return true;
}

int FPoly::compare(const FPoly &a, const FPoly &b) {
    size_t n = std::min(a.t_.size(), b.t_.size());
    for (size_t i = 0; i < n; ++i) {
        int c = main_cmp(a.t_[i].first, b.t_[i].first, *a.ctx_);
        if (c != 0) return c;
        int cc = RatFun::compare(a.t_[i].second, b.t_[i].second);
        if (cc != 0) return cc;
    }
    if (a.t_.size() != b.t_.size()) return a.t_.size() > b.t_.size() ? 1 : -1;
    return 0;
}

uint32_t FPoly::degree(int var) const {
    uint32_t d = 0;
    for (const auto &tm : t_) d = std::max(d, tm.first[static_cast<size_t>(var)]);
    return d;
}

uint64_t FPoly::max_total_degree() const {
    uint64_t d = 0;
    for (const auto &tm : t_) d = std::max(d, main_degree(tm.first));
    return d;
}

std::vector<int> FPoly::main_vars_present() const {
    std::vector<int> out;
    for (int v : ctx_->main)
        if (depends_on(v)) out.push_back(v);
    return out;
}

FPoly FPoly::substitute_value(int var, const RatFun &value) const {
    FPoly r(ctx_);
    for (const auto &tm : t_) {
        uint32_t e = tm.first[static_cast<size_t>(var)];
        Mono m = tm.first;
        m[static_cast<size_t>(var)] = 0;
        RatFun c = tm.second;
        if (e) c *= RatFun::pow(value, static_cast<long>(e));
        if (!c.is_zero()) r.t_.push_back({std::move(m), std::move(c)});
    }
    r.normalize();
    return r;
}

FPoly FPoly::substitute_poly(int var, const FPoly &repl) const {
    FPoly r(ctx_);
    for (const auto &tm : t_) {
        uint32_t e = tm.first[static_cast<size_t>(var)];
        Mono m = tm.first;
        m[static_cast<size_t>(var)] = 0;
        FPoly part = FPoly::from_terms(ctx_, {{std::move(m), tm.second}});
        for (uint32_t k = 0; k < e; ++k) part = part * repl;
        r = r + part;
    }
    return r;
}

std::map<uint32_t, FPoly> FPoly::collect(int var) const {
    std::map<uint32_t, FPoly> out;
    for (const auto &tm : t_) {
        uint32_t e = tm.first[static_cast<size_t>(var)];
        Mono m = tm.first;
        m[static_cast<size_t>(var)] = 0;
        auto it = out.find(e);
        if (it == out.end()) it = out.emplace(e, FPoly(ctx_)).first;
        it->second.t_.push_back({std::move(m), tm.second});
    }
    for (auto &kv : out) kv.second.normalize();
    return out;
}

FPoly FPoly::coefficient_of(int var, uint32_t k) const {
    FPoly out(ctx_);
    for (const auto &tm : t_) {
        if (tm.first[static_cast<size_t>(var)] != k) continue;
        Mono m = tm.first;
        m[static_cast<size_t>(var)] = 0;
        out.t_.push_back({std::move(m), tm.second});
    }
    out.normalize();
    return out;
}

std::string FPoly::str() const {
    if (t_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto &[m, c] : t_) {
        if (!first) os << " + ";
        first = false;
        bool mono_one = main_degree(m) == 0;
        std::string cs = c.str();
        bool needs_paren = (c.num().term_count() > 1 || cs.find('/') != std::string::npos) && !mono_one;
        os << (needs_paren ? "(" + cs + ")" : cs);
        for (int v : ctx_->main) {
            uint32_t e = m[static_cast<size_t>(v)];
            if (!e) continue;
            os << "*" << ctx_->reg->name(v);
            if (e > 1) os << "^" << e;
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------

FPoly fnormal_form(const FPoly &p, const std::vector<FPoly> &basis, size_t step_cap) {
    if (basis.empty() || p.is_zero()) return p;
    const bool budgeted = step_cap != SIZE_MAX;
    FPoly w = p;
    size_t pos = 0;
    size_t steps = 0;
    while (pos < w.terms().size()) {
        bool hit = false;
        for (const auto &g : basis) {
            if (g.is_zero()) continue;
            const auto &tm = w.terms()[pos];
            if (!mono_divides(g.lm(), tm.first)) continue;
            if (++steps > step_cap) throw GroebnerBudget("fnormal_form: step cap exceeded");
            if (budgeted) {
                // keep individual steps bounded: fat coefficients make the
                // gcd arithmetic dominate
                size_t csize = static_cast<size_t>(tm.second.num().term_count()) +
                               static_cast<size_t>(tm.second.den().term_count());
                if (csize > 60 || w.terms().size() > 300)
                    throw GroebnerBudget("fnormal_form: coefficient growth cap exceeded");
            }
            w = w - g.mul_term(mono_div(tm.first, g.lm()), tm.second / g.lc());
            hit = true;
            break;
        }
        if (!hit) ++pos;
    }
    return w;
}

std::vector<FPoly> fgroebner(std::vector<FPoly> gens, size_t pair_cap) {
    gens.erase(std::remove_if(gens.begin(), gens.end(), [](const FPoly &p) { return p.is_zero(); }),
               gens.end());
    for (auto &g : gens) g = g.monic();
    if (gens.empty()) return gens;
    const auto ctx = gens.front().ctx();
    std::sort(gens.begin(), gens.end(),
              [](const FPoly &a, const FPoly &b) { return FPoly::compare(a, b) < 0; });
    gens.erase(std::unique(gens.begin(), gens.end(), [](const FPoly &a, const FPoly &b) { return a == b; }),
               gens.end());

    struct Pair {
        size_t i, j;
        Mono lcm;
        uint64_t deg;
    };
    std::list<Pair> pairs;
    auto deg_main = [&](const Mono &m) {
        uint64_t d = 0;
        for (int v : ctx->main) d += m[static_cast<size_t>(v)];
        return d;
    };
    auto push_pairs = [&](size_t j) {
        for (size_t i = 0; i < j; ++i) {
            Pair p{i, j, mono_lcm(gens[i].lm(), gens[j].lm()), 0};
            p.deg = deg_main(p.lcm);
            pairs.push_back(std::move(p));
        }
    };
    for (size_t j = 0; j < gens.size(); ++j) push_pairs(j);

    size_t guard = 0;
    const bool budgeted = pair_cap < 100000;
    const size_t term_cap = budgeted ? 600 : SIZE_MAX;
    const size_t step_cap = budgeted ? 300 : SIZE_MAX;
    while (!pairs.empty()) {
        if (++guard > pair_cap) throw GroebnerBudget("fgroebner: pair budget exceeded");
        auto best = pairs.begin();
        for (auto it = std::next(pairs.begin()); it != pairs.end(); ++it)
            if (it->deg < best->deg ||
                (it->deg == best->deg && (it->i < best->i || (it->i == best->i && it->j < best->j))))
                best = it;
        Pair p = *best;
        pairs.erase(best);
        if (mono_coprime(gens[p.i].lm(), gens[p.j].lm())) continue;
        FPoly spoly = gens[p.i].mul_term(mono_div(p.lcm, gens[p.i].lm()), RatFun::one(ctx->reg)) -
                      gens[p.j].mul_term(mono_div(p.lcm, gens[p.j].lm()), RatFun::one(ctx->reg));
        FPoly red = fnormal_form(spoly, gens, step_cap);
        if (red.is_zero()) continue;
        if (red.terms().size() > term_cap) throw GroebnerBudget("fgroebner: term growth cap exceeded");
        gens.push_back(red.monic());
        push_pairs(gens.size() - 1);
    }

    // minimal + inter-reduced
    std::vector<char> keep(gens.size(), 1);
    for (size_t i = 0; i < gens.size(); ++i) {
        if (!keep[i]) continue;
        for (size_t j = 0; j < gens.size(); ++j) {
            if (i == j || !keep[j]) continue;
            if (!mono_divides(gens[j].lm(), gens[i].lm())) continue;
            if (main_cmp(gens[j].lm(), gens[i].lm(), *ctx) == 0) {
                if (j < i) keep[i] = 0;
            } else {
                keep[i] = 0;
            }
            if (!keep[i]) break;
        }
    }
    std::vector<FPoly> minimal;
    for (size_t i = 0; i < gens.size(); ++i)
        if (keep[i]) minimal.push_back(gens[i]);
    for (size_t i = 0; i < minimal.size(); ++i) {
        std::vector<FPoly> others;
        for (size_t j = 0; j < minimal.size(); ++j)
            if (j != i) others.push_back(minimal[j]);
        minimal[i] = fnormal_form(minimal[i], others).monic();
    }
    minimal.erase(std::remove_if(minimal.begin(), minimal.end(),
                                 [](const FPoly &p) { return p.is_zero(); }),
                  minimal.end());
    std::sort(minimal.begin(), minimal.end(),
              [](const FPoly &a, const FPoly &b) { return FPoly::compare(a, b) < 0; });
    return minimal;
}

std::vector<FPoly> fsaturate(const std::vector<FPoly> &gens, const FPoly &g, int tag_var,
                             size_t pair_cap) {
    if (gens.empty() || g.is_zero()) return gens;
    const auto &ctx = gens.front().ctx();
    std::vector<int> main2 = ctx->main;
    main2.push_back(tag_var);
    auto ctx2 = FPoly::make_context(ctx->reg, main2, {tag_var});
    std::vector<FPoly> lifted;
    for (const auto &p : gens) lifted.push_back(p.with_context(ctx2));
    lifted.push_back(FPoly::variable(ctx2, tag_var) * g.with_context(ctx2) -
                     FPoly::constant(ctx2, RatFun::one(ctx->reg)));
    std::vector<FPoly> gb = fgroebner(lifted, pair_cap);
    std::vector<FPoly> out;
    for (const auto &p : gb)
        if (!p.depends_on(tag_var)) out.push_back(p.with_context(ctx));
    return out;
}

} // namespace iorep
