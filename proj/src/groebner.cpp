#include "iorep/groebner.hpp"

#include <algorithm>
#include <deque>
#include <list>

namespace iorep {

namespace {

// working polynomial: terms sorted descending by the active order
struct WPoly {
    std::vector<Term> t;
    const Mono &lm() const { return t.front().m; }
    const BigRational &lc() const { return t.front().c; }
    bool zero() const { return t.empty(); }
};

struct Engine {
    const MonomialOrder &ord;

    explicit Engine(const MonomialOrder &o) : ord(o) {}

    WPoly to_work(const Poly &p) const {
        WPoly w;
        w.t = p.terms();
        std::sort(w.t.begin(), w.t.end(),
                  [&](const Term &x, const Term &y) { return ord.compare(x.m, y.m) > 0; });
        return w;
    }
    Poly from_work(const RegistryPtr &reg, const WPoly &w) const {
        return Poly::from_terms(reg, w.t);
    }

    static void make_primitive(WPoly &w) {
        if (w.zero()) return;
        BigInt num_gcd(0), den_lcm(1);
        for (const auto &tm : w.t) {
            num_gcd = BigInt::gcd(num_gcd, tm.c.numerator());
            den_lcm = BigInt::lcm(den_lcm, tm.c.denominator());
        }
        BigRational c(num_gcd, den_lcm);
        if (w.lc().sign() < 0) c = -c;
        if (c.is_one()) return;
        BigRational inv = c.inverse();
        for (auto &tm : w.t) tm.c *= inv;
    }

    // w -= (coef * mono) * g, keeping descending order
    void submul(WPoly &w, const BigRational &coef, const Mono &mono, const WPoly &g) const {
        std::vector<Term> out;
        out.reserve(w.t.size() + g.t.size());
        size_t i = 0, j = 0;
        while (i < w.t.size() && j < g.t.size()) {
            Mono gm = mono_mul(g.t[j].m, mono);
            int c = ord.compare(w.t[i].m, gm);
            if (c > 0) {
                out.push_back(w.t[i++]);
            } else if (c < 0) {
                out.push_back({std::move(gm), -(coef * g.t[j].c)});
                ++j;
            } else {
                BigRational s = w.t[i].c - coef * g.t[j].c;
                if (!s.is_zero()) out.push_back({w.t[i].m, std::move(s)});
                ++i;
                ++j;
            }
        }
        for (; i < w.t.size(); ++i) out.push_back(w.t[i]);
        for (; j < g.t.size(); ++j) out.push_back({mono_mul(g.t[j].m, mono), -(coef * g.t[j].c)});
        w.t = std::move(out);
    }

    // full reduction of w by basis; returns primitive-normalized result
    void reduce_full(WPoly &w, const std::vector<WPoly> &basis, const std::vector<char> &alive) const {
        size_t pos = 0; // everything before pos is irreducible
        while (pos < w.t.size()) {
            bool hit = false;
            for (size_t k = 0; k < basis.size(); ++k) {
                if (!alive.empty() && !alive[k]) continue;
                const WPoly &g = basis[k];
                if (g.zero()) continue;
                if (!mono_divides(g.lm(), w.t[pos].m)) continue;
                Mono q = mono_div(w.t[pos].m, g.lm());
                BigRational c = w.t[pos].c / g.lc();
                submul(w, c, q, g);
                hit = true;
                break;
            }
            if (!hit) ++pos;
        }
        make_primitive(w);
    }

    WPoly spoly(const WPoly &f, const WPoly &g) const {
        Mono l = mono_lcm(f.lm(), g.lm());
        WPoly r = f;
        // scale f by lc(g) first so both parts stay integral
        for (auto &tm : r.t) tm.c *= g.lc();
        Mono qf = mono_div(l, f.lm());
        if (!mono_is_one(qf)) {
            for (auto &tm : r.t) tm.m = mono_mul(tm.m, qf);
        }
        submul(r, f.lc(), mono_div(l, g.lm()), g);
        return r;
    }
};

struct Pair {
    size_t i, j;
    Mono lcm;
    uint64_t deg;
};

} // namespace

IdealBasis groebner(const RegistryPtr &reg, std::vector<Poly> gens, const MonomialOrder &order) {
    Engine eng(order);
    std::vector<WPoly> basis;
    for (const auto &g : gens) {
        if (g.is_zero()) continue;
        WPoly w = eng.to_work(g);
        Engine::make_primitive(w);
        basis.push_back(std::move(w));
    }
    // deterministic starting order
    std::sort(basis.begin(), basis.end(), [&](const WPoly &a, const WPoly &b) {
        int c = order.compare(a.lm(), b.lm());
        if (c != 0) return c < 0;
        return a.t.size() < b.t.size();
    });

    std::list<Pair> pairs;
    auto push_pairs_for = [&](size_t j) {
        for (size_t i = 0; i < j; ++i) {
            Pair p{i, j, mono_lcm(basis[i].lm(), basis[j].lm()), 0};
            p.deg = total_degree(p.lcm);
            pairs.push_back(std::move(p));
        }
    };
    for (size_t j = 0; j < basis.size(); ++j) push_pairs_for(j);

    auto chain_criterion = [&](const Pair &p) {
        // Buchberger's second criterion: some k with lm_k | lcm(i,j) whose
        // pairs with both i and j were already handled
        for (size_t k = 0; k < basis.size(); ++k) {
            if (k == p.i || k == p.j) continue;
            if (!mono_divides(basis[k].lm(), p.lcm)) continue;
            bool ik_done = true, kj_done = true;
            for (const auto &q : pairs) {
                if (q.i == std::min(p.i, k) && q.j == std::max(p.i, k)) ik_done = false;
                if (q.i == std::min(p.j, k) && q.j == std::max(p.j, k)) kj_done = false;
            }
            if (ik_done && kj_done) return true;
        }
        return false;
    };

    size_t guard = 0;
    while (!pairs.empty()) {
        if (++guard > 500000) throw std::runtime_error("groebner: pair budget exceeded");
        // normal strategy: smallest lcm degree, then smallest lcm, then (i,j)
        auto best = pairs.begin();
        for (auto it = std::next(pairs.begin()); it != pairs.end(); ++it) {
            if (it->deg != best->deg ? it->deg < best->deg
                                     : (order.compare(it->lcm, best->lcm) != 0
                                            ? order.compare(it->lcm, best->lcm) < 0
                                            : (it->i != best->i ? it->i < best->i : it->j < best->j)))
                best = it;
        }
        Pair p = *best;
        pairs.erase(best);
        // product criterion
        if (mono_coprime(basis[p.i].lm(), basis[p.j].lm())) continue;
        if (chain_criterion(p)) continue;

        WPoly s = eng.spoly(basis[p.i], basis[p.j]);
        eng.reduce_full(s, basis, {});
        if (s.zero()) continue;
        basis.push_back(std::move(s));
        push_pairs_for(basis.size() - 1);
    }

    // minimalize: drop any element whose lead is divisible by another kept lead
    std::vector<char> keep(basis.size(), 1);
    for (size_t i = 0; i < basis.size(); ++i) {
        if (!keep[i]) continue;
        for (size_t j = 0; j < basis.size(); ++j) {
            if (i == j || !keep[j]) continue;
            if (!mono_divides(basis[j].lm(), basis[i].lm())) continue;
            if (order.compare(basis[j].lm(), basis[i].lm()) == 0) {
                if (j < i) keep[i] = 0; // equal leads: keep the earliest
            } else {
                keep[i] = 0;
            }
            if (!keep[i]) break;
        }
    }
    std::vector<WPoly> minimal;
    for (size_t i = 0; i < basis.size(); ++i)
        if (keep[i]) minimal.push_back(basis[i]);

    for (size_t i = 0; i < minimal.size(); ++i) {
        std::vector<WPoly> others;
        std::vector<char> oa;
        for (size_t j = 0; j < minimal.size(); ++j)
            if (j != i) others.push_back(minimal[j]);
        eng.reduce_full(minimal[i], others, {});
    }
    minimal.erase(std::remove_if(minimal.begin(), minimal.end(), [](const WPoly &w) { return w.zero(); }),
                  minimal.end());
    std::sort(minimal.begin(), minimal.end(),
              [&](const WPoly &a, const WPoly &b) { return order.compare(a.lm(), b.lm()) < 0; });

    IdealBasis out;
    out.reg = reg;
    out.order = order;
    out.reduced = true;
    for (const auto &w : minimal) out.gens.push_back(eng.from_work(reg, w));
    return out;
}

Poly normal_form(const Poly &p, const IdealBasis &basis) {
    if (basis.gens.empty() || p.is_zero()) return p;
    Engine eng(basis.order);
    std::vector<WPoly> b;
    for (const auto &g : basis.gens) b.push_back(eng.to_work(g));
    WPoly w = eng.to_work(p);
    // reduce without the final primitive scaling so NF(p) == 0 iff member
    size_t pos = 0;
    while (pos < w.t.size()) {
        bool hit = false;
        for (const auto &g : b) {
            if (g.zero() || !mono_divides(g.lm(), w.t[pos].m)) continue;
            Mono q = mono_div(w.t[pos].m, g.lm());
            BigRational c = w.t[pos].c / g.lc();
            eng.submul(w, c, q, g);
            hit = true;
            break;
        }
        if (!hit) ++pos;
    }
    return eng.from_work(p.reg(), w);
}

bool ideal_member(const Poly &p, const IdealBasis &basis) { return normal_form(p, basis).is_zero(); }

IdealBasis saturate(const RegistryPtr &reg, const std::vector<Poly> &gens,
                    const std::vector<Poly> &multipliers, const MonomialOrder &out_order) {
    for (const auto &m : multipliers)
        if (m.is_zero()) throw std::invalid_argument("saturate: zero multiplier");
    std::string tag = "@sat";
    while (reg->has(tag)) tag += "_";
    RegistryPtr ext = reg->extended({{tag, VarBlock::Tag, 0}});
    int tv = ext->require(tag);
    std::vector<Poly> egens;
    for (const auto &g : gens) egens.push_back(g.lifted(ext));
    Poly prod = Poly::variable(ext, tv);
    for (const auto &m : multipliers) prod *= m.lifted(ext);
    egens.push_back(prod - Poly::one(ext));
    IdealBasis gb = groebner(ext, egens, MonomialOrder::block_elim(ext, {tv}));
    std::vector<Poly> kept;
    for (const auto &g : gb.gens)
        if (!g.depends_on(tv)) kept.push_back(g.lifted(reg));
    return groebner(reg, kept, out_order);
}

IdealBasis saturate(const RegistryPtr &reg, const std::vector<Poly> &gens,
                    const std::vector<Poly> &multipliers) {
    return saturate(reg, gens, multipliers, MonomialOrder::degrevlex(reg));
}

IdealBasis eliminate(const RegistryPtr &reg, const std::vector<Poly> &gens,
                     const std::vector<int> &drop) {
    MonomialOrder order = MonomialOrder::block_elim(reg, drop);
    IdealBasis gb = groebner(reg, gens, order);
    IdealBasis out;
    out.reg = reg;
    out.order = order;
    out.reduced = true;
    for (const auto &g : gb.gens) {
        bool clean = true;
        for (int v : drop)
            if (g.depends_on(v)) {
                clean = false;
                break;
            }
        if (clean) out.gens.push_back(g);
    }
    return out;
}

} // namespace iorep
