#include "iorep/poly.hpp"

#include <algorithm>
#include <sstream>

namespace iorep {

int canonical_mono_cmp(const Mono &a, const Mono &b) {
    uint64_t da = total_degree(a), db = total_degree(b);
    if (da != db) return da > db ? 1 : -1;
    for (size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
    }
    return 0;
}

static bool canonical_desc(const Term &x, const Term &y) {
    return canonical_mono_cmp(x.m, y.m) > 0;
}

Poly Poly::constant(const RegistryPtr &reg, const BigRational &c) {
    Poly p(reg);
    if (!c.is_zero()) p.t_.push_back({Mono(static_cast<size_t>(reg->size()), 0), c});
    return p;
}

Poly Poly::variable(const RegistryPtr &reg, int var, uint32_t exp) {
    Poly p(reg);
    Mono m(static_cast<size_t>(reg->size()), 0);
    if (exp == 0) return one(reg);
    m.at(static_cast<size_t>(var)) = exp;
    p.t_.push_back({std::move(m), BigRational(1)});
    return p;
}

Poly Poly::from_terms(const RegistryPtr &reg, std::vector<Term> terms) {
    Poly p(reg);
    p.t_ = std::move(terms);
    p.normalize();
    return p;
}

void Poly::normalize() {
    std::sort(t_.begin(), t_.end(), canonical_desc);
    std::vector<Term> out;
    out.reserve(t_.size());
    for (auto &tm : t_) {
        if (!out.empty() && canonical_mono_cmp(out.back().m, tm.m) == 0) {
            out.back().c += tm.c;
            if (out.back().c.is_zero()) out.pop_back();
        } else if (!tm.c.is_zero()) {
            out.push_back(std::move(tm));
        }
    }
    t_ = std::move(out);
}

BigRational Poly::constant_value() const {
    if (t_.empty()) return BigRational(0);
    if (!is_constant()) throw std::logic_error("Poly: not a constant");
    return t_[0].c;
}

static void check_same_reg(const Poly &a, const Poly &b) {
    if (a.reg() != b.reg()) {
        // identical content under different pointers is accepted
        if (a.reg() && b.reg() && a.reg()->size() == b.reg()->size()) {
            for (int i = 0; i < a.reg()->size(); ++i)
                if (a.reg()->name(i) != b.reg()->name(i))
                    throw std::invalid_argument("Poly: registry mismatch");
            return;
        }
        throw std::invalid_argument("Poly: registry mismatch");
    }
}

Poly operator+(const Poly &a, const Poly &b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    check_same_reg(a, b);
    Poly r(a.reg_);
    r.t_.reserve(a.t_.size() + b.t_.size());
    size_t i = 0, j = 0;
    while (i < a.t_.size() && j < b.t_.size()) {
        int c = canonical_mono_cmp(a.t_[i].m, b.t_[j].m);
        if (c > 0) {
            r.t_.push_back(a.t_[i++]);
        } else if (c < 0) {
            r.t_.push_back(b.t_[j++]);
        } else {
            BigRational s = a.t_[i].c + b.t_[j].c;
            if (!s.is_zero()) r.t_.push_back({a.t_[i].m, std::move(s)});
            ++i;
            ++j;
        }
    }
    for (; i < a.t_.size(); ++i) r.t_.push_back(a.t_[i]);
    for (; j < b.t_.size(); ++j) r.t_.push_back(b.t_[j]);
    return r;
}

Poly operator-(const Poly &a, const Poly &b) { return a + (-b); }

Poly Poly::operator-() const {
    Poly r(reg_);
    r.t_.reserve(t_.size());
    for (const auto &tm : t_) r.t_.push_back({tm.m, -tm.c});
    return r;
}

Poly Poly::scaled(const BigRational &c) const {
    if (c.is_zero()) return Poly(reg_);
    Poly r(reg_);
    r.t_.reserve(t_.size());
    for (const auto &tm : t_) r.t_.push_back({tm.m, tm.c * c});
    return r;
}

Poly Poly::mul_term(const Mono &m, const BigRational &c) const {
    if (c.is_zero()) return Poly(reg_);
    Poly r(reg_);
    r.t_.reserve(t_.size());
    for (const auto &tm : t_) r.t_.push_back({mono_mul(tm.m, m), tm.c * c});
    return r; // order preserved: multiplying by a fixed monomial is monotone
}

Poly operator*(const Poly &a, const Poly &b) {
    if (a.is_zero() || b.is_zero()) return Poly(a.reg_ ? a.reg_ : b.reg_);
    check_same_reg(a, b);
    // accumulate via ordered map keyed by monomial
    struct Cmp {
        bool operator()(const Mono &x, const Mono &y) const { return canonical_mono_cmp(x, y) > 0; }
    };
    std::map<Mono, BigRational, Cmp> acc;
    const Poly &small = a.t_.size() <= b.t_.size() ? a : b;
    const Poly &big = a.t_.size() <= b.t_.size() ? b : a;
    for (const auto &ts : small.t_) {
        for (const auto &tb : big.t_) {
            Mono m = mono_mul(ts.m, tb.m);
            auto it = acc.find(m);
            if (it == acc.end()) {
                acc.emplace(std::move(m), ts.c * tb.c);
            } else {
                it->second += ts.c * tb.c;
            }
        }
    }
    Poly r(a.reg_);
    r.t_.reserve(acc.size());
    for (auto &kv : acc)
        if (!kv.second.is_zero()) r.t_.push_back({kv.first, std::move(kv.second)});
    return r;
}

Poly Poly::pow(const Poly &a, uint32_t e) {
    Poly r = Poly::one(a.reg());
    Poly base = a;
    while (e) {
        if (e & 1u) r = r * base;
        e >>= 1u;
        if (e) base = base * base;
    }
    return r;
}

bool Poly::operator==(const Poly &o) const {
    if (t_.size() != o.t_.size()) return false;
    for (size_t i = 0; i < t_.size(); ++i) {
        if (canonical_mono_cmp(t_[i].m, o.t_[i].m) != 0 || t_[i].c != o.t_[i].c) return false;
    }
    return true;
}

int Poly::compare(const Poly &a, const Poly &b) {
    size_t n = std::min(a.t_.size(), b.t_.size());
    for (size_t i = 0; i < n; ++i) {
        int c = canonical_mono_cmp(a.t_[i].m, b.t_[i].m);
        if (c != 0) return c;
        int cc = a.t_[i].c.cmp(b.t_[i].c);
        if (cc != 0) return cc;
    }
    if (a.t_.size() != b.t_.size()) return a.t_.size() > b.t_.size() ? 1 : -1;
    return 0;
}

Poly Poly::derivative(int var) const {
    Poly r(reg_);
    for (const auto &tm : t_) {
        uint32_t e = tm.m[static_cast<size_t>(var)];
        if (e == 0) continue;
        Mono m = tm.m;
        m[static_cast<size_t>(var)] = e - 1;
        r.t_.push_back({std::move(m), tm.c * BigRational(static_cast<long>(e))});
    }
    r.normalize();
    return r;
}

Poly Poly::substitute(const std::map<int, Poly> &repl) const {
    Poly r = Poly::zero(reg_);
    for (const auto &tm : t_) {
        Poly term = Poly::constant(reg_, tm.c);
        Mono rest(tm.m.size(), 0);
        for (size_t v = 0; v < tm.m.size(); ++v) {
            uint32_t e = tm.m[v];
            if (!e) continue;
            auto it = repl.find(static_cast<int>(v));
            if (it == repl.end()) {
                rest[v] = e;
            } else {
                term = term * Poly::pow(it->second, e);
            }
        }
        r += term.mul_term(rest, BigRational(1));
    }
    return r;
}

BigRational Poly::evaluate(const std::vector<BigRational> &point) const {
    BigRational acc(0);
    for (const auto &tm : t_) {
        BigRational v = tm.c;
        for (size_t i = 0; i < tm.m.size(); ++i) {
            if (tm.m[i]) v *= BigRational::pow(point.at(i), tm.m[i]);
        }
        acc += v;
    }
    return acc;
}

uint32_t Poly::degree(int var) const {
    uint32_t d = 0;
    for (const auto &tm : t_) d = std::max(d, tm.m[static_cast<size_t>(var)]);
    return d;
}

uint64_t Poly::max_total_degree() const {
    uint64_t d = 0;
    for (const auto &tm : t_) d = std::max(d, total_degree(tm.m));
    return d;
}

std::vector<int> Poly::vars_present() const {
    std::vector<int> out;
    if (!reg_) return out;
    for (int v = 0; v < reg_->size(); ++v)
        if (depends_on(v)) out.push_back(v);
    return out;
}

std::map<uint32_t, Poly> Poly::collect(int var) const {
    std::map<uint32_t, Poly> out;
    for (const auto &tm : t_) {
        uint32_t e = tm.m[static_cast<size_t>(var)];
        Mono m = tm.m;
        m[static_cast<size_t>(var)] = 0;
        auto it = out.find(e);
        if (it == out.end()) it = out.emplace(e, Poly(reg_)).first;
        it->second.t_.push_back({std::move(m), tm.c});
    }
    for (auto &kv : out) kv.second.normalize();
    return out;
}

Poly Poly::coefficient_of(int var, uint32_t k) const {
    Poly out(reg_);
    for (const auto &tm : t_) {
        if (tm.m[static_cast<size_t>(var)] != k) continue;
        Mono m = tm.m;
        m[static_cast<size_t>(var)] = 0;
        out.t_.push_back({std::move(m), tm.c});
    }
    out.normalize();
    return out;
}

static bool mono_less_canon(const Mono &a, const Mono &b) { return canonical_mono_cmp(a, b) < 0; }

std::map<Mono, Poly, bool (*)(const Mono &, const Mono &)> Poly::group_by(const std::vector<int> &vars) const {
    std::map<Mono, Poly, bool (*)(const Mono &, const Mono &)> out(&mono_less_canon);
    std::vector<char> in(reg_ ? static_cast<size_t>(reg_->size()) : 0, 0);
    for (int v : vars) in[static_cast<size_t>(v)] = 1;
    for (const auto &tm : t_) {
        Mono key(tm.m.size(), 0), rest = tm.m;
        for (size_t v = 0; v < tm.m.size(); ++v) {
            if (in[v]) {
                key[v] = tm.m[v];
                rest[v] = 0;
            }
        }
        auto it = out.find(key);
        if (it == out.end()) it = out.emplace(std::move(key), Poly(reg_)).first;
        it->second.t_.push_back({std::move(rest), tm.c});
    }
    for (auto &kv : out) kv.second.normalize();
    return out;
}

const Term &Poly::leading_term(const MonomialOrder &o) const {
    if (t_.empty()) throw std::logic_error("Poly: leading term of zero");
    const Term *best = &t_[0];
    for (const auto &tm : t_)
        if (o.greater(tm.m, best->m)) best = &tm;
    return *best;
}

BigRational Poly::content() const {
    if (t_.empty()) return BigRational(0);
    BigInt num_gcd(0), den_lcm(1);
    for (const auto &tm : t_) {
        num_gcd = BigInt::gcd(num_gcd, tm.c.numerator());
        den_lcm = BigInt::lcm(den_lcm, tm.c.denominator());
    }
    BigRational c(num_gcd, den_lcm);
    if (t_[0].c.sign() < 0) c = -c; // t_[0] is the canonical leading term
    return c;
}

Poly Poly::primitive() const {
    if (t_.empty()) return *this;
    return scaled(content().inverse());
}

Poly Poly::lifted(const RegistryPtr &to) const {
    if (reg_ == to) return *this;
    std::vector<int> map_idx(reg_ ? static_cast<size_t>(reg_->size()) : 0, -1);
    for (int v = 0; v < (reg_ ? reg_->size() : 0); ++v) map_idx[static_cast<size_t>(v)] = to->find(reg_->name(v));
    Poly r(to);
    r.t_.reserve(t_.size());
    for (const auto &tm : t_) {
        Mono m(static_cast<size_t>(to->size()), 0);
        for (size_t v = 0; v < tm.m.size(); ++v) {
            if (!tm.m[v]) continue;
            int nv = map_idx[v];
            if (nv < 0)
                throw std::invalid_argument("Poly: variable '" + reg_->name(static_cast<int>(v)) +
                                            "' missing from target registry");
            m[static_cast<size_t>(nv)] = tm.m[v];
        }
        r.t_.push_back({std::move(m), tm.c});
    }
    r.normalize();
    return r;
}

std::string Poly::str() const {
    if (t_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto &tm : t_) {
        BigRational c = tm.c;
        if (first) {
            if (c.sign() < 0) {
                os << "-";
                c = -c;
            }
        } else {
            os << (c.sign() < 0 ? " - " : " + ");
            if (c.sign() < 0) c = -c;
        }
        first = false;
        bool printed_coeff = false;
        if (!c.is_one() || mono_is_one(tm.m)) {
            os << c.str();
            printed_coeff = true;
        }
        for (size_t v = 0; v < tm.m.size(); ++v) {
            if (!tm.m[v]) continue;
            if (printed_coeff) os << "*";
            printed_coeff = true;
            os << reg_->name(static_cast<int>(v));
            if (tm.m[v] > 1) os << "^" << tm.m[v];
        }
    }
    return os.str();
}

size_t Poly::hash() const {
    size_t h = 1469598103934665603ULL;
    for (const auto &tm : t_) {
        for (uint32_t e : tm.m) h = (h ^ e) * 1099511628211ULL;
        h = (h ^ tm.c.hash()) * 1099511628211ULL;
    }
    return h;
}

// ---------------------------------------------------------------------------
// division / gcd

std::optional<Poly> poly_divexact(const Poly &a, const Poly &b) {
    if (b.is_zero()) return std::nullopt;
    if (a.is_zero()) return Poly::zero(a.reg());
    Poly rem = a;
    Poly quot = Poly::zero(a.reg());
    const Term &lb = b.terms()[0]; // canonical leading term
    while (!rem.is_zero()) {
        const Term &lr = rem.terms()[0];
        if (!mono_divides(lb.m, lr.m)) return std::nullopt;
        Mono q = mono_div(lr.m, lb.m);
        BigRational qc = lr.c / lb.c;
        quot += Poly::from_terms(a.reg(), {{q, qc}});
        rem -= b.mul_term(q, qc);
    }
    return quot;
}

std::vector<Poly> gcd_free_basis(const std::vector<Poly> &inputs) {
    std::vector<Poly> factors;
    for (const Poly &input : inputs) {
        std::vector<Poly> queue{input.primitive()};
        while (!queue.empty()) {
            Poly cur = queue.back();
            queue.pop_back();
            if (cur.is_constant() || cur.is_zero()) continue;
            bool split = false;
            for (auto &known : factors) {
                Poly g = poly_gcd(cur, known);
                if (g.is_constant()) continue;
                if (g == cur && g == known) {
                    split = true; // already present
                    break;
                }
                Poly c1 = *poly_divexact(cur, g);
                Poly c2 = *poly_divexact(known, g);
                known = g;
                if (!c2.is_constant()) queue.push_back(c2);
                if (!c1.is_constant()) queue.push_back(c1);
                split = true;
                break;
            }
            if (!split) factors.push_back(cur);
        }
    }
    std::sort(factors.begin(), factors.end(),
              [](const Poly &a, const Poly &b) { return Poly::compare(a, b) < 0; });
    return factors;
}

Poly poly_prem(const Poly &a, const Poly &b, int var) {
    uint32_t db = b.degree(var);
    if (db == 0) return Poly::zero(a.reg());
    Poly lc_b = b.coefficient_of(var, db);
    Poly r = a;
    while (!r.is_zero()) {
        uint32_t dr = r.degree(var);
        if (dr < db) break;
        Poly lc_r = r.coefficient_of(var, dr);
        Mono shift(static_cast<size_t>(a.reg()->size()), 0);
        shift[static_cast<size_t>(var)] = dr - db;
        r = r * lc_b - b.mul_term(shift, BigRational(1)) * lc_r;
    }
    return r;
}

namespace {

// univariate gcd in `var` over Q via primitive PRS; inputs nonzero
Poly gcd_univariate(Poly a, Poly b, int var) {
    a = a.primitive();
    b = b.primitive();
    if (a.degree(var) < b.degree(var)) std::swap(a, b);
    while (!b.is_zero()) {
        Poly r = poly_prem(a, b, var);
        a = std::move(b);
        b = r.is_zero() ? r : r.primitive();
    }
    return a.primitive();
}

// gcd of x-coefficient polys (recursive multivariate content w.r.t. var)
Poly content_wrt(const Poly &p, int var) {
    auto coeffs = p.collect(var);
    Poly g = Poly::zero(p.reg());
    for (const auto &kv : coeffs) {
        g = poly_gcd(g, kv.second);
        if (g.is_constant() && !g.is_zero()) break;
    }
    return g;
}

uint64_t lcg_next(uint64_t &s) {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return s >> 16u;
}

// Fast certificate that gcd has degree 0 in every shared variable: evaluate all
// variables but one at random points and take univariate image gcds. An image
// gcd can only overestimate the true degree, so degree-0 images are a proof.
bool gcd_is_monomial_probe(const Poly &a, const Poly &b, const std::vector<int> &shared) {
    uint64_t seed = 0x5eed5eedULL;
    for (int main : shared) {
        bool proven = false;
        for (int attempt = 0; attempt < 4 && !proven; ++attempt) {
            std::map<int, Poly> repl;
            for (int v : shared)
                if (v != main)
                    repl[v] = Poly::constant(a.reg(), BigRational(static_cast<long>(2 + lcg_next(seed) % 89)));
            Poly ia = a.substitute(repl), ib = b.substitute(repl);
            if (ia.is_zero() || ib.is_zero()) continue;
            if (ia.degree(main) != a.degree(main) || ib.degree(main) != b.degree(main)) continue;
            Poly g = gcd_univariate(ia, ib, main);
            if (g.degree(main) == 0) proven = true;
        }
        if (!proven) return false;
    }
    return true;
}

} // namespace

Poly poly_gcd(const Poly &a, const Poly &b) {
    if (a.is_zero()) return b.is_zero() ? b : b.primitive();
    if (b.is_zero()) return a.primitive();
    // monomial content first
    auto min_mono = [](const Poly &p) {
        Mono m = p.terms()[0].m;
        for (const auto &tm : p.terms())
            for (size_t i = 0; i < m.size(); ++i) m[i] = std::min(m[i], tm.m[i]);
        return m;
    };
    Mono ma = min_mono(a), mb = min_mono(b);
    Mono mg(ma.size());
    for (size_t i = 0; i < ma.size(); ++i) mg[i] = std::min(ma[i], mb[i]);
    Poly pa = a, pb = b;
    if (!mono_is_one(ma)) pa = *poly_divexact(pa, Poly::from_terms(a.reg(), {{ma, BigRational(1)}}));
    if (!mono_is_one(mb)) pb = *poly_divexact(pb, Poly::from_terms(b.reg(), {{mb, BigRational(1)}}));
    Poly monomial_part = Poly::from_terms(a.reg(), {{mg, BigRational(1)}});

    std::vector<int> va = pa.vars_present(), vb = pb.vars_present();
    std::vector<int> shared;
    std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(shared));
    if (shared.empty()) return monomial_part;

    if (shared.size() > 1 && gcd_is_monomial_probe(pa, pb, shared)) return monomial_part;

    // choose main variable: smallest max degree to keep PRS short
    int main = shared[0];
    uint32_t best = std::max(pa.degree(main), pb.degree(main));
    for (int v : shared) {
        uint32_t d = std::max(pa.degree(v), pb.degree(v));
        if (d < best) {
            best = d;
            main = v;
        }
    }
    Poly ca = content_wrt(pa, main), cb = content_wrt(pb, main);
    Poly cg = poly_gcd(ca, cb);
    Poly ga = *poly_divexact(pa, ca), gb = *poly_divexact(pb, cb);
    Poly g = gcd_univariate(ga, gb, main);
    if (!g.is_constant()) {
        // Gauss: the primitive part w.r.t. the main variable of the last PRS
        // element is the gcd of the primitive inputs
        Poly cmain = content_wrt(g, main);
        if (!cmain.is_constant() || !cmain.constant_value().is_one()) g = *poly_divexact(g, cmain);
        if (!poly_divexact(pa, g) || !poly_divexact(pb, g))
            throw std::logic_error("poly_gcd: PRS result failed trial division");
    }
    return (g * cg * monomial_part).primitive();
}

} // namespace iorep
