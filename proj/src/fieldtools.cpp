#include "iorep/fieldtools.hpp"

#include <algorithm>

namespace iorep {

namespace {

uint64_t lcg(uint64_t &s) {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return s >> 16u;
}

// small primes keep probe arithmetic cheap and denominators unlikely to vanish
constexpr long kProbePool[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41,
                               43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

int rational_rank(std::vector<std::vector<BigRational>> m, std::vector<std::pair<int, int>> *pivots) {
    int rows = static_cast<int>(m.size());
    int cols = rows ? static_cast<int>(m[0].size()) : 0;
    std::vector<int> orig(static_cast<size_t>(rows));
    for (int r = 0; r < rows; ++r) orig[static_cast<size_t>(r)] = r;
    int rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int pr = -1;
        for (int r = rank; r < rows; ++r)
            if (!m[static_cast<size_t>(r)][static_cast<size_t>(c)].is_zero()) {
                pr = r;
                break;
            }
        if (pr < 0) continue;
        std::swap(m[static_cast<size_t>(pr)], m[static_cast<size_t>(rank)]);
        std::swap(orig[static_cast<size_t>(pr)], orig[static_cast<size_t>(rank)]);
        if (pivots) pivots->push_back({orig[static_cast<size_t>(rank)], c});
        const BigRational &p = m[static_cast<size_t>(rank)][static_cast<size_t>(c)];
        for (int r = rank + 1; r < rows; ++r) {
            BigRational f = m[static_cast<size_t>(r)][static_cast<size_t>(c)] / p;
            if (f.is_zero()) continue;
            for (int cc = c; cc < cols; ++cc)
                m[static_cast<size_t>(r)][static_cast<size_t>(cc)] -=
                    f * m[static_cast<size_t>(rank)][static_cast<size_t>(cc)];
        }
        ++rank;
    }
    return rank;
}

RatFun ratfun_det(const std::vector<std::vector<RatFun>> &m) {
    size_t n = m.size();
    if (n == 0) throw std::logic_error("det of empty matrix");
    if (n == 1) return m[0][0];
    RatFun acc = RatFun::zero(m[0][0].reg());
    for (size_t j = 0; j < n; ++j) {
        if (m[0][j].is_zero()) continue;
        std::vector<std::vector<RatFun>> sub;
        sub.reserve(n - 1);
        for (size_t r = 1; r < n; ++r) {
            std::vector<RatFun> row;
            row.reserve(n - 1);
            for (size_t c = 0; c < n; ++c)
                if (c != j) row.push_back(m[r][c]);
            sub.push_back(std::move(row));
        }
        RatFun term = m[0][j] * ratfun_det(sub);
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

} // namespace

int jacobian_rank(const std::vector<RatFun> &fns, const std::vector<int> &vars,
                  const JacobianOptions &opt) {
    if (fns.empty() || vars.empty()) return 0;
    const RegistryPtr &reg = fns.front().reg();
    std::vector<std::vector<RatFun>> jac;
    jac.reserve(fns.size());
    for (const auto &f : fns) {
        std::vector<RatFun> row;
        row.reserve(vars.size());
        for (int v : vars) row.push_back(f.derivative(v));
        jac.push_back(std::move(row));
    }

    uint64_t seed = opt.seed * 0x9e3779b97f4a7c15ULL + 0xabcdefULL;
    int best_rank = 0;
    std::vector<std::pair<int, int>> best_pivots;
    for (int probe = 0; probe < opt.probes; ++probe) {
        for (int attempt = 0;; ++attempt) {
            if (attempt >= opt.max_point_retries)
                throw std::runtime_error("jacobian_rank: no probe point avoided the denominators");
            std::vector<BigRational> pt;
            pt.reserve(static_cast<size_t>(reg->size()));
            for (int i = 0; i < reg->size(); ++i)
                pt.emplace_back(kProbePool[lcg(seed) % (sizeof(kProbePool) / sizeof(long))]);
            try {
                std::vector<std::vector<BigRational>> num;
                num.reserve(jac.size());
                for (const auto &row : jac) {
                    std::vector<BigRational> nrow;
                    nrow.reserve(row.size());
                    for (const auto &e : row) nrow.push_back(e.evaluate(pt));
                    num.push_back(std::move(nrow));
                }
                std::vector<std::pair<int, int>> pivots;
                int r = rational_rank(std::move(num), &pivots);
                if (r > best_rank) {
                    best_rank = r;
                    best_pivots = std::move(pivots);
                }
                break;
            } catch (const std::domain_error &) {
                continue; // a denominator vanished, re-draw the point
            }
        }
    }
    if (best_rank > 0) {
        // exact confirmation: the pivot minor is symbolically nonzero
        std::vector<std::vector<RatFun>> minor;
        minor.reserve(best_pivots.size());
        for (const auto &rc : best_pivots) {
            std::vector<RatFun> row;
            for (const auto &rc2 : best_pivots)
                row.push_back(jac[static_cast<size_t>(rc.first)][static_cast<size_t>(rc2.second)]);
            minor.push_back(std::move(row));
        }
        if (ratfun_det(minor).is_zero())
            throw std::logic_error("jacobian_rank: probe rank not confirmed symbolically");
    }
    return best_rank;
}

FieldTower::FieldTower(RegistryPtr base_reg, std::vector<RatFun> gens, std::vector<int> base_vars,
                       std::vector<std::string> tag_names, std::vector<int> ground_vars)
    : base_reg_(std::move(base_reg)), gens_(std::move(gens)), base_vars_(std::move(base_vars)),
      tag_names_(std::move(tag_names)), ground_vars_(std::move(ground_vars)) {
    build();
}

void FieldTower::build() {
    if (tag_names_.empty()) {
        for (size_t i = 0; i < gens_.size(); ++i) tag_names_.push_back("@g" + std::to_string(i + 1));
    }
    // work registry: [@sat][eliminated base vars][@T][tags][ground]; the
    // block order eliminates the sat tag and the base variables, so normal
    // forms rewrite into the tags and the ground variables
    std::vector<int> elim_base;
    for (int v : base_vars_)
        if (std::find(ground_vars_.begin(), ground_vars_.end(), v) == ground_vars_.end())
            elim_base.push_back(v);
    std::vector<VarInfo> vi;
    vi.push_back({"@sat", VarBlock::Tag, 0});
    for (int v : elim_base) vi.push_back(base_reg_->info(v));
    vi.push_back({"@T", VarBlock::Tag, 0});
    for (const auto &nm : tag_names_) vi.push_back({nm, VarBlock::Tag, 0});
    for (int v : ground_vars_) vi.push_back(base_reg_->info(v));
    work_ = VarRegistry::create(vi);
    sat_var_ = work_->require("@sat");
    T_var_ = work_->require("@T");
    work_elim_.clear();
    for (int v : elim_base) work_elim_.push_back(work_->require(base_reg_->name(v)));
    work_tags_.clear();
    for (const auto &nm : tag_names_) work_tags_.push_back(work_->require(nm));
    work_ground_.clear();
    for (int v : ground_vars_) work_ground_.push_back(work_->require(base_reg_->name(v)));

    std::vector<VarInfo> tvi;
    for (const auto &nm : tag_names_) tvi.push_back({nm, VarBlock::Tag, 0});
    for (int v : ground_vars_) tvi.push_back(base_reg_->info(v));
    tag_reg_ = VarRegistry::create(tvi);

    defining_.clear();
    std::vector<Poly> dens;
    for (size_t i = 0; i < gens_.size(); ++i) {
        Poly num = gens_[i].num().lifted(work_);
        Poly den = gens_[i].den().lifted(work_);
        defining_.push_back(num - den * Poly::variable(work_, work_tags_[i]));
        if (!den.is_constant()) dens.push_back(den);
    }
    den_product_ = Poly::one(work_);
    for (const Poly &f : gcd_free_basis(dens)) den_product_ *= f;

    // shared basis for the rewrite fast path
    std::vector<MonomialOrder::Block> blocks;
    blocks.push_back({{sat_var_}, OrderKind::DegRevLex});
    blocks.push_back({work_elim_, OrderKind::DegRevLex});
    std::vector<int> kept = {T_var_};
    for (int t : work_tags_) kept.push_back(t);
    for (int g : work_ground_) kept.push_back(g);
    blocks.push_back({kept, OrderKind::DegRevLex});
    MonomialOrder order = MonomialOrder::of_blocks(blocks);

    std::vector<Poly> rows = defining_;
    rows.push_back(Poly::variable(work_, sat_var_) * den_product_ - Poly::one(work_));
    rewrite_gb_ = groebner(work_, rows, order);

    // relations P among the generators (tag and ground variables only)
    std::vector<Poly> rel;
    for (const auto &g : rewrite_gb_.gens) {
        bool kept_only = true;
        for (int v : g.vars_present())
            if (v == sat_var_ || v == T_var_ ||
                std::find(work_elim_.begin(), work_elim_.end(), v) != work_elim_.end()) {
                kept_only = false;
                break;
            }
        if (kept_only) rel.push_back(g);
    }
    relations_ = groebner(work_, rel, MonomialOrder::degrevlex(work_));
}

std::optional<RatFun> FieldTower::rewrite(const RatFun &f) const {
    Poly n = f.num().lifted(work_), d = f.den().lifted(work_);
    Poly nn = normal_form(n, rewrite_gb_);
    Poly nd = normal_form(d, rewrite_gb_);
    auto tags_only = [&](const Poly &p) {
        for (int v : p.vars_present()) {
            bool ok = std::find(work_tags_.begin(), work_tags_.end(), v) != work_tags_.end() ||
                      std::find(work_ground_.begin(), work_ground_.end(), v) != work_ground_.end();
            if (!ok) return false;
        }
        return true;
    };
    if (!tags_only(nn) || !tags_only(nd)) return std::nullopt;
    // the rewritten denominator must not vanish on the generator variety
    if (nd.is_zero() || normal_form(nd, relations_).is_zero()) return std::nullopt;
    // exact certificate: substituting the generators back reproduces f
    std::map<int, RatFun> back;
    for (size_t i = 0; i < gens_.size(); ++i) back[work_tags_[i]] = gens_[i].lifted(work_);
    RatFun w_work(nn, nd);
    if (w_work.substitute(back) != RatFun(n, d)) return std::nullopt;
    return RatFun(nn.lifted(tag_reg_), nd.lifted(tag_reg_));
}

MinPolyResult FieldTower::minimal_polynomial(const RatFun &f) const {
    // rows: defining relations, @T row for f, Rabinowitsch row for all dens
    std::vector<Poly> rows = defining_;
    Poly fn = f.num().lifted(work_), fd = f.den().lifted(work_);
    rows.push_back(fn - fd * Poly::variable(work_, T_var_));
    Poly dens = Poly::one(work_);
    for (const Poly &fac : gcd_free_basis({den_product_, fd})) dens *= fac;
    rows.push_back(Poly::variable(work_, sat_var_) * dens - Poly::one(work_));
    for (const auto &g : rewrite_gb_.gens) rows.push_back(g); // seed, already in the ideal

    std::vector<MonomialOrder::Block> blocks;
    blocks.push_back({{sat_var_}, OrderKind::DegRevLex});
    blocks.push_back({work_elim_, OrderKind::DegRevLex});
    blocks.push_back({{T_var_}, OrderKind::DegRevLex});
    std::vector<int> kept = work_tags_;
    for (int g : work_ground_) kept.push_back(g);
    blocks.push_back({kept, OrderKind::DegRevLex});
    IdealBasis gb = groebner(work_, rows, MonomialOrder::of_blocks(blocks));

    // E: elements in Q[T, tags, ground]; P: those free of T
    std::vector<Poly> relP;
    struct Cand {
        uint32_t deg;
        const Poly *p;
    };
    std::vector<Cand> cands;
    for (const auto &g : gb.gens) {
        bool ok = true;
        for (int v : g.vars_present()) {
            if (v == T_var_) continue;
            bool in_kept = std::find(kept.begin(), kept.end(), v) != kept.end();
            if (!in_kept) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        uint32_t d = g.degree(T_var_);
        if (d == 0)
            relP.push_back(g);
        else
            cands.push_back({d, &g});
    }
    IdealBasis relgb = groebner(work_, relP, MonomialOrder::degrevlex(work_));

    MinPolyResult res;
    res.tag_reg = tag_reg_;
    const Poly *best = nullptr;
    uint32_t best_deg = 0;
    for (const auto &c : cands) {
        Poly lc = c.p->coefficient_of(T_var_, c.deg);
        if (normal_form(lc, relgb).is_zero()) continue; // leading coeff vanishes on the variety
        if (!best || c.deg < best_deg || (c.deg == best_deg && Poly::compare(*c.p, *best) < 0)) {
            best = c.p;
            best_deg = c.deg;
        }
    }
    if (!best) {
        res.transcendental = true;
        return res;
    }
    res.degree = static_cast<int>(best_deg);
    res.minpoly = best->primitive();
    if (best_deg == 1) {
        Poly c1 = best->coefficient_of(T_var_, 1);
        Poly c0 = best->coefficient_of(T_var_, 0);
        RegistryPtr treg = tag_reg_;
        res.witness = RatFun((-c0).lifted(treg), c1.lifted(treg));
    }
    return res;
}

FieldTower::Classification FieldTower::classify(const RatFun &f_in) const {
    RatFun f = f_in.reg() == base_reg_ ? f_in : f_in.lifted(base_reg_);
    std::string key = f.str();
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;

    Classification cls;
    if (f.is_constant()) {
        cls.kind = Classification::Kind::Global;
        cls.degree = 1;
        cls.witness = RatFun::constant(tag_reg_, f.constant_value());
        cache_[key] = cls;
        return cls;
    }
    // fast transcendence probe: if appending f raises the generic Jacobian
    // rank of the generators it cannot be algebraic over them
    {
        std::vector<RatFun> fams = gens_;
        for (int v : ground_vars_) fams.push_back(RatFun::variable(base_reg_, v));
        if (gens_rank_ < 0) gens_rank_ = fams.empty() ? 0 : jacobian_rank(fams, base_vars_);
        fams.push_back(f);
        if (jacobian_rank(fams, base_vars_) > gens_rank_) {
            cls.kind = Classification::Kind::Transcendental;
            cache_[key] = cls;
            return cls;
        }
    }
    // fast membership path
    if (auto w = rewrite(f)) {
        cls.kind = Classification::Kind::Global;
        cls.degree = 1;
        cls.witness = *w;
        cache_[key] = cls;
        return cls;
    }
    MinPolyResult mp = minimal_polynomial(f);
    if (mp.transcendental) {
        cls.kind = Classification::Kind::Transcendental;
    } else if (mp.degree == 1) {
        cls.kind = Classification::Kind::Global;
        cls.degree = 1;
        cls.witness = mp.witness;
    } else {
        cls.kind = Classification::Kind::Local;
        cls.degree = mp.degree;
        cls.minpoly = mp.minpoly;
    }
    cache_[key] = cls;
    return cls;
}

MinPolyResult minimal_polynomial(const RatFun &f, const std::vector<RatFun> &gens,
                                 const std::vector<int> &base_vars) {
    FieldTower tower(f.reg(), gens, base_vars);
    return tower.minimal_polynomial(f);
}

} // namespace iorep
