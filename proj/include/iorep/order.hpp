#ifndef IOREP_ORDER_HPP
#define IOREP_ORDER_HPP

#include "iorep/registry.hpp"

#include <cstdint>
#include <numeric>
#include <vector>

namespace iorep {

using Mono = std::vector<uint32_t>; // dense exponent vector, length = registry size

inline uint64_t total_degree(const Mono &m) {
    uint64_t d = 0;
    for (uint32_t e : m) d += e;
    return d;
}
inline uint64_t degree_on(const Mono &m, const std::vector<int> &vars) {
    uint64_t d = 0;
    for (int v : vars) d += m[static_cast<size_t>(v)];
    return d;
}
inline bool mono_is_one(const Mono &m) {
    for (uint32_t e : m)
        if (e) return false;
    return true;
}
inline Mono mono_mul(const Mono &a, const Mono &b) {
    Mono r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}
inline bool mono_divides(const Mono &a, const Mono &b) { // a | b
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}
inline Mono mono_div(const Mono &b, const Mono &a) { // b / a, caller checks divisibility
    Mono r(b.size());
    for (size_t i = 0; i < b.size(); ++i) r[i] = b[i] - a[i];
    return r;
}
inline Mono mono_lcm(const Mono &a, const Mono &b) {
    Mono r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] > b[i] ? a[i] : b[i];
    return r;
}
inline bool mono_coprime(const Mono &a, const Mono &b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] && b[i]) return false;
    return true;
}

enum class OrderKind { DegRevLex, Lex };

/// Monomial order: a sequence of variable blocks compared front-to-back, each with
/// its own inner order. A block-elimination order is one with the eliminated
/// variables in the leading block(s).
class MonomialOrder {
  public:
    struct Block {
        std::vector<int> vars; // registry indices, significance order for lex
        OrderKind kind = OrderKind::DegRevLex;
    };

    static MonomialOrder degrevlex(const RegistryPtr &reg) {
        return single_block(reg, OrderKind::DegRevLex);
    }
    static MonomialOrder lex(const RegistryPtr &reg) {
        return single_block(reg, OrderKind::Lex);
    }
    /// Eliminates `front` (degrevlex within) before everything else (degrevlex within).
    static MonomialOrder block_elim(const RegistryPtr &reg, const std::vector<int> &front) {
        std::vector<char> is_front(static_cast<size_t>(reg->size()), 0);
        for (int v : front) is_front[static_cast<size_t>(v)] = 1;
        Block b0, b1;
        b0.vars = front;
        for (int i = 0; i < reg->size(); ++i)
            if (!is_front[static_cast<size_t>(i)]) b1.vars.push_back(i);
        MonomialOrder o;
        o.blocks_.push_back(std::move(b0));
        o.blocks_.push_back(std::move(b1));
        return o;
    }
    static MonomialOrder of_blocks(std::vector<Block> blocks) {
        MonomialOrder o;
        o.blocks_ = std::move(blocks);
        return o;
    }

    const std::vector<Block> &blocks() const { return blocks_; }

    /// >0 if a > b, <0 if a < b, 0 if equal (on the covered variables).
    int compare(const Mono &a, const Mono &b) const {
        for (const Block &blk : blocks_) {
            int c = compare_block(a, b, blk);
            if (c != 0) return c;
        }
        return 0;
    }
    bool less(const Mono &a, const Mono &b) const { return compare(a, b) < 0; }
    bool greater(const Mono &a, const Mono &b) const { return compare(a, b) > 0; }

  private:
    static MonomialOrder single_block(const RegistryPtr &reg, OrderKind k) {
        Block b;
        b.vars.resize(static_cast<size_t>(reg->size()));
        std::iota(b.vars.begin(), b.vars.end(), 0);
        b.kind = k;
        MonomialOrder o;
        o.blocks_.push_back({std::move(b.vars), k});
        return o;
    }

    static int compare_block(const Mono &a, const Mono &b, const Block &blk) {
        if (blk.kind == OrderKind::Lex) {
            for (int v : blk.vars) {
                uint32_t ea = a[static_cast<size_t>(v)], eb = b[static_cast<size_t>(v)];
                if (ea != eb) return ea > eb ? 1 : -1;
            }
            return 0;
        }
        uint64_t da = degree_on(a, blk.vars), db = degree_on(b, blk.vars);
        if (da != db) return da > db ? 1 : -1;
        // revlex tie-break: last variable with differing exponent, smaller wins
        for (auto it = blk.vars.rbegin(); it != blk.vars.rend(); ++it) {
            uint32_t ea = a[static_cast<size_t>(*it)], eb = b[static_cast<size_t>(*it)];
            if (ea != eb) return ea < eb ? 1 : -1;
        }
        return 0;
    }

    std::vector<Block> blocks_;
};

} // namespace iorep

#endif
