#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace gendiv {

using Exps = std::vector<int>;

inline int total_degree(const Exps& e) {
    return std::accumulate(e.begin(), e.end(), 0);
}

inline bool exps_divides(const Exps& a, const Exps& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline Exps exps_lcm(const Exps& a, const Exps& b) {
    Exps r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
    return r;
}

inline Exps exps_add(const Exps& a, const Exps& b) {
    Exps r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Exps exps_sub(const Exps& a, const Exps& b) {
    Exps r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline bool exps_coprime(const Exps& a, const Exps& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > 0 && b[i] > 0) return false;
    return true;
}

// Monomial order on exponent vectors: grevlex, lex, or an elimination
// block order (grevlex on the eliminated block, then grevlex on the rest).
class MonomialOrder {
public:
    enum class Kind { Grevlex, Lex, EliminationBlock };

    static MonomialOrder grevlex() { return MonomialOrder(Kind::Grevlex, {}); }
    static MonomialOrder lex() { return MonomialOrder(Kind::Lex, {}); }
    static MonomialOrder elimination(std::vector<int> eliminated_vars) {
        std::sort(eliminated_vars.begin(), eliminated_vars.end());
        return MonomialOrder(Kind::EliminationBlock, std::move(eliminated_vars));
    }

    Kind kind() const { return kind_; }
    const std::vector<int>& eliminated() const { return block_; }

    // > 0 if a > b, < 0 if a < b, 0 if equal. Later-declared variables are
    // the more significant ones, so in k[x,t] the order has t > x.
    int compare(const Exps& a, const Exps& b) const {
        switch (kind_) {
        case Kind::Lex:
            for (size_t i = a.size(); i-- > 0;)
                if (a[i] != b[i]) return a[i] > b[i] ? 1 : -1;
            return 0;
        case Kind::Grevlex:
            return grevlex_cmp(a, b, nullptr);
        case Kind::EliminationBlock: {
            std::vector<char> in_block(a.size(), 0);
            for (int v : block_) in_block[v] = 1;
            int c = grevlex_cmp(a, b, &in_block);
            if (c != 0) return c;
            for (auto& f : in_block) f = !f;
            return grevlex_cmp(a, b, &in_block);
        }
        }
        return 0;
    }

    bool greater(const Exps& a, const Exps& b) const { return compare(a, b) > 0; }

private:
    MonomialOrder(Kind k, std::vector<int> block) : kind_(k), block_(std::move(block)) {}

    // grevlex restricted to the flagged variables (all when mask is null):
    // ties broken by the least significant (first declared) differing
    // variable, smaller exponent winning
    static int grevlex_cmp(const Exps& a, const Exps& b, const std::vector<char>* mask) {
        int da = 0, db = 0;
        for (size_t i = 0; i < a.size(); ++i) {
            if (mask && !(*mask)[i]) continue;
            da += a[i]; db += b[i];
        }
        if (da != db) return da > db ? 1 : -1;
        for (size_t i = 0; i < a.size(); ++i) {
            if (mask && !(*mask)[i]) continue;
            if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
        }
        return 0;
    }

    Kind kind_;
    std::vector<int> block_;
};

} // namespace gendiv
