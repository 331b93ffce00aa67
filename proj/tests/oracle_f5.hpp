#pragma once

// Brute-force linear-algebra membership oracle over a prime field:
// f ∈ I is decided inside the span of {m·g : g generator, deg(m·g) <= cap},
// entirely independent of the Gröbner machinery.

#include "gendiv/polynomial.hpp"

#include <map>
#include <vector>

namespace oracle {

using gendiv::Exps;
using gendiv::Polynomial;

// all exponent vectors in nvars variables of total degree <= cap
inline std::vector<Exps> monomials_up_to(size_t nvars, int cap) {
    std::vector<Exps> out;
    Exps cur(nvars, 0);
    auto rec = [&](auto&& self, size_t pos, int left) -> void {
        if (pos == nvars) {
            out.push_back(cur);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            cur[pos] = k;
            self(self, pos + 1, left - k);
        }
        cur[pos] = 0;
    };
    rec(rec, 0, cap);
    return out;
}

class TruncatedSpan {
public:
    TruncatedSpan(const gendiv::PolyRing& ring, const std::vector<Polynomial>& gens, int cap)
        : p_(ring.field().characteristic()), cap_(cap) {
        monos_ = monomials_up_to(ring.nvars(), cap);
        for (size_t i = 0; i < monos_.size(); ++i) index_[monos_[i]] = i;
        for (auto& g : gens) {
            if (g.is_zero()) continue;
            int dg = g.degree();
            for (auto& m : monomials_up_to(ring.nvars(), cap - dg))
                insert_row(to_vector(g.times_monomial(m, 1)));
        }
    }

    bool contains(const Polynomial& f) const {
        std::vector<long long> v = to_vector(f);
        reduce(v);
        for (auto x : v)
            if (x != 0) return false;
        return true;
    }

private:
    std::vector<long long> to_vector(const Polynomial& f) const {
        std::vector<long long> v(monos_.size(), 0);
        for (auto& [e, c] : f.terms()) {
            auto it = index_.find(e);
            if (it == index_.end()) throw std::invalid_argument("probe degree exceeds truncation");
            v[it->second] =
                boost::multiprecision::numerator(f.ring().field().normalize(c)).convert_to<long long>();
        }
        return v;
    }

    void reduce(std::vector<long long>& v) const {
        for (auto& [piv, row] : rows_) {
            if (v[piv] == 0) continue;
            long long factor = (v[piv] * inv(row[piv])) % p_;
            for (size_t i = piv; i < v.size(); ++i)
                v[i] = ((v[i] - factor * row[i]) % p_ + p_) % p_;
        }
    }

    void insert_row(std::vector<long long> v) {
        reduce(v);
        for (size_t i = 0; i < v.size(); ++i) {
            if (v[i] != 0) {
                rows_[i] = std::move(v);
                return;
            }
        }
    }

    long long inv(long long a) const {
        long long t = 0, nt = 1, r = p_, nr = a % p_;
        while (nr != 0) {
            long long q = r / nr;
            long long tmp = t - q * nt; t = nt; nt = tmp;
            tmp = r - q * nr; r = nr; nr = tmp;
        }
        return t < 0 ? t + p_ : t;
    }

    long long p_;
    int cap_;
    std::vector<Exps> monos_;
    std::map<Exps, size_t> index_;
    std::map<size_t, std::vector<long long>> rows_; // pivot column -> reduced row
};

} // namespace oracle
