#pragma once

#include "gendiv/primes.hpp"

#include <memory>

namespace gendiv {

struct QuotientRingData {
    PolyRing ambient;
    Ideal relations;                  // with cached grevlex basis
    std::vector<Polynomial> rel_gb;   // reduced grevlex basis of relations
    std::string name;                 // optional display name
};

// Finitely presented algebra P/J. The zero ring is rejected at construction.
// Relations carry their reduced Gröbner basis; everything is immutable.
class QuotientRing {
public:
    QuotientRing() = default;
    QuotientRing(PolyRing ambient, Ideal relations, std::string name = "") {
        auto gb = relations.groebner();
        for (auto& g : gb)
            if (g.is_constant() && !g.is_zero())
                throw std::invalid_argument("quotient by the unit ideal is the zero ring");
        Ideal rel(ambient, gb);
        data_ = std::make_shared<QuotientRingData>(
            QuotientRingData{ambient, rel.with_basis(MonomialOrder::grevlex()), gb, std::move(name)});
    }

    static QuotientRing polynomial_ring(PolyRing ambient, std::string name = "") {
        return QuotientRing(ambient, Ideal::zero(ambient), std::move(name));
    }

    const PolyRing& ambient() const { return data_->ambient; }
    const Ideal& relations() const { return data_->relations; }
    const std::vector<Polynomial>& relation_basis() const { return data_->rel_gb; }
    const std::string& name() const { return data_->name; }
    const CoeffField& field() const { return data_->ambient.field(); }
    size_t nvars() const { return data_->ambient.nvars(); }
    bool is_polynomial_ring() const { return data_->rel_gb.empty(); }

    Polynomial reduce(const Polynomial& f) const {
        return normal_form(f, data_->rel_gb);
    }

    bool is_zero_element(const Polynomial& f) const { return reduce(f).is_zero(); }

    bool elements_equal(const Polynomial& f, const Polynomial& g) const {
        return reduce(f - g).is_zero();
    }

    // 1 ∈ relations + (f)
    bool is_unit(const Polynomial& f) const {
        std::vector<Polynomial> gens = data_->relations.gens();
        gens.push_back(f);
        return !is_proper(Ideal(data_->ambient, gens));
    }

    bool operator==(const QuotientRing& o) const {
        return data_ == o.data_ ||
               (ambient() == o.ambient() && ideal_equal(relations(), o.relations()));
    }
    bool operator!=(const QuotientRing& o) const { return !(*this == o); }

    std::string to_string() const {
        std::string s = ambient().to_string();
        if (!is_polynomial_ring()) {
            s += " / (";
            for (size_t i = 0; i < relation_basis().size(); ++i)
                s += (i ? ", " : "") + relation_basis()[i].to_string();
            s += ")";
        }
        return s;
    }

private:
    std::shared_ptr<const QuotientRingData> data_;
};

// a ∈ A is a nonzerodivisor iff (J : a) = J
inline bool is_nonzerodivisor(const Polynomial& a, const QuotientRing& A) {
    Polynomial r = A.reduce(a);
    if (r.is_zero()) return false;
    Ideal q = ideal_quotient(A.relations(), Ideal(A.ambient(), {r}));
    for (auto& g : q.gens())
        if (!normal_form(g, A.relation_basis()).is_zero()) return false;
    return true;
}

// a witness b ≠ 0 with a·b = 0, for zerodivisors
inline std::optional<Polynomial> zerodivisor_witness(const Polynomial& a, const QuotientRing& A) {
    Polynomial r = A.reduce(a);
    if (r.is_zero()) return Polynomial::constant(A.ambient(), 1);
    Ideal q = ideal_quotient(A.relations(), Ideal(A.ambient(), {r}));
    for (auto& g : q.groebner()) {
        Polynomial w = normal_form(g, A.relation_basis());
        if (!w.is_zero()) return w;
    }
    return std::nullopt;
}

// minimal primes of the ring (primes of P containing J)
inline std::vector<PrimeIdeal> ring_minimal_primes(const QuotientRing& A,
                                                   const std::vector<PrimeIdeal>& declared = {}) {
    return minimal_primes(A.relations(), declared);
}

// prime of A generated by the given elements: the ring relations are folded
// into the ambient-level ideal
inline PrimeIdeal ring_prime(const QuotientRing& A, const std::vector<Polynomial>& gens,
                             Trust trust = Trust::Declared) {
    std::vector<Polynomial> all = gens;
    for (auto& g : A.relations().gens()) all.push_back(g);
    Ideal I(A.ambient(), all);
    return PrimeIdeal(Ideal(A.ambient(), I.groebner()).with_basis(MonomialOrder::grevlex()), trust);
}

// check that p is a prime of A, i.e. contains the relations
inline void require_prime_of(const QuotientRing& A, const PrimeIdeal& p) {
    if (p.ideal.ambient() != A.ambient())
        throw std::invalid_argument("prime lives in a different ambient ring");
    if (!ideal_contains(p.ideal, A.relations()))
        throw std::invalid_argument("prime does not contain the ring relations");
}

} // namespace gendiv
