#pragma once

#include "gendiv/ring.hpp"

namespace gendiv {

// Ring homomorphism B -> A given by one target element per source variable.
// Construction certifies that source relations map to zero.
class RingMap {
public:
    RingMap() = default;
    RingMap(QuotientRing source, QuotientRing target, std::vector<Polynomial> images)
        : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
        if (images_.size() != source_.nvars())
            throw std::invalid_argument("ring map needs one image per source variable");
        for (auto& im : images_) {
            if (im.ring() != target_.ambient())
                throw std::invalid_argument("image outside target ring");
            im = target_.reduce(im);
        }
        for (auto& rel : source_.relation_basis()) {
            if (!apply_raw(rel).is_zero())
                throw std::invalid_argument("ring map does not respect source relations: " +
                                            rel.to_string() + " has nonzero image");
        }
    }

    static RingMap identity(const QuotientRing& A) {
        std::vector<Polynomial> imgs;
        for (size_t i = 0; i < A.nvars(); ++i)
            imgs.push_back(Polynomial::variable(A.ambient(), i));
        return RingMap(A, A, std::move(imgs));
    }

    const QuotientRing& source() const { return source_; }
    const QuotientRing& target() const { return target_; }
    const std::vector<Polynomial>& images() const { return images_; }

    // image of a source element, reduced in the target
    Polynomial apply(const Polynomial& f) const { return apply_raw(f); }

    // plain substitution without reduction modulo the target relations
    Polynomial substitute(const Polynomial& f) const {
        Polynomial out = Polynomial::zero(target_.ambient());
        for (auto& [e, c] : f.terms()) {
            Polynomial term = Polynomial::constant(target_.ambient(), c);
            for (size_t i = 0; i < e.size(); ++i)
                for (int k = 0; k < e[i]; ++k) term = term * images_[i];
            out = out + term;
        }
        return out;
    }

    // this ∘ other (apply other first)
    RingMap compose(const RingMap& other) const {
        if (other.target() != source_)
            throw std::invalid_argument("compose: target/source mismatch");
        std::vector<Polynomial> imgs;
        for (auto& im : other.images()) imgs.push_back(apply_raw(im));
        return RingMap(other.source(), target_, std::move(imgs));
    }

    bool equals(const RingMap& o) const {
        if (source_ != o.source_ || target_ != o.target_) return false;
        for (size_t i = 0; i < images_.size(); ++i)
            if (!target_.elements_equal(images_[i], o.images_[i])) return false;
        return true;
    }

    bool is_identity() const {
        if (source_ != target_) return false;
        for (size_t i = 0; i < images_.size(); ++i)
            if (!target_.elements_equal(images_[i], Polynomial::variable(target_.ambient(), i)))
                return false;
        return true;
    }

private:
    Polynomial apply_raw(const Polynomial& f) const {
        Polynomial out = Polynomial::zero(target_.ambient());
        for (auto& [e, c] : f.terms()) {
            Polynomial term = Polynomial::constant(target_.ambient(), c);
            for (size_t i = 0; i < e.size(); ++i)
                for (int k = 0; k < e[i]; ++k) term = term * images_[i];
            out = out + term;
        }
        return target_.reduce(out);
    }

    QuotientRing source_;
    QuotientRing target_;
    std::vector<Polynomial> images_;
};

} // namespace gendiv
