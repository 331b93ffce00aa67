#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace gendiv {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline bool is_prime_number(long long p) {
    if (p < 2) return false;
    for (long long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

// Coefficient field: Q (characteristic 0) or F_p.
// Elements are carried as Rational values; for F_p they are kept
// normalized to integers in [0, p).
class CoeffField {
public:
    static CoeffField rationals() { return CoeffField(0); }

    static CoeffField prime_field(long long p) {
        if (!is_prime_number(p))
            throw std::invalid_argument("prime_field: " + std::to_string(p) + " is not prime");
        return CoeffField(p);
    }

    long long characteristic() const { return p_; }
    bool is_rationals() const { return p_ == 0; }

    bool operator==(const CoeffField& o) const { return p_ == o.p_; }
    bool operator!=(const CoeffField& o) const { return p_ != o.p_; }

    // Canonical representative of a rational literal in this field.
    Rational normalize(const Rational& a) const {
        if (p_ == 0) return a;
        Integer num = boost::multiprecision::numerator(a) % p_;
        Integer den = boost::multiprecision::denominator(a) % p_;
        if (num < 0) num += p_;
        if (den < 0) den += p_;
        if (den == 0) throw std::domain_error("denominator divisible by the characteristic");
        long long n = num.convert_to<long long>();
        long long d = den.convert_to<long long>();
        return Rational((n * inv_mod(d)) % p_);
    }

    Rational add(const Rational& a, const Rational& b) const { return normalize(a + b); }
    Rational sub(const Rational& a, const Rational& b) const { return normalize(a - b); }
    Rational mul(const Rational& a, const Rational& b) const { return normalize(a * b); }
    Rational neg(const Rational& a) const { return normalize(-a); }

    Rational inv(const Rational& a) const {
        if (a == 0) throw std::domain_error("division by zero");
        if (p_ == 0) return 1 / a;
        Rational n = normalize(a);
        long long v = boost::multiprecision::numerator(n).convert_to<long long>();
        return Rational(inv_mod(v));
    }

    Rational div(const Rational& a, const Rational& b) const { return mul(a, inv(b)); }

    std::string to_string() const {
        return p_ == 0 ? std::string("Q") : "F" + std::to_string(p_);
    }

private:
    explicit CoeffField(long long p) : p_(p) {}

    long long inv_mod(long long a) const {
        long long t = 0, nt = 1, r = p_, nr = a % p_;
        while (nr != 0) {
            long long q = r / nr;
            long long tmp = t - q * nt; t = nt; nt = tmp;
            tmp = r - q * nr; r = nr; nr = tmp;
        }
        if (r != 1) throw std::domain_error("element not invertible mod p");
        return t < 0 ? t + p_ : t;
    }

    long long p_;
};

inline std::string rational_to_string(const Rational& a) {
    std::string s = boost::multiprecision::numerator(a).str();
    if (boost::multiprecision::denominator(a) != 1)
        s += "/" + boost::multiprecision::denominator(a).str();
    return s;
}

} // namespace gendiv
