#pragma once

// Exact prime factorization of nonzero rationals by trial division.
// Supports membership tests in finitely generated subgroups of Q*.
// Desk-scale contract: |numerator| and denominator up to 10^12.

#include <cstdint>
#include <map>

#include "glcf/field.hpp"

namespace glcf {

/// sign * prod p^e, with every stored exponent nonzero.
struct RationalFactorization {
    int sign = 1; // +1 or -1
    std::map<std::int64_t, std::int64_t> exponents;

    bool operator==(const RationalFactorization& o) const {
        return sign == o.sign && exponents == o.exponents;
    }
};

namespace detail {

// Largest factor we trial-divide by; any cofactor <= bound^2 with no factor
// below the bound is itself prime.
inline constexpr std::int64_t kTrialLimit = 1'000'000;
inline constexpr std::int64_t kMagnitudeBound = kTrialLimit * kTrialLimit; // 10^12

inline void factor_positive(Integer n, int dir, std::map<std::int64_t, std::int64_t>& exps) {
    if (n > kMagnitudeBound)
        throw Error("factor_rational input exceeds the documented 10^12 bound: " + n.str());
    auto strip = [&](std::int64_t p) {
        while (n % p == 0) {
            n /= p;
            exps[p] += dir;
            if (exps[p] == 0) exps.erase(p);
        }
    };
    strip(2);
    for (std::int64_t d = 3; Integer(d) * d <= n; d += 2) strip(d);
    if (n > 1) {
        // no factor up to sqrt(n): the cofactor is prime
        std::int64_t p = static_cast<std::int64_t>(n);
        exps[p] += dir;
        if (exps[p] == 0) exps.erase(p);
    }
}

} // namespace detail

inline RationalFactorization factor_rational(const FieldElement& q) {
    if (!q.spec().is_rationals()) throw InvalidField("factor_rational requires a rational element");
    if (q.is_zero()) throw ZeroInput("cannot factor zero");
    RationalFactorization f;
    Integer num = numerator(q.rational());
    Integer den = denominator(q.rational());
    if (num < 0) {
        f.sign = -1;
        num = -num;
    }
    detail::factor_positive(num, +1, f.exponents);
    detail::factor_positive(den, -1, f.exponents);
    return f;
}

/// Exact inverse of factor_rational: sign * prod p^e.
inline FieldElement reconstruct(const FieldSpec& spec, const RationalFactorization& f) {
    Rational v = f.sign;
    for (const auto& [p, e] : f.exponents) {
        Rational pe = Rational(p);
        Integer a = e < 0 ? -e : e;
        Rational acc = 1, base = pe;
        while (a > 0) {
            if ((a & 1) != 0) acc *= base;
            base *= base;
            a >>= 1;
        }
        if (e < 0) acc = 1 / acc;
        v *= acc;
    }
    return FieldElement::from_rational(spec, v);
}

} // namespace glcf
