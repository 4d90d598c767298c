#pragma once

// Exact scalar arithmetic over the base field K: arbitrary-precision
// rationals or a prime field GF(p). Every matrix entry in the library is a
// FieldElement; there is no floating point anywhere.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <utility>

#include "glcf/errors.hpp"

namespace glcf {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class FieldKind { Rationals, PrimeField };

/// Which field we are working over. Immutable value type.
class FieldSpec {
public:
    static FieldSpec rationals() { return FieldSpec(FieldKind::Rationals, 0); }

    /// GF(p). The modulus is checked for primality by trial division;
    /// moduli are desk-scale by contract (p < 2^31).
    static FieldSpec prime(std::int64_t p) {
        if (p < 2 || p >= (std::int64_t{1} << 31) || !is_prime(p))
            throw InvalidField("modulus must be a prime below 2^31, got " + std::to_string(p));
        return FieldSpec(FieldKind::PrimeField, p);
    }

    FieldKind kind() const { return kind_; }
    bool is_rationals() const { return kind_ == FieldKind::Rationals; }
    bool is_prime_field() const { return kind_ == FieldKind::PrimeField; }
    std::int64_t modulus() const { return p_; }

    bool operator==(const FieldSpec& o) const { return kind_ == o.kind_ && p_ == o.p_; }
    bool operator!=(const FieldSpec& o) const { return !(*this == o); }

    std::string to_string() const {
        return is_rationals() ? "Q" : "F" + std::to_string(p_);
    }

    static bool is_prime(std::int64_t n) {
        if (n < 2) return false;
        if (n % 2 == 0) return n == 2;
        for (std::int64_t d = 3; d * d <= n; d += 2)
            if (n % d == 0) return false;
        return true;
    }

private:
    FieldSpec(FieldKind kind, std::int64_t p) : kind_(kind), p_(p) {}
    FieldKind kind_;
    std::int64_t p_;
};

/// One exact scalar. Rationals are kept normalized (coprime, positive
/// denominator — cpp_rational maintains that); residues are kept in [0, p).
class FieldElement {
public:
    FieldElement() : spec_(FieldSpec::rationals()) {}

    static FieldElement zero(const FieldSpec& spec) { return FieldElement(spec); }
    static FieldElement one(const FieldSpec& spec) { return from_integer(spec, 1); }

    static FieldElement from_integer(const FieldSpec& spec, std::int64_t n) {
        FieldElement e(spec);
        if (spec.is_rationals()) {
            e.q_ = n;
        } else {
            std::int64_t p = spec.modulus();
            e.r_ = ((n % p) + p) % p;
        }
        return e;
    }

    static FieldElement from_rational(const FieldSpec& spec, Rational q) {
        if (!spec.is_rationals()) throw InvalidField("rational value in a prime field");
        FieldElement e(spec);
        e.q_ = std::move(q);
        return e;
    }

    static FieldElement from_residue(const FieldSpec& spec, const Integer& n) {
        if (!spec.is_prime_field()) throw InvalidField("residue value over the rationals");
        Integer p = spec.modulus();
        Integer r = ((n % p) + p) % p;
        FieldElement e(spec);
        e.r_ = static_cast<std::int64_t>(r);
        return e;
    }

    /// Parse "n", "-n" or "n/d" over Q; a decimal residue over GF(p).
    static FieldElement parse(const FieldSpec& spec, const std::string& text);

    const FieldSpec& spec() const { return spec_; }

    bool is_zero() const { return spec_.is_rationals() ? q_.is_zero() : r_ == 0; }
    bool is_one() const { return spec_.is_rationals() ? q_ == 1 : r_ == 1; }

    const Rational& rational() const {
        if (!spec_.is_rationals()) throw InvalidField("not a rational element");
        return q_;
    }
    std::int64_t residue() const {
        if (!spec_.is_prime_field()) throw InvalidField("not a prime-field element");
        return r_;
    }

    FieldElement operator+(const FieldElement& o) const {
        check_same(o);
        FieldElement out(spec_);
        if (spec_.is_rationals()) out.q_ = q_ + o.q_;
        else out.r_ = (r_ + o.r_) % spec_.modulus();
        return out;
    }

    FieldElement operator-(const FieldElement& o) const {
        check_same(o);
        FieldElement out(spec_);
        if (spec_.is_rationals()) out.q_ = q_ - o.q_;
        else out.r_ = ((r_ - o.r_) % spec_.modulus() + spec_.modulus()) % spec_.modulus();
        return out;
    }

    FieldElement operator*(const FieldElement& o) const {
        check_same(o);
        FieldElement out(spec_);
        if (spec_.is_rationals()) out.q_ = q_ * o.q_;
        else out.r_ = mulmod(r_, o.r_, spec_.modulus());
        return out;
    }

    FieldElement operator/(const FieldElement& o) const { return *this * o.inv(); }

    FieldElement operator-() const {
        FieldElement out(spec_);
        if (spec_.is_rationals()) out.q_ = -q_;
        else out.r_ = (spec_.modulus() - r_) % spec_.modulus();
        return out;
    }

    FieldElement inv() const {
        if (is_zero()) throw DivisionByZero();
        FieldElement out(spec_);
        if (spec_.is_rationals()) out.q_ = 1 / q_;
        else out.r_ = invmod(r_, spec_.modulus());
        return out;
    }

    /// Exact integer power; negative exponents go through inv().
    FieldElement pow(const Integer& e) const {
        if (e < 0) return inv().pow(-e);
        FieldElement base = *this, acc = one(spec_);
        Integer k = e;
        while (k > 0) {
            if ((k & 1) != 0) acc = acc * base;
            base = base * base;
            k >>= 1;
        }
        return acc;
    }

    bool operator==(const FieldElement& o) const {
        if (spec_ != o.spec_) return false;
        return spec_.is_rationals() ? q_ == o.q_ : r_ == o.r_;
    }
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

    /// Representational order so elements can key ordered containers.
    bool operator<(const FieldElement& o) const {
        if (spec_.kind() != o.spec_.kind()) return spec_.kind() < o.spec_.kind();
        if (spec_.is_prime_field()) {
            if (spec_.modulus() != o.spec_.modulus()) return spec_.modulus() < o.spec_.modulus();
            return r_ < o.r_;
        }
        return q_ < o.q_;
    }

    std::string to_string() const {
        if (spec_.is_prime_field()) return std::to_string(r_);
        std::string s = numerator(q_).str();
        if (denominator(q_) != 1) s += "/" + denominator(q_).str();
        return s;
    }

private:
    explicit FieldElement(const FieldSpec& spec) : spec_(spec) {}

    void check_same(const FieldElement& o) const {
        if (spec_ != o.spec_)
            throw FieldMismatch("cannot combine " + spec_.to_string() + " with " + o.spec_.to_string());
    }

    static std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t p) {
        // p < 2^31, so the product fits in 63 bits.
        return (a * b) % p;
    }

    static std::int64_t invmod(std::int64_t a, std::int64_t p) {
        // extended Euclid
        std::int64_t t = 0, new_t = 1, r = p, new_r = a;
        while (new_r != 0) {
            std::int64_t q = r / new_r;
            std::int64_t tmp = t - q * new_t;
            t = new_t; new_t = tmp;
            tmp = r - q * new_r;
            r = new_r; new_r = tmp;
        }
        return t < 0 ? t + p : t;
    }

    FieldSpec spec_;
    Rational q_;
    std::int64_t r_ = 0;
};

inline FieldElement FieldElement::parse(const FieldSpec& spec, const std::string& text) {
    if (text.empty()) throw ParseError("empty field element");
    if (spec.is_rationals()) {
        auto slash = text.find('/');
        try {
            if (slash == std::string::npos) return from_rational(spec, Rational(Integer(text)));
            Integer num(text.substr(0, slash));
            Integer den(text.substr(slash + 1));
            if (den == 0) throw ParseError("zero denominator in '" + text + "'");
            return from_rational(spec, Rational(num, den));
        } catch (const std::exception& e) {
            throw ParseError("bad rational '" + text + "': " + e.what());
        }
    }
    try {
        return from_residue(spec, Integer(text));
    } catch (const std::exception& e) {
        throw ParseError("bad residue '" + text + "': " + e.what());
    }
}

} // namespace glcf
