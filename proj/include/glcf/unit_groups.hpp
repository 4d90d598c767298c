#pragma once

// Finitely generated subgroups of K* and of K* x K*, with decidable
// membership (witnessed by exponent vectors), joins, and canonical forms.
// Over Q a subgroup lives in {+-1} + Z^(primes) and membership is integer
// linear algebra (Hermite normal form); over GF(p) it is discrete-log
// arithmetic in a cyclic group of order p-1.
//
// The five named lattice nodes need the non-finitely-generated subgroups
// "all of K*" in one or both coordinates; those are carried as symbolic
// full-coordinate flags and behave exactly like extra (infinite) generators.

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "glcf/factorization.hpp"
#include "glcf/field.hpp"
#include "glcf/integer_lattice.hpp"

namespace glcf {

namespace detail {

inline constexpr std::int64_t kDlogLimit = 1 << 20; // exhaustive dlog contract

inline std::int64_t primitive_root(std::int64_t p) {
    if (p == 2) return 1;
    std::vector<std::int64_t> prime_factors;
    std::int64_t m = p - 1;
    for (std::int64_t d = 2; d * d <= m; ++d)
        if (m % d == 0) {
            prime_factors.push_back(d);
            while (m % d == 0) m /= d;
        }
    if (m > 1) prime_factors.push_back(m);
    for (std::int64_t r = 2; r < p; ++r) {
        bool ok = true;
        for (std::int64_t q : prime_factors) {
            // r^((p-1)/q) mod p
            std::int64_t e = (p - 1) / q, base = r % p, acc = 1;
            while (e > 0) {
                if (e & 1) acc = (acc * base) % p;
                base = (base * base) % p;
                e >>= 1;
            }
            if (acc == 1) { ok = false; break; }
        }
        if (ok) return r;
    }
    throw Error("no primitive root found (non-prime modulus?)");
}

/// Full dlog table for GF(p), base = smallest primitive root, built by
/// exhaustively walking the powers. table[x] = log_r(x) for x in [1, p).
inline const std::vector<std::uint32_t>& dlog_table(std::int64_t p) {
    static std::map<std::int64_t, std::vector<std::uint32_t>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(p);
    if (it != cache.end()) return it->second;
    if (p >= kDlogLimit)
        throw Error("discrete logs are exhaustive-search only; modulus must be < 2^20");
    std::vector<std::uint32_t> table(static_cast<std::size_t>(p), 0);
    std::int64_t r = primitive_root(p);
    std::int64_t x = 1;
    for (std::int64_t k = 0; k < p - 1; ++k) {
        table[static_cast<std::size_t>(x)] = static_cast<std::uint32_t>(k);
        x = (x * r) % p;
    }
    return cache.emplace(p, std::move(table)).first->second;
}

inline std::int64_t dlog(std::int64_t p, std::int64_t x) { return dlog_table(p)[static_cast<std::size_t>(x)]; }

inline Integer dot(const ZVector& a, const ZVector& b) {
    Integer s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace detail

/// A finitely generated subgroup of K*, or symbolically all of K*.
class UnitSubgroup {
public:
    static UnitSubgroup generated(const FieldSpec& spec, std::vector<FieldElement> gens) {
        return UnitSubgroup(spec, std::move(gens), false);
    }
    static UnitSubgroup trivial(const FieldSpec& spec) { return UnitSubgroup(spec, {}, false); }
    static UnitSubgroup full(const FieldSpec& spec) {
        if (spec.is_prime_field()) {
            auto r = FieldElement::from_integer(spec, detail::primitive_root(spec.modulus()));
            return UnitSubgroup(spec, {r}, true);
        }
        return UnitSubgroup(spec, {}, true);
    }

    const FieldSpec& spec() const { return spec_; }
    const std::vector<FieldElement>& generators() const { return gens_; }
    bool is_full_flag() const { return full_; }

    /// Membership with a witness: exponents e with prod g_i^{e_i} = x.
    /// A symbolic full subgroup over Q answers true with an empty witness.
    std::optional<ZVector> membership(const FieldElement& x) const {
        if (x.spec() != spec_) throw FieldMismatch();
        if (x.is_zero()) throw ZeroInput();
        if (spec_.is_rationals() && full_) return ZVector{};
        if (spec_.is_prime_field()) return membership_fp(x);
        return membership_q(x);
    }

    bool contains(const FieldElement& x) const { return membership(x).has_value(); }

    UnitSubgroup join(const UnitSubgroup& other) const {
        if (other.spec_ != spec_) throw FieldMismatch();
        std::vector<FieldElement> gens = gens_;
        gens.insert(gens.end(), other.gens_.begin(), other.gens_.end());
        return UnitSubgroup(spec_, std::move(gens), full_ || other.full_);
    }

    bool is_trivial() const {
        if (spec_.is_prime_field()) return fp_divisor_ == spec_.modulus() - 1;
        return !full_ && hnf_.empty() && !has_minus_one_;
    }

    bool is_full() const {
        if (spec_.is_prime_field()) return fp_divisor_ == 1;
        return full_;
    }

    /// Canonical presentation-independent key; equal subgroups and only
    /// equal subgroups share it.
    std::string canonical_key() const {
        std::ostringstream os;
        os << "U[" << spec_.to_string() << "]";
        if (spec_.is_prime_field()) {
            os << "d=" << fp_divisor_;
            return os.str();
        }
        if (full_) {
            os << "full";
            return os.str();
        }
        os << "m1=" << has_minus_one_ << ";p=";
        for (auto p : support_) os << p << ",";
        os << ";L=";
        for (std::size_t i = 0; i < hnf_.size(); ++i) {
            for (const auto& v : hnf_[i]) os << v << ",";
            if (!has_minus_one_) os << "s" << chi_[i];
            os << ";";
        }
        return os.str();
    }

    bool operator==(const UnitSubgroup& o) const {
        return spec_ == o.spec_ && canonical_key() == o.canonical_key();
    }
    bool operator!=(const UnitSubgroup& o) const { return !(*this == o); }

private:
    UnitSubgroup(const FieldSpec& spec, std::vector<FieldElement> gens, bool full)
        : spec_(spec), gens_(std::move(gens)), full_(full) {
        for (const auto& g : gens_) {
            if (g.spec() != spec_) throw FieldMismatch("generator in the wrong field");
            if (g.is_zero()) throw ZeroInput("zero generator");
        }
        if (spec_.is_prime_field()) canonicalize_fp();
        else canonicalize_q();
    }

    // --- GF(p): everything reduces to the cyclic group of order p-1 ---

    void canonicalize_fp() {
        const std::int64_t p = spec_.modulus();
        ZMatrix rows{{Integer(p - 1)}};
        if (full_) rows.push_back({Integer(1)});
        for (const auto& g : gens_) rows.push_back({Integer(detail::dlog(p, g.residue()))});
        auto h = row_hnf(rows);
        fp_divisor_ = h.empty() ? p - 1 : static_cast<std::int64_t>(h[0][0]);
    }

    std::optional<ZVector> membership_fp(const FieldElement& x) const {
        const std::int64_t p = spec_.modulus();
        const std::size_t k = gens_.size();
        // one congruence mod p-1, auxiliary column absorbs the modulus
        ZMatrix a(1, ZVector(k + 1, 0));
        for (std::size_t i = 0; i < k; ++i) a[0][i] = Integer(detail::dlog(p, gens_[i].residue()));
        a[0][k] = p - 1;
        ZVector b{Integer(detail::dlog(p, x.residue()))};
        auto sol = solve_integer_system(a, b);
        if (!sol.feasible) return std::nullopt;
        ZVector e(sol.solution.begin(), sol.solution.begin() + static_cast<std::ptrdiff_t>(k));
        verify_witness(e, x);
        return e;
    }

    // --- Q: sign bit + exponent lattice over the prime support ---

    void canonicalize_q() {
        if (full_) return;
        std::vector<RationalFactorization> facts;
        facts.reserve(gens_.size());
        for (const auto& g : gens_) {
            facts.push_back(factor_rational(g));
            for (const auto& [p, e] : facts.back().exponents) {
                if (std::find(support_.begin(), support_.end(), p) == support_.end())
                    support_.push_back(p);
            }
        }
        std::sort(support_.begin(), support_.end());

        ZMatrix rows;
        for (const auto& f : facts) rows.push_back(exponent_vector(f));
        hnf_ = row_hnf(rows);

        // does the subgroup contain -1?
        has_minus_one_ = solve_q(ZVector(support_.size(), 0), 1).has_value();
        if (!has_minus_one_) {
            // sign character on the canonical basis, well defined because
            // every lattice relation has even sign parity here
            for (const auto& basis_row : hnf_) {
                auto e = solve_q_lattice_only(basis_row);
                chi_.push_back(static_cast<int>(sign_parity(e)));
            }
        }
    }

    ZVector exponent_vector(const RationalFactorization& f) const {
        ZVector v(support_.size(), 0);
        for (const auto& [p, e] : f.exponents) {
            auto it = std::lower_bound(support_.begin(), support_.end(), p);
            v[static_cast<std::size_t>(it - support_.begin())] = e;
        }
        return v;
    }

    Integer sign_parity(const ZVector& e) const {
        Integer s = 0;
        for (std::size_t i = 0; i < gens_.size(); ++i)
            if (numerator(gens_[i].rational()) < 0) s += e[i];
        return ((s % 2) + 2) % 2;
    }

    /// Solve prod g_i^{e_i} = target over the prime rows and the sign row.
    std::optional<ZVector> solve_q(const ZVector& target_exps, int target_sign_bit) const {
        const std::size_t k = gens_.size();
        const std::size_t np = support_.size();
        ZMatrix a(np + 1, ZVector(k + 1, 0));
        for (std::size_t i = 0; i < k; ++i) {
            auto f = factor_rational(gens_[i]);
            auto v = exponent_vector(f);
            for (std::size_t r = 0; r < np; ++r) a[r][i] = v[r];
            a[np][i] = f.sign < 0 ? 1 : 0;
        }
        a[np][k] = 2; // sign row lives mod 2
        ZVector b(np + 1, 0);
        for (std::size_t r = 0; r < np; ++r) b[r] = target_exps[r];
        b[np] = target_sign_bit;
        auto sol = solve_integer_system(a, b);
        if (!sol.feasible) return std::nullopt;
        return ZVector(sol.solution.begin(), sol.solution.begin() + static_cast<std::ptrdiff_t>(k));
    }

    /// Solve only the prime rows (sign ignored); target must be in the lattice.
    ZVector solve_q_lattice_only(const ZVector& target_exps) const {
        const std::size_t k = gens_.size();
        const std::size_t np = support_.size();
        ZMatrix a(np, ZVector(k, 0));
        for (std::size_t i = 0; i < k; ++i) {
            auto v = exponent_vector(factor_rational(gens_[i]));
            for (std::size_t r = 0; r < np; ++r) a[r][i] = v[r];
        }
        auto sol = solve_integer_system(a, target_exps);
        if (!sol.feasible) throw Error("internal: lattice basis row not solvable");
        return sol.solution;
    }

    std::optional<ZVector> membership_q(const FieldElement& x) const {
        auto fx = factor_rational(x);
        // a prime outside the support cannot be generated
        for (const auto& [p, e] : fx.exponents)
            if (!std::binary_search(support_.begin(), support_.end(), p)) return std::nullopt;
        auto e = solve_q(exponent_vector(fx), fx.sign < 0 ? 1 : 0);
        if (e) verify_witness(*e, x);
        return e;
    }

    void verify_witness(const ZVector& e, const FieldElement& x) const {
        FieldElement prod = FieldElement::one(spec_);
        for (std::size_t i = 0; i < gens_.size(); ++i) prod = prod * gens_[i].pow(e[i]);
        if (prod != x) throw Error("internal: membership witness failed verification");
    }

    FieldSpec spec_;
    std::vector<FieldElement> gens_;
    bool full_ = false;

    // canonical data
    std::vector<std::int64_t> support_; // Q: sorted prime support
    ZMatrix hnf_;                       // Q: lattice basis in HNF
    bool has_minus_one_ = false;        // Q
    std::vector<int> chi_;              // Q: sign character on the basis
    std::int64_t fp_divisor_ = 0;       // GF(p): subgroup = <r^d>, d | p-1
};

/// A finitely generated subgroup of K* x K*, with optional symbolic
/// K*-full coordinates. Membership is a single coupled exponent system:
/// one vector must witness both coordinates simultaneously.
class PairSubgroup {
public:
    using Pair = std::pair<FieldElement, FieldElement>;

    static PairSubgroup generated(const FieldSpec& spec, std::vector<Pair> gens,
                                  bool full_first = false, bool full_second = false) {
        return PairSubgroup(spec, std::move(gens), full_first, full_second);
    }
    static PairSubgroup trivial(const FieldSpec& spec) { return generated(spec, {}); }

    const FieldSpec& spec() const { return spec_; }
    const std::vector<Pair>& generators() const { return gens_; }
    bool full_first() const { return full1_; }
    bool full_second() const { return full2_; }

    std::optional<ZVector> membership(const Pair& x) const {
        if (x.first.spec() != spec_ || x.second.spec() != spec_) throw FieldMismatch();
        if (x.first.is_zero() || x.second.is_zero()) throw ZeroInput();
        if (spec_.is_prime_field()) return membership_fp(x);
        return membership_q(x);
    }

    bool contains(const Pair& x) const { return membership(x).has_value(); }

    PairSubgroup join(const PairSubgroup& other) const {
        if (other.spec_ != spec_) throw FieldMismatch();
        std::vector<Pair> gens = gens_;
        gens.insert(gens.end(), other.gens_.begin(), other.gens_.end());
        return PairSubgroup(spec_, std::move(gens), full1_ || other.full1_, full2_ || other.full2_);
    }

    bool is_trivial() const {
        return !full1_ && !full2_ &&
               std::all_of(gens_.begin(), gens_.end(),
                           [](const Pair& g) { return g.first.is_one() && g.second.is_one(); });
    }

    std::string canonical_key() const;

    bool operator==(const PairSubgroup& o) const {
        return spec_ == o.spec_ && canonical_key() == o.canonical_key();
    }
    bool operator!=(const PairSubgroup& o) const { return !(*this == o); }

private:
    PairSubgroup(const FieldSpec& spec, std::vector<Pair> gens, bool f1, bool f2)
        : spec_(spec), gens_(std::move(gens)), full1_(f1), full2_(f2) {
        for (const auto& [a, b] : gens_) {
            if (a.spec() != spec_ || b.spec() != spec_) throw FieldMismatch("generator in the wrong field");
            if (a.is_zero() || b.is_zero()) throw ZeroInput("zero generator coordinate");
        }
    }

    // membership over GF(p): congruences mod p-1, one per non-full coordinate
    std::optional<ZVector> membership_fp(const Pair& x) const {
        const std::int64_t p = spec_.modulus();
        const std::size_t k = gens_.size();
        std::vector<int> coords;
        if (!full1_) coords.push_back(0);
        if (!full2_) coords.push_back(1);
        if (coords.empty()) return ZVector(k, 0);
        ZMatrix a(coords.size(), ZVector(k + coords.size(), 0));
        ZVector b(coords.size(), 0);
        for (std::size_t r = 0; r < coords.size(); ++r) {
            for (std::size_t i = 0; i < k; ++i) {
                const FieldElement& g = coords[r] == 0 ? gens_[i].first : gens_[i].second;
                a[r][i] = Integer(detail::dlog(p, g.residue()));
            }
            a[r][k + r] = p - 1;
            b[r] = Integer(detail::dlog(p, coords[r] == 0 ? x.first.residue() : x.second.residue()));
        }
        auto sol = solve_integer_system(a, b);
        if (!sol.feasible) return std::nullopt;
        ZVector e(sol.solution.begin(), sol.solution.begin() + static_cast<std::ptrdiff_t>(k));
        verify_witness(e, x);
        return e;
    }

    std::optional<ZVector> membership_q(const Pair& x) const {
        const std::size_t k = gens_.size();
        if (full1_ && full2_) return ZVector(k, 0);

        std::vector<int> coords;
        if (!full1_) coords.push_back(0);
        if (!full2_) coords.push_back(1);

        // per-coordinate prime supports from the generators
        std::vector<std::vector<std::int64_t>> supports(2);
        std::vector<std::vector<RationalFactorization>> facts(2);
        for (int c : {0, 1}) {
            for (const auto& g : gens_) {
                facts[static_cast<std::size_t>(c)].push_back(
                    factor_rational(c == 0 ? g.first : g.second));
                for (const auto& [p, e] : facts[static_cast<std::size_t>(c)].back().exponents) {
                    auto& sup = supports[static_cast<std::size_t>(c)];
                    if (std::find(sup.begin(), sup.end(), p) == sup.end()) sup.push_back(p);
                }
            }
            std::sort(supports[static_cast<std::size_t>(c)].begin(), supports[static_cast<std::size_t>(c)].end());
        }

        std::vector<RationalFactorization> fx{factor_rational(x.first), factor_rational(x.second)};
        for (int c : coords)
            for (const auto& [p, e] : fx[static_cast<std::size_t>(c)].exponents)
                if (!std::binary_search(supports[static_cast<std::size_t>(c)].begin(),
                                        supports[static_cast<std::size_t>(c)].end(), p))
                    return std::nullopt;

        std::size_t rows = 0;
        for (int c : coords) rows += supports[static_cast<std::size_t>(c)].size() + 1;
        const std::size_t naux = coords.size(); // one mod-2 sign column per active coordinate
        ZMatrix a(rows, ZVector(k + naux, 0));
        ZVector b(rows, 0);
        std::size_t row = 0, aux = 0;
        for (int c : coords) {
            const auto& sup = supports[static_cast<std::size_t>(c)];
            const auto& fc = facts[static_cast<std::size_t>(c)];
            for (std::size_t pi = 0; pi < sup.size(); ++pi, ++row) {
                for (std::size_t i = 0; i < k; ++i) {
                    auto it = fc[i].exponents.find(sup[pi]);
                    if (it != fc[i].exponents.end()) a[row][i] = it->second;
                }
                auto it = fx[static_cast<std::size_t>(c)].exponents.find(sup[pi]);
                b[row] = it == fx[static_cast<std::size_t>(c)].exponents.end() ? 0 : it->second;
            }
            for (std::size_t i = 0; i < k; ++i) a[row][i] = fc[i].sign < 0 ? 1 : 0;
            a[row][k + aux] = 2;
            b[row] = fx[static_cast<std::size_t>(c)].sign < 0 ? 1 : 0;
            ++row; ++aux;
        }
        auto sol = solve_integer_system(a, b);
        if (!sol.feasible) return std::nullopt;
        ZVector e(sol.solution.begin(), sol.solution.begin() + static_cast<std::ptrdiff_t>(k));
        verify_witness(e, x);
        return e;
    }

    void verify_witness(const ZVector& e, const Pair& x) const {
        FieldElement p1 = FieldElement::one(spec_), p2 = p1;
        for (std::size_t i = 0; i < gens_.size(); ++i) {
            p1 = p1 * gens_[i].first.pow(e[i]);
            p2 = p2 * gens_[i].second.pow(e[i]);
        }
        if ((!full1_ && p1 != x.first) || (!full2_ && p2 != x.second))
            throw Error("internal: pair membership witness failed verification");
    }

    FieldSpec spec_;
    std::vector<Pair> gens_;
    bool full1_ = false, full2_ = false;
};

inline std::string PairSubgroup::canonical_key() const {
    std::ostringstream os;
    os << "P[" << spec_.to_string() << "]";
    if (spec_.is_prime_field()) {
        const std::int64_t p = spec_.modulus();
        ZMatrix rows{{Integer(p - 1), Integer(0)}, {Integer(0), Integer(p - 1)}};
        if (full1_) rows.push_back({1, 0});
        if (full2_) rows.push_back({0, 1});
        for (const auto& g : gens_)
            rows.push_back({Integer(detail::dlog(p, g.first.residue())),
                            Integer(detail::dlog(p, g.second.residue()))});
        os << "L=";
        for (const auto& r : row_hnf(rows)) os << r[0] << "," << r[1] << ";";
        return os.str();
    }
    if (full1_ && full2_) {
        os << "full";
        return os.str();
    }
    if (full1_ || full2_) {
        // one free coordinate: the subgroup is K* x (projection), so the
        // canonical data is the projection's
        std::vector<FieldElement> proj;
        for (const auto& g : gens_) proj.push_back(full1_ ? g.second : g.first);
        os << (full1_ ? "full1x" : "xfull2") << UnitSubgroup::generated(spec_, proj).canonical_key();
        return os.str();
    }
    // plain finitely generated case: doubled lattice + sign data
    std::vector<std::vector<std::int64_t>> supports(2);
    std::vector<std::vector<RationalFactorization>> facts(2);
    for (int c : {0, 1}) {
        for (const auto& g : gens_) {
            facts[static_cast<std::size_t>(c)].push_back(factor_rational(c == 0 ? g.first : g.second));
            for (const auto& [p, e] : facts[static_cast<std::size_t>(c)].back().exponents) {
                auto& sup = supports[static_cast<std::size_t>(c)];
                if (std::find(sup.begin(), sup.end(), p) == sup.end()) sup.push_back(p);
            }
        }
        std::sort(supports[static_cast<std::size_t>(c)].begin(), supports[static_cast<std::size_t>(c)].end());
    }
    const std::size_t n1 = supports[0].size(), n2 = supports[1].size();
    const std::size_t k = gens_.size();
    auto gen_vector = [&](std::size_t i) {
        ZVector v(n1 + n2, 0);
        for (const auto& [p, e] : facts[0][i].exponents) {
            auto it = std::lower_bound(supports[0].begin(), supports[0].end(), p);
            v[static_cast<std::size_t>(it - supports[0].begin())] = e;
        }
        for (const auto& [p, e] : facts[1][i].exponents) {
            auto it = std::lower_bound(supports[1].begin(), supports[1].end(), p);
            v[n1 + static_cast<std::size_t>(it - supports[1].begin())] = e;
        }
        return v;
    };
    ZMatrix rows;
    for (std::size_t i = 0; i < k; ++i) rows.push_back(gen_vector(i));
    auto hnf = row_hnf(rows);

    // sign kernel: which pure sign pairs (s1, s2) pair with the zero vector
    ZMatrix a(n1 + n2 + 2, ZVector(k + 2, 0));
    for (std::size_t i = 0; i < k; ++i) {
        auto v = gen_vector(i);
        for (std::size_t r = 0; r < n1 + n2; ++r) a[r][i] = v[r];
        a[n1 + n2][i] = facts[0][i].sign < 0 ? 1 : 0;
        a[n1 + n2 + 1][i] = facts[1][i].sign < 0 ? 1 : 0;
    }
    a[n1 + n2][k] = 2;
    a[n1 + n2 + 1][k + 1] = 2;
    auto feasible = [&](const ZVector& lattice_target, int s1, int s2,
                        ZVector* witness = nullptr) {
        ZVector b(n1 + n2 + 2, 0);
        for (std::size_t r = 0; r < n1 + n2; ++r) b[r] = lattice_target[r];
        b[n1 + n2] = s1;
        b[n1 + n2 + 1] = s2;
        auto sol = solve_integer_system(a, b);
        if (sol.feasible && witness) *witness = sol.solution;
        return sol.feasible;
    };
    ZVector zero(n1 + n2, 0);
    std::vector<std::pair<int, int>> sign_kernel{{0, 0}};
    for (auto [s1, s2] : {std::pair{0, 1}, std::pair{1, 0}, std::pair{1, 1}})
        if (feasible(zero, s1, s2)) sign_kernel.emplace_back(s1, s2);

    os << "m=";
    for (auto [s1, s2] : sign_kernel) os << s1 << s2 << ",";
    os << ";p1=";
    for (auto p : supports[0]) os << p << ",";
    os << ";p2=";
    for (auto p : supports[1]) os << p << ",";
    os << ";L=";
    for (const auto& basis_row : hnf) {
        for (const auto& v : basis_row) os << v << ",";
        // canonical sign coset: lexicographically smallest reachable pair
        for (auto [s1, s2] : {std::pair{0, 0}, std::pair{0, 1}, std::pair{1, 0}, std::pair{1, 1}}) {
            if (feasible(basis_row, s1, s2)) {
                os << "s" << s1 << s2;
                break;
            }
        }
        os << ";";
    }
    return os.str();
}

} // namespace glcf
