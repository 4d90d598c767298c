#pragma once

// Independent brute-force oracles and randomized property suites. The
// closure oracle enumerates a small ambient GL(n, F_p) and computes normal
// closures by fixpoint, entirely separate from the descriptor machinery it
// checks. Suites are deterministic given their seed and report replayable
// failures.

#include <array>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "glcf/lattice.hpp"

namespace glcf {

// ---------------------------------------------------------------------------
// Deterministic randomness (raw mt19937_64 outputs; no distribution objects,
// so streams are identical across platforms)

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }
    bool coin() { return below(2) == 1; }

    template <class T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<std::size_t>(below(v.size()))];
    }

private:
    std::mt19937_64 eng_;
};

// ---------------------------------------------------------------------------
// Random elements per lattice node (generator soundness is asserted: every
// sample classifies into the intended node before use)

namespace gen {

inline std::vector<FieldElement> entry_pool(const FieldSpec& spec) {
    std::vector<FieldElement> pool;
    if (spec.is_rationals()) {
        for (const char* t : {"1", "-1", "2", "-2", "3", "-3", "1/2", "-1/2", "1/3", "2/3", "3/2"})
            pool.push_back(FieldElement::parse(spec, t));
    } else {
        for (std::int64_t c = 1; c < spec.modulus(); ++c)
            pool.push_back(FieldElement::from_integer(spec, c));
    }
    return pool;
}

inline std::vector<FieldElement> scalar_pool(const FieldSpec& spec) {
    std::vector<FieldElement> pool;
    if (spec.is_rationals()) {
        for (const char* t : {"2", "3", "5", "-1", "-2", "1/2", "1/3", "2/3", "3/2", "-1/2"})
            pool.push_back(FieldElement::parse(spec, t));
    } else {
        for (std::int64_t c = 2; c < spec.modulus(); ++c)
            pool.push_back(FieldElement::from_integer(spec, c));
    }
    return pool;
}

/// Random determinant-1 finitary matrix: a short product of elementary
/// transvections inside the window. Never the identity.
inline FinitaryMatrix random_sl(Rng& rng, const FieldSpec& spec, std::size_t window) {
    auto pool = entry_pool(spec);
    for (int attempt = 0; attempt < 64; ++attempt) {
        FinitaryMatrix m = FinitaryMatrix::identity(spec);
        std::size_t letters = 1 + static_cast<std::size_t>(rng.below(4));
        for (std::size_t k = 0; k < letters; ++k) {
            std::size_t i = static_cast<std::size_t>(rng.below(window));
            std::size_t j = static_cast<std::size_t>(rng.below(window));
            if (i == j) j = (j + 1) % window;
            m = m * FinitaryMatrix::transvection(spec, i, j, rng.pick(pool));
        }
        if (!m.is_identity() && m.corner_det().is_one()) return m;
    }
    throw Error("internal: could not sample a nontrivial SL element");
}

/// Random finitary matrix with corner determinant != 1.
inline FinitaryMatrix random_gl(Rng& rng, const FieldSpec& spec, std::size_t window) {
    auto scalars = scalar_pool(spec);
    for (int attempt = 0; attempt < 64; ++attempt) {
        FieldElement u = rng.pick(scalars);
        if (u.is_one()) continue;
        std::vector<FieldElement> diag(1 + static_cast<std::size_t>(rng.below(window)),
                                       FieldElement::one(spec));
        diag[static_cast<std::size_t>(rng.below(diag.size()))] = u;
        FinitaryMatrix m = FinitaryMatrix::diagonal(spec, diag) * random_sl(rng, spec, window);
        if (!m.corner_det().is_one()) return m;
    }
    throw Error("internal: could not sample a GL-not-SL element");
}

inline Element random_node_element(Rng& rng, const FieldSpec& spec, LatticeNode node,
                                   std::size_t window) {
    auto scalars = scalar_pool(spec);
    auto non_one = [&]() {
        for (;;) {
            FieldElement u = rng.pick(scalars);
            if (!u.is_one()) return u;
        }
    };
    Element e = Element(FinitaryMatrix::identity(spec));
    switch (node) {
        case LatticeNode::Trivial: break;
        case LatticeNode::Dsc: e = Element(ScaledFinitary::scalar_matrix(spec, non_one())); break;
        case LatticeNode::SLfr: e = Element(random_sl(rng, spec, window)); break;
        case LatticeNode::GLfr: e = Element(random_gl(rng, spec, window)); break;
        case LatticeNode::DscSLfr:
            e = Element(ScaledFinitary(non_one(), random_sl(rng, spec, window)));
            break;
        case LatticeNode::DscGLfr:
            e = Element(ScaledFinitary(non_one(), random_gl(rng, spec, window)));
            break;
        case LatticeNode::GLcf: {
            // string with a non-scalar periodic tail
            auto pool = entry_pool(spec);
            DenseMatrix tail(spec, 2);
            tail.at(0, 1) = FieldElement::one(spec);
            tail.at(1, 0) = FieldElement::one(spec);
            if (rng.coin()) {
                tail = DenseMatrix::identity(spec, 2);
                tail.at(0, 1) = rng.pick(pool);
            }
            std::vector<DenseMatrix> blocks;
            if (rng.coin()) blocks.push_back(DenseMatrix::identity(spec, 1));
            e = Element(StringMatrix(spec, std::move(blocks), tail));
            break;
        }
    }
    if (classify_minimal_node(e) != node) throw Error("internal: node sample classified off-node");
    return e;
}

/// Random invertible dense block with entries from the pool.
inline DenseMatrix random_block(Rng& rng, const FieldSpec& spec, std::size_t size) {
    auto pool = entry_pool(spec);
    for (int attempt = 0; attempt < 256; ++attempt) {
        DenseMatrix b(spec, size);
        for (std::size_t i = 0; i < size; ++i)
            for (std::size_t j = 0; j < size; ++j)
                if (rng.below(3) != 0) b.at(i, j) = rng.pick(pool);
        if (!b.det().is_zero()) return b;
    }
    throw Error("internal: could not sample an invertible block");
}

/// Random string conjugator; tail kind alternates with the coin.
inline StringMatrix random_string(Rng& rng, const FieldSpec& spec, bool periodic_tail) {
    std::vector<DenseMatrix> blocks;
    std::size_t nblocks = rng.below(3);
    for (std::size_t k = 0; k < nblocks; ++k)
        blocks.push_back(random_block(rng, spec, 1 + rng.below(3)));
    if (periodic_tail)
        return StringMatrix(spec, std::move(blocks), random_block(rng, spec, 1 + rng.below(3)));
    return StringMatrix(spec, std::move(blocks));
}

/// Random upper-triangular explicit prefix with unit-pool diagonal.
inline UpperTriangularOracle random_triangular(Rng& rng, const FieldSpec& spec, std::size_t size) {
    auto pool = entry_pool(spec);
    auto units = scalar_pool(spec);
    DenseMatrix m(spec, size);
    for (std::size_t i = 0; i < size; ++i) {
        m.at(i, i) = rng.coin() ? FieldElement::one(spec) : rng.pick(units);
        for (std::size_t j = i + 1; j < size; ++j)
            if (rng.below(2) != 0) m.at(i, j) = rng.pick(pool);
    }
    return UpperTriangularOracle(spec, ExplicitPrefix{std::move(m)});
}

inline UpperTriangularOracle random_banded(Rng& rng, const FieldSpec& spec) {
    auto pool = entry_pool(spec);
    auto units = scalar_pool(spec);
    BandedRule rule;
    rule.period = 1 + rng.below(3);
    for (std::size_t k = 0; k < rule.period; ++k)
        rule.diag.push_back(rng.coin() ? FieldElement::one(spec) : rng.pick(units));
    std::size_t nbands = 1 + rng.below(2);
    for (std::size_t b = 1; b <= nbands; ++b) {
        std::vector<FieldElement> vals;
        for (std::size_t k = 0; k < rule.period; ++k)
            vals.push_back(rng.below(3) == 0 ? FieldElement::zero(spec) : rng.pick(pool));
        rule.bands[b] = std::move(vals);
    }
    return UpperTriangularOracle(spec, std::move(rule));
}

} // namespace gen

// ---------------------------------------------------------------------------
// Brute-force closure oracle over a fully enumerated GL(n, F_p)

namespace bf {

inline constexpr std::size_t kAmbientLimit = 20000;

struct Mat {
    std::uint8_t n = 0;
    std::array<std::uint8_t, 9> a{};

    bool operator==(const Mat& o) const { return n == o.n && a == o.a; }
};

inline Mat mat_identity(std::uint8_t n) {
    Mat m;
    m.n = n;
    for (std::uint8_t i = 0; i < n; ++i) m.a[static_cast<std::size_t>(i * n + i)] = 1;
    return m;
}

inline Mat mat_mul(const Mat& x, const Mat& y, int p) {
    Mat z;
    z.n = x.n;
    const int n = x.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            unsigned s = 0;
            for (int k = 0; k < n; ++k)
                s += unsigned(x.a[static_cast<std::size_t>(i * n + k)]) *
                     unsigned(y.a[static_cast<std::size_t>(k * n + j)]);
            z.a[static_cast<std::size_t>(i * n + j)] = static_cast<std::uint8_t>(s % unsigned(p));
        }
    return z;
}

inline int mat_det(const Mat& m, int p) {
    // expansion over the first row, n <= 3
    const int n = m.n;
    auto v = [&](int i, int j) { return int(m.a[static_cast<std::size_t>(i * n + j)]); };
    int d = 0;
    if (n == 1) d = v(0, 0);
    else if (n == 2) d = v(0, 0) * v(1, 1) - v(0, 1) * v(1, 0);
    else
        d = v(0, 0) * (v(1, 1) * v(2, 2) - v(1, 2) * v(2, 1)) -
            v(0, 1) * (v(1, 0) * v(2, 2) - v(1, 2) * v(2, 0)) +
            v(0, 2) * (v(1, 0) * v(2, 1) - v(1, 1) * v(2, 0));
    return ((d % p) + p) % p;
}

inline std::uint32_t mat_code(const Mat& m, int p) {
    std::uint32_t c = 0;
    for (int k = m.n * m.n - 1; k >= 0; --k)
        c = c * static_cast<std::uint32_t>(p) + m.a[static_cast<std::size_t>(k)];
    return c;
}

/// The fully enumerated ambient group GL(n, F_p) with inverse and conjugacy
/// class tables. Lookup is direct-addressed over the p^(n^2) code space.
struct Ambient {
    int n = 0, p = 0;
    std::vector<Mat> elements;
    std::vector<std::uint32_t> index;   // code -> position + 1 (0 = not invertible)
    std::vector<std::uint32_t> inverse; // position of x^{-1}
    std::vector<std::uint32_t> class_id;
    std::uint32_t classes = 0;

    std::uint32_t id_of(const Mat& m) const {
        std::uint32_t v = index[mat_code(m, p)];
        if (v == 0) throw Error("matrix is not invertible in the ambient group");
        return v - 1;
    }
};

inline const Ambient& ambient(int n, int p) {
    static std::map<std::pair<int, int>, Ambient> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, p);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    if (n < 1 || n > 3) throw AmbientTooLarge("ambient enumeration supports n <= 3");
    Ambient amb;
    amb.n = n;
    amb.p = p;
    std::size_t total = 1;
    for (int k = 0; k < n * n; ++k) total *= static_cast<std::size_t>(p);
    amb.index.assign(total, 0);
    for (std::size_t code = 0; code < total; ++code) {
        Mat m;
        m.n = static_cast<std::uint8_t>(n);
        std::size_t c = code;
        for (int k = 0; k < n * n; ++k) {
            m.a[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(c % static_cast<std::size_t>(p));
            c /= static_cast<std::size_t>(p);
        }
        if (mat_det(m, p) != 0) {
            amb.index[code] = static_cast<std::uint32_t>(amb.elements.size()) + 1;
            amb.elements.push_back(m);
            if (amb.elements.size() > kAmbientLimit)
                throw AmbientTooLarge("|GL(" + std::to_string(n) + ", F_" + std::to_string(p) +
                                      ")| exceeds " + std::to_string(kAmbientLimit));
        }
    }
    const std::uint32_t size = static_cast<std::uint32_t>(amb.elements.size());
    amb.inverse.assign(size, 0);
    Mat id = mat_identity(static_cast<std::uint8_t>(n));
    for (std::uint32_t i = 0; i < size; ++i) {
        // repeated powers reach the inverse (element orders are tiny here)
        Mat acc = amb.elements[i];
        Mat prev = id;
        while (!(acc == id)) {
            prev = acc;
            acc = mat_mul(acc, amb.elements[i], p);
        }
        amb.inverse[i] = amb.id_of(prev);
    }
    // conjugacy classes by orbit sweep
    amb.class_id.assign(size, UINT32_MAX);
    for (std::uint32_t i = 0; i < size; ++i) {
        if (amb.class_id[i] != UINT32_MAX) continue;
        std::uint32_t cid = amb.classes++;
        amb.class_id[i] = cid;
        for (std::uint32_t h = 0; h < size; ++h) {
            Mat conj = mat_mul(mat_mul(amb.elements[amb.inverse[h]], amb.elements[i], p),
                               amb.elements[h], p);
            std::uint32_t ci = amb.id_of(conj);
            if (amb.class_id[ci] == UINT32_MAX) amb.class_id[ci] = cid;
        }
    }
    return cache.emplace(key, std::move(amb)).first->second;
}

namespace detail_bf {

/// Closure-at-rest certificate: products, inverses, and conjugation by a
/// verified generating set of the ambient leave the set fixed; together with
/// product closure that proves closure under conjugation by every element.
/// Verified once per distinct member set (memoized on content).
inline void verify_closed(const Ambient& amb, const std::vector<std::uint32_t>& sorted_members,
                          const std::vector<bool>& in_set) {
    static std::map<std::tuple<int, int, std::size_t, std::uint64_t>, bool> done;
    static std::mutex mu;
    std::uint64_t h = 1469598103934665603ull;
    for (auto x : sorted_members) {
        h ^= x;
        h *= 1099511628211ull;
    }
    auto key = std::make_tuple(amb.n, amb.p, sorted_members.size(), h);
    {
        std::lock_guard<std::mutex> lock(mu);
        if (done.count(key)) return;
    }
    // conjugating generators: all of GL(n,p) is generated by the elementary
    // transvections plus one diagonal unit; verify that set generates by
    // reproducing the whole ambient, then use it for the conjugation check
    std::vector<std::uint32_t> ambient_gens;
    for (int i = 0; i < amb.n; ++i)
        for (int j = 0; j < amb.n; ++j) {
            if (i == j) continue;
            for (int c = 1; c < amb.p; ++c) {
                Mat t = mat_identity(static_cast<std::uint8_t>(amb.n));
                t.a[static_cast<std::size_t>(i * amb.n + j)] = static_cast<std::uint8_t>(c);
                ambient_gens.push_back(amb.id_of(t));
            }
        }
    for (int u = 2; u < amb.p; ++u) {
        Mat d = mat_identity(static_cast<std::uint8_t>(amb.n));
        d.a[0] = static_cast<std::uint8_t>(u);
        ambient_gens.push_back(amb.id_of(d));
    }
    {
        std::vector<bool> reached(amb.elements.size(), false);
        std::vector<std::uint32_t> work{amb.id_of(mat_identity(static_cast<std::uint8_t>(amb.n)))};
        reached[work[0]] = true;
        for (std::size_t head = 0; head < work.size(); ++head)
            for (auto g : ambient_gens) {
                std::uint32_t y = amb.id_of(mat_mul(amb.elements[work[head]], amb.elements[g], amb.p));
                if (!reached[y]) {
                    reached[y] = true;
                    work.push_back(y);
                }
            }
        if (work.size() != amb.elements.size())
            throw Error("internal: ambient generating set failed to generate");
    }
    for (auto x : sorted_members) {
        if (!in_set[amb.inverse[x]]) throw Error("internal: closure not inverse-closed");
        for (auto y : sorted_members)
            if (!in_set[amb.id_of(mat_mul(amb.elements[x], amb.elements[y], amb.p))])
                throw Error("internal: closure not product-closed");
        for (auto g : ambient_gens) {
            Mat conj = mat_mul(mat_mul(amb.elements[amb.inverse[g]], amb.elements[x], amb.p),
                               amb.elements[g], amb.p);
            if (!in_set[amb.id_of(conj)])
                throw Error("internal: closure not conjugation-closed");
        }
    }
    std::lock_guard<std::mutex> lock(mu);
    done[key] = true;
}

} // namespace detail_bf

/// Smallest subset of the ambient group containing the generators and closed
/// under products, inverses, and conjugation by every group element. Grown
/// from the full conjugate set (conjugation by every ambient element) by a
/// product fixpoint, then certified closed by an independent no-growth pass.
inline std::vector<std::uint32_t> brute_force_closure(const Ambient& amb,
                                                      const std::vector<std::uint32_t>& gens) {
    const std::uint32_t size = static_cast<std::uint32_t>(amb.elements.size());
    std::vector<bool> in_set(size, false);
    std::vector<std::uint32_t> members;
    std::vector<std::uint32_t> seeds;
    auto add = [&](std::uint32_t x) {
        if (!in_set[x]) {
            in_set[x] = true;
            members.push_back(x);
        }
    };
    add(amb.id_of(mat_identity(static_cast<std::uint8_t>(amb.n))));
    for (auto g : gens)
        for (std::uint32_t h = 0; h < size; ++h) {
            for (auto base : {g, amb.inverse[g]}) {
                Mat conj = mat_mul(mat_mul(amb.elements[amb.inverse[h]], amb.elements[base], amb.p),
                                   amb.elements[h], amb.p);
                std::uint32_t ci = amb.id_of(conj);
                if (!in_set[ci]) {
                    add(ci);
                    seeds.push_back(ci);
                }
            }
        }
    for (std::size_t head = 0; head < members.size(); ++head)
        for (auto s : seeds)
            add(amb.id_of(mat_mul(amb.elements[members[head]], amb.elements[s], amb.p)));
    std::vector<std::uint32_t> out = members;
    std::sort(out.begin(), out.end());
    detail_bf::verify_closed(amb, out, in_set);
    return out;
}

/// Singleton closures memoized per conjugacy class; the closure of g depends
/// only on the class of g.
inline const std::vector<std::uint32_t>& closure_of_singleton(const Ambient& amb, std::uint32_t g) {
    static std::map<std::tuple<int, int, std::uint32_t>, std::vector<std::uint32_t>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(amb.n, amb.p, amb.class_id[g]);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    return cache.emplace(key, brute_force_closure(amb, {g})).first->second;
}

/// Embed an ambient matrix at window n as a finitary element.
inline FinitaryMatrix embed(const Ambient& amb, std::uint32_t x, const FieldSpec& spec) {
    DenseMatrix d(spec, static_cast<std::size_t>(amb.n));
    for (int i = 0; i < amb.n; ++i)
        for (int j = 0; j < amb.n; ++j)
            d.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
                FieldElement::from_integer(spec, amb.elements[x].a[static_cast<std::size_t>(i * amb.n + j)]);
    return FinitaryMatrix::from_corner(d);
}

} // namespace bf

// ---------------------------------------------------------------------------
// Suites

struct SuiteFailure {
    std::uint64_t trial = 0;
    std::string message;
};

struct SuiteReport {
    std::string suite;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::string params;
    std::vector<SuiteFailure> failures;
    double wall_seconds = 0.0;

    bool passed() const { return failures.empty(); }

    std::string to_text() const {
        std::ostringstream os;
        os << "suite " << suite << ": " << (passed() ? "PASS" : "FAIL") << " (" << trials
           << " trials, seed " << seed << ", " << wall_seconds << "s";
        if (!params.empty()) os << ", " << params;
        os << ")";
        for (const auto& f : failures)
            os << "\n  trial " << f.trial << ": " << f.message;
        return os.str();
    }
};

struct SuiteParams {
    std::uint64_t trials = 1000;
    std::uint64_t seed = 42;
    std::size_t window = 8;
    FieldSpec field = FieldSpec::rationals();
};

namespace suites {

using Check = std::function<void(Rng&, const SuiteParams&, std::uint64_t trial, SuiteReport&)>;

inline void fail(SuiteReport& rep, std::uint64_t trial, const std::string& msg) {
    if (rep.failures.size() < 32) rep.failures.push_back({trial, msg});
}

// --- field axioms -----------------------------------------------------------

inline void field_axioms(Rng& rng, const SuiteParams& p, std::uint64_t trial, SuiteReport& rep) {
    auto pool = gen::entry_pool(p.field);
    pool.push_back(FieldElement::zero(p.field));
    FieldElement a = rng.pick(pool), b = rng.pick(pool), c = rng.pick(pool);
    if ((a + b) + c != a + (b + c)) fail(rep, trial, "associativity of + broke");
    if ((a * b) * c != a * (b * c)) fail(rep, trial, "associativity of * broke");
    if (a + b != b + a || a * b != b * a) fail(rep, trial, "commutativity broke");
    if (a * (b + c) != a * b + a * c) fail(rep, trial, "distributivity broke");
    if (!a.is_zero() && a.inv().inv() != a) fail(rep, trial, "inv is not an involution");
    if (!a.is_zero() && (a * a.inv()) != FieldElement::one(p.field))
        fail(rep, trial, "a * a^{-1} != 1");
}

inline void factor_roundtrip(Rng& rng, const SuiteParams& p, std::uint64_t trial, SuiteReport& rep) {
    FieldSpec q = FieldSpec::rationals();
    Integer num = Integer(1) + Integer(rng.below(1000000));
    Integer den = Integer(1) + Integer(rng.below(1000000));
    if (rng.coin()) num = -num;
    FieldElement x = FieldElement::from_rational(q, Rational(num, den));
    auto f = factor_rational(x);
    for (const auto& [prime, e] : f.exponents) {
        if (e == 0) fail(rep, trial, "zero exponent stored");
        if (!FieldSpec::is_prime(prime)) fail(rep, trial, "non-prime factor " + std::to_string(prime));
    }
    if (reconstruct(q, f) != x) fail(rep, trial, "reconstruction failed for " + x.to_string());
}

// --- unit groups vs exhaustive enumeration ----------------------------------

inline bool enumerate_membership(const std::vector<FieldElement>& gens, const FieldElement& x,
                                 int bound) {
    // all products with exponents in [-bound, bound]^k
    std::vector<int> e(gens.size(), -bound);
    const FieldSpec& spec = x.spec();
    for (;;) {
        FieldElement prod = FieldElement::one(spec);
        for (std::size_t i = 0; i < gens.size(); ++i) prod = prod * gens[i].pow(e[i]);
        if (prod == x) return true;
        std::size_t k = 0;
        while (k < e.size() && e[k] == bound) e[k++] = -bound;
        if (k == e.size()) return false;
        ++e[k];
    }
}

inline void unit_oracle(Rng& rng, const SuiteParams& p, std::uint64_t trial, SuiteReport& rep) {
    FieldSpec q = FieldSpec::rationals();
    const std::array<std::int64_t, 3> primes{2, 3, 5};
    std::size_t k = 1 + rng.below(3);
    std::vector<FieldElement> gens;
    for (std::size_t i = 0; i < k; ++i) {
        Rational v = rng.coin() ? Rational(-1) : Rational(1);
        for (std::int64_t prm : primes) {
            std::int64_t e = rng.range(-3, 3);
            Rational pe = prm;
            for (std::int64_t t = 1; t < (e < 0 ? -e : e); ++t) pe *= prm;
            if (e > 0) v *= pe;
            else if (e < 0) v /= pe;
        }
        gens.push_back(FieldElement::from_rational(q, v));
    }
    auto h = UnitSubgroup::generated(q, gens);

    // query classes with provable expected answers
    FieldElement x = FieldElement::one(q);
    int cls = static_cast<int>(rng.below(3));
    if (cls == 0) {
        // member: generator product with witness inside the enumeration window
        for (const auto& g : gens) x = x * g.pow(rng.range(-2, 2));
    } else if (cls == 1) {
        // non-member: smuggle in a prime outside the support
        for (const auto& g : gens) x = x * g.pow(rng.range(-1, 1));
        x = x * FieldElement::from_integer(q, 7);
    } else {
        // sign probe: -product is a non-member when every generator is positive
        for (const auto& g : gens) x = x * g.pow(rng.range(-1, 1));
        x = -x;
        bool all_positive = true;
        for (const auto& g : gens)
            if (numerator(g.rational()) < 0) all_positive = false;
        if (!all_positive) return; // not provable without the oracle; skip
    }
    bool enumerated = enumerate_membership(gens, x, 5);
    auto member = h.membership(x);
    if (member.has_value() != enumerated) {
        fail(rep, trial, "membership(" + x.to_string() + ") = " +
                             (member ? "true" : "false") + " but enumeration says " +
                             (enumerated ? "true" : "false"));
    }
}

inline void unit_properties(Rng& rng, const SuiteParams& p, std::uint64_t trial, SuiteReport& rep) {
    const bool use_fp = trial % 2 == 1;
    FieldSpec spec = use_fp ? FieldSpec::prime(7) : FieldSpec::rationals();
    auto pool = gen::scalar_pool(spec);
    std::size_t k = 1 + rng.below(3);
    std::vector<FieldElement> gens;
    for (std::size_t i = 0; i < k; ++i) gens.push_back(rng.pick(pool));
    auto h = UnitSubgroup::generated(spec, gens);

    // canonicalization is independent of presentation order
    std::vector<FieldElement> shuffled = gens;
    if (shuffled.size() > 1) std::swap(shuffled[0], shuffled[shuffled.size() - 1]);
    if (UnitSubgroup::generated(spec, shuffled) != h)
        fail(rep, trial, "canonical form depends on generator order");

    // every generator passes its own membership test
    for (const auto& g : gens)
        if (!h.contains(g)) fail(rep, trial, "generator fails its own membership");

    // membership is a congruence on sampled members
    FieldElement x = FieldElement::one(spec), y = FieldElement::one(spec);
    for (const auto& g : gens) {
        x = x * g.pow(rng.range(-2, 2));
        y = y * g.pow(rng.range(-2, 2));
    }
    if (!h.contains(x * y)) fail(rep, trial, "product of members not a member");
    if (!h.contains(x.inv())) fail(rep, trial, "inverse of member not a member");

    // joins contain both sides' generators
    auto h2 = UnitSubgroup::generated(spec, {rng.pick(pool)});
    auto join = h.join(h2);
    for (const auto& g : gens)
        if (!join.contains(g)) fail(rep, trial, "join lost a generator");
}

} // namespace suites

} // namespace glcf
