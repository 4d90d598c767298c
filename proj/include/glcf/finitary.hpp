#pragma once

// Finitary matrices: identity plus a finite-support perturbation. These are
// the computable core of GL_fr; together with their scalar multiples they
// carry the whole product subgroup. The minimal bounding window is the
// canonical form, so equality is presentation independent.

#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "glcf/dense_matrix.hpp"
#include "glcf/field.hpp"

namespace glcf {

/// Sparse exact column vector: index -> nonzero entry.
using SparseVector = std::map<std::size_t, FieldElement>;

inline void sparse_add(SparseVector& v, std::size_t i, const FieldElement& x) {
    if (x.is_zero()) return;
    auto it = v.find(i);
    if (it == v.end()) {
        v.emplace(i, x);
        return;
    }
    it->second = it->second + x;
    if (it->second.is_zero()) v.erase(it);
}

class FinitaryMatrix {
public:
    using Support = std::map<std::pair<std::size_t, std::size_t>, FieldElement>;

    /// E + A from the sparse entries of A. Zero deltas are dropped, the
    /// window is re-minimized, and the leading corner must be invertible.
    FinitaryMatrix(const FieldSpec& spec, Support delta) : spec_(spec), delta_(std::move(delta)) {
        for (auto it = delta_.begin(); it != delta_.end();) {
            if (it->second.spec() != spec_) throw FieldMismatch("entry in the wrong field");
            if (it->second.is_zero()) it = delta_.erase(it);
            else ++it;
        }
        window_ = 0;
        for (const auto& [ij, v] : delta_)
            window_ = std::max(window_, std::max(ij.first, ij.second) + 1);
        if (corner(window_).det().is_zero())
            throw SingularMatrix("finitary corner is singular");
    }

    static FinitaryMatrix identity(const FieldSpec& spec) { return FinitaryMatrix(spec, {}); }

    /// E + c e_{ij}, i != j.
    static FinitaryMatrix transvection(const FieldSpec& spec, std::size_t i, std::size_t j,
                                       const FieldElement& c) {
        if (i == j) throw Error("transvection needs i != j");
        Support d;
        if (!c.is_zero()) d.emplace(std::make_pair(i, j), c);
        return FinitaryMatrix(spec, std::move(d));
    }

    static FinitaryMatrix diagonal(const FieldSpec& spec, const std::vector<FieldElement>& diag) {
        Support d;
        FieldElement one = FieldElement::one(spec);
        for (std::size_t i = 0; i < diag.size(); ++i)
            if (diag[i] != one) d.emplace(std::make_pair(i, i), diag[i] - one);
        return FinitaryMatrix(spec, std::move(d));
    }

    /// Permutation of finitely many indices: perm[i] = image of i.
    static FinitaryMatrix permutation(const FieldSpec& spec, const std::vector<std::size_t>& perm) {
        Support d;
        FieldElement one = FieldElement::one(spec);
        for (std::size_t j = 0; j < perm.size(); ++j) {
            if (perm[j] == j) continue;
            d.emplace(std::make_pair(perm[j], j), one);
            d.emplace(std::make_pair(j, j), -one);
        }
        return FinitaryMatrix(spec, std::move(d));
    }

    static FinitaryMatrix swap_rows(const FieldSpec& spec, std::size_t i, std::size_t j) {
        std::vector<std::size_t> perm(std::max(i, j) + 1);
        for (std::size_t k = 0; k < perm.size(); ++k) perm[k] = k;
        std::swap(perm[i], perm[j]);
        return permutation(spec, perm);
    }

    /// Leading n x n corner interpreted as E + A (n >= window for a faithful corner).
    static FinitaryMatrix from_corner(const DenseMatrix& corner) {
        Support d;
        FieldElement one = FieldElement::one(corner.spec());
        for (std::size_t i = 0; i < corner.size(); ++i)
            for (std::size_t j = 0; j < corner.size(); ++j) {
                FieldElement delta = i == j ? corner.at(i, j) - one : corner.at(i, j);
                if (!delta.is_zero()) d.emplace(std::make_pair(i, j), delta);
            }
        return FinitaryMatrix(corner.spec(), std::move(d));
    }

    const FieldSpec& spec() const { return spec_; }
    const Support& delta() const { return delta_; }
    std::size_t window() const { return window_; }
    bool is_identity() const { return delta_.empty(); }

    /// Entry (i, j) of the full matrix E + A.
    FieldElement entry(std::size_t i, std::size_t j) const {
        auto it = delta_.find({i, j});
        FieldElement base = i == j ? FieldElement::one(spec_) : FieldElement::zero(spec_);
        return it == delta_.end() ? base : base + it->second;
    }

    /// Leading n x n corner as a dense matrix (identity-padded beyond the window).
    DenseMatrix corner(std::size_t n) const {
        DenseMatrix m = DenseMatrix::identity(spec_, n);
        for (const auto& [ij, v] : delta_) {
            if (ij.first < n && ij.second < n)
                m.at(ij.first, ij.second) = m.at(ij.first, ij.second) + v;
        }
        return m;
    }

    FinitaryMatrix operator*(const FinitaryMatrix& o) const {
        if (o.spec_ != spec_) throw FieldMismatch();
        // (E+A)(E+B) = E + A + B + AB
        Support d = delta_;
        for (const auto& [ij, v] : o.delta_) add_entry(d, ij.first, ij.second, v);
        for (const auto& [ik, a] : delta_) {
            auto it = o.delta_.lower_bound({ik.second, 0});
            for (; it != o.delta_.end() && it->first.first == ik.second; ++it)
                add_entry(d, ik.first, it->first.second, a * it->second);
        }
        return FinitaryMatrix(spec_, std::move(d));
    }

    FinitaryMatrix inverse() const {
        return from_corner(corner(window_).inverse());
    }

    /// Determinant of the minimal-window corner; padding the window does not
    /// change it because the identity diagonal contributes factor 1.
    FieldElement corner_det() const { return corner(window_).det(); }

    /// Column j of the full matrix, as a sparse vector.
    SparseVector column(std::size_t j) const {
        SparseVector v;
        v.emplace(j, FieldElement::one(spec_));
        for (const auto& [ij, val] : delta_)
            if (ij.second == j) sparse_add(v, ij.first, val);
        return v;
    }

    /// (E + A) v, exact, sparse.
    SparseVector apply(const SparseVector& v) const {
        SparseVector out = v;
        for (const auto& [ij, a] : delta_) {
            auto it = v.find(ij.second);
            if (it != v.end()) sparse_add(out, ij.first, a * it->second);
        }
        return out;
    }

    bool operator==(const FinitaryMatrix& o) const {
        return spec_ == o.spec_ && delta_ == o.delta_;
    }
    bool operator!=(const FinitaryMatrix& o) const { return !(*this == o); }

    /// Canonical text key (used for visited sets in searches).
    std::string key() const {
        std::ostringstream os;
        for (const auto& [ij, v] : delta_) os << ij.first << "," << ij.second << ":" << v.to_string() << ";";
        return os.str();
    }

private:
    static void add_entry(Support& d, std::size_t i, std::size_t j, const FieldElement& v) {
        if (v.is_zero()) return;
        auto it = d.find({i, j});
        if (it == d.end()) {
            d.emplace(std::make_pair(i, j), v);
            return;
        }
        it->second = it->second + v;
        if (it->second.is_zero()) d.erase(it);
    }

    FieldSpec spec_;
    Support delta_;
    std::size_t window_ = 0;
};

/// alpha * h with h finitary and alpha a nonzero scalar. The split is unique:
/// the only scalar matrix that is also finitary is the identity, so two
/// scaled finitaries are equal iff both components agree.
class ScaledFinitary {
public:
    ScaledFinitary(FieldElement scalar, FinitaryMatrix body)
        : scalar_(std::move(scalar)), body_(std::move(body)) {
        if (scalar_.spec() != body_.spec()) throw FieldMismatch();
        if (scalar_.is_zero()) throw ZeroInput("scalar part must be a unit");
    }

    static ScaledFinitary scalar_matrix(const FieldSpec& spec, const FieldElement& alpha) {
        return ScaledFinitary(alpha, FinitaryMatrix::identity(spec));
    }

    const FieldSpec& spec() const { return body_.spec(); }
    const FieldElement& scalar() const { return scalar_; }
    const FinitaryMatrix& body() const { return body_; }

    bool is_identity() const { return scalar_.is_one() && body_.is_identity(); }
    bool is_scalar() const { return body_.is_identity(); }
    bool is_finitary() const { return scalar_.is_one(); }

    ScaledFinitary operator*(const ScaledFinitary& o) const {
        return ScaledFinitary(scalar_ * o.scalar_, body_ * o.body_);
    }

    ScaledFinitary inverse() const { return ScaledFinitary(scalar_.inv(), body_.inverse()); }

    SparseVector apply(const SparseVector& v) const {
        SparseVector out = body_.apply(v);
        for (auto& [i, x] : out) x = x * scalar_;
        return out;
    }

    SparseVector column(std::size_t j) const {
        SparseVector out = body_.column(j);
        for (auto& [i, x] : out) x = x * scalar_;
        return out;
    }

    bool operator==(const ScaledFinitary& o) const {
        return scalar_ == o.scalar_ && body_ == o.body_;
    }
    bool operator!=(const ScaledFinitary& o) const { return !(*this == o); }

private:
    FieldElement scalar_;
    FinitaryMatrix body_;
};

} // namespace glcf
