#pragma once

// Small dense matrices over a FieldSpec, used for corners, string blocks,
// and triangular prefixes. Exact Gaussian elimination throughout.

#include <cstddef>
#include <string>
#include <vector>

#include "glcf/field.hpp"

namespace glcf {

class DenseMatrix {
public:
    DenseMatrix(const FieldSpec& spec, std::size_t n)
        : spec_(spec), n_(n), a_(n * n, FieldElement::zero(spec)) {}

    static DenseMatrix identity(const FieldSpec& spec, std::size_t n) {
        DenseMatrix m(spec, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = FieldElement::one(spec);
        return m;
    }

    static DenseMatrix from_rows(const FieldSpec& spec,
                                 const std::vector<std::vector<FieldElement>>& rows) {
        DenseMatrix m(spec, rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows.size()) throw Error("dense matrix rows must be square");
            for (std::size_t j = 0; j < rows.size(); ++j) m.at(i, j) = rows[i][j];
        }
        return m;
    }

    const FieldSpec& spec() const { return spec_; }
    std::size_t size() const { return n_; }

    FieldElement& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const FieldElement& at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    DenseMatrix operator*(const DenseMatrix& o) const {
        if (o.n_ != n_ || o.spec_ != spec_) throw FieldMismatch("dense product shape/field mismatch");
        DenseMatrix out(spec_, n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t k = 0; k < n_; ++k) {
                const FieldElement& v = at(i, k);
                if (v.is_zero()) continue;
                for (std::size_t j = 0; j < n_; ++j) {
                    if (o.at(k, j).is_zero()) continue;
                    out.at(i, j) = out.at(i, j) + v * o.at(k, j);
                }
            }
        return out;
    }

    bool operator==(const DenseMatrix& o) const {
        return n_ == o.n_ && spec_ == o.spec_ && a_ == o.a_;
    }
    bool operator!=(const DenseMatrix& o) const { return !(*this == o); }

    bool is_identity() const {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                if (i == j ? !at(i, j).is_one() : !at(i, j).is_zero()) return false;
        return true;
    }

    bool is_upper_triangular() const {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (!at(i, j).is_zero()) return false;
        return true;
    }

    /// True iff the matrix is c * identity for some scalar c (returned).
    bool is_scalar(FieldElement* scalar_out = nullptr) const {
        if (n_ == 0) return false;
        FieldElement c = at(0, 0);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                if (i == j ? at(i, j) != c : !at(i, j).is_zero()) return false;
        if (scalar_out) *scalar_out = c;
        return true;
    }

    FieldElement det() const {
        DenseMatrix m = *this;
        FieldElement d = FieldElement::one(spec_);
        for (std::size_t col = 0; col < n_; ++col) {
            std::size_t pivot = col;
            while (pivot < n_ && m.at(pivot, col).is_zero()) ++pivot;
            if (pivot == n_) return FieldElement::zero(spec_);
            if (pivot != col) {
                for (std::size_t j = 0; j < n_; ++j) std::swap(m.at(pivot, j), m.at(col, j));
                d = -d;
            }
            d = d * m.at(col, col);
            FieldElement inv = m.at(col, col).inv();
            for (std::size_t i = col + 1; i < n_; ++i) {
                if (m.at(i, col).is_zero()) continue;
                FieldElement f = m.at(i, col) * inv;
                for (std::size_t j = col; j < n_; ++j)
                    m.at(i, j) = m.at(i, j) - f * m.at(col, j);
            }
        }
        return d;
    }

    std::size_t rank() const {
        DenseMatrix m = *this;
        std::size_t r = 0;
        for (std::size_t col = 0; col < n_ && r < n_; ++col) {
            std::size_t pivot = r;
            while (pivot < n_ && m.at(pivot, col).is_zero()) ++pivot;
            if (pivot == n_) continue;
            if (pivot != r)
                for (std::size_t j = 0; j < n_; ++j) std::swap(m.at(pivot, j), m.at(r, j));
            FieldElement inv = m.at(r, col).inv();
            for (std::size_t i = r + 1; i < n_; ++i) {
                if (m.at(i, col).is_zero()) continue;
                FieldElement f = m.at(i, col) * inv;
                for (std::size_t j = col; j < n_; ++j)
                    m.at(i, j) = m.at(i, j) - f * m.at(r, j);
            }
            ++r;
        }
        return r;
    }

    DenseMatrix inverse() const {
        DenseMatrix m = *this;
        DenseMatrix inv = identity(spec_, n_);
        for (std::size_t col = 0; col < n_; ++col) {
            std::size_t pivot = col;
            while (pivot < n_ && m.at(pivot, col).is_zero()) ++pivot;
            if (pivot == n_) throw SingularMatrix();
            if (pivot != col)
                for (std::size_t j = 0; j < n_; ++j) {
                    std::swap(m.at(pivot, j), m.at(col, j));
                    std::swap(inv.at(pivot, j), inv.at(col, j));
                }
            FieldElement f = m.at(col, col).inv();
            for (std::size_t j = 0; j < n_; ++j) {
                m.at(col, j) = m.at(col, j) * f;
                inv.at(col, j) = inv.at(col, j) * f;
            }
            for (std::size_t i = 0; i < n_; ++i) {
                if (i == col || m.at(i, col).is_zero()) continue;
                FieldElement g = m.at(i, col);
                for (std::size_t j = 0; j < n_; ++j) {
                    m.at(i, j) = m.at(i, j) - g * m.at(col, j);
                    inv.at(i, j) = inv.at(i, j) - g * inv.at(col, j);
                }
            }
        }
        return inv;
    }

    std::string to_string() const {
        std::string s = "[";
        for (std::size_t i = 0; i < n_; ++i) {
            s += i ? "; " : "";
            for (std::size_t j = 0; j < n_; ++j) s += (j ? "," : "") + at(i, j).to_string();
        }
        return s + "]";
    }

private:
    FieldSpec spec_;
    std::size_t n_;
    std::vector<FieldElement> a_;
};

} // namespace glcf
