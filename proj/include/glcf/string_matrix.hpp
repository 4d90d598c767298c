#pragma once

// Strings: infinite block diagonal matrices with finite invertible blocks.
// The shape is the sequence of block sizes; after the listed blocks the tail
// is either the identity (shape continues 1,1,...) or one invertible block
// repeated forever.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "glcf/dense_matrix.hpp"
#include "glcf/finitary.hpp"

namespace glcf {

class StringMatrix {
public:
    /// Identity tail.
    StringMatrix(const FieldSpec& spec, std::vector<DenseMatrix> blocks)
        : StringMatrix(spec, std::move(blocks), std::nullopt) {}

    /// Periodic tail: `tail` repeats forever after the listed blocks.
    StringMatrix(const FieldSpec& spec, std::vector<DenseMatrix> blocks,
                 std::optional<DenseMatrix> tail)
        : spec_(spec), blocks_(std::move(blocks)), tail_(std::move(tail)) {
        for (const auto& b : blocks_) {
            if (b.spec() != spec_) throw FieldMismatch("block in the wrong field");
            if (b.size() == 0) throw Error("empty string block");
            if (b.det().is_zero()) throw SingularMatrix("string block is singular");
        }
        if (tail_) {
            if (tail_->spec() != spec_) throw FieldMismatch("tail block in the wrong field");
            if (tail_->size() == 0) throw Error("empty tail block");
            if (tail_->det().is_zero()) throw SingularMatrix("tail block is singular");
            if (tail_->is_identity()) tail_.reset(); // identity tail, canonical form
        }
        prefix_ = 0;
        for (const auto& b : blocks_) prefix_ += b.size();
    }

    const FieldSpec& spec() const { return spec_; }
    const std::vector<DenseMatrix>& blocks() const { return blocks_; }
    bool has_periodic_tail() const { return tail_.has_value(); }
    const DenseMatrix& tail_block() const {
        if (!tail_) throw Error("identity tail has no block");
        return *tail_;
    }
    /// Total size of the listed blocks.
    std::size_t prefix_size() const { return prefix_; }

    /// Block sizes; the tail contributes its size repeated (1 for identity).
    std::size_t shape_at(std::size_t block_index) const {
        if (block_index < blocks_.size()) return blocks_[block_index].size();
        return tail_ ? tail_->size() : 1;
    }

    /// Smallest partial sum of the shape that is >= n (at least one block).
    std::size_t block_boundary_at_least(std::size_t n) const {
        std::size_t sum = 0, i = 0;
        do {
            sum += shape_at(i++);
        } while (sum < n);
        return sum;
    }

    StringMatrix inverse() const {
        std::vector<DenseMatrix> inv_blocks;
        inv_blocks.reserve(blocks_.size());
        for (const auto& b : blocks_) inv_blocks.push_back(b.inverse());
        std::optional<DenseMatrix> inv_tail;
        if (tail_) inv_tail = tail_->inverse();
        return StringMatrix(spec_, std::move(inv_blocks), std::move(inv_tail));
    }

    /// The block covering index i, with its starting offset. For identity
    /// tail positions the block is absent.
    std::pair<std::size_t, const DenseMatrix*> block_at(std::size_t i) const {
        std::size_t start = 0;
        for (const auto& b : blocks_) {
            if (i < start + b.size()) return {start, &b};
            start += b.size();
        }
        if (!tail_) return {i, nullptr};
        std::size_t b = tail_->size();
        std::size_t offset = (i - start) / b;
        return {start + offset * b, &*tail_};
    }

    FieldElement entry(std::size_t i, std::size_t j) const {
        auto [start, block] = block_at(j);
        if (!block)
            return i == j ? FieldElement::one(spec_) : FieldElement::zero(spec_);
        if (i < start || i >= start + block->size()) return FieldElement::zero(spec_);
        return block->at(i - start, j - start);
    }

    SparseVector column(std::size_t j) const {
        SparseVector v;
        auto [start, block] = block_at(j);
        if (!block) {
            v.emplace(j, FieldElement::one(spec_));
            return v;
        }
        for (std::size_t i = 0; i < block->size(); ++i)
            sparse_add(v, start + i, block->at(i, j - start));
        return v;
    }

    SparseVector apply(const SparseVector& v) const {
        SparseVector out;
        for (const auto& [j, x] : v) {
            auto col = column(j);
            for (const auto& [i, c] : col) sparse_add(out, i, c * x);
        }
        return out;
    }

    /// Leading n x n dense projection (block diagonal truncates cleanly only
    /// at block boundaries; entries reaching outside [0, n) are dropped).
    DenseMatrix leading(std::size_t n) const {
        DenseMatrix m(spec_, n);
        for (std::size_t j = 0; j < n; ++j)
            for (const auto& [i, v] : column(j))
                if (i < n) m.at(i, j) = v;
        return m;
    }

    /// True iff the string equals alpha * E for some scalar (returned).
    bool is_scalar(FieldElement* scalar_out = nullptr) const {
        FieldElement alpha = tail_ ? tail_->at(0, 0) : FieldElement::one(spec_);
        if (tail_) {
            FieldElement c = FieldElement::zero(spec_);
            if (!tail_->is_scalar(&c) || c != alpha) return false;
        }
        for (const auto& b : blocks_) {
            FieldElement c = FieldElement::zero(spec_);
            if (!b.is_scalar(&c) || c != alpha) return false;
        }
        if (scalar_out) *scalar_out = alpha;
        return true;
    }

    /// Exact conversion to alpha * finitary. Possible iff the tail is scalar
    /// (identity tail is the scalar-1 case); nullopt otherwise.
    std::optional<ScaledFinitary> as_scaled_finitary() const {
        FieldElement alpha = FieldElement::one(spec_);
        if (tail_) {
            if (!tail_->is_scalar(&alpha)) return std::nullopt;
        }
        FieldElement inv_alpha = alpha.inv();
        FinitaryMatrix::Support d;
        FieldElement one = FieldElement::one(spec_);
        std::size_t start = 0;
        for (const auto& b : blocks_) {
            for (std::size_t i = 0; i < b.size(); ++i)
                for (std::size_t j = 0; j < b.size(); ++j) {
                    FieldElement scaled = b.at(i, j) * inv_alpha;
                    FieldElement delta = i == j ? scaled - one : scaled;
                    if (!delta.is_zero()) d.emplace(std::make_pair(start + i, start + j), delta);
                }
            start += b.size();
        }
        return ScaledFinitary(alpha, FinitaryMatrix(spec_, std::move(d)));
    }

    bool operator==(const StringMatrix& o) const {
        return spec_ == o.spec_ && blocks_ == o.blocks_ && tail_ == o.tail_;
    }

private:
    FieldSpec spec_;
    std::vector<DenseMatrix> blocks_;
    std::optional<DenseMatrix> tail_;
    std::size_t prefix_ = 0;
};

} // namespace glcf
