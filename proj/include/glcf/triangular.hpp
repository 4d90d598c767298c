#pragma once

// Upper-triangular column oracles. A column-finite upper-triangular matrix
// with nonzero diagonal is invertible inside the column-finite group, and
// column j of the inverse is determined by back-substitution on the leading
// (j+1) x (j+1) block. Presentations:
//   ExplicitPrefix — dense upper-triangular N x N, identity beyond;
//   BandedRule     — periodic diagonal and band entries, certified bandwidth;
//   OnesRule       — u[i][j] = 1 for all j >= i; no bandwidth certificate
//                    (the pathological case for window determination).
// Column probes are counted so tests can assert column-finiteness bounds.

#include <atomic>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "glcf/dense_matrix.hpp"
#include "glcf/finitary.hpp"

namespace glcf {

struct ExplicitPrefix {
    DenseMatrix prefix;
};

struct BandedRule {
    std::size_t period = 1;
    std::vector<FieldElement> diag;                        // diag[i % period], nonzero
    std::map<std::size_t, std::vector<FieldElement>> bands; // offset -> value[i % period] at (i, i+offset)
};

struct OnesRule {};

class UpperTriangularOracle {
public:
    UpperTriangularOracle(const FieldSpec& spec, ExplicitPrefix p)
        : spec_(spec), pres_(std::move(p)), probes_(std::make_shared<std::atomic<std::uint64_t>>(0)) {
        const auto& m = std::get<ExplicitPrefix>(pres_).prefix;
        if (m.spec() != spec_) throw FieldMismatch();
        if (!m.is_upper_triangular()) throw Error("prefix must be upper triangular");
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m.at(i, i).is_zero()) throw SingularMatrix("triangular oracle needs a nonzero diagonal");
    }

    UpperTriangularOracle(const FieldSpec& spec, BandedRule r)
        : spec_(spec), pres_(std::move(r)), probes_(std::make_shared<std::atomic<std::uint64_t>>(0)) {
        auto& rule = std::get<BandedRule>(pres_);
        if (rule.period == 0 || rule.diag.size() != rule.period)
            throw Error("banded rule needs one diagonal value per period slot");
        for (const auto& d : rule.diag)
            if (d.is_zero()) throw SingularMatrix("triangular oracle needs a nonzero diagonal");
        for (const auto& [off, vals] : rule.bands) {
            if (off == 0) throw Error("band offset 0 is the diagonal");
            if (vals.size() != rule.period) throw Error("band values must match the period");
        }
    }

    UpperTriangularOracle(const FieldSpec& spec, OnesRule r)
        : spec_(spec), pres_(r), probes_(std::make_shared<std::atomic<std::uint64_t>>(0)) {}

    const FieldSpec& spec() const { return spec_; }

    bool is_explicit_prefix() const { return std::holds_alternative<ExplicitPrefix>(pres_); }
    bool is_banded() const { return std::holds_alternative<BandedRule>(pres_); }
    bool is_ones_rule() const { return std::holds_alternative<OnesRule>(pres_); }
    const ExplicitPrefix& explicit_prefix() const { return std::get<ExplicitPrefix>(pres_); }
    const BandedRule& banded_rule() const { return std::get<BandedRule>(pres_); }

    /// Columns beyond max(window, this bound) of a conjugated finitary
    /// element are untouched: prefix size, or window + bandwidth. The ones
    /// rule certifies nothing.
    std::optional<std::size_t> window_bound(std::size_t g_window) const {
        if (const auto* p = std::get_if<ExplicitPrefix>(&pres_))
            return std::max(g_window, p->prefix.size());
        if (const auto* r = std::get_if<BandedRule>(&pres_)) {
            std::size_t bw = r->bands.empty() ? 0 : r->bands.rbegin()->first;
            return g_window + bw;
        }
        return std::nullopt;
    }

    /// Column j; support lies in rows 0..j with nonzero diagonal entry.
    /// The rule is pure: repeated probes return identical data.
    SparseVector column(std::size_t j) const {
        probes_->fetch_add(1, std::memory_order_relaxed);
        SparseVector v;
        if (const auto* p = std::get_if<ExplicitPrefix>(&pres_)) {
            const auto& m = p->prefix;
            if (j >= m.size()) {
                v.emplace(j, FieldElement::one(spec_));
                return v;
            }
            for (std::size_t i = 0; i <= j; ++i) sparse_add(v, i, m.at(i, j));
            return v;
        }
        if (const auto* r = std::get_if<BandedRule>(&pres_)) {
            sparse_add(v, j, r->diag[j % r->period]);
            for (const auto& [off, vals] : r->bands)
                if (j >= off) sparse_add(v, j - off, vals[(j - off) % r->period]);
            return v;
        }
        for (std::size_t i = 0; i <= j; ++i) v.emplace(i, FieldElement::one(spec_));
        return v;
    }

    FieldElement entry(std::size_t i, std::size_t j) const {
        if (i > j) return FieldElement::zero(spec_);
        auto col = column(j);
        auto it = col.find(i);
        return it == col.end() ? FieldElement::zero(spec_) : it->second;
    }

    /// Dense leading n x n block (fully determines columns < n).
    DenseMatrix leading(std::size_t n) const {
        DenseMatrix m(spec_, n);
        for (std::size_t j = 0; j < n; ++j)
            for (const auto& [i, v] : column(j))
                if (i < n) m.at(i, j) = v;
        return m;
    }

    /// u v, probing only the columns where v is supported.
    SparseVector apply(const SparseVector& v) const {
        SparseVector out;
        for (const auto& [j, x] : v)
            for (const auto& [i, c] : column(j)) sparse_add(out, i, c * x);
        return out;
    }

    /// u^{-1} v by back-substitution on the leading block that covers v.
    SparseVector apply_inverse(const SparseVector& v) const {
        if (v.empty()) return {};
        std::size_t n = v.rbegin()->first + 1;
        // dense back-substitution on [0, n)
        std::vector<FieldElement> rhs(n, FieldElement::zero(spec_));
        for (const auto& [i, x] : v) rhs[i] = x;
        std::vector<SparseVector> cols;
        cols.reserve(n);
        for (std::size_t j = 0; j < n; ++j) cols.push_back(column(j));
        SparseVector out;
        for (std::size_t j = n; j-- > 0;) {
            if (rhs[j].is_zero()) continue;
            FieldElement xj = rhs[j] / cols[j].at(j);
            out.emplace(j, xj);
            for (const auto& [i, c] : cols[j]) rhs[i] = rhs[i] - c * xj;
        }
        // entries may have cancelled to zero
        for (auto it = out.begin(); it != out.end();)
            it = it->second.is_zero() ? out.erase(it) : std::next(it);
        return out;
    }

    std::uint64_t probe_count() const { return probes_->load(std::memory_order_relaxed); }
    void reset_probe_count() const { probes_->store(0, std::memory_order_relaxed); }

private:
    FieldSpec spec_;
    std::variant<ExplicitPrefix, BandedRule, OnesRule> pres_;
    std::shared_ptr<std::atomic<std::uint64_t>> probes_;
};

} // namespace glcf
