#pragma once

// Words over the generator classes (finitary, scaled, string, triangular
// oracle), denoting their ordered product in GL_cf. Columns of the product
// are evaluated lazily by threading a sparse vector right to left; this is
// exactly what column-finiteness buys.
//
// A word whose letters all have decidable tails can be reduced: either to an
// exact ScaledFinitary (the word lies in D_sc x GL_fr), or to a certificate
// that it does not. Words containing rule-based triangular oracles carry no
// tail certificate and stay undecidable.

#include <cstddef>
#include <numeric>
#include <optional>
#include <variant>
#include <vector>

#include "glcf/finitary.hpp"
#include "glcf/string_matrix.hpp"
#include "glcf/triangular.hpp"

namespace glcf {

using Generator = std::variant<FinitaryMatrix, ScaledFinitary, StringMatrix, UpperTriangularOracle>;

struct Letter {
    Generator g;
    bool inverted = false;
};

class GroupWord {
public:
    GroupWord(const FieldSpec& spec, std::vector<Letter> letters)
        : spec_(spec), letters_(std::move(letters)) {
        for (const auto& l : letters_) {
            if (letter_spec(l) != spec_) throw FieldMismatch("letter in the wrong field");
            // inverses of value letters are cheap and make column threading pure
            inverses_.push_back(make_inverse(l));
        }
    }

    const FieldSpec& spec() const { return spec_; }
    const std::vector<Letter>& letters() const { return letters_; }
    bool empty() const { return letters_.empty(); }

    /// Exact column j of the denoted product.
    SparseVector column(std::size_t j) const {
        SparseVector v;
        v.emplace(j, FieldElement::one(spec_));
        for (std::size_t k = letters_.size(); k-- > 0;) v = apply_letter(k, v);
        return v;
    }

    /// Apply the product to a sparse vector.
    SparseVector apply(const SparseVector& v0) const {
        SparseVector v = v0;
        for (std::size_t k = letters_.size(); k-- > 0;) v = apply_letter(k, v);
        return v;
    }

    /// Leading N x N submatrix, assembled from columns 0..N-1 truncated to rows < N.
    DenseMatrix window_project(std::size_t n) const {
        DenseMatrix m(spec_, n);
        for (std::size_t j = 0; j < n; ++j)
            for (const auto& [i, x] : column(j))
                if (i < n) m.at(i, j) = x;
        return m;
    }

private:
    static FieldSpec letter_spec(const Letter& l) {
        return std::visit([](const auto& g) { return g.spec(); }, l.g);
    }

    /// nullopt for triangular oracles: their inverse columns come from
    /// back-substitution on demand.
    static std::optional<Generator> make_inverse(const Letter& l) {
        if (!l.inverted) return std::nullopt;
        if (const auto* f = std::get_if<FinitaryMatrix>(&l.g)) return Generator(f->inverse());
        if (const auto* s = std::get_if<ScaledFinitary>(&l.g)) return Generator(s->inverse());
        if (const auto* m = std::get_if<StringMatrix>(&l.g)) return Generator(m->inverse());
        return std::nullopt;
    }

    SparseVector apply_letter(std::size_t k, const SparseVector& v) const {
        const Letter& l = letters_[k];
        if (l.inverted) {
            if (const auto* u = std::get_if<UpperTriangularOracle>(&l.g)) return u->apply_inverse(v);
            return std::visit([&](const auto& g) { return g.apply(v); }, *inverses_[k]);
        }
        return std::visit([&](const auto& g) { return g.apply(v); }, l.g);
    }

    FieldSpec spec_;
    std::vector<Letter> letters_;
    std::vector<std::optional<Generator>> inverses_;
};

/// Any finitely presented element the library accepts.
using Element = std::variant<FinitaryMatrix, ScaledFinitary, StringMatrix, GroupWord>;

inline FieldSpec element_spec(const Element& e) {
    return std::visit([](const auto& g) { return g.spec(); }, e);
}

inline SparseVector element_column(const Element& e, std::size_t j) {
    return std::visit([&](const auto& g) { return g.column(j); }, e);
}

inline DenseMatrix element_window_project(const Element& e, std::size_t n) {
    DenseMatrix m(element_spec(e), n);
    for (std::size_t j = 0; j < n; ++j)
        for (const auto& [i, x] : element_column(e, j))
            if (i < n) m.at(i, j) = x;
    return m;
}

// ---------------------------------------------------------------------------
// Tail analysis

enum class TailKind {
    Scalar,     // element equals alpha * finitary, value attached
    NotProduct, // certified outside D_sc x GL_fr
    Unknown,    // presentation carries no tail certificate
};

struct WordReduction {
    TailKind kind = TailKind::Unknown;
    std::optional<ScaledFinitary> value;
};

namespace detail {

/// A letter that is exactly alpha * finitary (inversion applied).
inline std::optional<ScaledFinitary> letter_as_scaled(const Letter& l) {
    std::optional<ScaledFinitary> v;
    if (const auto* f = std::get_if<FinitaryMatrix>(&l.g)) {
        v = ScaledFinitary(FieldElement::one(f->spec()), *f);
    } else if (const auto* s = std::get_if<ScaledFinitary>(&l.g)) {
        v = *s;
    } else if (const auto* m = std::get_if<StringMatrix>(&l.g)) {
        v = m->as_scaled_finitary();
    } else if (const auto* u = std::get_if<UpperTriangularOracle>(&l.g)) {
        if (u->is_explicit_prefix())
            v = ScaledFinitary(FieldElement::one(u->spec()),
                               FinitaryMatrix::from_corner(u->explicit_prefix().prefix));
    }
    if (v && l.inverted) v = v->inverse();
    return v;
}

} // namespace detail

/// Decide whether a word lies in D_sc x GL_fr. Exact on words whose letters
/// are finitary, scaled, strings, or explicit-prefix triangulars: beyond a
/// computable boundary the product commutes with the shift by the lcm of the
/// tail periods, so finitely many probed columns decide the tail. Rule-based
/// triangular letters yield Unknown.
inline WordReduction reduce_word(const GroupWord& w) {
    const FieldSpec spec = w.spec();

    // fold directly when every letter is scalar-by-finitary
    bool all_scaled = true;
    std::vector<std::optional<ScaledFinitary>> scaled;
    for (const auto& l : w.letters()) {
        scaled.push_back(detail::letter_as_scaled(l));
        if (!scaled.back()) all_scaled = false;
    }
    if (all_scaled) {
        ScaledFinitary acc = ScaledFinitary::scalar_matrix(spec, FieldElement::one(spec));
        for (const auto& s : scaled) acc = acc * *s;
        return {TailKind::Scalar, acc};
    }

    // otherwise every non-scaled letter must be a string with a periodic tail
    std::size_t boundary = 0, spread = 0, period = 1;
    for (std::size_t k = 0; k < w.letters().size(); ++k) {
        if (scaled[k]) {
            boundary = std::max(boundary, scaled[k]->body().window());
            continue;
        }
        const auto* s = std::get_if<StringMatrix>(&w.letters()[k].g);
        if (!s) return {TailKind::Unknown, std::nullopt};
        boundary = std::max(boundary, s->prefix_size());
        if (s->has_periodic_tail()) {
            std::size_t b = s->tail_block().size();
            spread += b - 1;
            period = std::lcm(period, b);
        }
    }
    const std::size_t start = boundary + spread;

    // probe one full period (plus one more as a guard) beyond the boundary
    std::optional<FieldElement> alpha;
    for (std::size_t j = start; j < start + 2 * period; ++j) {
        SparseVector col = w.column(j);
        if (col.size() != 1 || col.begin()->first != j) return {TailKind::NotProduct, std::nullopt};
        const FieldElement& c = col.begin()->second;
        if (!alpha) alpha = c;
        else if (*alpha != c) return {TailKind::NotProduct, std::nullopt};
    }

    // eventually alpha-scalar: assemble the finitary part from the head columns
    FieldElement inv_alpha = alpha->inv();
    FinitaryMatrix::Support d;
    for (std::size_t j = 0; j < start; ++j) {
        SparseVector col = w.column(j);
        for (auto& [i, x] : col) {
            FieldElement scaled_entry = x * inv_alpha;
            FieldElement delta = i == j ? scaled_entry - FieldElement::one(spec) : scaled_entry;
            if (!delta.is_zero()) d.emplace(std::make_pair(i, j), delta);
        }
    }
    return {TailKind::Scalar, ScaledFinitary(*alpha, FinitaryMatrix(spec, std::move(d)))};
}

/// Exact reduction of any element to alpha * finitary when decidable.
inline WordReduction reduce_element(const Element& e) {
    if (const auto* f = std::get_if<FinitaryMatrix>(&e))
        return {TailKind::Scalar, ScaledFinitary(FieldElement::one(f->spec()), *f)};
    if (const auto* s = std::get_if<ScaledFinitary>(&e)) return {TailKind::Scalar, *s};
    if (const auto* m = std::get_if<StringMatrix>(&e)) {
        auto v = m->as_scaled_finitary();
        if (v) return {TailKind::Scalar, *v};
        return {TailKind::NotProduct, std::nullopt};
    }
    return reduce_word(std::get<GroupWord>(e));
}

} // namespace glcf
