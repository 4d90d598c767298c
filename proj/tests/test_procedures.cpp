#include <catch2/catch_amalgamated.hpp>

#include "glcf/procedures.hpp"

using namespace glcf;

namespace {

const FieldSpec Q = FieldSpec::rationals();

FieldElement q(const char* s) { return FieldElement::parse(Q, s); }

DenseMatrix dense2(const char* a, const char* b, const char* c, const char* d) {
    return DenseMatrix::from_rows(Q, {{q(a), q(b)}, {q(c), q(d)}});
}

} // namespace

TEST_CASE("scalar_split") {
    FinitaryMatrix t = FinitaryMatrix::transvection(Q, 0, 1, q("1"));

    // already split
    auto [a1, h1] = scalar_split(Element(ScaledFinitary(q("3"), t)));
    CHECK(a1 == q("3"));
    CHECK(h1 == t);

    // finitary input splits with scalar 1
    auto [a2, h2] = scalar_split(Element(FinitaryMatrix::diagonal(Q, {q("2")})));
    CHECK(a2.is_one());
    CHECK(h2 == FinitaryMatrix::diagonal(Q, {q("2")}));

    // non-scalar periodic tail is provably outside the product
    StringMatrix bad(Q, {dense2("5", "1", "0", "5")}, dense2("0", "1", "1", "0"));
    CHECK_THROWS_AS(scalar_split(Element(bad)), NotInProduct);

    // rule-based triangular words are undecidable
    UpperTriangularOracle ones(Q, OnesRule{});
    GroupWord w(Q, {Letter{Generator(ones), false}});
    CHECK_THROWS_AS(scalar_split(Element(w)), Undecidable);
}

TEST_CASE("det_decompose") {
    // identity
    auto [a0, s0] = det_decompose(FinitaryMatrix::identity(Q));
    CHECK(a0.is_one());
    CHECK(s0.is_identity());

    // diag(2,3,1,...) -> alpha 6, s = diag(1/3, 3, 1, ...)
    FinitaryMatrix g = FinitaryMatrix::diagonal(Q, {q("2"), q("3")});
    auto [alpha, s] = det_decompose(g);
    CHECK(alpha == q("6"));
    CHECK(s == FinitaryMatrix::diagonal(Q, {q("1/3"), q("3")}));
    CHECK(s.corner_det().is_one());
    CHECK(d_matrix(Q, alpha) * s == g);

    // already determinant 1
    FinitaryMatrix t = FinitaryMatrix::transvection(Q, 0, 1, q("1"));
    auto [a2, s2] = det_decompose(t);
    CHECK(a2.is_one());
    CHECK(s2 == t);

    // d(alpha) has determinant alpha
    CHECK(d_matrix(Q, q("7")).corner_det() == q("7"));
}

TEST_CASE("conjugate_by_string block alignment") {
    // identity conjugates to itself with m = first block size
    StringMatrix s3(Q, {DenseMatrix::identity(Q, 3)}, DenseMatrix::identity(Q, 3));
    auto r0 = conjugate_by_string(FinitaryMatrix::identity(Q), s3);
    CHECK(r0.result.is_identity());
    CHECK(r0.certified_window == 3);

    // window-2 element against shape (3,3,...): t = 1, m = 3
    FinitaryMatrix g = FinitaryMatrix::from_corner(dense2("1", "1", "1", "2"));
    DenseMatrix block = DenseMatrix::from_rows(
        Q, {{q("1"), q("1"), q("0")}, {q("0"), q("1"), q("1")}, {q("0"), q("0"), q("1")}});
    StringMatrix s(Q, {}, block);
    auto r = conjugate_by_string(g, s);
    CHECK(r.certified_window == 3);
    CHECK(r.conjugator_kind == ConjugatorKind::String);
    // derived: direct 3x3 block conjugation
    DenseMatrix expect = block.inverse() * g.corner(3) * block;
    CHECK(r.result.corner(3) == expect);

    // permutation conjugation: diag(2,1,...) by the swap block
    FinitaryMatrix d = FinitaryMatrix::diagonal(Q, {q("2")});
    StringMatrix swap(Q, {dense2("0", "1", "1", "0")});
    auto r2 = conjugate_by_string(d, swap);
    CHECK(r2.certified_window == 2);
    CHECK(r2.result == FinitaryMatrix::diagonal(Q, {q("1"), q("2")}));

    // determinant is preserved (SL stays SL)
    CHECK(r.result.corner_det() == g.corner_det());
    CHECK_THROWS_AS(conjugate_by_string(FinitaryMatrix::identity(FieldSpec::prime(5)), swap),
                    FieldMismatch);
}

TEST_CASE("conjugate_by_triangular") {
    // diag(2,1,...) by prefix [[1,1],[0,1]] -> [[2,1],[0,1]]
    FinitaryMatrix d = FinitaryMatrix::diagonal(Q, {q("2")});
    UpperTriangularOracle u(Q, ExplicitPrefix{dense2("1", "1", "0", "1")});
    auto r = conjugate_by_triangular(d, u);
    CHECK(r.certified_window == 2);
    CHECK(r.result.corner(2) == dense2("2", "1", "0", "1"));

    // commuting conjugator leaves the element alone
    FinitaryMatrix t = FinitaryMatrix::transvection(Q, 0, 1, q("1"));
    UpperTriangularOracle id2(Q, ExplicitPrefix{DenseMatrix::identity(Q, 2)});
    auto r2 = conjugate_by_triangular(t, id2);
    CHECK(r2.result == t);

    // identity conjugates trivially even under the ones rule
    UpperTriangularOracle ones(Q, OnesRule{});
    auto r3 = conjugate_by_triangular(FinitaryMatrix::identity(Q), ones);
    CHECK(r3.result.is_identity());

    // but nontrivial elements have no certified window under it
    CHECK_THROWS_AS(conjugate_by_triangular(d, ones), WindowUndetermined);

    // banded rule: window bound n + bandwidth
    BandedRule rule;
    rule.period = 1;
    rule.diag = {q("1")};
    rule.bands[2] = {q("1")};
    UpperTriangularOracle band(Q, std::move(rule));
    auto r4 = conjugate_by_triangular(d, band);
    CHECK(r4.certified_window == 3); // window 1 + bandwidth 2
    // support stays within the first row
    for (const auto& [ij, v] : r4.result.delta()) CHECK(ij.first < 1);
}

TEST_CASE("center_witness") {
    // scalars are central
    CHECK(std::holds_alternative<Central>(
        center_witness(Element(ScaledFinitary::scalar_matrix(Q, q("5"))))));
    CHECK(std::holds_alternative<Central>(center_witness(Element(FinitaryMatrix::identity(Q)))));

    // diag(2,1,...) gets an explicit non-commuting witness
    auto r = center_witness(Element(FinitaryMatrix::diagonal(Q, {q("2")})));
    REQUIRE(std::holds_alternative<CenterWitness>(r));
    const auto& w = std::get<CenterWitness>(r);
    Element g = Element(FinitaryMatrix::diagonal(Q, {q("2")}));
    CHECK(detail::element_apply(g, w.x.column(w.column)) != w.x.apply(element_column(g, w.column)));

    // transvection: witness found by scan
    auto r2 = center_witness(Element(FinitaryMatrix::transvection(Q, 0, 1, q("1"))));
    REQUIRE(std::holds_alternative<CenterWitness>(r2));

    // non-scalar periodic string tail
    StringMatrix perm(Q, {}, dense2("0", "1", "1", "0"));
    auto r3 = center_witness(Element(perm));
    REQUIRE(std::holds_alternative<CenterWitness>(r3));
    const auto& w3 = std::get<CenterWitness>(r3);
    Element gp = Element(perm);
    CHECK(detail::element_apply(gp, w3.x.column(w3.column)) !=
          w3.x.apply(element_column(gp, w3.column)));

    // scalar string with periodic scalar tail is central
    DenseMatrix five = DenseMatrix::identity(Q, 2);
    five.at(0, 0) = q("5");
    five.at(1, 1) = q("5");
    StringMatrix s5(Q, {}, five);
    CHECK(std::holds_alternative<Central>(center_witness(Element(s5))));

    // oracle-presented word without a tail certificate
    UpperTriangularOracle ones(Q, OnesRule{});
    GroupWord w4(Q, {Letter{Generator(ones), false}});
    CHECK_THROWS_AS(center_witness(Element(w4)), Undecidable);
}

TEST_CASE("transvection witness: elementary and rank-one inputs") {
    // already a transvection: empty word, target is the element itself
    FinitaryMatrix t = FinitaryMatrix::transvection(Q, 0, 1, q("1"));
    auto w = transvection_witness(t);
    CHECK(w.word.empty());
    CHECK(w.target == t);
    CHECK(replay_witness(t, w.word) == t);

    // rank-one non-elementary: E + w v^T with v^T w = 0
    // build via conjugation of a transvection by a generic matrix
    FinitaryMatrix c = FinitaryMatrix::from_corner(
        DenseMatrix::from_rows(Q, {{q("1"), q("1"), q("0")}, {q("1"), q("2"), q("1")},
                                   {q("0"), q("1"), q("1")}}));
    FinitaryMatrix g = c.inverse() * t * c;
    REQUIRE(g.delta().size() > 1);
    auto w2 = transvection_witness(g);
    CHECK(replay_witness(g, w2.word) == w2.target);
    CHECK(as_elementary_transvection(w2.target).has_value());
    CHECK(w2.word.size() == 1); // one conjugation normalizes a rank-one element
}

TEST_CASE("transvection witness: diagonal and commutator paths") {
    // diag(1/2, 2, 1, ...) needs a genuine search step
    FinitaryMatrix g = FinitaryMatrix::diagonal(Q, {q("1/2"), q("2")});
    REQUIRE(g.corner_det().is_one());
    auto w = transvection_witness(g);
    CHECK(replay_witness(g, w.word) == w.target);
    CHECK(as_elementary_transvection(w.target).has_value());
    CHECK(w.word.size() <= 6);

    // preconditions
    CHECK_THROWS_AS(transvection_witness(FinitaryMatrix::identity(Q)), Error);
    CHECK_THROWS_AS(transvection_witness(FinitaryMatrix::diagonal(Q, {q("2")})), Error);
}

TEST_CASE("transvection witness: exhaustive small-field path") {
    FieldSpec f2 = FieldSpec::prime(2);
    FieldElement one2 = FieldElement::one(f2);
    // 3-cycle permutation matrix in GF(2), window 3: even, determinant 1
    FinitaryMatrix cyc = FinitaryMatrix::permutation(f2, {1, 2, 0});
    REQUIRE(cyc.corner_det().is_one());
    auto w = transvection_witness(cyc);
    CHECK(replay_witness(cyc, w.word) == w.target);
    CHECK(as_elementary_transvection(w.target).has_value());
    CHECK(w.word.size() <= 6);

    // a GF(3) diagonal element through the same path
    FieldSpec f3 = FieldSpec::prime(3);
    FinitaryMatrix d3 = FinitaryMatrix::diagonal(
        f3, {FieldElement::from_integer(f3, 2), FieldElement::from_integer(f3, 2)});
    REQUIRE(d3.corner_det().is_one());
    auto w3 = transvection_witness(d3);
    CHECK(replay_witness(d3, w3.word) == w3.target);
    CHECK(as_elementary_transvection(w3.target).has_value());
}
