#include <catch2/catch_amalgamated.hpp>

#include "glcf/word.hpp"

using namespace glcf;

namespace {

const FieldSpec Q = FieldSpec::rationals();

FieldElement q(const char* s) { return FieldElement::parse(Q, s); }

DenseMatrix dense2(const char* a, const char* b, const char* c, const char* d) {
    return DenseMatrix::from_rows(Q, {{q(a), q(b)}, {q(c), q(d)}});
}

// oracle: plain dense product of identity-padded corners
DenseMatrix dense_mul_oracle(const FinitaryMatrix& x, const FinitaryMatrix& y, std::size_t n) {
    return x.corner(n) * y.corner(n);
}

} // namespace

TEST_CASE("finitary construction canonicalizes") {
    // zero deltas are dropped and the window is minimal
    FinitaryMatrix::Support d;
    d.emplace(std::make_pair(0, 1), q("1"));
    d.emplace(std::make_pair(3, 3), q("0"));
    FinitaryMatrix m(Q, std::move(d));
    CHECK(m.window() == 2);
    CHECK(m.delta().size() == 1);
    CHECK(m == FinitaryMatrix::transvection(Q, 0, 1, q("1")));

    // the identity has window 0 and determinant 1
    FinitaryMatrix e = FinitaryMatrix::identity(Q);
    CHECK(e.window() == 0);
    CHECK(e.corner_det().is_one());

    // singular corners are rejected at construction
    FinitaryMatrix::Support bad;
    bad.emplace(std::make_pair(0, 0), q("-1")); // E + (-1) e_00 has a zero row
    CHECK_THROWS_AS(FinitaryMatrix(Q, std::move(bad)), SingularMatrix);
}

TEST_CASE("finitary products match the dense oracle") {
    FinitaryMatrix t01 = FinitaryMatrix::transvection(Q, 0, 1, q("1"));
    FinitaryMatrix t01n = FinitaryMatrix::transvection(Q, 0, 1, q("-1"));
    CHECK(t01 * t01n == FinitaryMatrix::identity(Q)); // transvection inverse

    FinitaryMatrix d2 = FinitaryMatrix::diagonal(Q, {q("2")});
    FinitaryMatrix d3 = FinitaryMatrix::diagonal(Q, {q("3")});
    CHECK(d2 * d3 == FinitaryMatrix::diagonal(Q, {q("6")}));

    // (E+e12)(E+e23) = E+e12+e23+e13, from the 3x3 corner product
    FinitaryMatrix t12 = FinitaryMatrix::transvection(Q, 0, 1, q("1"));
    FinitaryMatrix t23 = FinitaryMatrix::transvection(Q, 1, 2, q("1"));
    FinitaryMatrix prod = t12 * t23;
    CHECK(prod.corner(3) == dense_mul_oracle(t12, t23, 3));
    FinitaryMatrix::Support expect;
    expect.emplace(std::make_pair(0, 1), q("1"));
    expect.emplace(std::make_pair(1, 2), q("1"));
    expect.emplace(std::make_pair(0, 2), q("1"));
    CHECK(prod == FinitaryMatrix(Q, std::move(expect)));
}

TEST_CASE("finitary inverse by exact corner inversion") {
    CHECK(FinitaryMatrix::identity(Q).inverse() == FinitaryMatrix::identity(Q));
    CHECK(FinitaryMatrix::transvection(Q, 0, 1, q("1")).inverse() ==
          FinitaryMatrix::transvection(Q, 0, 1, q("-1")));

    // corner [[1,1],[1,2]] inverts to [[2,-1],[-1,1]]
    FinitaryMatrix m = FinitaryMatrix::from_corner(dense2("1", "1", "1", "2"));
    FinitaryMatrix inv = m.inverse();
    CHECK(inv.corner(2) == dense2("2", "-1", "-1", "1"));
    CHECK(m * inv == FinitaryMatrix::identity(Q));
    CHECK(inv * m == FinitaryMatrix::identity(Q));
}

TEST_CASE("corner determinant") {
    CHECK(FinitaryMatrix::identity(Q).corner_det().is_one());
    CHECK(FinitaryMatrix::transvection(Q, 0, 1, q("5")).corner_det().is_one());
    CHECK(FinitaryMatrix::diagonal(Q, {q("2"), q("3")}).corner_det() == q("6"));

    // padding the window does not change the determinant
    FinitaryMatrix m = FinitaryMatrix::diagonal(Q, {q("2"), q("3")});
    CHECK(m.corner(7).det() == q("6"));
}

TEST_CASE("scaled finitary split is unique") {
    FinitaryMatrix h = FinitaryMatrix::transvection(Q, 0, 1, q("1"));
    ScaledFinitary s(q("3"), h);
    CHECK(s.scalar() == q("3"));
    CHECK(s.body() == h);
    CHECK_FALSE(s.is_scalar());
    CHECK(ScaledFinitary::scalar_matrix(Q, q("5")).is_scalar());
    CHECK_THROWS_AS(ScaledFinitary(FieldElement::zero(Q), h), ZeroInput);

    ScaledFinitary t(q("1/3"), h.inverse());
    CHECK((s * t).is_identity());
}

TEST_CASE("string matrices invert blockwise") {
    // single involution block with identity tail
    DenseMatrix swap = dense2("0", "1", "1", "0");
    StringMatrix s(Q, {swap});
    CHECK(s.inverse() == s);

    // blocks ([[2]]) invert to ([[1/2]])
    StringMatrix d(Q, {DenseMatrix::from_rows(Q, {{q("2")}})});
    StringMatrix dinv = d.inverse();
    CHECK(dinv.blocks()[0].at(0, 0) == q("1/2"));
    CHECK_FALSE(dinv.has_periodic_tail());

    // periodic unipotent tail inverts per block
    StringMatrix u(Q, {}, dense2("1", "1", "0", "1"));
    StringMatrix uinv = u.inverse();
    REQUIRE(uinv.has_periodic_tail());
    CHECK(uinv.tail_block() == dense2("1", "-1", "0", "1"));

    // singular blocks are rejected
    CHECK_THROWS_AS(StringMatrix(Q, {dense2("1", "1", "1", "1")}), SingularMatrix);

    // shape arithmetic: blocks (2) then periodic 3-blocks
    StringMatrix mixed(Q, {swap}, DenseMatrix::identity(Q, 3));
    CHECK(mixed.shape_at(0) == 2);
    CHECK(mixed.shape_at(1) == 3);
    CHECK(mixed.block_boundary_at_least(1) == 2);
    CHECK(mixed.block_boundary_at_least(2) == 2);
    CHECK(mixed.block_boundary_at_least(3) == 5);

    // an identity periodic tail canonicalizes to the identity tail
    StringMatrix t(Q, {swap}, DenseMatrix::identity(Q, 2));
    CHECK_FALSE(t.has_periodic_tail());
}

TEST_CASE("string scalar detection") {
    FieldElement two = q("2");
    DenseMatrix two_block = DenseMatrix::identity(Q, 2);
    two_block.at(0, 0) = two;
    two_block.at(1, 1) = two;
    StringMatrix s(Q, {two_block}, two_block);
    FieldElement alpha = FieldElement::zero(Q);
    CHECK(s.is_scalar(&alpha));
    CHECK(alpha == two);

    auto scaled = s.as_scaled_finitary();
    REQUIRE(scaled.has_value());
    CHECK(scaled->scalar() == two);
    CHECK(scaled->body().is_identity());

    // non-scalar tail: no conversion
    StringMatrix perm(Q, {}, dense2("0", "1", "1", "0"));
    CHECK_FALSE(perm.as_scaled_finitary().has_value());
    CHECK_FALSE(perm.is_scalar());
}

TEST_CASE("triangular oracle columns and inverse columns") {
    // explicit prefix [[1,1],[0,1]]
    UpperTriangularOracle u(Q, ExplicitPrefix{dense2("1", "1", "0", "1")});
    auto col1 = u.column(1);
    CHECK(col1 == SparseVector{{0, q("1")}, {1, q("1")}});
    auto col5 = u.column(5);
    CHECK(col5 == SparseVector{{5, q("1")}});

    // inverted: back-substitution gives column 1 of the inverse = (-1, 1)
    GroupWord w(Q, {Letter{Generator(u), true}});
    CHECK(w.column(1) == SparseVector{{0, q("-1")}, {1, q("1")}});

    // a zero diagonal is rejected
    CHECK_THROWS_AS(UpperTriangularOracle(Q, ExplicitPrefix{dense2("1", "1", "0", "0")}),
                    SingularMatrix);
    // lower-triangular explicit prefixes are rejected
    CHECK_THROWS_AS(UpperTriangularOracle(Q, ExplicitPrefix{dense2("1", "0", "1", "1")}), Error);

    // banded rule: diagonal 1, one superdiagonal band of 2s
    BandedRule r;
    r.period = 1;
    r.diag = {q("1")};
    r.bands[1] = {q("2")};
    UpperTriangularOracle band(Q, std::move(r));
    CHECK(band.column(3) == SparseVector{{2, q("2")}, {3, q("1")}});
    CHECK(band.window_bound(4) == 5);

    // the ones rule certifies no bound
    UpperTriangularOracle ones(Q, OnesRule{});
    CHECK_FALSE(ones.window_bound(4).has_value());
    CHECK(ones.column(2) == SparseVector{{0, q("1")}, {1, q("1")}, {2, q("1")}});
    GroupWord wo(Q, {Letter{Generator(ones), true}});
    // inverse of the all-ones upper triangular is bidiagonal
    CHECK(wo.column(3) == SparseVector{{2, q("-1")}, {3, q("1")}});
}

TEST_CASE("column probe counts stay within the support") {
    BandedRule r;
    r.period = 2;
    r.diag = {q("1"), q("2")};
    r.bands[1] = {q("1"), q("0")};
    UpperTriangularOracle u(Q, std::move(r));
    u.reset_probe_count();
    GroupWord w(Q, {Letter{Generator(u), false}});
    w.column(9);
    CHECK(u.probe_count() == 1); // applying to e_9 probes only column 9
    u.reset_probe_count();
    GroupWord winv(Q, {Letter{Generator(u), true}});
    winv.column(9);
    CHECK(u.probe_count() <= 10); // back-substitution probes the leading block
}

TEST_CASE("word column evaluation") {
    // single transvection: column 1 of E+e12 has rows {0: 1, 1: 1}
    FinitaryMatrix t = FinitaryMatrix::transvection(Q, 0, 1, q("1"));
    GroupWord w1(Q, {Letter{Generator(t), false}});
    CHECK(w1.column(1) == SparseVector{{0, q("1")}, {1, q("1")}});

    // s s^{-1} cancels to the identity on every probed column
    StringMatrix s(Q, {dense2("1", "2", "1", "3")}, dense2("0", "1", "1", "0"));
    GroupWord w2(Q, {Letter{Generator(s), false}, Letter{Generator(s), true}});
    for (std::size_t j : {0, 1, 2, 5, 8})
        CHECK(w2.column(j) == SparseVector{{j, q("1")}});

    // empty word is the identity
    GroupWord we(Q, {});
    CHECK(we.window_project(3) == DenseMatrix::identity(Q, 3));
}

TEST_CASE("window projection") {
    // diagonal string blocks (2),(3) with identity tail
    StringMatrix d(Q, {DenseMatrix::from_rows(Q, {{q("2")}}), DenseMatrix::from_rows(Q, {{q("3")}})});
    GroupWord w(Q, {Letter{Generator(d), false}});
    DenseMatrix expect(Q, 2);
    expect.at(0, 0) = q("2");
    expect.at(1, 1) = q("3");
    CHECK(w.window_project(2) == expect);

    // [E+e12, E+e21] projects to [[2,1],[1,1]]
    FinitaryMatrix a = FinitaryMatrix::transvection(Q, 0, 1, q("1"));
    FinitaryMatrix b = FinitaryMatrix::transvection(Q, 1, 0, q("1"));
    GroupWord w2(Q, {Letter{Generator(a), false}, Letter{Generator(b), false}});
    CHECK(w2.window_project(2) == dense2("2", "1", "1", "1"));
    CHECK(w2.window_project(2) == dense_mul_oracle(a, b, 2));
}

TEST_CASE("word reduction decides tails") {
    // all-finitary word folds exactly
    FinitaryMatrix a = FinitaryMatrix::transvection(Q, 0, 1, q("2"));
    GroupWord w1(Q, {Letter{Generator(a), false},
                     Letter{Generator(ScaledFinitary::scalar_matrix(Q, q("3"))), false},
                     Letter{Generator(a), true}});
    auto r1 = reduce_word(w1);
    REQUIRE(r1.kind == TailKind::Scalar);
    CHECK(r1.value->scalar() == q("3"));
    CHECK(r1.value->body().is_identity());

    // word with a scalar periodic tail reduces to alpha * finitary
    DenseMatrix two_block = DenseMatrix::identity(Q, 2);
    two_block.at(0, 0) = q("2");
    two_block.at(1, 1) = q("2");
    StringMatrix scalar_tail(Q, {DenseMatrix::from_rows(Q, {{q("2")}})}, two_block);
    GroupWord w2(Q, {Letter{Generator(a), false}, Letter{Generator(scalar_tail), false}});
    auto r2 = reduce_word(w2);
    REQUIRE(r2.kind == TailKind::Scalar);
    CHECK(r2.value->scalar() == q("2"));

    // genuinely non-scalar periodic tail is certified non-product
    StringMatrix swap_tail(Q, {}, dense2("0", "1", "1", "0"));
    GroupWord w3(Q, {Letter{Generator(a), false}, Letter{Generator(swap_tail), false}});
    CHECK(reduce_word(w3).kind == TailKind::NotProduct);

    // two misaligned periodic tails still analyze exactly: s * s^{-1} = E
    std::vector<Letter> cancel{Letter{Generator(swap_tail), false}, Letter{Generator(swap_tail), true}};
    auto r4 = reduce_word(GroupWord(Q, cancel));
    REQUIRE(r4.kind == TailKind::Scalar);
    CHECK(r4.value->is_identity());

    // misaligned product of two different periodic strings
    StringMatrix shifted(Q, {DenseMatrix::from_rows(Q, {{q("1")}})}, dense2("0", "1", "1", "0"));
    GroupWord w5(Q, {Letter{Generator(swap_tail), false}, Letter{Generator(shifted), false}});
    CHECK(reduce_word(w5).kind == TailKind::NotProduct);

    // rule-based triangular letters carry no certificate
    UpperTriangularOracle ones(Q, OnesRule{});
    GroupWord w6(Q, {Letter{Generator(ones), false}});
    CHECK(reduce_word(w6).kind == TailKind::Unknown);

    // explicit-prefix triangular letters fold like finitary matrices
    UpperTriangularOracle pre(Q, ExplicitPrefix{dense2("1", "1", "0", "1")});
    GroupWord w7(Q, {Letter{Generator(pre), false}, Letter{Generator(pre), true}});
    auto r7 = reduce_word(w7);
    REQUIRE(r7.kind == TailKind::Scalar);
    CHECK(r7.value->is_identity());
}

TEST_CASE("group axioms on random samples") {
    std::mt19937_64 eng(3);
    std::vector<FieldElement> pool{q("1"), q("-1"), q("2"), q("1/2"), q("3")};
    auto rnd = [&](std::size_t window) {
        FinitaryMatrix m = FinitaryMatrix::identity(Q);
        for (int k = 0; k < 4; ++k) {
            std::size_t i = eng() % window, j = eng() % window;
            if (i == j) continue;
            m = m * FinitaryMatrix::transvection(Q, i, j, pool[eng() % pool.size()]);
        }
        return m;
    };
    for (int t = 0; t < 100; ++t) {
        FinitaryMatrix a = rnd(8), b = rnd(8), c = rnd(8);
        REQUIRE((a * b) * c == a * (b * c));
        REQUIRE(a * a.inverse() == FinitaryMatrix::identity(Q));
        REQUIRE((a * b).corner_det() == a.corner_det() * b.corner_det());
    }
}
