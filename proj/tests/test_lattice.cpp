#include <catch2/catch_amalgamated.hpp>

#include "glcf/lattice.hpp"

using namespace glcf;

namespace {

const FieldSpec Q = FieldSpec::rationals();

FieldElement q(const char* s) { return FieldElement::parse(Q, s); }

DenseMatrix dense2(const char* a, const char* b, const char* c, const char* d) {
    return DenseMatrix::from_rows(Q, {{q(a), q(b)}, {q(c), q(d)}});
}

} // namespace

TEST_CASE("partial order matches the diagram") {
    using N = LatticeNode;
    CHECK(node_leq(N::Trivial, N::Dsc));
    CHECK(node_leq(N::Dsc, N::DscSLfr));
    CHECK(node_leq(N::DscSLfr, N::DscGLfr));
    CHECK(node_leq(N::DscGLfr, N::GLcf));
    CHECK(node_leq(N::Trivial, N::SLfr));
    CHECK(node_leq(N::SLfr, N::GLfr));
    CHECK(node_leq(N::GLfr, N::DscGLfr));
    CHECK(node_leq(N::SLfr, N::DscSLfr));
    CHECK_FALSE(node_leq(N::Dsc, N::SLfr));
    CHECK_FALSE(node_leq(N::Dsc, N::GLfr));
    CHECK_FALSE(node_leq(N::SLfr, N::Dsc));
    CHECK_FALSE(node_leq(N::GLfr, N::DscSLfr));
    CHECK_FALSE(node_leq(N::DscSLfr, N::GLfr));
    CHECK_FALSE(node_leq(N::GLcf, N::DscGLfr));
}

TEST_CASE("classification into minimal nodes") {
    CHECK(classify_minimal_node(Element(FinitaryMatrix::identity(Q))) == LatticeNode::Trivial);
    CHECK(classify_minimal_node(Element(ScaledFinitary::scalar_matrix(Q, q("3")))) ==
          LatticeNode::Dsc);
    CHECK(classify_minimal_node(Element(FinitaryMatrix::transvection(Q, 0, 1, q("1")))) ==
          LatticeNode::SLfr);
    CHECK(classify_minimal_node(Element(FinitaryMatrix::diagonal(Q, {q("2")}))) ==
          LatticeNode::GLfr);
    CHECK(classify_minimal_node(
              Element(ScaledFinitary(q("3"), FinitaryMatrix::transvection(Q, 0, 1, q("1"))))) ==
          LatticeNode::DscSLfr);
    CHECK(classify_minimal_node(
              Element(ScaledFinitary(q("3"), FinitaryMatrix::diagonal(Q, {q("2")})))) ==
          LatticeNode::DscGLfr);
    StringMatrix perm(Q, {}, dense2("0", "1", "1", "0"));
    CHECK(classify_minimal_node(Element(perm)) == LatticeNode::GLcf);

    // strings with scalar tails classify through the product
    DenseMatrix five = DenseMatrix::identity(Q, 2);
    five.at(0, 0) = q("5");
    five.at(1, 1) = q("5");
    CHECK(classify_minimal_node(Element(StringMatrix(Q, {}, five))) == LatticeNode::Dsc);
}

TEST_CASE("quotient image") {
    CHECK(quotient_image(Element(FinitaryMatrix::identity(Q))) ==
          std::make_pair(q("1"), q("1")));
    CHECK(quotient_image(Element(ScaledFinitary(q("3"), FinitaryMatrix::transvection(Q, 0, 1, q("1"))))) ==
          std::make_pair(q("3"), q("1")));
    CHECK(quotient_image(Element(FinitaryMatrix::diagonal(Q, {q("2")}))) ==
          std::make_pair(q("1"), q("2")));
    StringMatrix perm(Q, {}, dense2("0", "1", "1", "0"));
    CHECK_THROWS_AS(quotient_image(Element(perm)), NotInProduct);
}

TEST_CASE("named node descriptors") {
    for (auto n : all_nodes()) {
        auto d = NormalSubgroupDescriptor::of_node(n, Q);
        // every named node maps to exactly one descriptor; spot the identities
        if (n == LatticeNode::Trivial) {
            CHECK(d.is_central());
            CHECK(d.central_subgroup().is_trivial());
        }
        if (n == LatticeNode::SLfr) {
            CHECK(d.is_sandwich());
            CHECK(d.pair_subgroup().is_trivial());
        }
        if (n == LatticeNode::GLcf) CHECK(d.is_full());
    }
    // distinct nodes give distinct descriptors
    std::set<std::string> keys;
    for (auto n : all_nodes()) keys.insert(NormalSubgroupDescriptor::of_node(n, Q).canonical_key());
    CHECK(keys.size() == 7);
}

TEST_CASE("descriptor containment") {
    auto slfr = NormalSubgroupDescriptor::of_node(LatticeNode::SLfr, Q);
    CHECK(descriptor_contains(slfr, Element(FinitaryMatrix::transvection(Q, 0, 1, q("1")))));
    CHECK_FALSE(descriptor_contains(slfr, Element(FinitaryMatrix::diagonal(Q, {q("2")}))));

    // Central(<2>): 8E inside (8 = 2^3), 3E outside
    auto central2 = NormalSubgroupDescriptor::central(UnitSubgroup::generated(Q, {q("2")}));
    CHECK(descriptor_contains(central2, Element(ScaledFinitary::scalar_matrix(Q, q("8")))));
    CHECK_FALSE(descriptor_contains(central2, Element(ScaledFinitary::scalar_matrix(Q, q("3")))));

    // Sandwich(<(1,2)>): 3E maps to (3,1), not generated
    auto sand = NormalSubgroupDescriptor::sandwich(PairSubgroup::generated(Q, {{q("1"), q("2")}}));
    CHECK_FALSE(descriptor_contains(sand, Element(ScaledFinitary::scalar_matrix(Q, q("3")))));
    CHECK(descriptor_contains(sand, Element(FinitaryMatrix::diagonal(Q, {q("4")})))); // (1,4)=(1,2)^2
    CHECK(descriptor_contains(NormalSubgroupDescriptor::full(), Element(StringMatrix(Q, {}, dense2("0", "1", "1", "0")))));
}

TEST_CASE("normal closure branches") {
    // identity generator: trivial central descriptor
    auto r1 = normal_closure(Q, {Element(FinitaryMatrix::identity(Q))}, false);
    CHECK(r1.descriptor == NormalSubgroupDescriptor::central(UnitSubgroup::trivial(Q)));

    // central generator 2E
    auto r2 = normal_closure(Q, {Element(ScaledFinitary::scalar_matrix(Q, q("2")))}, false);
    CHECK(r2.descriptor == NormalSubgroupDescriptor::central(UnitSubgroup::generated(Q, {q("2")})));

    // one diagonal generator: sandwich over <(1,2)>
    auto r3 = normal_closure(Q, {Element(FinitaryMatrix::diagonal(Q, {q("2")}))}, false);
    CHECK(r3.descriptor ==
          NormalSubgroupDescriptor::sandwich(PairSubgroup::generated(Q, {{q("1"), q("2")}})));

    // one transvection: SL_fr itself
    auto r4 = normal_closure(Q, {Element(FinitaryMatrix::transvection(Q, 0, 1, q("1")))}, false);
    CHECK(r4.descriptor == NormalSubgroupDescriptor::of_node(LatticeNode::SLfr, Q));

    // transvection + scalar: sandwich over <(2,1)>
    auto r5 = normal_closure(Q, {Element(FinitaryMatrix::transvection(Q, 0, 1, q("1"))),
                                 Element(ScaledFinitary::scalar_matrix(Q, q("2")))},
                             false);
    CHECK(r5.descriptor ==
          NormalSubgroupDescriptor::sandwich(PairSubgroup::generated(Q, {{q("1"), q("1")}, {q("2"), q("1")}})));

    // a string outside the product forces the full group
    StringMatrix perm(Q, {}, dense2("0", "1", "1", "0"));
    auto r6 = normal_closure(Q, {Element(perm)}, false);
    CHECK(r6.descriptor == NormalSubgroupDescriptor::full());

    // empty generating set
    auto r7 = normal_closure(Q, {}, false);
    CHECK(r7.descriptor == NormalSubgroupDescriptor::central(UnitSubgroup::trivial(Q)));
}

TEST_CASE("normal closure attaches a verified witness") {
    auto r = normal_closure(Q, {Element(FinitaryMatrix::transvection(Q, 0, 1, q("2")))}, true);
    REQUIRE(r.witness.has_value());
    REQUIRE(r.witness_source.has_value());
    CHECK(replay_witness(*r.witness_source, r.witness->word) == r.witness->target);
    CHECK(as_elementary_transvection(r.witness->target).has_value());

    // a determinant != 1 generator routes through a commutator source
    auto r2 = normal_closure(Q, {Element(FinitaryMatrix::diagonal(Q, {q("2")}))}, true);
    REQUIRE(r2.witness.has_value());
    REQUIRE(r2.witness_source.has_value());
    CHECK(r2.witness_source->corner_det().is_one());
    CHECK(replay_witness(*r2.witness_source, r2.witness->word) == r2.witness->target);
}

TEST_CASE("containment respects the order on sampled descriptors") {
    // minimal node of g <= X iff g in descriptor(X), across all nodes
    std::vector<Element> samples{
        Element(FinitaryMatrix::identity(Q)),
        Element(ScaledFinitary::scalar_matrix(Q, q("2"))),
        Element(FinitaryMatrix::transvection(Q, 0, 1, q("1"))),
        Element(FinitaryMatrix::diagonal(Q, {q("2")})),
        Element(ScaledFinitary(q("3"), FinitaryMatrix::transvection(Q, 0, 1, q("1")))),
        Element(ScaledFinitary(q("3"), FinitaryMatrix::diagonal(Q, {q("2")}))),
        Element(StringMatrix(Q, {}, dense2("0", "1", "1", "0"))),
    };
    for (const auto& g : samples) {
        LatticeNode min = classify_minimal_node(g);
        for (auto x : all_nodes()) {
            bool expect = node_leq(min, x);
            CHECK(descriptor_contains(NormalSubgroupDescriptor::of_node(x, Q), g) == expect);
        }
    }
}

TEST_CASE("lattice diagram") {
    CHECK(all_nodes().size() == 7);
    CHECK(lattice_edges().size() == 8);
    std::size_t thick = 0, thin = 0;
    for (const auto& e : lattice_edges()) (e.thick ? thick : thin)++;
    CHECK(thick == 5);
    CHECK(thin == 3);
    // the top edge is thin: the quotient by the maximal proper node is simple
    bool found = false;
    for (const auto& e : lattice_edges())
        if (e.lower == LatticeNode::DscGLfr && e.upper == LatticeNode::GLcf) {
            CHECK_FALSE(e.thick);
            found = true;
        }
    CHECK(found);
    CHECK(lattice_graph_consistent());

    std::string dot = lattice_graph_dot(false);
    CHECK(dot.find("SLfr -- GLfr [style=bold]") != std::string::npos);
    CHECK(dot.find("DscGLfr -- GLcf;") != std::string::npos);
    std::string paper = lattice_graph_dot(true);
    CHECK(paper.find("{E}") != std::string::npos);
    CHECK(paper.find("D_sc x GL_fr") != std::string::npos);
}
