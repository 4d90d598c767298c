#include <catch2/catch_amalgamated.hpp>

#include "glcf/serialization.hpp"
#include "glcf/verify_suites.hpp"

using namespace glcf;

namespace {

const FieldSpec Q = FieldSpec::rationals();

FieldElement q(const char* s) { return FieldElement::parse(Q, s); }

bool element_equal(const Element& a, const Element& b) {
    // canonical comparison through serialization (words compare structurally)
    return io::element_to_json(a) == io::element_to_json(b);
}

} // namespace

TEST_CASE("field spec round-trips") {
    io::Json j;
    io::field_to_json(FieldSpec::rationals(), j);
    CHECK(j.dump() == R"({"field":"Q"})");
    CHECK(io::field_from_json(j) == FieldSpec::rationals());

    io::Json j2;
    io::field_to_json(FieldSpec::prime(7), j2);
    CHECK(j2.dump() == R"({"field":"Fp","p":7})");
    CHECK(io::field_from_json(j2) == FieldSpec::prime(7));

    CHECK_THROWS_AS(io::field_from_json(io::Json{{"field", "R"}}), ParseError);
    CHECK_THROWS_AS(io::field_from_json(io::Json{{"field", "Fp"}, {"p", 4}}), InvalidField);
}

TEST_CASE("element documents round-trip every kind over both fields") {
    std::vector<Element> corpus;
    corpus.push_back(Element(FinitaryMatrix::transvection(Q, 0, 1, q("3/2"))));
    corpus.push_back(Element(ScaledFinitary(q("-5"), FinitaryMatrix::diagonal(Q, {q("2")}))));
    corpus.push_back(Element(StringMatrix(
        Q, {DenseMatrix::from_rows(Q, {{q("0"), q("1")}, {q("1"), q("0")}})},
        DenseMatrix::from_rows(Q, {{q("1"), q("1")}, {q("0"), q("1")}}))));
    corpus.push_back(Element(GroupWord(
        Q, {Letter{Generator(FinitaryMatrix::transvection(Q, 1, 2, q("1"))), true},
            Letter{Generator(UpperTriangularOracle(
                       Q, ExplicitPrefix{DenseMatrix::from_rows(Q, {{q("1"), q("1")}, {q("0"), q("1")}})})),
                   false}})));
    BandedRule rule;
    rule.period = 2;
    rule.diag = {q("1"), q("2")};
    rule.bands[1] = {q("1"), q("0")};
    corpus.push_back(Element(GroupWord(
        Q, {Letter{Generator(UpperTriangularOracle(Q, std::move(rule))), false},
            Letter{Generator(UpperTriangularOracle(Q, OnesRule{})), true}})));

    const FieldSpec f5 = FieldSpec::prime(5);
    corpus.push_back(Element(FinitaryMatrix::transvection(f5, 0, 2, FieldElement::from_integer(f5, 3))));
    corpus.push_back(Element(ScaledFinitary(FieldElement::from_integer(f5, 2),
                                            FinitaryMatrix::identity(f5))));

    for (const auto& e : corpus) {
        io::Json j = io::element_to_json(e);
        Element back = io::element_from_json(j);
        CHECK(element_equal(e, back));
        // a second round-trip is bit-identical
        CHECK(io::element_to_json(back) == j);
    }
}

TEST_CASE("rationals travel as strings, residues as integers") {
    io::Json j = io::element_to_json(Element(FinitaryMatrix::transvection(Q, 0, 1, q("3/2"))));
    CHECK(j["entries"][0][2].is_string());
    CHECK(j["entries"][0][2] == "3/2");

    const FieldSpec f5 = FieldSpec::prime(5);
    io::Json j2 = io::element_to_json(
        Element(FinitaryMatrix::transvection(f5, 0, 1, FieldElement::from_integer(f5, 3))));
    CHECK(j2["entries"][0][2].is_number_integer());
}

TEST_CASE("descriptor documents") {
    auto sand = NormalSubgroupDescriptor::sandwich(PairSubgroup::generated(Q, {{q("1"), q("2")}}));
    io::Json j = io::descriptor_to_json(sand, Q);
    CHECK(j["variant"] == "sandwich");
    CHECK(j["gens"].dump() == R"([["1","2"]])");
    CHECK(io::descriptor_from_json(j) == sand);

    auto central = NormalSubgroupDescriptor::central(UnitSubgroup::generated(Q, {q("2")}));
    io::Json jc = io::descriptor_to_json(central, Q);
    CHECK(io::descriptor_from_json(jc) == central);

    for (auto n : all_nodes()) {
        auto d = NormalSubgroupDescriptor::of_node(n, Q);
        CHECK(io::descriptor_from_json(io::descriptor_to_json(d, Q)) == d);
    }
    // prime-field descriptors too
    const FieldSpec f5 = FieldSpec::prime(5);
    for (auto n : all_nodes()) {
        auto d = NormalSubgroupDescriptor::of_node(n, f5);
        CHECK(io::descriptor_from_json(io::descriptor_to_json(d, f5)) == d);
    }
}

TEST_CASE("witness documents replay") {
    FinitaryMatrix g = FinitaryMatrix::diagonal(Q, {q("1/2"), q("2")});
    auto w = transvection_witness(g);
    io::Json j = io::witness_to_json(g, w);
    auto doc = io::witness_from_json(j);
    CHECK(doc.source == g);
    CHECK(replay_witness(doc.source, doc.witness.word) == doc.witness.target);

    // tampering is detected by replay
    io::Json bad = j;
    bad["target"][0][2] = "7";
    auto tampered = io::witness_from_json(bad);
    CHECK(replay_witness(tampered.source, tampered.witness.word) != tampered.witness.target);
}

TEST_CASE("parse errors carry positions") {
    try {
        io::parse_json_text("{\n  \"field\": }", "doc");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        std::string msg = e.what();
        CHECK(msg.find("doc:2:") != std::string::npos);
    }
    CHECK_THROWS_AS(io::parse_json_file("/nonexistent/x.json"), ParseError);
    // semantic errors
    io::Json j{{"field", "Q"}, {"kind", "finitary"}, {"entries", io::Json::array({io::Json::array({0, 0})})}};
    CHECK_THROWS_AS(io::element_from_json(j), ParseError);
}

TEST_CASE("suite reports serialize") {
    SuiteParams p;
    p.trials = 5;
    SuiteReport rep = run_suite("field-axioms", p);
    io::Json j = io::report_to_json(rep);
    CHECK(j["suite"] == "field-axioms");
    CHECK(j["passed"] == true);
    CHECK(j["trials"] == 5);
}
