#include <catch2/catch_amalgamated.hpp>

#include "glcf/verify_suites.hpp"

using namespace glcf;

TEST_CASE("rng determinism") {
    Rng a(123), b(123);
    for (int i = 0; i < 100; ++i) REQUIRE(a.below(1000) == b.below(1000));
}

TEST_CASE("node samples classify on-node") {
    Rng rng(5);
    const FieldSpec q = FieldSpec::rationals();
    for (auto node : all_nodes())
        for (int t = 0; t < 20; ++t)
            CHECK(classify_minimal_node(gen::random_node_element(rng, q, node, 6)) == node);
    const FieldSpec f5 = FieldSpec::prime(5);
    for (auto node : all_nodes())
        for (int t = 0; t < 20; ++t)
            CHECK(classify_minimal_node(gen::random_node_element(rng, f5, node, 6)) == node);
}

TEST_CASE("brute force closure on GL(3,2)") {
    const auto& amb = bf::ambient(3, 2);
    CHECK(amb.elements.size() == 168); // |GL(3, F_2)|

    // the identity closes to itself
    auto id = amb.id_of(bf::mat_identity(3));
    auto closure_id = bf::brute_force_closure(amb, {id});
    CHECK(closure_id == std::vector<std::uint32_t>{id});

    // a transvection generates everything (SL(3,2) is simple and equals GL(3,2))
    bf::Mat t = bf::mat_identity(3);
    t.a[1] = 1; // E + e_01
    auto closure_t = bf::brute_force_closure(amb, {amb.id_of(t)});
    CHECK(closure_t.size() == 168);
}

TEST_CASE("brute force closure on GL(3,3) central element") {
    const auto& amb = bf::ambient(3, 3);
    CHECK(amb.elements.size() == 11232); // (27-1)(27-3)(27-9)

    bf::Mat twoe = bf::mat_identity(3);
    for (int i = 0; i < 3; ++i) twoe.a[static_cast<std::size_t>(i * 3 + i)] = 2;
    auto closure = bf::brute_force_closure(amb, {amb.id_of(twoe)});
    CHECK(closure.size() == 2); // the center {E, 2E}
}

TEST_CASE("ambient rejects oversized groups") {
    CHECK_THROWS_AS(bf::ambient(3, 5), AmbientTooLarge); // |GL(3,5)| is huge
}

TEST_CASE("suites run clean at reduced trial counts") {
    SuiteParams p;
    p.trials = 60;
    p.seed = 42;
    p.window = 6;
    for (const char* name : {"field-axioms", "factor-roundtrip", "unit-oracle", "unit-properties",
                             "matrix-axioms", "quotients", "center", "monotonicity",
                             "closure-idempotence"}) {
        SuiteReport rep = run_suite(name, p);
        INFO(rep.to_text());
        CHECK(rep.passed());
    }
    // normality over both acceptance fields, smaller count
    p.trials = 48;
    SuiteReport rq = run_suite("normality", p);
    INFO(rq.to_text());
    CHECK(rq.passed());
    p.field = FieldSpec::prime(5);
    SuiteReport rf = run_suite("normality", p);
    INFO(rf.to_text());
    CHECK(rf.passed());

    CHECK_THROWS_AS(run_suite("no-such-suite", p), UnknownSuite);
}

TEST_CASE("closure oracle suite on GF(2)") {
    SuiteParams p;
    p.field = FieldSpec::prime(2);
    SuiteReport rep = run_suite("closure-oracle", p);
    INFO(rep.to_text());
    CHECK(rep.passed());
    CHECK(rep.trials == 168);

    // the full-group variant covers every element through the decomposition
    SuiteReport full = run_suite("closure-oracle-full", p);
    INFO(full.to_text());
    CHECK(full.passed());
    CHECK(full.trials == 168);
}

TEST_CASE("witness suite sample") {
    SuiteParams p;
    p.trials = 10;
    p.seed = 9;
    SuiteReport rep = run_suite("witnesses-q", p);
    INFO(rep.to_text());
    // the acceptance gate allows a small exhaustion rate; at this sample size
    // every trial is expected to succeed
    CHECK(rep.failures.size() <= 1);
}
