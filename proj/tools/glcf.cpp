// glcf — classify elements of the column-finite matrix group into its
// normal-subgroup lattice, compute normal closures with replayable
// witnesses, emit the lattice diagram, and run the verification suites.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or parse error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "glcf/lattice.hpp"
#include "glcf/serialization.hpp"
#include "glcf/verify_suites.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailure = 1;
constexpr int kExitUsage = 2;

glcf::FieldSpec parse_field_flag(const std::string& field, std::int64_t p) {
    if (field == "Q") return glcf::FieldSpec::rationals();
    if (field == "Fp") return glcf::FieldSpec::prime(p);
    // shorthand: F5, F7, ...
    if (field.size() > 1 && field[0] == 'F')
        return glcf::FieldSpec::prime(std::stoll(field.substr(1)));
    throw glcf::ParseError("unknown field '" + field + "' (use Q, Fp with --p, or F<p>)");
}

void write_output(const std::string& out, const std::string& text) {
    if (out.empty() || out == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << "\n";
        return;
    }
    std::ofstream f(out);
    if (!f) throw glcf::Error("cannot write '" + out + "'");
    f << text;
}

int cmd_classify(const std::string& path) {
    auto doc = glcf::io::parse_json_file(path);
    glcf::Element e = glcf::io::element_from_json(doc);
    glcf::LatticeNode node = glcf::classify_minimal_node(e);
    std::string line = glcf::node_name(node);
    if (glcf::node_leq(node, glcf::LatticeNode::DscGLfr)) {
        auto [alpha, delta] = glcf::quotient_image(e);
        line += " (" + alpha.to_string() + "," + delta.to_string() + ")";
    }
    std::cout << line << "\n";
    return kExitOk;
}

int cmd_closure(const std::vector<std::string>& paths, const std::string& out,
                const std::string& witness_out) {
    if (paths.empty()) throw glcf::ParseError("closure needs at least one element file");
    std::vector<glcf::Element> gens;
    std::optional<glcf::FieldSpec> spec;
    for (const auto& p : paths) {
        gens.push_back(glcf::io::element_from_json(glcf::io::parse_json_file(p)));
        glcf::FieldSpec s = glcf::element_spec(gens.back());
        if (spec && *spec != s) throw glcf::FieldMismatch("closure inputs mix fields");
        spec = s;
    }
    auto result = glcf::normal_closure(*spec, gens, /*attach_witness=*/!witness_out.empty());
    write_output(out, glcf::io::descriptor_to_json(result.descriptor, *spec).dump(2) + "\n");
    if (!witness_out.empty()) {
        if (result.witness) {
            glcf::io::Json wj = glcf::io::witness_to_json(*result.witness_source, *result.witness);
            std::ofstream f(witness_out);
            if (!f) throw glcf::Error("cannot write '" + witness_out + "'");
            f << wj.dump(2) << "\n";
        } else {
            std::cerr << "no transvection witness attached"
                      << (result.witness_note.empty() ? "" : ": " + result.witness_note) << "\n";
        }
    }
    return kExitOk;
}

int cmd_lattice_dot(const std::string& out, const std::string& labels, bool check) {
    if (check) {
        if (!glcf::lattice_graph_consistent()) {
            std::cerr << "lattice diagram is inconsistent with the partial order\n";
            return kExitVerifyFailure;
        }
        std::cout << "lattice diagram consistent: 7 nodes, " << glcf::lattice_edges().size()
                  << " edges\n";
        return kExitOk;
    }
    write_output(out, glcf::lattice_graph_dot(labels == "paper"));
    return kExitOk;
}

int cmd_verify(const std::string& suite, std::uint64_t trials, std::uint64_t seed,
               std::size_t window, const glcf::FieldSpec& spec, const std::string& out) {
    glcf::SuiteParams params;
    params.trials = trials;
    params.seed = seed;
    params.window = window;
    params.field = spec;
    glcf::SuiteReport rep = glcf::run_suite(suite, params);
    std::cout << rep.to_text() << "\n";
    if (!out.empty()) write_output(out, glcf::io::report_to_json(rep).dump(2) + "\n");
    return rep.passed() ? kExitOk : kExitVerifyFailure;
}

int cmd_verify_witness(const std::string& path) {
    auto doc = glcf::io::witness_from_json(glcf::io::parse_json_file(path));
    glcf::FinitaryMatrix replayed = glcf::replay_witness(doc.source, doc.witness.word);
    if (replayed != doc.witness.target) {
        // report the first differing entry
        std::size_t n = std::max(replayed.window(), doc.witness.target.window());
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                glcf::FieldElement a = replayed.entry(i, j), b = doc.witness.target.entry(i, j);
                if (a != b) {
                    std::cerr << "witness replay differs at (" << i << "," << j << "): expected "
                              << b.to_string() << ", replay gives " << a.to_string() << "\n";
                    return kExitVerifyFailure;
                }
            }
        std::cerr << "witness replay differs from the recorded target\n";
        return kExitVerifyFailure;
    }
    if (!glcf::as_elementary_transvection(doc.witness.target)) {
        std::cerr << "witness target is not an elementary transvection\n";
        return kExitVerifyFailure;
    }
    std::cout << "witness verified: " << doc.witness.word.size() << " letters\n";
    return kExitOk;
}

int cmd_gen(const std::string& node_name_arg, const glcf::FieldSpec& spec, std::uint64_t seed,
            std::size_t window, const std::string& out) {
    auto node = glcf::node_from_name(node_name_arg);
    if (!node) throw glcf::ParseError("unknown node '" + node_name_arg + "'");
    glcf::Rng rng(seed);
    glcf::Element e = glcf::gen::random_node_element(rng, spec, *node, window);
    write_output(out, glcf::io::element_to_json(e).dump(2) + "\n");
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"normal-subgroup lattice toolkit for column-finite matrix groups"};
    app.require_subcommand(1);

    std::string in_path, out_path, witness_path, labels = "plain", field_name = "Q", suite;
    std::vector<std::string> in_paths;
    std::int64_t p_flag = 5;
    std::uint64_t trials = 1000, seed = 42;
    std::size_t window = 8;
    bool check = false;

    auto* classify = app.add_subcommand("classify", "least lattice node containing an element");
    classify->add_option("input", in_path, "element document")->required();

    auto* closure = app.add_subcommand("closure", "normal closure of generator elements");
    closure->add_option("inputs", in_paths, "element documents")->required();
    closure->add_option("--out", out_path, "descriptor output path (default stdout)");
    closure->add_option("--witness", witness_path, "write a transvection witness here");

    auto* dot = app.add_subcommand("lattice-dot", "emit the lattice diagram in DOT form");
    dot->add_option("--out", out_path, "output path (default stdout)");
    dot->add_option("--labels", labels, "plain|paper node labels")
        ->check(CLI::IsMember({"plain", "paper"}));
    dot->add_flag("--check", check, "validate the diagram against the partial order");

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", suite, "suite id")->required();
    verify->add_option("--trials", trials, "trial count");
    verify->add_option("--seed", seed, "deterministic seed");
    verify->add_option("--window", window, "window bound for random elements");
    verify->add_option("--field", field_name, "Q or F<p>");
    verify->add_option("--p", p_flag, "modulus when --field Fp");
    verify->add_option("--out", out_path, "machine-readable report path");

    auto* vw = app.add_subcommand("verify-witness", "replay a transvection witness");
    vw->add_option("witness", in_path, "witness document")->required();

    auto* gen_cmd = app.add_subcommand("gen", "random element of a named node");
    gen_cmd->add_option("node", suite, "lattice node tag")->required();
    gen_cmd->add_option("--field", field_name, "Q or F<p>");
    gen_cmd->add_option("--p", p_flag, "modulus when --field Fp");
    gen_cmd->add_option("--seed", seed, "deterministic seed");
    gen_cmd->add_option("--window", window, "window bound");
    gen_cmd->add_option("--out", out_path, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e); // prints help/error
        return kExitUsage;
    }

    try {
        if (classify->parsed()) return cmd_classify(in_path);
        if (closure->parsed()) return cmd_closure(in_paths, out_path, witness_path);
        if (dot->parsed()) return cmd_lattice_dot(out_path, labels, check);
        if (verify->parsed())
            return cmd_verify(suite, trials, seed, window, parse_field_flag(field_name, p_flag),
                              out_path);
        if (vw->parsed()) return cmd_verify_witness(in_path);
        if (gen_cmd->parsed())
            return cmd_gen(suite, parse_field_flag(field_name, p_flag), seed, window, out_path);
    } catch (const glcf::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const glcf::Undecidable& e) {
        std::cerr << "undecidable: " << e.what() << "\n";
        return kExitVerifyFailure;
    } catch (const glcf::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerifyFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
