#pragma once

// JSON document formats: elements, subgroups, descriptors, witnesses, and
// suite reports. Rationals travel as strings ("3/2"), prime-field residues
// as integers; parse -> serialize -> parse is the identity on canonical
// values. Parse errors carry line/column positions.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "glcf/lattice.hpp"
#include "glcf/verify.hpp"

namespace glcf::io {

using Json = nlohmann::ordered_json;

// --- parsing with positions -------------------------------------------------

inline std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

inline Json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                         e.what());
    }
}

inline Json parse_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), path);
}

// --- field spec ---------------------------------------------------------------

inline void field_to_json(const FieldSpec& spec, Json& j) {
    if (spec.is_rationals()) {
        j["field"] = "Q";
    } else {
        j["field"] = "Fp";
        j["p"] = spec.modulus();
    }
}

inline FieldSpec field_from_json(const Json& j) {
    if (!j.contains("field")) throw ParseError("missing 'field'");
    std::string f = j.at("field").get<std::string>();
    if (f == "Q") return FieldSpec::rationals();
    if (f == "Fp") {
        if (!j.contains("p")) throw ParseError("prime field needs 'p'");
        return FieldSpec::prime(j.at("p").get<std::int64_t>());
    }
    throw ParseError("unknown field '" + f + "' (expected Q or Fp)");
}

// --- scalars ------------------------------------------------------------------

inline Json value_to_json(const FieldElement& v) {
    if (v.spec().is_prime_field()) return Json(v.residue());
    return Json(v.to_string());
}

inline FieldElement value_from_json(const FieldSpec& spec, const Json& j) {
    if (j.is_number_integer()) return FieldElement::from_integer(spec, j.get<std::int64_t>());
    if (j.is_string()) return FieldElement::parse(spec, j.get<std::string>());
    throw ParseError("scalar must be an integer or a string, got " + j.dump());
}

// --- matrices -----------------------------------------------------------------

inline Json entries_to_json(const FinitaryMatrix& m) {
    Json arr = Json::array();
    for (const auto& [ij, v] : m.delta())
        arr.push_back(Json::array({ij.first, ij.second, value_to_json(v)}));
    return arr;
}

inline FinitaryMatrix entries_from_json(const FieldSpec& spec, const Json& j) {
    if (!j.is_array()) throw ParseError("'entries' must be an array of [i, j, value] triples");
    FinitaryMatrix::Support d;
    for (const auto& t : j) {
        if (!t.is_array() || t.size() != 3) throw ParseError("entry must be [i, j, value]");
        std::size_t i = t[0].get<std::size_t>(), k = t[1].get<std::size_t>();
        FieldElement v = value_from_json(spec, t[2]);
        if (!v.is_zero()) d.emplace(std::make_pair(i, k), v);
    }
    return FinitaryMatrix(spec, std::move(d));
}

inline Json block_to_json(const DenseMatrix& b) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < b.size(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < b.size(); ++j) row.push_back(value_to_json(b.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline DenseMatrix block_from_json(const FieldSpec& spec, const Json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("block must be a nonempty array of rows");
    DenseMatrix b(spec, j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_array() || j[i].size() != j.size())
            throw ParseError("block rows must be square");
        for (std::size_t k = 0; k < j.size(); ++k) b.at(i, k) = value_from_json(spec, j[i][k]);
    }
    return b;
}

inline Json string_to_json(const StringMatrix& s) {
    Json j;
    Json blocks = Json::array();
    for (const auto& b : s.blocks()) blocks.push_back(block_to_json(b));
    j["blocks"] = std::move(blocks);
    if (s.has_periodic_tail()) j["tail"] = Json{{"block", block_to_json(s.tail_block())}};
    else j["tail"] = "identity";
    return j;
}

inline StringMatrix string_from_json(const FieldSpec& spec, const Json& j) {
    std::vector<DenseMatrix> blocks;
    if (j.contains("blocks"))
        for (const auto& b : j.at("blocks")) blocks.push_back(block_from_json(spec, b));
    std::optional<DenseMatrix> tail;
    if (j.contains("tail") && !j.at("tail").is_string()) {
        if (!j.at("tail").contains("block")) throw ParseError("periodic tail needs 'block'");
        tail = block_from_json(spec, j.at("tail").at("block"));
    } else if (j.contains("tail") && j.at("tail").get<std::string>() != "identity") {
        throw ParseError("tail must be \"identity\" or {\"block\": ...}; more general tails are not representable");
    }
    return StringMatrix(spec, std::move(blocks), std::move(tail));
}

inline Json triangular_to_json(const UpperTriangularOracle& u) {
    Json j;
    if (u.is_explicit_prefix()) {
        j["prefix"] = block_to_json(u.explicit_prefix().prefix);
    } else if (u.is_banded()) {
        const auto& r = u.banded_rule();
        j["rule"] = "band";
        j["period"] = r.period;
        Json diag = Json::array();
        for (const auto& v : r.diag) diag.push_back(value_to_json(v));
        j["diag"] = std::move(diag);
        Json bands = Json::object();
        for (const auto& [off, vals] : r.bands) {
            Json arr = Json::array();
            for (const auto& v : vals) arr.push_back(value_to_json(v));
            bands[std::to_string(off)] = std::move(arr);
        }
        j["bands"] = std::move(bands);
    } else {
        j["rule"] = "ones";
    }
    return j;
}

inline UpperTriangularOracle triangular_from_json(const FieldSpec& spec, const Json& j) {
    if (j.contains("prefix"))
        return UpperTriangularOracle(spec, ExplicitPrefix{block_from_json(spec, j.at("prefix"))});
    if (!j.contains("rule")) throw ParseError("triangular letter needs 'prefix' or 'rule'");
    std::string rule = j.at("rule").get<std::string>();
    if (rule == "ones") return UpperTriangularOracle(spec, OnesRule{});
    if (rule != "band") throw ParseError("unknown triangular rule '" + rule + "'");
    BandedRule r;
    r.period = j.at("period").get<std::size_t>();
    for (const auto& v : j.at("diag")) r.diag.push_back(value_from_json(spec, v));
    if (j.contains("bands"))
        for (const auto& [key, vals] : j.at("bands").items()) {
            std::vector<FieldElement> vv;
            for (const auto& v : vals) vv.push_back(value_from_json(spec, v));
            r.bands[static_cast<std::size_t>(std::stoull(key))] = std::move(vv);
        }
    return UpperTriangularOracle(spec, std::move(r));
}

// --- elements -----------------------------------------------------------------

inline Json letter_to_json(const Letter& l);

inline Json element_body_to_json(const Element& e) {
    Json j;
    if (const auto* f = std::get_if<FinitaryMatrix>(&e)) {
        j["kind"] = "finitary";
        j["entries"] = entries_to_json(*f);
    } else if (const auto* s = std::get_if<ScaledFinitary>(&e)) {
        j["kind"] = "scaled";
        j["scalar"] = value_to_json(s->scalar());
        j["entries"] = entries_to_json(s->body());
    } else if (const auto* m = std::get_if<StringMatrix>(&e)) {
        j["kind"] = "string";
        Json sj = string_to_json(*m);
        j["blocks"] = sj["blocks"];
        j["tail"] = sj["tail"];
    } else {
        const auto& w = std::get<GroupWord>(e);
        j["kind"] = "word";
        Json letters = Json::array();
        for (const auto& l : w.letters()) letters.push_back(letter_to_json(l));
        j["letters"] = std::move(letters);
    }
    return j;
}

inline Json letter_to_json(const Letter& l) {
    Json j;
    if (const auto* f = std::get_if<FinitaryMatrix>(&l.g)) {
        j["kind"] = "finitary";
        j["entries"] = entries_to_json(*f);
    } else if (const auto* s = std::get_if<ScaledFinitary>(&l.g)) {
        j["kind"] = "scaled";
        j["scalar"] = value_to_json(s->scalar());
        j["entries"] = entries_to_json(s->body());
    } else if (const auto* m = std::get_if<StringMatrix>(&l.g)) {
        j["kind"] = "string";
        Json sj = string_to_json(*m);
        j["blocks"] = sj["blocks"];
        j["tail"] = sj["tail"];
    } else {
        const auto& u = std::get<UpperTriangularOracle>(l.g);
        j["kind"] = "triangular";
        Json tj = triangular_to_json(u);
        for (auto& [k, v] : tj.items()) j[k] = v;
    }
    if (l.inverted) j["inverted"] = true;
    return j;
}

inline Json element_to_json(const Element& e) {
    Json j;
    field_to_json(element_spec(e), j);
    Json body = element_body_to_json(e);
    for (auto& [k, v] : body.items()) j[k] = v;
    return j;
}

inline Letter letter_from_json(const FieldSpec& spec, const Json& j) {
    bool inverted = j.value("inverted", false);
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "finitary") return Letter{Generator(entries_from_json(spec, j.at("entries"))), inverted};
    if (kind == "scaled")
        return Letter{Generator(ScaledFinitary(value_from_json(spec, j.at("scalar")),
                                               entries_from_json(spec, j.at("entries")))),
                      inverted};
    if (kind == "string") return Letter{Generator(string_from_json(spec, j)), inverted};
    if (kind == "triangular") return Letter{Generator(triangular_from_json(spec, j)), inverted};
    throw ParseError("unknown letter kind '" + kind + "'");
}

inline Element element_from_json(const Json& j) {
    FieldSpec spec = field_from_json(j);
    std::string kind = j.value("kind", "finitary");
    if (kind == "finitary") return Element(entries_from_json(spec, j.at("entries")));
    if (kind == "scaled")
        return Element(ScaledFinitary(value_from_json(spec, j.at("scalar")),
                                      entries_from_json(spec, j.at("entries"))));
    if (kind == "string") return Element(string_from_json(spec, j));
    if (kind == "word") {
        std::vector<Letter> letters;
        for (const auto& l : j.at("letters")) letters.push_back(letter_from_json(spec, l));
        return Element(GroupWord(spec, std::move(letters)));
    }
    throw ParseError("unknown element kind '" + kind + "'");
}

// --- descriptors ----------------------------------------------------------------

inline Json descriptor_to_json(const NormalSubgroupDescriptor& d, const FieldSpec& spec) {
    Json j;
    field_to_json(spec, j);
    if (d.is_full()) {
        j["variant"] = "full";
        return j;
    }
    if (d.is_central()) {
        j["variant"] = "central";
        const auto& h = d.central_subgroup();
        if (h.is_full_flag()) j["full"] = true;
        Json gens = Json::array();
        if (!h.is_full_flag())
            for (const auto& g : h.generators()) gens.push_back(value_to_json(g));
        j["gens"] = std::move(gens);
        return j;
    }
    j["variant"] = "sandwich";
    const auto& s = d.pair_subgroup();
    if (s.full_first()) j["full1"] = true;
    if (s.full_second()) j["full2"] = true;
    Json gens = Json::array();
    for (const auto& [a, b] : s.generators())
        gens.push_back(Json::array({value_to_json(a), value_to_json(b)}));
    j["gens"] = std::move(gens);
    return j;
}

inline NormalSubgroupDescriptor descriptor_from_json(const Json& j) {
    FieldSpec spec = field_from_json(j);
    std::string variant = j.at("variant").get<std::string>();
    if (variant == "full") return NormalSubgroupDescriptor::full();
    if (variant == "central") {
        if (j.value("full", false)) return NormalSubgroupDescriptor::central(UnitSubgroup::full(spec));
        std::vector<FieldElement> gens;
        for (const auto& g : j.value("gens", Json::array())) gens.push_back(value_from_json(spec, g));
        return NormalSubgroupDescriptor::central(UnitSubgroup::generated(spec, std::move(gens)));
    }
    if (variant == "sandwich") {
        std::vector<PairSubgroup::Pair> gens;
        for (const auto& g : j.value("gens", Json::array())) {
            if (!g.is_array() || g.size() != 2) throw ParseError("pair generator must be [a, d]");
            gens.emplace_back(value_from_json(spec, g[0]), value_from_json(spec, g[1]));
        }
        return NormalSubgroupDescriptor::sandwich(PairSubgroup::generated(
            spec, std::move(gens), j.value("full1", false), j.value("full2", false)));
    }
    throw ParseError("unknown descriptor variant '" + variant + "'");
}

// --- witnesses ------------------------------------------------------------------

inline Json witness_to_json(const FinitaryMatrix& source, const TransvectionWitness& w) {
    Json j;
    field_to_json(source.spec(), j);
    j["source"] = entries_to_json(source);
    j["target"] = entries_to_json(w.target);
    Json word = Json::array();
    for (const auto& l : w.word)
        word.push_back(Json{{"conjugator", entries_to_json(l.conjugator)}, {"exponent", l.exponent}});
    j["word"] = std::move(word);
    return j;
}

struct WitnessDocument {
    FinitaryMatrix source;
    TransvectionWitness witness;
};

inline WitnessDocument witness_from_json(const Json& j) {
    FieldSpec spec = field_from_json(j);
    FinitaryMatrix source = entries_from_json(spec, j.at("source"));
    TransvectionWitness w{entries_from_json(spec, j.at("target")), {}};
    for (const auto& l : j.at("word")) {
        int e = l.at("exponent").get<int>();
        if (e != 1 && e != -1) throw ParseError("witness exponent must be +1 or -1");
        w.word.push_back({entries_from_json(spec, l.at("conjugator")), e});
    }
    return {std::move(source), std::move(w)};
}

// --- reports --------------------------------------------------------------------

inline Json report_to_json(const SuiteReport& r) {
    Json j;
    j["suite"] = r.suite;
    j["trials"] = r.trials;
    j["seed"] = r.seed;
    j["params"] = r.params;
    j["passed"] = r.passed();
    j["wall_seconds"] = r.wall_seconds;
    Json fails = Json::array();
    for (const auto& f : r.failures)
        fails.push_back(Json{{"trial", f.trial}, {"message", f.message}});
    j["failures"] = std::move(fails);
    return j;
}

} // namespace glcf::io
