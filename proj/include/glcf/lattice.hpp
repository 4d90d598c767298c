#pragma once

// The normal-subgroup lattice of the column-finite group: the seven named
// nodes with their Hasse diagram, minimal-node classification of elements,
// exact normal-closure descriptors, and containment tests. The complete
// lattice is: subgroups of the center, sandwiches over SL_fr parametrized by
// subgroups of K* x K* under (scalar part, corner determinant), and the full
// group.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "glcf/procedures.hpp"
#include "glcf/unit_groups.hpp"
#include "glcf/word.hpp"

namespace glcf {

enum class LatticeNode { Trivial, Dsc, SLfr, GLfr, DscSLfr, DscGLfr, GLcf };

inline const char* node_name(LatticeNode n) {
    switch (n) {
        case LatticeNode::Trivial: return "Trivial";
        case LatticeNode::Dsc: return "Dsc";
        case LatticeNode::SLfr: return "SLfr";
        case LatticeNode::GLfr: return "GLfr";
        case LatticeNode::DscSLfr: return "DscSLfr";
        case LatticeNode::DscGLfr: return "DscGLfr";
        case LatticeNode::GLcf: return "GLcf";
    }
    return "?";
}

inline const char* node_paper_label(LatticeNode n) {
    switch (n) {
        case LatticeNode::Trivial: return "{E}";
        case LatticeNode::Dsc: return "D_sc";
        case LatticeNode::SLfr: return "SL_fr";
        case LatticeNode::GLfr: return "GL_fr";
        case LatticeNode::DscSLfr: return "D_sc x SL_fr";
        case LatticeNode::DscGLfr: return "D_sc x GL_fr";
        case LatticeNode::GLcf: return "GL_cf";
    }
    return "?";
}

inline const std::array<LatticeNode, 7>& all_nodes() {
    static const std::array<LatticeNode, 7> nodes{
        LatticeNode::Trivial, LatticeNode::Dsc,     LatticeNode::SLfr,    LatticeNode::GLfr,
        LatticeNode::DscSLfr, LatticeNode::DscGLfr, LatticeNode::GLcf};
    return nodes;
}

inline std::optional<LatticeNode> node_from_name(const std::string& s) {
    for (auto n : all_nodes())
        if (s == node_name(n)) return n;
    return std::nullopt;
}

/// Partial order of the seven nodes. Dsc is incomparable with SLfr and
/// GLfr; GLfr and DscSLfr are incomparable.
inline bool node_leq(LatticeNode a, LatticeNode b) {
    if (a == b) return true;
    if (a == LatticeNode::Trivial) return true;
    if (b == LatticeNode::GLcf) return true;
    switch (a) {
        case LatticeNode::Dsc:
            return b == LatticeNode::DscSLfr || b == LatticeNode::DscGLfr;
        case LatticeNode::SLfr:
            return b == LatticeNode::GLfr || b == LatticeNode::DscSLfr || b == LatticeNode::DscGLfr;
        case LatticeNode::GLfr:
            return b == LatticeNode::DscGLfr;
        case LatticeNode::DscSLfr:
            return b == LatticeNode::DscGLfr;
        default:
            return false;
    }
}

/// The least named node containing the element.
inline LatticeNode classify_minimal_node(const Element& g) {
    auto red = reduce_element(g);
    if (red.kind == TailKind::NotProduct) return LatticeNode::GLcf;
    if (red.kind == TailKind::Unknown) throw Undecidable();
    const ScaledFinitary& v = *red.value;
    const bool scalar_one = v.scalar().is_one();
    if (v.body().is_identity()) return scalar_one ? LatticeNode::Trivial : LatticeNode::Dsc;
    const bool det_one = v.body().corner_det().is_one();
    if (scalar_one) return det_one ? LatticeNode::SLfr : LatticeNode::GLfr;
    return det_one ? LatticeNode::DscSLfr : LatticeNode::DscGLfr;
}

/// (alpha, delta) = (scalar part, corner determinant of the finitary part):
/// the pair of K*-quotient coordinates on D_sc x GL_fr.
inline std::pair<FieldElement, FieldElement> quotient_image(const Element& g) {
    auto [alpha, h] = scalar_split(g);
    return {alpha, h.corner_det()};
}

// ---------------------------------------------------------------------------
// Normal subgroup descriptors

/// Exact encoding of an arbitrary normal subgroup:
///   Central(H)  — the scalars with value in H <= K*;
///   Sandwich(S) — the preimage in D_sc x GL_fr of S <= K* x K* under
///                 (scalar part, corner determinant); always contains SL_fr;
///   Full        — the whole group.
class NormalSubgroupDescriptor {
public:
    struct CentralTag { UnitSubgroup h; };
    struct SandwichTag { PairSubgroup s; };
    struct FullTag {};

    static NormalSubgroupDescriptor central(UnitSubgroup h) {
        return NormalSubgroupDescriptor(CentralTag{std::move(h)});
    }
    static NormalSubgroupDescriptor sandwich(PairSubgroup s) {
        return NormalSubgroupDescriptor(SandwichTag{std::move(s)});
    }
    static NormalSubgroupDescriptor full() { return NormalSubgroupDescriptor(FullTag{}); }

    /// The descriptor of a named lattice node.
    static NormalSubgroupDescriptor of_node(LatticeNode n, const FieldSpec& spec) {
        switch (n) {
            case LatticeNode::Trivial: return central(UnitSubgroup::trivial(spec));
            case LatticeNode::Dsc: return central(UnitSubgroup::full(spec));
            case LatticeNode::SLfr: return sandwich(PairSubgroup::trivial(spec));
            case LatticeNode::GLfr: return sandwich(PairSubgroup::generated(spec, {}, false, true));
            case LatticeNode::DscSLfr: return sandwich(PairSubgroup::generated(spec, {}, true, false));
            case LatticeNode::DscGLfr: return sandwich(PairSubgroup::generated(spec, {}, true, true));
            case LatticeNode::GLcf: return full();
        }
        throw Error("unknown node");
    }

    bool is_central() const { return std::holds_alternative<CentralTag>(v_); }
    bool is_sandwich() const { return std::holds_alternative<SandwichTag>(v_); }
    bool is_full() const { return std::holds_alternative<FullTag>(v_); }

    const UnitSubgroup& central_subgroup() const { return std::get<CentralTag>(v_).h; }
    const PairSubgroup& pair_subgroup() const { return std::get<SandwichTag>(v_).s; }

    std::string canonical_key() const {
        if (is_full()) return "D:full";
        if (is_central()) return "D:central:" + central_subgroup().canonical_key();
        return "D:sandwich:" + pair_subgroup().canonical_key();
    }

    bool operator==(const NormalSubgroupDescriptor& o) const {
        return canonical_key() == o.canonical_key();
    }
    bool operator!=(const NormalSubgroupDescriptor& o) const { return !(*this == o); }

private:
    using V = std::variant<CentralTag, SandwichTag, FullTag>;
    explicit NormalSubgroupDescriptor(V v) : v_(std::move(v)) {}
    V v_;
};

/// Membership of a classifiable element in a described normal subgroup.
inline bool descriptor_contains(const NormalSubgroupDescriptor& d, const Element& g) {
    LatticeNode node = classify_minimal_node(g); // throws Undecidable when it must
    if (d.is_full()) return true;
    if (d.is_central()) {
        if (!node_leq(node, LatticeNode::Dsc)) return false;
        auto [alpha, h] = scalar_split(g);
        return d.central_subgroup().contains(alpha);
    }
    if (!node_leq(node, LatticeNode::DscGLfr)) return false;
    return d.pair_subgroup().contains(quotient_image(g));
}

/// Normal-closure result; a transvection witness is attached on the sandwich
/// branch whenever the bounded search succeeds on one of the generators.
struct ClosureResult {
    NormalSubgroupDescriptor descriptor;
    std::optional<TransvectionWitness> witness;
    std::optional<FinitaryMatrix> witness_source; // element of the closure the witness replays against
    std::string witness_note;
};

/// Normal closure of finitely many classifiable elements:
/// all scalar -> Central(scalars); inside the product with a non-scalar
/// generator -> Sandwich(quotient images), by simplicity of SL_fr; any
/// generator outside the product -> Full, by simplicity of the top quotient.
inline ClosureResult normal_closure(const FieldSpec& spec, const std::vector<Element>& gens,
                                    bool attach_witness = true) {
    bool any_outside = false, any_nonscalar = false;
    std::vector<LatticeNode> nodes;
    for (const auto& g : gens) {
        LatticeNode n = classify_minimal_node(g);
        nodes.push_back(n);
        if (!node_leq(n, LatticeNode::DscGLfr)) any_outside = true;
        else if (!node_leq(n, LatticeNode::Dsc)) any_nonscalar = true;
    }
    if (any_outside) return {NormalSubgroupDescriptor::full(), std::nullopt, std::nullopt, ""};
    if (!any_nonscalar) {
        std::vector<FieldElement> scalars;
        for (const auto& g : gens) {
            auto [alpha, h] = scalar_split(g);
            if (!alpha.is_one()) scalars.push_back(alpha);
        }
        return {NormalSubgroupDescriptor::central(UnitSubgroup::generated(spec, std::move(scalars))),
                std::nullopt, std::nullopt, ""};
    }
    std::vector<PairSubgroup::Pair> images;
    for (const auto& g : gens) images.push_back(quotient_image(g));
    ClosureResult out{NormalSubgroupDescriptor::sandwich(PairSubgroup::generated(spec, std::move(images))),
                      std::nullopt, std::nullopt, ""};
    if (!attach_witness) return out;
    // attach a checkable certificate that the closure reaches SL_fr
    for (std::size_t i = 0; i < gens.size(); ++i) {
        if (node_leq(nodes[i], LatticeNode::Dsc)) continue;
        auto [alpha, h] = scalar_split(gens[i]);
        FinitaryMatrix source = h;
        if (!source.corner_det().is_one()) {
            // determinant-1 element of the closure: a commutator of the generator
            bool found = false;
            for (std::size_t k = 0; k < source.window() + 1 && !found; ++k) {
                FinitaryMatrix t = FinitaryMatrix::transvection(
                    spec, k, k + 1, FieldElement::one(spec));
                FinitaryMatrix comm = source.inverse() * t.inverse() * source * t;
                if (!comm.is_identity()) {
                    source = comm;
                    found = true;
                }
            }
            if (!found) continue;
        }
        if (source.is_identity()) continue;
        try {
            out.witness = transvection_witness(source);
            out.witness_source = source;
            break;
        } catch (const SearchExhausted& e) {
            out.witness_note = e.what();
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// The Hasse diagram

struct LatticeEdge {
    LatticeNode lower, upper;
    bool thick; // thick: quotient isomorphic to K*; thin: simple quotient
};

/// The 7-node, 8-edge diagram with the thick/thin assignment:
/// thick quotients are K*, thin quotients are simple.
inline const std::vector<LatticeEdge>& lattice_edges() {
    static const std::vector<LatticeEdge> edges{
        {LatticeNode::Trivial, LatticeNode::Dsc, true},
        {LatticeNode::Trivial, LatticeNode::SLfr, false},
        {LatticeNode::Dsc, LatticeNode::DscSLfr, false},
        {LatticeNode::SLfr, LatticeNode::GLfr, true},
        {LatticeNode::SLfr, LatticeNode::DscSLfr, true},
        {LatticeNode::GLfr, LatticeNode::DscGLfr, true},
        {LatticeNode::DscSLfr, LatticeNode::DscGLfr, true},
        {LatticeNode::DscGLfr, LatticeNode::GLcf, false},
    };
    return edges;
}

/// Consistency of the diagram against the partial order: every edge is a
/// cover, and every cover is an edge.
inline bool lattice_graph_consistent() {
    for (const auto& e : lattice_edges()) {
        if (!node_leq(e.lower, e.upper) || e.lower == e.upper) return false;
        for (auto c : all_nodes())
            if (c != e.lower && c != e.upper && node_leq(e.lower, c) && node_leq(c, e.upper))
                return false;
    }
    for (auto a : all_nodes())
        for (auto b : all_nodes()) {
            if (a == b || !node_leq(a, b)) continue;
            bool covered = false;
            for (auto c : all_nodes())
                if (c != a && c != b && node_leq(a, c) && node_leq(c, b)) covered = true;
            bool is_edge = false;
            for (const auto& e : lattice_edges())
                if (e.lower == a && e.upper == b) is_edge = true;
            if (covered == is_edge) return false;
        }
    return true;
}

/// DOT document for the lattice; thick edges carry style=bold.
inline std::string lattice_graph_dot(bool paper_labels = false) {
    std::string s = "graph normal_subgroup_lattice {\n";
    s += "  rankdir=BT;\n  node [shape=plaintext];\n";
    for (auto n : all_nodes()) {
        s += std::string("  ") + node_name(n) + " [label=\"" +
             (paper_labels ? node_paper_label(n) : node_name(n)) + "\"];\n";
    }
    for (const auto& e : lattice_edges()) {
        s += std::string("  ") + node_name(e.lower) + " -- " + node_name(e.upper);
        s += e.thick ? " [style=bold];\n" : ";\n";
    }
    s += "}\n";
    return s;
}

} // namespace glcf
