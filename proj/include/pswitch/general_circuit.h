#pragma once

#include <span>
#include <string>
#include <vector>

#include "pswitch/rational.h"
#include "pswitch/sp_circuit.h"

namespace pswitch {

enum class SwitchState { open, closed };

struct Edge {
    std::string u;
    std::string v;
    Rational probability;
    size_t id;
};

struct FactoringOptions {
    size_t max_edges = 30;
};

/// Two-terminal undirected multigraph whose edges are pswitches. Covers
/// non-sp topologies such as the bridge.
class GeneralCircuit {
   public:
    struct EdgeSpec {
        std::string u;
        std::string v;
        Rational probability;
    };

    /// Edges get ids 0, 1, ... in the given order. Terminals must differ.
    GeneralCircuit(std::string source, std::string sink, std::vector<EdgeSpec> edges);

    /// Graph form of an sp circuit; edge i is the i-th leaf in depth-first order.
    static GeneralCircuit from_sp(const SpCircuit &circuit);

    const std::string &source() const {
        return source_;
    }
    const std::string &sink() const {
        return sink_;
    }
    /// Only possible after contracting an edge that joined the terminals.
    bool terminals_merged() const {
        return source_ == sink_;
    }
    const std::vector<Edge> &edges() const {
        return edges_;
    }
    std::vector<std::string> nodes() const;
    bool has_edge(size_t id) const;
    const Edge &edge(size_t id) const;

    /// Closed contracts the edge (its endpoints merge), open deletes it.
    GeneralCircuit condition(size_t edge_id, SwitchState state) const;

    /// Exact closure probability by recursive edge factoring.
    Rational evaluate(const FactoringOptions &options = {}) const;
    /// Same, with edge probabilities replaced in `edges()` order. Values in
    /// [0,1] are accepted.
    Rational evaluate_with(std::span<const Rational> edge_probabilities, const FactoringOptions &options = {}) const;

    /// Line format: "terminals A B" then "u v a/b" per edge.
    std::string str() const;

   private:
    GeneralCircuit() = default;

    std::string source_;
    std::string sink_;
    std::vector<std::string> isolated_;
    std::vector<Edge> edges_;
};

}  // namespace pswitch
