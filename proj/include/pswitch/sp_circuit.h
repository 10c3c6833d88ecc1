#pragma once

#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pswitch/rational.h"

namespace pswitch {

enum class NodeKind { leaf, series, parallel };

/// Whether a leaf may carry the degenerate probabilities 0 (open wire) or 1
/// (short). Only the approximation bound machinery asks for `allow`.
enum class EndpointPolicy { reject, allow };

/// Immutable series-parallel circuit. Leaves are pswitches.
///
/// Series/parallel nodes are n-ary and kept flat: a series child of a series
/// node is spliced into its parent (same for parallel), so two circuits that
/// only differ in how associativity was bracketed compare equal.
class SpCircuit {
   public:
    static SpCircuit leaf(const Rational &probability, EndpointPolicy policy = EndpointPolicy::reject);
    static SpCircuit series(std::vector<SpCircuit> children);
    static SpCircuit parallel(std::vector<SpCircuit> children);
    static SpCircuit compose(NodeKind kind, std::vector<SpCircuit> children);

    NodeKind kind() const {
        return node_->kind;
    }
    bool is_leaf() const {
        return node_->kind == NodeKind::leaf;
    }
    /// Leaf probability. Only meaningful for leaves.
    const Rational &probability() const {
        return node_->probability;
    }
    std::span<const SpCircuit> children() const {
        return node_->children;
    }
    /// Number of pswitches.
    size_t size() const {
        return node_->size;
    }
    /// Simple series-parallel: every internal node has at most one child with
    /// more than one pswitch, recursively.
    bool is_ssp() const {
        return node_->ssp;
    }

    Rational evaluate() const;
    /// Evaluates with the leaves (in depth-first, left-to-right order) replaced
    /// by `leaf_probabilities`. Values in [0,1] are accepted.
    Rational evaluate_with(std::span<const Rational> leaf_probabilities) const;
    std::vector<Rational> leaf_probabilities() const;

    /// Series and parallel swapped everywhere, every leaf p replaced by 1-p.
    SpCircuit dual() const;

    /// Canonical s-expression, e.g. "(p (s 1/2 1/2) 1/2)".
    std::string str() const;

    friend bool operator==(const SpCircuit &a, const SpCircuit &b);

   private:
    struct Node {
        NodeKind kind;
        Rational probability;
        std::vector<SpCircuit> children;
        size_t size;
        bool ssp;
    };

    explicit SpCircuit(std::shared_ptr<const Node> node) : node_(std::move(node)) {
    }

    std::shared_ptr<const Node> node_;
};

bool operator==(const SpCircuit &a, const SpCircuit &b);

Rational series_probability(const Rational &a, const Rational &b);
Rational parallel_probability(const Rational &a, const Rational &b);

}  // namespace pswitch
