#include "pswitch/sp_circuit.h"

#include "pswitch/errors.h"

using namespace pswitch;

namespace {

Rational evaluate_from(const SpCircuit &c, std::span<const Rational> leaves, size_t &next) {
    if (c.is_leaf()) {
        return leaves[next++];
    }
    auto kids = c.children();
    Rational acc = evaluate_from(kids[0], leaves, next);
    for (size_t i = 1; i < kids.size(); i++) {
        Rational v = evaluate_from(kids[i], leaves, next);
        acc = c.kind() == NodeKind::series ? series_probability(acc, v) : parallel_probability(acc, v);
    }
    return acc;
}

void collect_leaves(const SpCircuit &c, std::vector<Rational> &out) {
    if (c.is_leaf()) {
        out.push_back(c.probability());
        return;
    }
    for (const auto &k : c.children()) {
        collect_leaves(k, out);
    }
}

void write(const SpCircuit &c, std::string &out) {
    if (c.is_leaf()) {
        out += c.probability().str();
        return;
    }
    out += c.kind() == NodeKind::series ? "(s" : "(p";
    for (const auto &k : c.children()) {
        out += ' ';
        write(k, out);
    }
    out += ')';
}

}  // namespace

Rational pswitch::series_probability(const Rational &a, const Rational &b) {
    return a * b;
}

Rational pswitch::parallel_probability(const Rational &a, const Rational &b) {
    return a + b - a * b;
}

SpCircuit SpCircuit::leaf(const Rational &probability, EndpointPolicy policy) {
    bool ok = policy == EndpointPolicy::allow ? probability.is_probability() : probability.is_open_probability();
    if (!ok) {
        throw DomainError("pswitch probability outside " +
                          std::string(policy == EndpointPolicy::allow ? "[0,1]" : "(0,1)") + ": " + probability.str());
    }
    return SpCircuit(std::make_shared<const Node>(Node{NodeKind::leaf, probability, {}, 1, true}));
}

SpCircuit SpCircuit::compose(NodeKind kind, std::vector<SpCircuit> children) {
    if (kind == NodeKind::leaf) {
        throw DomainError("compose needs series or parallel");
    }
    if (children.size() < 2) {
        throw DomainError("series/parallel node needs at least 2 children");
    }
    std::vector<SpCircuit> flat;
    flat.reserve(children.size());
    for (auto &c : children) {
        if (c.kind() == kind) {
            for (const auto &g : c.children()) {
                flat.push_back(g);
            }
        } else {
            flat.push_back(std::move(c));
        }
    }
    size_t size = 0;
    size_t big = 0;
    bool ssp = true;
    for (const auto &c : flat) {
        size += c.size();
        if (c.size() > 1) {
            big++;
            ssp = ssp && c.is_ssp();
        }
    }
    ssp = ssp && big <= 1;
    return SpCircuit(std::make_shared<const Node>(Node{kind, Rational(0), std::move(flat), size, ssp}));
}

SpCircuit SpCircuit::series(std::vector<SpCircuit> children) {
    return compose(NodeKind::series, std::move(children));
}

SpCircuit SpCircuit::parallel(std::vector<SpCircuit> children) {
    return compose(NodeKind::parallel, std::move(children));
}

Rational SpCircuit::evaluate() const {
    if (is_leaf()) {
        return probability();
    }
    auto kids = children();
    Rational acc = kids[0].evaluate();
    for (size_t i = 1; i < kids.size(); i++) {
        Rational v = kids[i].evaluate();
        acc = kind() == NodeKind::series ? series_probability(acc, v) : parallel_probability(acc, v);
    }
    return acc;
}

Rational SpCircuit::evaluate_with(std::span<const Rational> leaf_probabilities) const {
    if (leaf_probabilities.size() != size()) {
        throw DomainError("expected " + std::to_string(size()) + " leaf probabilities, got " +
                          std::to_string(leaf_probabilities.size()));
    }
    for (const auto &p : leaf_probabilities) {
        if (!p.is_probability()) {
            throw DomainError("leaf probability outside [0,1]: " + p.str());
        }
    }
    size_t next = 0;
    return evaluate_from(*this, leaf_probabilities, next);
}

std::vector<Rational> SpCircuit::leaf_probabilities() const {
    std::vector<Rational> out;
    out.reserve(size());
    collect_leaves(*this, out);
    return out;
}

SpCircuit SpCircuit::dual() const {
    if (is_leaf()) {
        return leaf(probability().complement(), EndpointPolicy::allow);
    }
    std::vector<SpCircuit> kids;
    kids.reserve(children().size());
    for (const auto &k : children()) {
        kids.push_back(k.dual());
    }
    return compose(kind() == NodeKind::series ? NodeKind::parallel : NodeKind::series, std::move(kids));
}

std::string SpCircuit::str() const {
    std::string out;
    write(*this, out);
    return out;
}

bool pswitch::operator==(const SpCircuit &a, const SpCircuit &b) {
    if (a.node_ == b.node_) {
        return true;
    }
    if (a.kind() != b.kind() || a.size() != b.size()) {
        return false;
    }
    if (a.is_leaf()) {
        return a.probability() == b.probability();
    }
    auto ka = a.children();
    auto kb = b.children();
    if (ka.size() != kb.size()) {
        return false;
    }
    for (size_t i = 0; i < ka.size(); i++) {
        if (!(ka[i] == kb[i])) {
            return false;
        }
    }
    return true;
}
