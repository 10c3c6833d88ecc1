#include "pswitch/general_circuit.h"

#include <algorithm>
#include <map>
#include <set>

#include "pswitch/errors.h"

using namespace pswitch;

namespace {

struct WorkEdge {
    int u;
    int v;
    const Rational *p;
};

bool connected(const std::vector<WorkEdge> &edges, int s, int t, int node_count) {
    std::vector<std::vector<int>> adj(node_count);
    for (const auto &e : edges) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    std::vector<char> seen(node_count, 0);
    std::vector<int> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
        int n = stack.back();
        stack.pop_back();
        if (n == t) {
            return true;
        }
        for (int m : adj[n]) {
            if (!seen[m]) {
                seen[m] = 1;
                stack.push_back(m);
            }
        }
    }
    return false;
}

Rational factor(std::vector<WorkEdge> edges, int s, int t, int node_count) {
    if (s == t) {
        return Rational(1);
    }
    std::erase_if(edges, [](const WorkEdge &e) { return e.u == e.v; });
    if (!connected(edges, s, t, node_count)) {
        return Rational(0);
    }
    // Pivot on an edge touching a terminal; the result does not depend on the choice.
    size_t pivot = 0;
    for (size_t i = 0; i < edges.size(); i++) {
        if (edges[i].u == s || edges[i].v == s || edges[i].u == t || edges[i].v == t) {
            pivot = i;
            break;
        }
    }
    WorkEdge e = edges[pivot];
    edges.erase(edges.begin() + static_cast<long>(pivot));

    const Rational &p = *e.p;
    Rational result(0);
    if (p.sign() != 0) {
        // Merge e.v into e.u.
        auto closed = edges;
        for (auto &x : closed) {
            if (x.u == e.v) {
                x.u = e.u;
            }
            if (x.v == e.v) {
                x.v = e.u;
            }
        }
        int s2 = s == e.v ? e.u : s;
        int t2 = t == e.v ? e.u : t;
        result += p * factor(std::move(closed), s2, t2, node_count);
    }
    if (p != Rational(1)) {
        result += p.complement() * factor(std::move(edges), s, t, node_count);
    }
    return result;
}

void build_sp(const SpCircuit &c, const std::string &a, const std::string &b, int &next_node,
              std::vector<GeneralCircuit::EdgeSpec> &out) {
    if (c.is_leaf()) {
        out.push_back({a, b, c.probability()});
        return;
    }
    auto kids = c.children();
    if (c.kind() == NodeKind::parallel) {
        for (const auto &k : kids) {
            build_sp(k, a, b, next_node, out);
        }
        return;
    }
    std::string prev = a;
    for (size_t i = 0; i < kids.size(); i++) {
        std::string nxt = i + 1 == kids.size() ? b : "n" + std::to_string(next_node++);
        build_sp(kids[i], prev, nxt, next_node, out);
        prev = nxt;
    }
}

}  // namespace

GeneralCircuit::GeneralCircuit(std::string source, std::string sink, std::vector<EdgeSpec> edges)
    : source_(std::move(source)), sink_(std::move(sink)) {
    if (source_ == sink_) {
        throw DomainError("terminals must be distinct nodes");
    }
    edges_.reserve(edges.size());
    for (size_t i = 0; i < edges.size(); i++) {
        if (!edges[i].probability.is_open_probability()) {
            throw DomainError("pswitch probability outside (0,1): " + edges[i].probability.str());
        }
        edges_.push_back(Edge{std::move(edges[i].u), std::move(edges[i].v), edges[i].probability, i});
    }
}

GeneralCircuit GeneralCircuit::from_sp(const SpCircuit &circuit) {
    std::vector<EdgeSpec> specs;
    int next_node = 0;
    build_sp(circuit, "s", "t", next_node, specs);
    GeneralCircuit g;
    g.source_ = "s";
    g.sink_ = "t";
    for (size_t i = 0; i < specs.size(); i++) {
        g.edges_.push_back(Edge{specs[i].u, specs[i].v, specs[i].probability, i});
    }
    return g;
}

std::vector<std::string> GeneralCircuit::nodes() const {
    std::vector<std::string> out{source_};
    auto add = [&](const std::string &n) {
        if (std::find(out.begin(), out.end(), n) == out.end()) {
            out.push_back(n);
        }
    };
    add(sink_);
    for (const auto &n : isolated_) {
        add(n);
    }
    for (const auto &e : edges_) {
        add(e.u);
        add(e.v);
    }
    return out;
}

bool GeneralCircuit::has_edge(size_t id) const {
    return std::any_of(edges_.begin(), edges_.end(), [&](const Edge &e) { return e.id == id; });
}

const Edge &GeneralCircuit::edge(size_t id) const {
    for (const auto &e : edges_) {
        if (e.id == id) {
            return e;
        }
    }
    throw DomainError("unknown edge id " + std::to_string(id));
}

GeneralCircuit GeneralCircuit::condition(size_t edge_id, SwitchState state) const {
    const Edge &target = edge(edge_id);
    GeneralCircuit g;
    g.source_ = source_;
    g.sink_ = sink_;
    g.isolated_ = isolated_;
    std::string keep = target.u;
    std::string gone = target.v;
    if (state == SwitchState::closed && keep != gone) {
        // The surviving node keeps a terminal's name when one is involved.
        if (gone == source_ || (gone == sink_ && keep != source_)) {
            std::swap(keep, gone);
        }
        if (g.source_ == gone) {
            g.source_ = keep;
        }
        if (g.sink_ == gone) {
            g.sink_ = keep;
        }
    }
    for (const auto &e : edges_) {
        if (e.id == edge_id) {
            continue;
        }
        Edge copy = e;
        if (state == SwitchState::closed) {
            if (copy.u == gone) {
                copy.u = keep;
            }
            if (copy.v == gone) {
                copy.v = keep;
            }
        }
        g.edges_.push_back(std::move(copy));
    }
    if (state == SwitchState::open) {
        for (const auto &n : {target.u, target.v}) {
            bool still_there = n == g.source_ || n == g.sink_ ||
                               std::any_of(g.edges_.begin(), g.edges_.end(),
                                           [&](const Edge &e) { return e.u == n || e.v == n; });
            if (!still_there && std::find(g.isolated_.begin(), g.isolated_.end(), n) == g.isolated_.end()) {
                g.isolated_.push_back(n);
            }
        }
    }
    return g;
}

Rational GeneralCircuit::evaluate(const FactoringOptions &options) const {
    std::vector<Rational> probs;
    probs.reserve(edges_.size());
    for (const auto &e : edges_) {
        probs.push_back(e.probability);
    }
    return evaluate_with(probs, options);
}

Rational GeneralCircuit::evaluate_with(std::span<const Rational> edge_probabilities,
                                       const FactoringOptions &options) const {
    if (edge_probabilities.size() != edges_.size()) {
        throw DomainError("expected " + std::to_string(edges_.size()) + " edge probabilities");
    }
    if (edges_.size() > options.max_edges) {
        throw ResourceLimitError("factoring cap exceeded: " + std::to_string(edges_.size()) + " edges > " +
                                 std::to_string(options.max_edges));
    }
    std::map<std::string, int> index;
    auto id_of = [&](const std::string &n) {
        auto [it, inserted] = index.emplace(n, static_cast<int>(index.size()));
        return it->second;
    };
    int s = id_of(source_);
    int t = id_of(sink_);
    std::vector<WorkEdge> work;
    work.reserve(edges_.size());
    for (size_t i = 0; i < edges_.size(); i++) {
        if (!edge_probabilities[i].is_probability()) {
            throw DomainError("edge probability outside [0,1]: " + edge_probabilities[i].str());
        }
        work.push_back(WorkEdge{id_of(edges_[i].u), id_of(edges_[i].v), &edge_probabilities[i]});
    }
    return factor(std::move(work), s, t, static_cast<int>(index.size()));
}

std::string GeneralCircuit::str() const {
    std::string out = "terminals " + source_ + " " + sink_ + "\n";
    for (const auto &e : edges_) {
        out += e.u + " " + e.v + " " + e.probability.str() + "\n";
    }
    return out;
}
