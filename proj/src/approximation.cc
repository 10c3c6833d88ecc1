#include "pswitch/approximation.h"

#include <fmt/format.h>

#include "pswitch/errors.h"
#include "pswitch/oracle.h"

namespace pswitch {

namespace {

// Residual for x strictly on one side of p; endpoints act as identities.
Rational residual_after(const Rational &x, Orientation o, const Rational &p) {
    if (o == Orientation::series) return p / x;
    return (p - x) / x.complement();
}

SpCircuit wrap(const Insertion &ins, const SpCircuit &inner) {
    auto kind = ins.orientation == Orientation::series ? NodeKind::series : NodeKind::parallel;
    return SpCircuit::compose(kind, {SpCircuit::leaf(ins.x, EndpointPolicy::allow), inner});
}

std::vector<Rational> alphabet(const ApproxConfig &c) {
    std::vector<Rational> out;
    if (c.endpoint_switches) out.emplace_back(0);
    out.insert(out.end(), c.set.values().begin(), c.set.values().end());
    if (c.endpoint_switches) out.emplace_back(1);
    return out;
}

bool next_tuple(std::vector<std::size_t> &idx, std::size_t base) {
    for (std::size_t i = idx.size(); i-- > 0;) {
        if (++idx[i] < base) return true;
        idx[i] = 0;
    }
    return false;
}

struct Core {
    SpCircuit circuit;
    Rational value;
};

Core best_core(const ApproxConfig &c, std::size_t size, const Rational &residual) {
    auto table = enumerate(c.set, size, Family::ssp);
    std::optional<Core> best;
    Rational best_dist;
    std::size_t best_size = 0;
    auto consider = [&](const Rational &v, std::size_t k, auto &&make) {
        Rational dist = (v - residual).abs();
        if (best && (dist > best_dist || (dist == best_dist && (k > best_size || (k == best_size && v >= best->value)))))
            return;
        best = Core{make(), v};
        best_dist = dist;
        best_size = k;
    };
    for (std::size_t k = 1; k <= size; ++k)
        for (const auto &v : table.new_at(k)) consider(v, k, [&] { return table.witness(v); });
    if (c.endpoint_switches)
        for (long e : {0L, 1L})
            consider(Rational(e), 1, [&] { return SpCircuit::leaf(Rational(e), EndpointPolicy::allow); });
    return *best;
}

}  // namespace

void ApproxConfig::validate() const {
    if (!target.is_probability()) throw DomainError(fmt::format("target {} is not in [0, 1]", target.str()));
    if (budget < 1) throw DomainError("budget must be at least 1");
    if (step < 1 || step > budget)
        throw DomainError(fmt::format("step {} must lie in 1..budget ({})", step, budget));
    if (step > max_step) throw DomainError(fmt::format("step {} exceeds the cap of {}", step, max_step));
}

Rational r_factor(const Rational &x, Orientation orientation) {
    return orientation == Orientation::series ? x : x.complement();
}

TupleCost f_cost(std::span<const Rational> xs, const Rational &p) {
    TupleCost out{Rational(1), false, {}, p};
    for (const auto &x : xs) {
        if (!x.is_probability()) throw DomainError(fmt::format("pswitch {} is not in [0, 1]", x.str()));
        if (x == out.residual) {
            out.cost = 0;
            out.exact_hit = true;
            return out;
        }
        Orientation o = x > out.residual ? Orientation::series : Orientation::parallel;
        out.cost *= r_factor(x, o);
        out.path.push_back({x, o});
        out.residual = residual_after(x, o, out.residual);
    }
    return out;
}

ApproxResult approx_greedy(const ApproxConfig &config) {
    config.validate();
    const std::size_t m = config.step;
    const std::size_t rounds = (config.budget - 1) / m;
    const auto letters = alphabet(config);

    std::vector<Insertion> insertions;
    Rational p = config.target;
    std::optional<SpCircuit> core;

    for (std::size_t round = 0; round < rounds && !core; ++round) {
        if (config.set.contains(p) || (config.endpoint_switches && (p == 0 || p == 1))) {
            core = SpCircuit::leaf(p, EndpointPolicy::allow);
            break;
        }
        std::optional<TupleCost> best;
        std::vector<std::size_t> idx(m, 0);
        std::vector<Rational> xs(m);
        do {
            for (std::size_t i = 0; i < m; ++i) xs[i] = letters[idx[i]];
            auto cost = f_cost(xs, p);
            if (!best || cost.cost < best->cost) best = std::move(cost);
            if (best->exact_hit) break;
        } while (next_tuple(idx, letters.size()));

        insertions.insert(insertions.end(), best->path.begin(), best->path.end());
        p = best->residual;
        if (best->exact_hit) core = SpCircuit::leaf(p, EndpointPolicy::allow);
    }

    bool exact = core.has_value();
    if (!core) {
        if (config.set.contains(p) || (config.endpoint_switches && (p == 0 || p == 1))) {
            core = SpCircuit::leaf(p, EndpointPolicy::allow);
            exact = true;
        } else {
            core = best_core(config, config.budget - insertions.size(), p).circuit;
        }
    }

    SpCircuit circuit = *core;
    for (auto it = insertions.rbegin(); it != insertions.rend(); ++it) circuit = wrap(*it, circuit);
    Rational achieved = circuit.evaluate();
    return ApproxResult{circuit,    achieved, (achieved - config.target).abs(), std::move(insertions), *core, p,
                        exact || achieved == config.target};
}

Rational propagate_error(std::span<const Insertion> segment, const Rational &e_inner) {
    Rational out = e_inner;
    for (const auto &ins : segment) out *= r_factor(ins.x, ins.orientation);
    return out;
}

SingleBound bound_single(const Rational &p, std::size_t n) {
    if (!p.is_open_probability()) throw DomainError(fmt::format("pswitch {} is not in (0, 1)", p.str()));
    if (n < 1) throw DomainError("bound_single needs n >= 1");
    Rational bound = max(p, p.complement()).pow(n) / Rational(2);
    return {bound, p <= Rational(1, 2) ? bound.complement() : bound};
}

Rational bound_greedy(const PswitchSet &set, std::size_t n, std::size_t m) {
    if (n < 1) throw DomainError("bound_greedy needs n >= 1");
    if (m != 1 && m != 2) throw DomainError(fmt::format("no greedy bound for step {}", m));
    Rational delta = set.max_interval();
    unsigned long e = (n + 1) / 2 - 1;
    Rational base;
    if (m == 1)
        base = (Rational(3) + delta) * delta / Rational(2);
    else if (set.uniform_q())
        base = delta * delta.complement();
    else
        base = (Rational(2) + delta) * delta / Rational(2);
    return delta / Rational(2) * base.pow(e);
}

}  // namespace pswitch
