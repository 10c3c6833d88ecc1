#include "pswitch/robustness.h"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

#include <fmt/format.h>

#include "pswitch/errors.h"

namespace pswitch {

namespace {

constexpr std::size_t kParallelThreshold = 12;

void require_epsilon(const Rational &epsilon) {
    if (epsilon.sign() < 0) throw DomainError(fmt::format("epsilon {} is negative", epsilon.str()));
}

void require_in_range(const std::vector<Rational> &ps, const Rational &epsilon) {
    for (const auto &p : ps)
        if (!(p - epsilon).is_probability() || !(p + epsilon).is_probability())
            throw DomainError(fmt::format("{} +- {} leaves [0, 1]", p.str(), epsilon.str()));
}

std::vector<Rational> edge_probabilities(const GeneralCircuit &c) {
    std::vector<Rational> out;
    for (const auto &e : c.edges()) out.push_back(e.probability);
    return out;
}

std::vector<Rational> shifted(const std::vector<Rational> &ps, const Rational &delta) {
    std::vector<Rational> out;
    for (const auto &p : ps) out.push_back(p + delta);
    return out;
}

template <class Eval>
Rational vertex_enumeration(const std::vector<Rational> &base, const Rational &epsilon, std::size_t cap,
                            Eval evaluate) {
    const std::size_t n = base.size();
    if (n > cap) throw ResourceLimitError(fmt::format("{} switches exceed the vertex enumeration cap of {}", n, cap));
    require_epsilon(epsilon);
    require_in_range(base, epsilon);
    const Rational nominal = evaluate(base);
    const unsigned long long total = 1ull << n;

    auto scan = [&](unsigned long long lo, unsigned long long hi) {
        Rational best(0);
        std::vector<Rational> ps(n);
        for (unsigned long long mask = lo; mask < hi; ++mask) {
            for (std::size_t i = 0; i < n; ++i) ps[i] = (mask >> i) & 1 ? base[i] + epsilon : base[i] - epsilon;
            best = max(best, (evaluate(ps) - nominal).abs());
        }
        return best;
    };

    if (n < kParallelThreshold) return scan(0, total);
    unsigned workers = std::clamp(std::thread::hardware_concurrency(), 1u, 8u);
    std::vector<std::future<Rational>> parts;
    unsigned long long chunk = (total + workers - 1) / workers;
    for (unsigned long long lo = 0; lo < total; lo += chunk)
        parts.push_back(std::async(std::launch::async, scan, lo, std::min(total, lo + chunk)));
    Rational best(0);
    for (auto &f : parts) best = max(best, f.get());
    return best;
}

template <class Eval>
Rational monotone_route(const std::vector<Rational> &base, const Rational &epsilon, Eval evaluate) {
    require_epsilon(epsilon);
    require_in_range(base, epsilon);
    Rational nominal = evaluate(base);
    Rational up = evaluate(shifted(base, epsilon)) - nominal;
    Rational down = nominal - evaluate(shifted(base, -epsilon));
    return max(up, down);
}

std::vector<Rational> perturb(const std::vector<Rational> &base, const Perturbation &perturbation) {
    require_epsilon(perturbation.epsilon);
    std::vector<Rational> out = base;
    for (const auto &[id, delta] : perturbation.deltas) {
        if (id >= out.size()) throw DomainError(fmt::format("no switch with index {}", id));
        if (delta.abs() > perturbation.epsilon)
            throw DomainError(fmt::format("|delta| = {} exceeds epsilon {}", delta.abs().str(),
                                          perturbation.epsilon.str()));
        out[id] += delta;
        if (!out[id].is_probability())
            throw DomainError(fmt::format("switch {} perturbed to {}, outside [0, 1]", id, out[id].str()));
    }
    return out;
}

SpCircuit string_of(const Rational &p, std::size_t length) {
    if (length == 1) return SpCircuit::leaf(p);
    return SpCircuit::series(std::vector<SpCircuit>(length, SpCircuit::leaf(p)));
}

}  // namespace

Rational bound_ssp(const PswitchSet &set, const Rational &epsilon) {
    require_epsilon(epsilon);
    return epsilon / min(set.min(), set.max().complement());
}

SqrtBound::SqrtBound(Rational square) : square_(std::move(square)) {
    if (square_.sign() < 0) throw DomainError("SqrtBound needs a nonnegative square");
}

bool SqrtBound::dominates(const Rational &value) const { return value.sign() <= 0 || value * value <= square_; }

std::string SqrtBound::decimal(unsigned digits) const {
    BigInt scale = ipow(BigInt(10), 2 * digits);
    BigInt scaled = square_.numerator() * scale / square_.denominator();
    BigInt root;
    mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
    return Rational(root, ipow(BigInt(10), digits)).decimal(digits);
}

double SqrtBound::approx() const { return std::sqrt(square_.to_double()); }

SqrtBound bound_sp(const PswitchSet &set, std::size_t n, const Rational &epsilon) {
    require_epsilon(epsilon);
    if (n < 1) throw DomainError("bound_sp needs n >= 1");
    Rational c2(0);
    for (const auto &t : set.values()) c2 = max(c2, Rational(1) / (t * t.complement()));
    return SqrtBound(c2 * Rational(static_cast<long>(n)) * epsilon * epsilon);
}

Rational bound_general(std::size_t n, const Rational &epsilon) {
    require_epsilon(epsilon);
    if (n < 1) throw DomainError("bound_general needs n >= 1");
    return Rational(static_cast<long>(n)) * epsilon;
}

Rational worst_case_error(const SpCircuit &circuit, const Rational &epsilon, const WorstCaseOptions &options) {
    return vertex_enumeration(circuit.leaf_probabilities(), epsilon, options.max_switches,
                              [&](std::span<const Rational> ps) { return circuit.evaluate_with(ps); });
}

Rational worst_case_error(const GeneralCircuit &circuit, const Rational &epsilon, const WorstCaseOptions &options) {
    return vertex_enumeration(edge_probabilities(circuit), epsilon, options.max_switches,
                              [&](std::span<const Rational> ps) { return circuit.evaluate_with(ps, options.factoring); });
}

Rational monotone_worst_case_error(const SpCircuit &circuit, const Rational &epsilon) {
    return monotone_route(circuit.leaf_probabilities(), epsilon,
                          [&](std::span<const Rational> ps) { return circuit.evaluate_with(ps); });
}

Rational monotone_worst_case_error(const GeneralCircuit &circuit, const Rational &epsilon,
                                   const FactoringOptions &options) {
    return monotone_route(edge_probabilities(circuit), epsilon,
                          [&](std::span<const Rational> ps) { return circuit.evaluate_with(ps, options); });
}

Rational perturbed_error(const SpCircuit &circuit, const Perturbation &perturbation) {
    auto base = circuit.leaf_probabilities();
    return (circuit.evaluate_with(perturb(base, perturbation)) - circuit.evaluate()).abs();
}

Rational perturbed_error(const GeneralCircuit &circuit, const Perturbation &perturbation,
                         const FactoringOptions &options) {
    auto base = edge_probabilities(circuit);
    return (circuit.evaluate_with(perturb(base, perturbation), options) - circuit.evaluate(options)).abs();
}

Rational error_contribution(const SpCircuit &circuit, std::size_t leaf, const Rational &epsilon) {
    require_epsilon(epsilon);
    auto ps = circuit.leaf_probabilities();
    if (leaf >= ps.size()) throw DomainError(fmt::format("no leaf with index {}", leaf));
    ps[leaf] = 1;
    Rational closed = circuit.evaluate_with(ps);
    ps[leaf] = 0;
    return epsilon * (closed - circuit.evaluate_with(ps)).abs();
}

Rational error_contribution(const GeneralCircuit &circuit, std::size_t edge_id, const Rational &epsilon,
                            const FactoringOptions &options) {
    require_epsilon(epsilon);
    Rational closed = circuit.condition(edge_id, SwitchState::closed).evaluate(options);
    Rational open = circuit.condition(edge_id, SwitchState::open).evaluate(options);
    return epsilon * (closed - open).abs();
}

LowerBoundFamily lower_bound_family(const Rational &p, std::size_t n) {
    if (!p.is_open_probability()) throw DomainError(fmt::format("p = {} is not in (0, 1)", p.str()));
    if (n < 2) throw DomainError("lower_bound_family needs n >= 2");
    const Rational inv = Rational(1) / p;
    const Rational nn(static_cast<long>(n));
    std::size_t b = 1;
    Rational best_gap;
    Rational power(1);
    for (std::size_t k = 1; k <= n; ++k) {
        power *= inv;
        Rational gap = (power - nn / Rational(static_cast<long>(k))).abs();
        if (k == 1 || gap < best_gap) {
            best_gap = gap;
            b = k;
        }
    }
    std::size_t a = (n + b - 1) / b - 1;
    LowerBoundFamily out{SpCircuit::leaf(p), b, a, n - a * b, false};
    std::vector<SpCircuit> strings(a, string_of(p, b));
    if (out.remainder > 0)
        strings.push_back(string_of(p, out.remainder));
    else
        out.remainder_dropped = true;
    out.circuit = strings.size() == 1 ? strings.front() : SpCircuit::parallel(strings);
    return out;
}

std::vector<GrowthRow> growth_study(const Rational &p, std::span<const std::size_t> sizes, const Rational &epsilon) {
    std::vector<GrowthRow> rows;
    for (std::size_t n : sizes) {
        auto family = lower_bound_family(p, n);
        rows.push_back({n, family.string_length, family.strings, monotone_worst_case_error(family.circuit, epsilon)});
    }
    return rows;
}

}  // namespace pswitch
