#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pswitch/pswitch_set.h"
#include "pswitch/rational.h"
#include "pswitch/sp_circuit.h"
#include "pswitch/synthesis.h"

namespace pswitch {

inline constexpr std::size_t kDefaultMaxStep = 3;

struct ApproxConfig {
    PswitchSet set;
    Rational target;
    std::size_t budget = 1;
    std::size_t step = 2;
    std::size_t max_step = kDefaultMaxStep;
    /// Adds switches of probability 0 and 1 to the candidate alphabet.
    bool endpoint_switches = false;

    /// Throws DomainError unless 1 <= step <= min(budget, max_step) and the
    /// target lies in [0, 1].
    void validate() const;
};

struct Insertion {
    Rational x;
    Orientation orientation;
};

/// x in series, 1-x in parallel.
Rational r_factor(const Rational &x, Orientation orientation);

struct TupleCost {
    Rational cost;  ///< product of r along the path, 0 on an exact hit
    bool exact_hit = false;
    std::vector<Insertion> path;  ///< insertions before the hit, or all of them
    Rational residual;            ///< residual after the path, or the hit value
};

/// Simulates inserting xs[0], xs[1], ... backwards from p. An x equal to the
/// current residual is an exact hit and ends the simulation.
TupleCost f_cost(std::span<const Rational> xs, const Rational &p);

struct ApproxResult {
    SpCircuit circuit;
    Rational achieved;
    Rational error;
    /// Greedy insertions, outermost first.
    std::vector<Insertion> insertions;
    /// Innermost part: an exact-hit leaf or the best small ssp circuit.
    SpCircuit core;
    /// Residual that `core` approximates.
    Rational core_residual;
    bool exact_hit = false;
};

/// Algorithm 2: floor((n-1)/m) rounds of m insertions, each round choosing the
/// lexicographically smallest tuple minimizing f_cost, then the ssp circuit of
/// at most the remaining size closest to the residual (ties: smaller size,
/// then smaller value).
ApproxResult approx_greedy(const ApproxConfig &config);

/// (prod r(x_i)) * e_inner.
Rational propagate_error(std::span<const Insertion> segment, const Rational &e_inner);

struct SingleBound {
    Rational bound;         ///< max(p, 1-p)^n / 2
    Rational worst_target;  ///< target attaining the bound
};

/// Error bound when S = {p} holds a single value.
SingleBound bound_single(const Rational &p, std::size_t n);

/// Error bound of approx_greedy with step m in {1, 2}, in terms of the largest
/// gap Delta of {0} + S + {1}. Uniform sets with m = 2 get the tighter form.
Rational bound_greedy(const PswitchSet &set, std::size_t n, std::size_t m);

}  // namespace pswitch
