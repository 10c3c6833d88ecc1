#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pswitch/general_circuit.h"
#include "pswitch/pswitch_set.h"
#include "pswitch/rational.h"
#include "pswitch/sp_circuit.h"

namespace pswitch {

/// Error allowance epsilon and, optionally, concrete per-switch deviations
/// keyed by leaf index (sp) or edge id (general).
struct Perturbation {
    Rational epsilon;
    std::map<std::size_t, Rational> deltas;
};

/// epsilon / min(min S, 1 - max S).
Rational bound_ssp(const PswitchSet &set, const Rational &epsilon);

/// A nonnegative number known through its exact square.
class SqrtBound {
public:
    explicit SqrtBound(Rational square);

    const Rational &square() const { return square_; }
    /// true iff value <= sqrt(square).
    bool dominates(const Rational &value) const;
    /// sqrt(square) truncated to `digits` decimals.
    std::string decimal(unsigned digits) const;
    double approx() const;

private:
    Rational square_;
};

/// c sqrt(n) epsilon with c = max over t in S of 1/sqrt(t(1-t)).
SqrtBound bound_sp(const PswitchSet &set, std::size_t n, const Rational &epsilon);

/// n epsilon.
Rational bound_general(std::size_t n, const Rational &epsilon);

struct WorstCaseOptions {
    std::size_t max_switches = 20;
    FactoringOptions factoring{};
};

/// max over deltas in {-eps, +eps}^n of |P(p + delta) - P(p)|, by enumerating
/// all 2^n sign patterns. Throws ResourceLimitError above max_switches and
/// DomainError if some p +- eps leaves [0, 1].
Rational worst_case_error(const SpCircuit &circuit, const Rational &epsilon, const WorstCaseOptions &options = {});
Rational worst_case_error(const GeneralCircuit &circuit, const Rational &epsilon,
                          const WorstCaseOptions &options = {});

/// Same quantity from two evaluations, using that closure probability is
/// nondecreasing in every switch probability.
Rational monotone_worst_case_error(const SpCircuit &circuit, const Rational &epsilon);
Rational monotone_worst_case_error(const GeneralCircuit &circuit, const Rational &epsilon,
                                   const FactoringOptions &options = {});

/// |P(p + delta) - P(p)| for the given deltas; unlisted switches keep delta 0.
Rational perturbed_error(const SpCircuit &circuit, const Perturbation &perturbation);
Rational perturbed_error(const GeneralCircuit &circuit, const Perturbation &perturbation,
                         const FactoringOptions &options = {});

/// epsilon * |P(x closed) - P(x open)|. `leaf` indexes leaves in depth-first order.
Rational error_contribution(const SpCircuit &circuit, std::size_t leaf, const Rational &epsilon);
Rational error_contribution(const GeneralCircuit &circuit, std::size_t edge_id, const Rational &epsilon,
                            const FactoringOptions &options = {});

/// a strings of b switches and one string of n - ab switches, all at p, in parallel.
struct LowerBoundFamily {
    SpCircuit circuit;
    std::size_t string_length;  ///< b
    std::size_t strings;        ///< a
    std::size_t remainder;      ///< n - ab
    bool remainder_dropped = false;

    GeneralCircuit general() const { return GeneralCircuit::from_sp(circuit); }
};

/// b in [1, n] minimizes |(1/p)^b - n/b| (smallest b on ties), a = ceil(n/b) - 1.
LowerBoundFamily lower_bound_family(const Rational &p, std::size_t n);

struct GrowthRow {
    std::size_t n;
    std::size_t string_length;
    std::size_t strings;
    Rational error;
};

/// Worst-case error of lower_bound_family(p, n) for each n.
std::vector<GrowthRow> growth_study(const Rational &p, std::span<const std::size_t> sizes, const Rational &epsilon);

}  // namespace pswitch
