#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pswitch/rational.h"
#include "pswitch/sp_circuit.h"

namespace pswitch {

enum class Orientation { series, parallel };

const char *orientation_name(Orientation orientation);

/// Placement forced by the backward rule: series when x > p, parallel when x < p.
/// Throws DomainError when x == p.
Orientation insertion_orientation(const Rational &x, const Rational &p);

/// p = b / q^w with the smallest w >= 1.
struct QAdicForm {
    unsigned long exponent;
    BigInt numerator;
};

inline constexpr unsigned long kDefaultQAdicCap = 64;

std::optional<QAdicForm> q_adic_form(const Rational &p, int q, unsigned long max_exponent = kDefaultQAdicCap);

/// Characteristic function d(b/q^w) = q^(w-1) / gcd(b, q^(w-1)). d == 1 iff p
/// is a single pswitch of the uniform set. Throws NotQAdicError.
BigInt char_d(const Rational &p, int q, unsigned long max_exponent = kDefaultQAdicCap);

/// Residual the inner subcircuit must realize after inserting x around a
/// circuit meant to realize p: p/x in series (x > p), (p-x)/(1-x) in parallel
/// (x < p). nullopt when x == p, i.e. p is realized exactly by x.
std::optional<Rational> h_step(const Rational &x, const Rational &p);

struct SynthesisStep {
    Rational x;
    Orientation orientation;
    Rational p;  ///< residual before inserting x
    BigInt d;    ///< char_d(p)
};

/// Backward insertions from the outermost pswitch inwards.
struct SynthesisTrace {
    std::vector<SynthesisStep> steps;
    Rational terminal_leaf;
    Rational target;
    int q = 0;

    /// p_1, ..., p_k followed by the terminal leaf.
    std::vector<Rational> p_sequence() const;
    /// d(p_1), ..., d(p_k), then 1 for the terminal leaf.
    std::vector<BigInt> d_sequence() const;
    bool d_strictly_decreasing() const;
    /// Rebuilds the circuit by wrapping the terminal leaf from the inside out.
    SpCircuit replay() const;
};

struct SynthesisResult {
    SpCircuit circuit;
    SynthesisTrace trace;
};

/// Greedy backward synthesis over S = {1/q, ..., (q-1)/q}: at every step pick
/// the x in S minimizing d of the residual. Ties go to the smaller attenuation
/// factor (x in series, 1-x in parallel), then to the smaller x.
///
/// Throws NotQAdicError for targets that are not a/q^n, NoProgressError when
/// no x lowers d (cannot happen when q is a multiple of 2 or 3).
SynthesisResult synth_backward(const Rational &target, int q);

/// Deterministic insertion tables. Even q: x = 1/2 while d is even, otherwise
/// x = 2^s/q (series) or (q-2^s)/q (parallel) with s = floor(log2 q). Odd
/// multiples of 3 use the eight-case table keyed on d mod 3, the position of
/// p against 1/3 and 2/3, and the parity of b. The size bound of
/// `size_bound(q, n).general` is checked before returning.
SynthesisResult synth_rule_based(const Rational &target, int q);

struct SizeBound {
    /// ceil(log2 q)(n-1)+1 for even q, ceil(log3 q)(n-1)+1 for odd multiples of 3.
    unsigned long general;
    /// Piecewise bound for multiples of 6.
    std::optional<unsigned long> multiple_of_six;
    unsigned long tightest;
};

/// Largest ssp size needed to realize any a/q^n.
SizeBound size_bound(int q, unsigned long n);

bool is_prime(int q);

/// Whether target = a/q^n (q prime) is realizable by any sp circuit over the
/// uniform set. Only sizes up to n need checking: a circuit with fewer than n
/// pswitches has a coarser denominator, and a value missing at size n is
/// missing at every larger size for prime q.
bool realizable_prime(const Rational &target, int q);

}  // namespace pswitch
