#include "pswitch/synthesis.h"

#include <fmt/format.h>

#include "pswitch/errors.h"
#include "pswitch/oracle.h"
#include "pswitch/pswitch_set.h"

namespace pswitch {

namespace {

constexpr std::size_t kRuleIterationCap = 4096;

void require_modulus(int q) {
    if (q < 2) throw DomainError(fmt::format("q must be at least 2, got {}", q));
}

void require_target(const Rational &target) {
    if (!target.is_open_probability())
        throw DomainError(fmt::format("target {} is not in (0, 1)", target.str()));
}

Rational r_of(const Rational &x, Orientation o) { return o == Orientation::series ? x : x.complement(); }

// smallest k with base^k >= q
unsigned long ceil_log(int base, int q) {
    unsigned long k = 0;
    long long v = 1;
    while (v < q) {
        v *= base;
        ++k;
    }
    return k;
}

// largest s with base^s <= q
unsigned long floor_log(int base, int q) {
    unsigned long s = 0;
    long long v = base;
    while (v <= q) {
        v *= base;
        ++s;
    }
    return s;
}

long long ipow_ll(long long base, unsigned long e) {
    long long v = 1;
    while (e--) v *= base;
    return v;
}

SpCircuit wrap(const Rational &x, Orientation o, const SpCircuit &inner) {
    auto kind = o == Orientation::series ? NodeKind::series : NodeKind::parallel;
    return SpCircuit::compose(kind, {SpCircuit::leaf(x), inner});
}

Rational rule_even(const Rational &p, const BigInt &d, int q) {
    static const Rational half(1, 2);
    if (d % 2 == 0) return half;
    long long two_s = ipow_ll(2, floor_log(2, q));
    return p < half ? Rational(two_s, q) : Rational(q - two_s, q);
}

Rational rule_odd(const Rational &p, const BigInt &d, const BigInt &b, int q) {
    static const Rational third(1, 3), two_thirds(2, 3), half(1, 2);
    bool b_even = b % 2 == 0;
    if (d % 3 == 0) {
        if (p <= third) return third;
        if (p <= two_thirds) return b_even ? two_thirds : third;
        return two_thirds;
    }
    long long three_s = ipow_ll(3, floor_log(3, q));
    if (2 * three_s < q) {
        if (p <= third) return Rational(three_s, q);
        if (p <= two_thirds) return b_even ? Rational(2 * three_s, q) : Rational(q - 2 * three_s, q);
        return Rational(q - three_s, q);
    }
    return p < half ? Rational(three_s, q) : Rational(q - three_s, q);
}

}  // namespace

const char *orientation_name(Orientation orientation) {
    return orientation == Orientation::series ? "series" : "parallel";
}

Orientation insertion_orientation(const Rational &x, const Rational &p) {
    if (x == p) throw DomainError(fmt::format("x = p = {} has no insertion orientation", p.str()));
    return x > p ? Orientation::series : Orientation::parallel;
}

std::optional<QAdicForm> q_adic_form(const Rational &p, int q, unsigned long max_exponent) {
    require_modulus(q);
    BigInt den = p.denominator();
    BigInt qq = q;
    BigInt rest = den;
    for (BigInt g = gcd(rest, qq); g > 1; g = gcd(rest, qq)) rest /= g;
    if (rest != 1) return std::nullopt;
    BigInt power = qq;
    for (unsigned long w = 1; w <= max_exponent; ++w, power *= qq) {
        if (power % den == 0) return QAdicForm{w, p.numerator() * (power / den)};
    }
    return std::nullopt;
}

BigInt char_d(const Rational &p, int q, unsigned long max_exponent) {
    require_target(p);
    auto form = q_adic_form(p, q, max_exponent);
    if (!form) throw NotQAdicError(fmt::format("{} is not of the form a/{}^w with w <= {}", p.str(), q, max_exponent));
    BigInt scale = ipow(BigInt(q), form->exponent - 1);
    return scale / gcd(form->numerator, scale);
}

std::optional<Rational> h_step(const Rational &x, const Rational &p) {
    if (!x.is_open_probability() || !p.is_open_probability())
        throw DomainError(fmt::format("h_step needs x, p in (0, 1), got x = {}, p = {}", x.str(), p.str()));
    if (x == p) return std::nullopt;
    if (x > p) return p / x;
    return (p - x) / x.complement();
}

std::vector<Rational> SynthesisTrace::p_sequence() const {
    std::vector<Rational> out;
    for (const auto &s : steps) out.push_back(s.p);
    out.push_back(terminal_leaf);
    return out;
}

std::vector<BigInt> SynthesisTrace::d_sequence() const {
    std::vector<BigInt> out;
    for (const auto &s : steps) out.push_back(s.d);
    out.push_back(1);
    return out;
}

bool SynthesisTrace::d_strictly_decreasing() const {
    auto ds = d_sequence();
    for (std::size_t i = 1; i < ds.size(); ++i)
        if (!(ds[i] < ds[i - 1])) return false;
    return true;
}

SpCircuit SynthesisTrace::replay() const {
    SpCircuit c = SpCircuit::leaf(terminal_leaf);
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) c = wrap(it->x, it->orientation, c);
    return c;
}

SynthesisResult synth_backward(const Rational &target, int q) {
    require_modulus(q);
    require_target(target);
    SynthesisTrace trace{{}, target, target, q};
    Rational p = target;
    BigInt d = char_d(p, q);
    while (d != 1) {
        struct Candidate {
            Rational x, residual;
            BigInt d;
            Rational r;
        };
        std::optional<Candidate> best;
        for (int a = 1; a < q; ++a) {
            Rational x(a, q);
            auto residual = h_step(x, p);
            if (!residual || !q_adic_form(*residual, q)) continue;
            BigInt dd = char_d(*residual, q);
            Rational r = r_of(x, insertion_orientation(x, p));
            if (!best || dd < best->d || (dd == best->d && r < best->r)) best = Candidate{x, *residual, dd, r};
        }
        if (!best || !(best->d < d))
            throw NoProgressError(
                fmt::format("no pswitch of 1/{} lowers d below {} at p = {}", q, d.get_str(), p.str()));
        trace.steps.push_back({best->x, insertion_orientation(best->x, p), p, d});
        p = best->residual;
        d = best->d;
    }
    trace.terminal_leaf = p;
    return {trace.replay(), std::move(trace)};
}

SynthesisResult synth_rule_based(const Rational &target, int q) {
    require_modulus(q);
    require_target(target);
    bool even = q % 2 == 0;
    if (!even && q % 3 != 0)
        throw DomainError(fmt::format("rule tables need q even or an odd multiple of 3, got {}", q));
    auto form = q_adic_form(target, q);
    if (!form) throw NotQAdicError(fmt::format("{} is not of the form a/{}^w", target.str(), q));

    SynthesisTrace trace{{}, target, target, q};
    Rational p = target;
    BigInt d = char_d(p, q);
    while (d != 1) {
        if (trace.steps.size() >= kRuleIterationCap)
            throw NoProgressError(fmt::format("rule table did not terminate for {} (q = {})", target.str(), q));
        Rational x = even ? rule_even(p, d, q) : rule_odd(p, d, q_adic_form(p, q)->numerator, q);
        auto residual = h_step(x, p);
        if (!residual) break;
        trace.steps.push_back({x, insertion_orientation(x, p), p, d});
        p = *residual;
        d = char_d(p, q);
    }
    trace.terminal_leaf = p;
    SpCircuit circuit = trace.replay();

    if (circuit.evaluate() != target)
        throw Error(fmt::format("rule synthesis of {} evaluated to {}", target.str(), circuit.evaluate().str()));
    auto bound = size_bound(q, form->exponent).general;
    if (circuit.size() > bound)
        throw Error(fmt::format("rule synthesis of {} used {} switches, bound is {}", target.str(), circuit.size(),
                                bound));
    return {std::move(circuit), std::move(trace)};
}

SizeBound size_bound(int q, unsigned long n) {
    if (n < 1) throw DomainError("size_bound needs n >= 1");
    if (q < 2 || (q % 2 != 0 && q % 3 != 0))
        throw DomainError(fmt::format("no size bound for q = {}: q must be a multiple of 2 or 3", q));
    unsigned long factor = q % 2 == 0 ? ceil_log(2, q) : ceil_log(3, q);
    SizeBound out{factor * (n - 1) + 1, std::nullopt, 0};
    if (q % 6 == 0) {
        unsigned long s = floor_log(6, q);
        long long six_s = ipow_ll(6, s);
        unsigned long f = 2 * s + 3;
        if (six_s == q)
            f = 2 * s;
        else if (2 * six_s >= q)
            f = 2 * s + 1;
        else if (3 * six_s >= q)
            f = 2 * s + 2;
        out.multiple_of_six = f * (n - 1) + 1;
    }
    out.tightest = out.multiple_of_six ? std::min(out.general, *out.multiple_of_six) : out.general;
    return out;
}

bool is_prime(int q) {
    if (q < 2) return false;
    for (int i = 2; i * i <= q; ++i)
        if (q % i == 0) return false;
    return true;
}

bool realizable_prime(const Rational &target, int q) {
    if (!is_prime(q)) throw DomainError(fmt::format("realizable_prime needs a prime q, got {}", q));
    require_target(target);
    auto form = q_adic_form(target, q);
    if (!form) throw NotQAdicError(fmt::format("{} is not of the form a/{}^n", target.str(), q));
    if (form->exponent == 1) return true;
    auto table = enumerate(PswitchSet::uniform(q), form->exponent, Family::sp);
    return optimal_size(table, target).found();
}

}  // namespace pswitch
