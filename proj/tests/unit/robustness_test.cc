#include <cmath>
#include <random>

#include "doctest.h"
#include "pswitch/circuit_format.h"
#include "pswitch/errors.h"
#include "pswitch/robustness.h"
#include "test_util.h"

using namespace pswitch;
using namespace pswitch::testing;

namespace {

SpCircuit L(const char *p) {
    return SpCircuit::leaf(R(p));
}

SpCircuit fig1a() {
    return SpCircuit::parallel({SpCircuit::series({L("1/2"), L("1/2")}), L("1/2")});
}

SpCircuit fig1b() {
    return SpCircuit::parallel({SpCircuit::series({L("1/2"), L("1/2")}), SpCircuit::series({L("1/2"), L("1/2")})});
}

GeneralCircuit bridge() {
    return parse_general_circuit("terminals s t\ns a 1/2\ns b 1/2\na b 1/2\na t 1/2\nb t 1/2\n");
}

// Largest epsilon keeping every leaf of the set inside [0, 1], divided by k.
Rational safe_epsilon(const PswitchSet &set, long k) {
    return min(set.min(), set.max().complement()) / Rational(k);
}

double slope(const std::vector<double> &x, const std::vector<double> &y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= x.size();
    my /= y.size();
    double num = 0, den = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    return num / den;
}

}  // namespace

TEST_CASE("closed-form bounds") {
    Rational eps = R("1/100");
    CHECK(bound_ssp(PswitchSet::parse("1/2"), eps) == R("1/50"));
    CHECK(bound_ssp(PswitchSet::parse("1/3,2/3"), eps) == R("3/100"));
    CHECK(bound_ssp(PswitchSet::parse("1/5,1/2"), eps) == R("1/20"));
    CHECK(bound_ssp(PswitchSet::parse("1/2"), 0) == 0);
    CHECK(bound_general(7, eps) == R("7/100"));
    CHECK(bound_general(1, eps) == eps);
    CHECK_THROWS_AS(bound_general(0, eps), DomainError);
    CHECK_THROWS_AS(bound_ssp(PswitchSet::parse("1/2"), R("-1/2")), DomainError);

    for (std::size_t n : {1, 4, 9, 25}) {
        auto half = bound_sp(PswitchSet::parse("1/2"), n, eps);
        Rational root = Rational(static_cast<long>(std::lround(std::sqrt(n))));
        CHECK(half.square() == Rational(4) * Rational(static_cast<long>(n)) * eps * eps);
        CHECK(half.dominates(Rational(2) * root * eps));
        CHECK_FALSE(half.dominates(Rational(2) * root * eps + R("1/1000000000")));
    }
    auto tenths = bound_sp(PswitchSet::uniform(10), 1, R("1"));
    CHECK(tenths.square() == R("100/9"));
    CHECK(tenths.decimal(6) == "3.333333");
    auto two = bound_sp(PswitchSet::parse("1/2"), 2, R("1"));
    CHECK(two.decimal(10) == "2.8284271247");
    CHECK(two.approx() == doctest::Approx(2.8284271247));
    std::mt19937_64 rng(test_seed() + 20);
    for (int trial = 0; trial < 50; ++trial) {
        auto set = random_set(rng, 5);
        CHECK(bound_sp(set, 1, eps).dominates(eps));
    }
}

TEST_CASE("worst-case error on small circuits") {
    Rational eps = R("1/100");
    CHECK(worst_case_error(L("1/3"), eps) == eps);
    CHECK(worst_case_error(SpCircuit::series({L("1/2"), L("1/2")}), eps) == eps + eps * eps);
    // P(p) = p^2 + p - p^3 is concave at 1/2, so the downward vertex wins
    Rational p = R("1/2") - eps;
    Rational expected = R("5/8") - (p * p + p - p * p * p);
    CHECK(worst_case_error(fig1a(), eps) == expected);
    CHECK(worst_case_error(fig1a(), eps) <= bound_ssp(PswitchSet::parse("1/2"), eps));
    CHECK(worst_case_error(GeneralCircuit::from_sp(fig1a()), eps) == expected);
    CHECK(worst_case_error(bridge(), eps) == monotone_worst_case_error(bridge(), eps));
    CHECK(worst_case_error(L("1/3"), 0) == 0);
}

TEST_CASE("worst-case error rejects bad inputs") {
    CHECK_THROWS_AS(worst_case_error(L("1/100"), R("1/50")), DomainError);
    CHECK_THROWS_AS(monotone_worst_case_error(L("99/100"), R("1/50")), DomainError);
    std::vector<SpCircuit> many(21, L("1/2"));
    CHECK_THROWS_AS(worst_case_error(SpCircuit::series(many), R("1/100")), ResourceLimitError);
    WorstCaseOptions tight{3};
    CHECK_THROWS_AS(worst_case_error(fig1b(), R("1/100"), tight), ResourceLimitError);
    CHECK_NOTHROW(monotone_worst_case_error(SpCircuit::series(many), R("1/100")));
}

TEST_CASE("near-tight series chain") {
    Rational p = R("99/100");
    Rational eps = R("1/1000000");
    std::vector<SpCircuit> leaves(5, SpCircuit::leaf(p));
    auto chain = SpCircuit::series(leaves);
    Rational worst = worst_case_error(chain, eps);
    CHECK(worst == (p + eps).pow(5) - p.pow(5));
    Rational first_order = Rational(5) * p.pow(4) * eps;
    CHECK(worst >= first_order);
    CHECK(worst <= bound_general(5, eps));
    CHECK(worst / bound_general(5, eps) >= R("9/10"));
}

TEST_CASE("error contributions") {
    Rational eps = R("1/100");
    auto b = bridge();
    CHECK(error_contribution(b, 2, eps) == eps / Rational(8));
    CHECK(error_contribution(L("2/7"), 0, eps) == eps);
    CHECK_THROWS_AS(error_contribution(L("2/7"), 1, eps), DomainError);
    CHECK_THROWS_AS(error_contribution(b, 9, eps), DomainError);

    // some switch of the two-pair circuit contributes at most c sqrt(P(1-P)/n) eps
    auto c = fig1b();
    Rational P = c.evaluate();
    Rational c2(4);
    Rational smallest(1);
    for (std::size_t i = 0; i < 4; ++i) {
        Rational contribution = error_contribution(c, i, eps);
        CHECK(contribution == eps * R("3/8"));
        smallest = min(smallest, contribution);
    }
    CHECK(smallest * smallest <= c2 * P * P.complement() / Rational(4) * eps * eps);
}

TEST_CASE("contribution equals the single-switch perturbation") {
    std::mt19937_64 rng(test_seed() + 21);
    for (int trial = 0; trial < 100; ++trial) {
        auto set = random_set(rng, 4);
        auto circuit = random_sp(rng, std::uniform_int_distribution<std::size_t>(1, 8)(rng), set);
        Rational eps = safe_epsilon(set, 3);
        std::size_t i = std::uniform_int_distribution<std::size_t>(0, circuit.size() - 1)(rng);
        Perturbation up{eps, {{i, eps}}};
        CHECK(perturbed_error(circuit, up) == error_contribution(circuit, i, eps));
        auto general = GeneralCircuit::from_sp(circuit);
        CHECK(error_contribution(general, i, eps) == error_contribution(circuit, i, eps));
        CHECK(perturbed_error(general, up) == perturbed_error(circuit, up));
    }
}

TEST_CASE("perturbation validation") {
    auto c = fig1a();
    CHECK_THROWS_AS(perturbed_error(c, Perturbation{R("1/100"), {{0, R("1/50")}}}), DomainError);
    CHECK_THROWS_AS(perturbed_error(c, Perturbation{R("1/100"), {{7, R("1/100")}}}), DomainError);
    CHECK_THROWS_AS(perturbed_error(L("1/100"), Perturbation{R("1/50"), {{0, R("-1/50")}}}), DomainError);
    CHECK(perturbed_error(c, Perturbation{R("1/100"), {}}) == 0);
}

TEST_CASE("ssp circuits stay within the ssp bound") {
    std::mt19937_64 rng(test_seed() + 22);
    for (int trial = 0; trial < 200; ++trial) {
        auto set = random_set(rng, 5);
        auto circuit = random_ssp(rng, std::uniform_int_distribution<std::size_t>(1, 10)(rng), set);
        Rational eps = safe_epsilon(set, std::uniform_int_distribution<long>(1, 20)(rng));
        CHECK(worst_case_error(circuit, eps) <= bound_ssp(set, eps));
    }
}

TEST_CASE("sp circuits stay within the sqrt and linear bounds") {
    std::mt19937_64 rng(test_seed() + 23);
    for (int trial = 0; trial < 200; ++trial) {
        auto set = random_set(rng, 5);
        std::size_t n = std::uniform_int_distribution<std::size_t>(1, 14)(rng);
        auto circuit = random_sp(rng, n, set);
        Rational eps = safe_epsilon(set, std::uniform_int_distribution<long>(1, 20)(rng));
        Rational worst = worst_case_error(circuit, eps);
        CHECK(worst == monotone_worst_case_error(circuit, eps));
        CHECK(bound_sp(set, n, eps).dominates(worst));
        CHECK(worst <= bound_general(n, eps));
    }
}

TEST_CASE("general circuits: enumeration agrees with the monotone route") {
    std::mt19937_64 rng(test_seed() + 24);
    for (int trial = 0; trial < 30; ++trial) {
        auto set = random_set(rng, 3);
        std::vector<GeneralCircuit::EdgeSpec> edges;
        std::size_t m = std::uniform_int_distribution<std::size_t>(1, 7)(rng);
        for (std::size_t i = 0; i < m; ++i) {
            int u = std::uniform_int_distribution<int>(0, 3)(rng);
            int v = std::uniform_int_distribution<int>(0, 3)(rng);
            if (u == v) {
                v = (v + 1) % 4;
            }
            edges.push_back({std::to_string(u), std::to_string(v), pick(rng, set)});
        }
        GeneralCircuit g("0", "3", edges);
        Rational eps = safe_epsilon(set, 4);
        Rational worst = worst_case_error(g, eps);
        CHECK(worst == monotone_worst_case_error(g, eps));
        CHECK(worst <= bound_general(m, eps));
    }
}

TEST_CASE("worst-case error grows with epsilon") {
    std::mt19937_64 rng(test_seed() + 25);
    for (int trial = 0; trial < 50; ++trial) {
        auto set = random_set(rng, 4);
        auto circuit = random_sp(rng, std::uniform_int_distribution<std::size_t>(1, 8)(rng), set);
        Rational top = safe_epsilon(set, 1);
        Rational prev(0);
        for (long k = 1; k <= 5; ++k) {
            Rational e = worst_case_error(circuit, top * Rational(k, 5));
            CHECK(e >= prev);
            prev = e;
        }
    }
}

TEST_CASE("telescoping sum dominates a single perturbation") {
    std::mt19937_64 rng(test_seed() + 26);
    for (int trial = 0; trial < 100; ++trial) {
        auto set = random_set(rng, 4);
        std::size_t n = std::uniform_int_distribution<std::size_t>(1, 10)(rng);
        auto circuit = random_sp(rng, n, set);
        Rational eps = safe_epsilon(set, 2);
        auto base = circuit.leaf_probabilities();
        std::vector<Rational> deltas;
        for (std::size_t i = 0; i < n; ++i) {
            deltas.push_back(eps * Rational(std::uniform_int_distribution<long>(-4, 4)(rng), 4));
        }
        Rational sum(0);
        auto current = base;
        Rational prev = circuit.evaluate_with(current);
        for (std::size_t k = 0; k < n; ++k) {
            current[k] += deltas[k];
            Rational next = circuit.evaluate_with(current);
            sum += (next - prev).abs();
            prev = next;
        }
        Rational total = (prev - circuit.evaluate()).abs();
        CHECK(total <= sum);
        CHECK(sum <= bound_general(n, eps));
    }
}

TEST_CASE("lower-bound family construction") {
    auto six = lower_bound_family(R("1/2"), 6);
    CHECK(six.string_length == 2);
    CHECK(six.strings == 2);
    CHECK(six.remainder == 2);
    CHECK(six.circuit.size() == 6);
    CHECK(six.circuit.evaluate() == R("37/64"));
    CHECK(six.general().evaluate() == R("37/64"));

    auto two = lower_bound_family(R("1/2"), 2);
    CHECK(two.circuit == SpCircuit::parallel({L("1/2"), L("1/2")}));
    auto third = lower_bound_family(R("1/3"), 2);
    CHECK(third.string_length == 1);
    CHECK(third.circuit.size() == 2);

    CHECK_THROWS_AS(lower_bound_family(R("1/2"), 1), DomainError);
    CHECK_THROWS_AS(lower_bound_family(R("1"), 4), DomainError);

    for (const char *p : {"1/2", "1/3", "2/3", "9/10"}) {
        for (std::size_t n = 2; n <= 40; ++n) {
            auto f = lower_bound_family(R(p), n);
            CHECK(f.circuit.size() == n);
            CHECK(f.strings * f.string_length < n);
            CHECK(f.remainder >= 1);
            CHECK_FALSE(f.remainder_dropped);
            Rational pb = R(p).pow(f.string_length);
            Rational closed = Rational(1) - pb.complement().pow(f.strings) * R(p).pow(f.remainder).complement();
            CHECK(f.circuit.evaluate() == closed);
        }
    }
}

TEST_CASE("lower-bound family error grows slower than n but does grow") {
    std::vector<std::size_t> sizes;
    for (std::size_t n = 8; n <= 4096; n *= 2) {
        sizes.push_back(n);
    }
    Rational eps = R("1/1000000");
    auto rows = growth_study(R("1/2"), sizes, eps);
    std::vector<double> log_n, log_err, err;
    for (const auto &row : rows) {
        double e = (row.error / eps).to_double();
        log_n.push_back(std::log(static_cast<double>(row.n)));
        log_err.push_back(std::log(e));
        err.push_back(e);
        CHECK(row.error <= bound_general(row.n, eps));
    }
    CHECK(slope(log_n, log_err) < 0.5);
    CHECK(slope(log_n, err) > 0.0);
    CHECK(err.back() > err.front());
}
