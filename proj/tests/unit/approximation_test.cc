#include <random>

#include "doctest.h"
#include "pswitch/approximation.h"
#include "pswitch/errors.h"
#include "pswitch/oracle.h"
#include "test_util.h"

using namespace pswitch;
using namespace pswitch::testing;

namespace {

SpCircuit L(const char *p) {
    return SpCircuit::leaf(R(p));
}

ApproxConfig config(const char *set, const char *target, std::size_t n, std::size_t m, bool endpoints = false) {
    return ApproxConfig{PswitchSet::parse(set), R(target), n, m, kDefaultMaxStep, endpoints};
}

// Closed-form bound with Delta recomputed from the sorted set.
Rational reference_delta(const PswitchSet &set) {
    Rational prev(0), delta(0);
    for (const auto &s : set.values()) {
        delta = max(delta, s - prev);
        prev = s;
    }
    return max(delta, Rational(1) - prev);
}

}  // namespace

TEST_CASE("r_factor and f_cost") {
    CHECK(r_factor(R("1/3"), Orientation::series) == R("1/3"));
    CHECK(r_factor(R("1/3"), Orientation::parallel) == R("2/3"));

    std::vector<Rational> one{R("1/3")};
    auto a = f_cost(one, R("1/2"));
    CHECK(a.cost == R("2/3"));
    CHECK(a.path.front().orientation == Orientation::parallel);
    CHECK(a.residual == R("1/4"));

    std::vector<Rational> hit{R("1/2")};
    auto b = f_cost(hit, R("1/2"));
    CHECK(b.exact_hit);
    CHECK(b.cost == 0);
    CHECK(b.path.empty());

    std::vector<Rational> two{R("4/5"), R("3/5")};
    auto c = f_cost(two, R("3/7"));
    CHECK(c.cost == R("12/25"));
    REQUIRE(c.path.size() == 2);
    CHECK(c.path[0].orientation == Orientation::series);
    CHECK(c.path[1].orientation == Orientation::series);
    CHECK(c.residual == R("25/28"));

    std::vector<Rational> mid{R("1/2"), R("1/2")};
    auto d = f_cost(mid, R("1/4"));
    CHECK(d.exact_hit);
    CHECK(d.path.size() == 1);
    CHECK(d.residual == R("1/2"));
}

TEST_CASE("one-value set approximating 1/2 with four switches") {
    auto result = approx_greedy(config("1/3", "1/2", 4, 1));
    CHECK(result.achieved == R("37/81"));
    CHECK(result.error == R("7/162"));
    CHECK(result.circuit.size() == 4);
    CHECK(result.circuit.is_ssp());
    REQUIRE(result.insertions.size() == 3);
    CHECK(result.insertions[0].orientation == Orientation::parallel);
    CHECK(result.insertions[1].orientation == Orientation::series);
    CHECK(result.insertions[2].orientation == Orientation::parallel);
    CHECK(result.core_residual == R("5/8"));
    CHECK(result.core == L("1/3"));
    auto expected = SpCircuit::parallel({L("1/3"), SpCircuit::series({L("1/3"), SpCircuit::parallel({L("1/3"), L("1/3")})})});
    CHECK(result.circuit == expected);
    CHECK(propagate_error(result.insertions, R("5/8") - R("1/3")) == R("7/162"));
    CHECK(result.error <= bound_single(R("1/3"), 4).bound);
}

TEST_CASE("fifths approximating 3/7 with five switches") {
    auto result = approx_greedy(config("1/5,2/5,3/5,4/5", "3/7", 5, 2));
    CHECK(result.achieved == R("1337/3125"));
    CHECK(result.error == R("16/21875"));
    CHECK(result.circuit.size() == 5);
    CHECK(result.error <= bound_greedy(PswitchSet::uniform(5), 5, 2));
    // the printed 7.3e-4 is a rounding of 7.314e-4
    CHECK(result.error.decimal(6) == "0.000731");
}

TEST_CASE("targets already in S") {
    std::mt19937_64 rng(test_seed() + 11);
    for (int trial = 0; trial < 50; ++trial) {
        auto set = random_set(rng, 5);
        const auto &target = pick(rng, set);
        std::size_t n = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
        auto result = approx_greedy(ApproxConfig{set, target, n, 1});
        CHECK(result.circuit == SpCircuit::leaf(target));
        CHECK(result.error == 0);
        CHECK(result.exact_hit);
    }
}

TEST_CASE("configuration validation") {
    CHECK_THROWS_AS(approx_greedy(config("1/2", "1/3", 1, 2)), DomainError);
    CHECK_THROWS_AS(approx_greedy(config("1/2", "1/3", 8, 4)), DomainError);
    CHECK_THROWS_AS(approx_greedy(config("1/2", "1/3", 0, 1)), DomainError);
    CHECK_THROWS_AS(approx_greedy(config("1/2", "3/2", 3, 1)), DomainError);
    auto wide = config("1/2", "1/3", 8, 4);
    wide.max_step = 4;
    CHECK_NOTHROW(approx_greedy(wide));
}

TEST_CASE("propagate_error") {
    CHECK(propagate_error({}, R("1/7")) == R("1/7"));
    std::vector<Insertion> one{{R("2/5"), Orientation::series}};
    CHECK(propagate_error(one, R("1/7")) == R("2/35"));
    std::vector<Insertion> par{{R("2/5"), Orientation::parallel}};
    CHECK(propagate_error(par, R("1/7")) == R("3/35"));
}

TEST_CASE("error propagates exactly through every greedy run") {
    std::mt19937_64 rng(test_seed() + 12);
    for (int trial = 0; trial < 200; ++trial) {
        auto set = random_set(rng, 4);
        Rational target = random_probability(rng, 30);
        std::size_t n = std::uniform_int_distribution<std::size_t>(2, 9)(rng);
        std::size_t m = std::uniform_int_distribution<std::size_t>(1, 2)(rng);
        bool endpoints = std::bernoulli_distribution(0.5)(rng);
        auto result = approx_greedy(ApproxConfig{set, target, n, m, kDefaultMaxStep, endpoints});
        Rational inner = (result.core.evaluate() - result.core_residual).abs();
        CHECK(propagate_error(result.insertions, inner) == result.error);
        CHECK(result.circuit.size() <= n);
        CHECK(result.circuit.is_ssp());
        CHECK(result.error == (result.circuit.evaluate() - target).abs());
    }
}

TEST_CASE("greedy is never better than the exhaustive optimum") {
    std::mt19937_64 rng(test_seed() + 13);
    for (int trial = 0; trial < 60; ++trial) {
        auto set = random_set(rng, 3);
        Rational target = random_probability(rng, 30);
        std::size_t n = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
        auto table = enumerate(set, n, Family::ssp);
        Rational best(1);
        for (const auto &v : table.realizable_up_to(n)) {
            best = min(best, (v - target).abs());
        }
        auto result = approx_greedy(ApproxConfig{set, target, n, 1});
        CHECK(result.error >= best);
    }
}

TEST_CASE("two-switch products are hit exactly") {
    std::mt19937_64 rng(test_seed() + 14);
    for (int trial = 0; trial < 100; ++trial) {
        auto set = random_set(rng, 4);
        const auto &a = pick(rng, set);
        const auto &b = pick(rng, set);
        Rational target = std::bernoulli_distribution(0.5)(rng) ? series_probability(a, b) : parallel_probability(a, b);
        auto result = approx_greedy(ApproxConfig{set, target, 3, 2});
        CHECK(result.error == 0);
        CHECK(result.exact_hit);
    }
}

TEST_CASE("single-value bound") {
    for (std::size_t n = 1; n <= 8; ++n) {
        CHECK(bound_single(R("1/2"), n).bound == Rational(1) / Rational(2).pow(n + 1));
    }
    auto b = bound_single(R("1/3"), 1);
    CHECK(b.bound == R("1/3"));
    CHECK(b.worst_target == R("2/3"));
    CHECK(bound_single(R("1/3"), 4).bound == R("8/81"));
    CHECK(bound_single(R("4/5"), 2).worst_target == R("8/25"));
    CHECK_THROWS_AS(bound_single(R("0"), 2), DomainError);
    CHECK_THROWS_AS(bound_single(R("1/2"), 0), DomainError);
}

TEST_CASE("greedy bound formulas") {
    auto fifths = PswitchSet::uniform(5);
    CHECK(bound_greedy(fifths, 5, 2) == R("8/3125"));
    CHECK(bound_greedy(fifths, 5, 2).decimal(5) == "0.00256");
    CHECK(bound_greedy(PswitchSet::parse("1/3,2/3"), 3, 1) == R("5/54"));
    CHECK(bound_greedy(PswitchSet::parse("1/3,2/3"), 1, 1) == R("1/6"));
    // non-uniform m = 2: Delta = 1/2 from {0, 1/2, 3/4, 1}
    CHECK(bound_greedy(PswitchSet::parse("1/2,3/4"), 3, 2) == R("1/4") * R("5/8"));
    CHECK_THROWS_AS(bound_greedy(fifths, 5, 3), DomainError);

    std::mt19937_64 rng(test_seed() + 15);
    for (int trial = 0; trial < 200; ++trial) {
        auto set = random_set(rng, 6, 20);
        std::size_t n = std::uniform_int_distribution<std::size_t>(3, 14)(rng);
        CHECK(bound_greedy(set, n, 2) <= bound_greedy(set, n, 1));
        Rational d = reference_delta(set);
        unsigned long e = (n + 1) / 2 - 1;
        CHECK(bound_greedy(set, n, 1) == d / Rational(2) * ((Rational(3) + d) * d / Rational(2)).pow(e));
    }
}

TEST_CASE("greedy errors stay within the bounds when endpoint switches are allowed") {
    std::mt19937_64 rng(test_seed() + 16);
    for (int trial = 0; trial < 300; ++trial) {
        auto set = random_set(rng, 6, 16);
        Rational target = random_probability(rng, 60);
        std::size_t n = std::uniform_int_distribution<std::size_t>(2, 12)(rng);
        for (std::size_t m : {1, 2}) {
            auto result = approx_greedy(ApproxConfig{set, target, n, m, kDefaultMaxStep, true});
            CAPTURE(set.str());
            CAPTURE(target.str());
            CAPTURE(n);
            CAPTURE(m);
            CHECK(result.error <= bound_greedy(set, n, m));
        }
    }
}

TEST_CASE("single-value sets stay within their bound") {
    std::mt19937_64 rng(test_seed() + 17);
    for (const char *p : {"1/5", "1/3", "1/2", "2/3"}) {
        PswitchSet set = PswitchSet::parse(p);
        for (int trial = 0; trial < 100; ++trial) {
            Rational target = random_probability(rng, 50);
            std::size_t n = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
            auto result = approx_greedy(ApproxConfig{set, target, n, 1, kDefaultMaxStep, true});
            CHECK(result.error <= bound_single(R(p), n).bound);
        }
        for (std::size_t n = 1; n <= 10; ++n) {
            auto b = bound_single(R(p), n);
            auto result = approx_greedy(ApproxConfig{set, b.worst_target, n, 1, kDefaultMaxStep, true});
            CHECK(result.error == b.bound);
        }
    }
}

TEST_CASE("a larger budget can give a larger error") {
    auto two = approx_greedy(config("1/3", "1/2", 2, 1));
    auto three = approx_greedy(config("1/3", "1/2", 3, 1));
    auto four = approx_greedy(config("1/3", "1/2", 4, 1));
    CHECK(two.error == R("1/18"));
    CHECK(three.error == R("5/54"));
    CHECK(three.error > two.error);
    CHECK(four.error < two.error);
}
