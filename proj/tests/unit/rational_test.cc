#include <sstream>
#include <unordered_set>

#include "doctest.h"
#include "pswitch/errors.h"
#include "pswitch/pswitch_set.h"
#include "pswitch/rational.h"
#include "test_util.h"

using namespace pswitch;
using pswitch::testing::R;

TEST_CASE("rational is stored in lowest terms with positive denominator") {
    Rational r(6, -8);
    CHECK(r.numerator() == -3);
    CHECK(r.denominator() == 4);
    CHECK(R("275/1000") == Rational(11, 40));
    CHECK(R("275/1000").str() == "11/40");
    CHECK(Rational(4, 2).str() == "2");
}

TEST_CASE("rational parse rejects decimals and garbage") {
    CHECK_THROWS_AS(Rational::parse("0.5"), DomainError);
    CHECK_THROWS_AS(Rational::parse("1/"), DomainError);
    CHECK_THROWS_AS(Rational::parse("/2"), DomainError);
    CHECK_THROWS_AS(Rational::parse("1/0"), DomainError);
    CHECK_THROWS_AS(Rational::parse("a/b"), DomainError);
    CHECK(Rational::parse("-3/9") == Rational(-1, 3));
}

TEST_CASE("rational arithmetic is exact") {
    CHECK(R("1/3") + R("1/6") == R("1/2"));
    CHECK(R("1/2") * R("1/2") == R("1/4"));
    CHECK(R("2/3").complement() == R("1/3"));
    CHECK(R("2/3").pow(3) == R("8/27"));
    CHECK((R("1/3") - R("1/2")).abs() == R("1/6"));
    CHECK_THROWS_AS(R("1/3") / Rational(0), DomainError);
    CHECK(R("1/3") < R("1/2"));
}

TEST_CASE("decimal rendering rounds half away from zero") {
    CHECK(R("5/8").decimal(3) == "0.625");
    CHECK(R("5/8").decimal(2) == "0.63");
    CHECK(R("1/3").decimal(4) == "0.3333");
    CHECK(R("2/3").decimal(0) == "1");
    CHECK(R("-1/8").decimal(2) == "-0.13");
    CHECK(R("1/1000").decimal(2) == "0.00");
}

TEST_CASE("equal rationals hash equally") {
    std::unordered_set<Rational> set;
    set.insert(R("2/4"));
    set.insert(R("1/2"));
    set.insert(R("3/6"));
    CHECK(set.size() == 1);
    set.insert(R("1/3"));
    CHECK(set.size() == 2);
}

TEST_CASE("pswitch set validates and derives the maximal interval") {
    auto s = PswitchSet::parse("2/5, 1/5,3/5,4/5");
    CHECK(s.values()[0] == R("1/5"));
    CHECK(s.uniform_q() == 5);
    CHECK(s.max_interval() == R("1/5"));
    CHECK(PswitchSet::parse("1/3").max_interval() == R("2/3"));
    CHECK(PswitchSet::parse("1/10,1/2").max_interval() == R("1/2"));
    CHECK_FALSE(PswitchSet::parse("1/3,1/2").uniform_q().has_value());
    CHECK_THROWS_AS(PswitchSet(std::vector<Rational>{}), DomainError);
    CHECK_THROWS_AS(PswitchSet::parse("1/2,1/2"), DomainError);
    CHECK_THROWS_AS(PswitchSet::parse("0/1"), DomainError);
    CHECK_THROWS_AS(PswitchSet::parse("1/1"), DomainError);
    CHECK(s.lower_neighbor(R("3/7")) == R("2/5"));
    CHECK(s.upper_neighbor(R("3/7")) == R("3/5"));
    CHECK_FALSE(s.lower_neighbor(R("1/5")).has_value());
    CHECK(PswitchSet::uniform(10).size() == 9);
}
