#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

namespace pswitch {

using BigInt = mpz_class;

/// Exact fraction in lowest terms with a positive denominator.
class Rational {
   public:
    Rational() = default;
    Rational(long numerator);  // NOLINT(google-explicit-constructor)
    Rational(long numerator, long denominator);
    Rational(const BigInt &numerator, const BigInt &denominator);
    explicit Rational(const mpq_class &value);

    /// Parses "a/b" or a bare integer "a". Decimals are rejected.
    static Rational parse(std::string_view text);

    BigInt numerator() const;
    BigInt denominator() const;
    const mpq_class &raw() const {
        return value_;
    }

    bool is_integer() const;
    int sign() const;
    /// True iff 0 < value < 1.
    bool is_open_probability() const;
    /// True iff 0 <= value <= 1.
    bool is_probability() const;

    Rational abs() const;
    Rational complement() const {
        return Rational(1) - *this;
    }
    Rational pow(unsigned long exponent) const;

    /// "a/b", or "a" when the denominator is 1.
    std::string str() const;
    /// Rounded (half away from zero) to `digits` places after the point.
    std::string decimal(unsigned digits) const;
    double to_double() const;

    Rational &operator+=(const Rational &other);
    Rational &operator-=(const Rational &other);
    Rational &operator*=(const Rational &other);
    Rational &operator/=(const Rational &other);

    friend Rational operator+(Rational a, const Rational &b) {
        return a += b;
    }
    friend Rational operator-(Rational a, const Rational &b) {
        return a -= b;
    }
    friend Rational operator*(Rational a, const Rational &b) {
        return a *= b;
    }
    friend Rational operator/(Rational a, const Rational &b) {
        return a /= b;
    }
    Rational operator-() const;

    friend bool operator==(const Rational &a, const Rational &b) {
        return a.value_ == b.value_;
    }
    friend std::strong_ordering operator<=>(const Rational &a, const Rational &b) {
        int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }

    size_t hash() const;

   private:
    mpq_class value_{0};
};

std::ostream &operator<<(std::ostream &out, const Rational &value);

Rational min(const Rational &a, const Rational &b);
Rational max(const Rational &a, const Rational &b);

/// base^exponent for non-negative exponents.
BigInt ipow(const BigInt &base, unsigned long exponent);
BigInt gcd(const BigInt &a, const BigInt &b);

}  // namespace pswitch

template <>
struct std::hash<pswitch::Rational> {
    size_t operator()(const pswitch::Rational &value) const {
        return value.hash();
    }
};
