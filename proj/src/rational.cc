#include "pswitch/rational.h"

#include <ostream>

#include "pswitch/errors.h"

using namespace pswitch;

namespace {

bool is_digits(std::string_view s) {
    if (s.empty()) {
        return false;
    }
    for (char c : s) {
        if (c < '0' || c > '9') {
            return false;
        }
    }
    return true;
}

BigInt parse_integer(std::string_view s, std::string_view whole) {
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!is_digits(s)) {
        throw DomainError("not an exact fraction: '" + std::string(whole) + "'");
    }
    BigInt result(std::string(s), 10);
    return negative ? BigInt(-result) : result;
}

}  // namespace

Rational::Rational(long numerator) : value_(numerator) {
}

Rational::Rational(long numerator, long denominator) : Rational(BigInt(numerator), BigInt(denominator)) {
}

Rational::Rational(const BigInt &numerator, const BigInt &denominator) {
    if (denominator == 0) {
        throw DomainError("zero denominator");
    }
    value_ = mpq_class(numerator, denominator);
    value_.canonicalize();
}

Rational::Rational(const mpq_class &value) : value_(value) {
    value_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return Rational(parse_integer(text, text), BigInt(1));
    }
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!is_digits(den)) {
        throw DomainError("not an exact fraction: '" + std::string(text) + "'");
    }
    return Rational(parse_integer(num, text), parse_integer(den, text));
}

BigInt Rational::numerator() const {
    return value_.get_num();
}

BigInt Rational::denominator() const {
    return value_.get_den();
}

bool Rational::is_integer() const {
    return value_.get_den() == 1;
}

int Rational::sign() const {
    return sgn(value_);
}

bool Rational::is_open_probability() const {
    return sgn(value_) > 0 && value_ < 1;
}

bool Rational::is_probability() const {
    return sgn(value_) >= 0 && value_ <= 1;
}

Rational Rational::abs() const {
    return Rational(mpq_class(::abs(value_)));
}

Rational Rational::pow(unsigned long exponent) const {
    BigInt n;
    BigInt d;
    mpz_pow_ui(n.get_mpz_t(), value_.get_num_mpz_t(), exponent);
    mpz_pow_ui(d.get_mpz_t(), value_.get_den_mpz_t(), exponent);
    return Rational(n, d);
}

std::string Rational::str() const {
    if (is_integer()) {
        return value_.get_num().get_str();
    }
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::string Rational::decimal(unsigned digits) const {
    BigInt scale = ipow(BigInt(10), digits);
    BigInt num = ::abs(value_.get_num()) * scale;
    BigInt den = value_.get_den();
    BigInt q = num / den;
    BigInt r = num % den;
    if (2 * r >= den) {
        q += 1;
    }
    std::string s = q.get_str();
    if (s.size() <= digits) {
        s.insert(0, digits + 1 - s.size(), '0');
    }
    if (digits > 0) {
        s.insert(s.size() - digits, ".");
    }
    if (sign() < 0 && q != 0) {
        s.insert(0, "-");
    }
    return s;
}

double Rational::to_double() const {
    return value_.get_d();
}

Rational &Rational::operator+=(const Rational &other) {
    value_ += other.value_;
    return *this;
}

Rational &Rational::operator-=(const Rational &other) {
    value_ -= other.value_;
    return *this;
}

Rational &Rational::operator*=(const Rational &other) {
    value_ *= other.value_;
    return *this;
}

Rational &Rational::operator/=(const Rational &other) {
    if (sgn(other.value_) == 0) {
        throw DomainError("division by zero");
    }
    value_ /= other.value_;
    return *this;
}

Rational Rational::operator-() const {
    return Rational(mpq_class(-value_));
}

size_t Rational::hash() const {
    // FNV-style mix over the limbs of numerator and denominator.
    size_t h = 1469598103934665603ULL;
    auto mix = [&](const mpz_t z) {
        size_t n = mpz_size(z);
        for (size_t i = 0; i < n; i++) {
            h ^= static_cast<size_t>(mpz_getlimbn(z, i));
            h *= 1099511628211ULL;
        }
        h ^= static_cast<size_t>(mpz_sgn(z) + 2);
        h *= 1099511628211ULL;
    };
    mix(value_.get_num_mpz_t());
    mix(value_.get_den_mpz_t());
    return h;
}

std::ostream &pswitch::operator<<(std::ostream &out, const Rational &value) {
    return out << value.str();
}

Rational pswitch::min(const Rational &a, const Rational &b) {
    return b < a ? b : a;
}

Rational pswitch::max(const Rational &a, const Rational &b) {
    return a < b ? b : a;
}

BigInt pswitch::ipow(const BigInt &base, unsigned long exponent) {
    BigInt result;
    mpz_pow_ui(result.get_mpz_t(), base.get_mpz_t(), exponent);
    return result;
}

BigInt pswitch::gcd(const BigInt &a, const BigInt &b) {
    BigInt result;
    mpz_gcd(result.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return result;
}
