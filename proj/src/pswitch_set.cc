#include "pswitch/pswitch_set.h"

#include <algorithm>

#include "pswitch/errors.h"

using namespace pswitch;

PswitchSet::PswitchSet(std::vector<Rational> values) : values_(std::move(values)) {
    if (values_.empty()) {
        throw DomainError("pswitch set must be nonempty");
    }
    std::sort(values_.begin(), values_.end());
    for (size_t i = 0; i < values_.size(); i++) {
        if (!values_[i].is_open_probability()) {
            throw DomainError("pswitch probability outside (0,1): " + values_[i].str());
        }
        if (i > 0 && values_[i] == values_[i - 1]) {
            throw DomainError("duplicate pswitch probability: " + values_[i].str());
        }
    }
    BigInt q = values_.front().denominator();
    if (values_.front() == Rational(BigInt(1), q) && q.fits_sint_p() && values_.size() + 1 == q.get_ui()) {
        bool all = true;
        for (size_t i = 0; i < values_.size() && all; i++) {
            all = values_[i] == Rational(BigInt(static_cast<long>(i + 1)), q);
        }
        if (all) {
            uniform_q_ = static_cast<int>(q.get_si());
        }
    }
}

PswitchSet PswitchSet::uniform(int q) {
    if (q < 2) {
        throw DomainError("uniform pswitch set needs q >= 2");
    }
    std::vector<Rational> values;
    values.reserve(q - 1);
    for (int i = 1; i < q; i++) {
        values.emplace_back(i, q);
    }
    return PswitchSet(std::move(values));
}

PswitchSet PswitchSet::parse(const std::string &text) {
    std::vector<Rational> values;
    size_t start = 0;
    while (start <= text.size()) {
        size_t comma = text.find(',', start);
        if (comma == std::string::npos) {
            comma = text.size();
        }
        std::string item = text.substr(start, comma - start);
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        values.push_back(Rational::parse(item));
        start = comma + 1;
    }
    return PswitchSet(std::move(values));
}

bool PswitchSet::contains(const Rational &p) const {
    return std::binary_search(values_.begin(), values_.end(), p);
}

Rational PswitchSet::max_interval() const {
    Rational best = values_.front();
    for (size_t i = 1; i < values_.size(); i++) {
        best = pswitch::max(best, values_[i] - values_[i - 1]);
    }
    return pswitch::max(best, values_.back().complement());
}

std::optional<Rational> PswitchSet::lower_neighbor(const Rational &p) const {
    auto it = std::lower_bound(values_.begin(), values_.end(), p);
    if (it == values_.begin()) {
        return std::nullopt;
    }
    return *std::prev(it);
}

std::optional<Rational> PswitchSet::upper_neighbor(const Rational &p) const {
    auto it = std::upper_bound(values_.begin(), values_.end(), p);
    if (it == values_.end()) {
        return std::nullopt;
    }
    return *it;
}

std::string PswitchSet::str() const {
    std::string out;
    for (const auto &v : values_) {
        if (!out.empty()) {
            out += ",";
        }
        out += v.str();
    }
    return out;
}
