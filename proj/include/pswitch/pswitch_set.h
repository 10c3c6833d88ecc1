#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pswitch/rational.h"

namespace pswitch {

/// The menu of closure probabilities a circuit may draw its pswitches from.
///
/// Values are kept strictly increasing and inside (0,1). A set built by
/// `uniform(q)` (or one that happens to equal {1/q, ..., (q-1)/q}) remembers q.
class PswitchSet {
   public:
    explicit PswitchSet(std::vector<Rational> values);
    static PswitchSet uniform(int q);
    /// Comma-separated fractions, e.g. "1/5,2/5".
    static PswitchSet parse(const std::string &text);

    std::span<const Rational> values() const {
        return values_;
    }
    size_t size() const {
        return values_.size();
    }
    const Rational &min() const {
        return values_.front();
    }
    const Rational &max() const {
        return values_.back();
    }
    bool contains(const Rational &p) const;
    std::optional<int> uniform_q() const {
        return uniform_q_;
    }

    /// Largest gap between consecutive values of 0, s_1, ..., s_|S|, 1.
    Rational max_interval() const;

    /// Largest element strictly below p, if any.
    std::optional<Rational> lower_neighbor(const Rational &p) const;
    /// Smallest element strictly above p, if any.
    std::optional<Rational> upper_neighbor(const Rational &p) const;

    std::string str() const;

    bool operator==(const PswitchSet &other) const {
        return values_ == other.values_;
    }

   private:
    std::vector<Rational> values_;
    std::optional<int> uniform_q_;
};

}  // namespace pswitch
