#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pswitch/pswitch_set.h"
#include "pswitch/rational.h"
#include "pswitch/sp_circuit.h"

namespace pswitch {

enum class Family { sp, ssp };

const char *family_name(Family family);
Family parse_family(std::string_view name);

struct OracleLimits {
    /// Upper bound on |S|^max_size.
    unsigned long long max_assignments = 1'000'000;
};

class RealizableTable {
public:
    RealizableTable(Family family, PswitchSet set);

    Family family() const { return family_; }
    const PswitchSet &set() const { return set_; }
    std::size_t max_size() const { return by_size_.size(); }

    /// Values whose optimal size is exactly k (1 <= k <= max_size), ascending.
    std::span<const Rational> new_at(std::size_t k) const;
    /// All values realizable with at most k switches, ascending.
    std::vector<Rational> realizable_up_to(std::size_t k) const;

    bool contains(const Rational &value) const { return index_.contains(value); }
    std::optional<std::size_t> optimal_size(const Rational &value) const;
    /// Smallest-size circuit recorded for value. Throws DomainError if absent.
    const SpCircuit &witness(const Rational &value) const;
    std::size_t count() const { return index_.size(); }

    std::string serialize() const;
    static RealizableTable deserialize(std::string_view text);

    /// Appends the next size layer. Values must be new and not yet indexed.
    void push_layer(std::vector<std::pair<Rational, SpCircuit>> layer);

private:
    struct Entry {
        std::size_t size;
        SpCircuit witness;
    };

    Family family_;
    PswitchSet set_;
    std::vector<std::vector<Rational>> by_size_;
    std::unordered_map<Rational, Entry> index_;
};

/// All values realizable by sp (or ssp) circuits over S with at most max_size
/// switches, each with a smallest witness. When S is closed under x -> 1-x,
/// every layer is checked to be as well. Throws ResourceLimitError when
/// |S|^max_size exceeds the limit.
RealizableTable enumerate(const PswitchSet &set, std::size_t max_size, Family family,
                          const OracleLimits &limits = {});

/// Like enumerate, but reads and writes a cache file under cache_dir.
RealizableTable enumerate_cached(const PswitchSet &set, std::size_t max_size, Family family,
                                 const std::filesystem::path &cache_dir, const OracleLimits &limits = {});

std::filesystem::path cache_file_name(const PswitchSet &set, std::size_t max_size, Family family);

struct OptimalSize {
    enum class Status { found, not_within_bound, never };
    Status status;
    std::size_t size = 0;  ///< valid when status == found

    bool found() const { return status == Status::found; }
};

/// For an sp table over the uniform set with prime q and a target a/q^n,
/// n <= max_size, absence is reported as `never`.
OptimalSize optimal_size(const RealizableTable &table, const Rational &target);

struct Fig7Row {
    Family family;
    std::size_t optimal_size;
    std::size_t targets;
    Rational average;
    std::size_t max;
    std::size_t bound_violations;
};

struct Fig7Report {
    int q;
    std::vector<Fig7Row> rows;

    bool bounds_hold() const;
    /// Average synthesized size equals the optimal size on every row.
    bool matches_optimal() const;
    std::string str() const;
};

/// For every n in n_range and both families, runs synth_backward on every
/// target of optimal size n and records average and maximum sizes.
Fig7Report fig7_experiment(int q, std::span<const std::size_t> n_range, const OracleLimits &limits = {});
Fig7Report fig7_experiment(int q, std::span<const std::size_t> n_range, const std::filesystem::path &cache_dir,
                           const OracleLimits &limits = {});

}  // namespace pswitch
