#include "pswitch/oracle.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <fmt/format.h>

#include "pswitch/circuit_format.h"
#include "pswitch/errors.h"
#include "pswitch/synthesis.h"

namespace pswitch {

namespace {

constexpr std::string_view kCacheMagic = "pswitch-realizable-table";
constexpr int kCacheVersion = 1;

struct Pending {
    Rational value;
    std::size_t left_size, right_size;
    Rational left, right;
    NodeKind kind;
};

void check_limits(const PswitchSet &set, std::size_t max_size, const OracleLimits &limits) {
    if (max_size < 1) throw DomainError("enumeration needs max_size >= 1");
    unsigned long long total = 1;
    for (std::size_t k = 0; k < max_size; ++k) {
        if (total > limits.max_assignments / set.size())
            throw ResourceLimitError(fmt::format("|S|^{} = {}^{} exceeds the enumeration cap of {}", max_size,
                                                 set.size(), max_size, limits.max_assignments));
        total *= set.size();
    }
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

const char *family_name(Family family) { return family == Family::sp ? "sp" : "ssp"; }

Family parse_family(std::string_view name) {
    if (name == "sp") return Family::sp;
    if (name == "ssp") return Family::ssp;
    throw DomainError(fmt::format("unknown circuit family '{}'", name));
}

RealizableTable::RealizableTable(Family family, PswitchSet set) : family_(family), set_(std::move(set)) {}

std::span<const Rational> RealizableTable::new_at(std::size_t k) const {
    if (k < 1 || k > by_size_.size())
        throw DomainError(fmt::format("size {} outside table range 1..{}", k, by_size_.size()));
    return by_size_[k - 1];
}

std::vector<Rational> RealizableTable::realizable_up_to(std::size_t k) const {
    std::vector<Rational> out;
    for (std::size_t i = 1; i <= std::min(k, by_size_.size()); ++i)
        out.insert(out.end(), by_size_[i - 1].begin(), by_size_[i - 1].end());
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<std::size_t> RealizableTable::optimal_size(const Rational &value) const {
    auto it = index_.find(value);
    if (it == index_.end()) return std::nullopt;
    return it->second.size;
}

const SpCircuit &RealizableTable::witness(const Rational &value) const {
    auto it = index_.find(value);
    if (it == index_.end()) throw DomainError(fmt::format("{} is not in the table", value.str()));
    return it->second.witness;
}

void RealizableTable::push_layer(std::vector<std::pair<Rational, SpCircuit>> layer) {
    std::size_t k = by_size_.size() + 1;
    std::sort(layer.begin(), layer.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
    std::vector<Rational> values;
    values.reserve(layer.size());
    for (auto &[value, circuit] : layer) {
        if (index_.contains(value)) throw DomainError(fmt::format("{} already has a smaller size", value.str()));
        values.push_back(value);
        index_.emplace(value, Entry{k, std::move(circuit)});
    }
    by_size_.push_back(std::move(values));
}

std::string RealizableTable::serialize() const {
    std::string out = fmt::format("{} {}\nfamily {}\nset {}\nmax_size {}\n", kCacheMagic, kCacheVersion,
                                  family_name(family_), set_.str(), max_size());
    for (std::size_t k = 1; k <= by_size_.size(); ++k)
        for (const auto &v : by_size_[k - 1]) out += fmt::format("{} {} {}\n", k, v.str(), witness(v).str());
    return out;
}

RealizableTable RealizableTable::deserialize(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    auto header = [&](std::string_view key) {
        if (!std::getline(in, line) || !line.starts_with(key))
            throw DomainError(fmt::format("table header: expected '{}'", key));
        return line.substr(key.size());
    };
    std::istringstream magic(header(kCacheMagic));
    int version = 0;
    if (!(magic >> version) || version != kCacheVersion)
        throw DomainError(fmt::format("unsupported table version in '{}'", line));
    Family family = parse_family(header("family "));
    PswitchSet set = PswitchSet::parse(header("set "));
    std::size_t max_size = std::stoul(header("max_size "));

    RealizableTable table(family, set);
    std::vector<std::pair<Rational, SpCircuit>> layer;
    std::size_t current = 1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto s1 = line.find(' ');
        auto s2 = s1 == std::string::npos ? s1 : line.find(' ', s1 + 1);
        if (s2 == std::string::npos) throw DomainError(fmt::format("malformed table line '{}'", line));
        std::size_t size = std::stoul(line.substr(0, s1));
        Rational value = Rational::parse(line.substr(s1 + 1, s2 - s1 - 1));
        SpCircuit witness = parse_sp_circuit(line.substr(s2 + 1));
        if (size < current || size > max_size)
            throw DomainError(fmt::format("table line out of order: '{}'", line));
        if (witness.size() != size || witness.evaluate() != value)
            throw DomainError(fmt::format("witness does not realize its entry: '{}'", line));
        while (current < size) {
            table.push_layer(std::move(layer));
            layer.clear();
            ++current;
        }
        layer.emplace_back(value, witness);
    }
    while (table.max_size() < max_size) {
        table.push_layer(std::move(layer));
        layer.clear();
    }
    return table;
}

RealizableTable enumerate(const PswitchSet &set, std::size_t max_size, Family family, const OracleLimits &limits) {
    check_limits(set, max_size, limits);
    RealizableTable table(family, set);
    bool symmetric = std::all_of(set.values().begin(), set.values().end(),
                                 [&](const Rational &s) { return set.contains(s.complement()); });
    // exact[k] holds every value realizable with exactly k switches
    std::vector<std::vector<Rational>> exact(max_size + 1);

    {
        std::vector<std::pair<Rational, SpCircuit>> layer;
        for (const auto &s : set.values()) layer.emplace_back(s, SpCircuit::leaf(s));
        exact[1].assign(set.values().begin(), set.values().end());
        table.push_layer(std::move(layer));
    }

    for (std::size_t k = 2; k <= max_size; ++k) {
        std::unordered_set<Rational> seen;
        std::vector<Pending> fresh;
        auto visit = [&](const Rational &u, std::size_t i, const Rational &v, std::size_t j) {
            for (NodeKind kind : {NodeKind::series, NodeKind::parallel}) {
                Rational value = kind == NodeKind::series ? series_probability(u, v) : parallel_probability(u, v);
                if (!seen.insert(value).second) continue;
                if (!table.contains(value)) fresh.push_back({value, i, j, u, v, kind});
            }
        };
        if (family == Family::sp) {
            for (std::size_t i = 1; i <= k / 2; ++i) {
                std::size_t j = k - i;
                const auto &left = exact[i];
                const auto &right = exact[j];
                for (std::size_t a = 0; a < left.size(); ++a)
                    for (std::size_t b = i == j ? a : 0; b < right.size(); ++b) visit(left[a], i, right[b], j);
            }
        } else {
            for (const auto &u : exact[k - 1])
                for (const auto &s : set.values()) visit(u, k - 1, s, 1);
        }

        std::vector<std::pair<Rational, SpCircuit>> layer;
        layer.reserve(fresh.size());
        std::unordered_set<Rational> fresh_values;
        for (auto &f : fresh) {
            SpCircuit w = SpCircuit::compose(f.kind, {table.witness(f.left), table.witness(f.right)});
            fresh_values.insert(f.value);
            layer.emplace_back(f.value, std::move(w));
        }
        for (const auto &v : fresh_values)
            if (symmetric && !fresh_values.contains(v.complement()))
                throw Error(fmt::format("size-{} layer is not closed under v -> 1-v at {}", k, v.str()));
        exact[k].assign(seen.begin(), seen.end());
        std::sort(exact[k].begin(), exact[k].end());
        table.push_layer(std::move(layer));
    }
    return table;
}

std::filesystem::path cache_file_name(const PswitchSet &set, std::size_t max_size, Family family) {
    std::string tag = set.uniform_q() ? fmt::format("q{}", *set.uniform_q())
                                      : fmt::format("h{:016x}", fnv1a(set.str()));
    return fmt::format("{}-{}-n{}.tbl", family_name(family), tag, max_size);
}

RealizableTable enumerate_cached(const PswitchSet &set, std::size_t max_size, Family family,
                                 const std::filesystem::path &cache_dir, const OracleLimits &limits) {
    check_limits(set, max_size, limits);
    auto path = cache_dir / cache_file_name(set, max_size, family);
    if (std::ifstream in{path}) {
        std::stringstream buf;
        buf << in.rdbuf();
        try {
            auto table = RealizableTable::deserialize(buf.str());
            if (table.set() == set && table.family() == family && table.max_size() == max_size) return table;
        } catch (const std::exception &) {
            // unreadable cache entries are rebuilt
        }
    }
    auto table = enumerate(set, max_size, family, limits);
    std::error_code ec;
    std::filesystem::create_directories(cache_dir, ec);
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out{tmp};
        out << table.serialize();
        if (!out) return table;
    }
    std::filesystem::rename(tmp, path, ec);
    return table;
}

OptimalSize optimal_size(const RealizableTable &table, const Rational &target) {
    if (auto k = table.optimal_size(target)) return {OptimalSize::Status::found, *k};
    auto q = table.set().uniform_q();
    if (q && table.family() == Family::sp && target.is_open_probability()) {
        auto form = q_adic_form(target, *q);
        if (!form) return {OptimalSize::Status::never};
        if (is_prime(*q) && form->exponent <= table.max_size()) return {OptimalSize::Status::never};
    }
    return {OptimalSize::Status::not_within_bound};
}

bool Fig7Report::bounds_hold() const {
    return std::all_of(rows.begin(), rows.end(), [](const Fig7Row &r) { return r.bound_violations == 0; });
}

bool Fig7Report::matches_optimal() const {
    return std::all_of(rows.begin(), rows.end(),
                       [](const Fig7Row &r) { return r.targets == 0 || r.average == Rational(r.optimal_size); });
}

std::string Fig7Report::str() const {
    std::string out = fmt::format("q = {}\nfamily  n  targets  average  max  bound-violations\n", q);
    for (const auto &r : rows)
        out += fmt::format("{:<6} {:>2} {:>8}  {:>7}  {:>3}  {}\n", family_name(r.family), r.optimal_size, r.targets,
                           r.average.decimal(3), r.max, r.bound_violations);
    return out;
}

namespace {

template <class TableFn>
Fig7Report run_fig7(int q, std::span<const std::size_t> n_range, TableFn make_table) {
    if (n_range.empty()) throw DomainError("fig7 needs at least one size");
    if (q < 2 || (q % 2 != 0 && q % 3 != 0))
        throw DomainError(fmt::format("fig7 needs q a multiple of 2 or 3, got {}", q));
    std::size_t top = *std::max_element(n_range.begin(), n_range.end());
    if (*std::min_element(n_range.begin(), n_range.end()) < 1) throw DomainError("fig7 sizes must be >= 1");
    Fig7Report report{q, {}};
    for (Family family : {Family::sp, Family::ssp}) {
        RealizableTable table = make_table(family, top);
        for (std::size_t n : n_range) {
            Fig7Row row{family, n, 0, Rational(0), 0, 0};
            BigInt total = 0;
            for (const auto &target : table.new_at(n)) {
                auto result = synth_backward(target, q);
                std::size_t size = result.circuit.size();
                ++row.targets;
                total += static_cast<unsigned long>(size);
                row.max = std::max(row.max, size);
                auto w = q_adic_form(target, q)->exponent;
                if (size > size_bound(q, w).tightest) ++row.bound_violations;
            }
            if (row.targets) row.average = Rational(total, BigInt(static_cast<unsigned long>(row.targets)));
            report.rows.push_back(row);
        }
    }
    return report;
}

}  // namespace

Fig7Report fig7_experiment(int q, std::span<const std::size_t> n_range, const OracleLimits &limits) {
    return run_fig7(q, n_range, [&](Family f, std::size_t top) {
        return enumerate(PswitchSet::uniform(q), top, f, limits);
    });
}

Fig7Report fig7_experiment(int q, std::span<const std::size_t> n_range, const std::filesystem::path &cache_dir,
                           const OracleLimits &limits) {
    return run_fig7(q, n_range, [&](Family f, std::size_t top) {
        return enumerate_cached(PswitchSet::uniform(q), top, f, cache_dir, limits);
    });
}

}  // namespace pswitch
