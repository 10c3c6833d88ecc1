#include "pswitch/cli.h"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "pswitch/approximation.h"
#include "pswitch/circuit_format.h"
#include "pswitch/errors.h"
#include "pswitch/oracle.h"
#include "pswitch/robustness.h"
#include "pswitch/synthesis.h"

namespace pswitch::cli {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Format { exact, decimal, dot };

struct Output {
    Format format = Format::exact;
    unsigned digits = 10;

    std::string value(const Rational &v) const {
        return format == Format::decimal ? v.decimal(digits) : v.str();
    }
    std::string suffix() const {
        return format == Format::decimal ? fmt::format(" [decimal, {} digits]", digits) : "";
    }
};

struct CircuitSource {
    std::string file;
    std::string expr;
};

void add_output_flags(CLI::App *cmd, std::string &format, unsigned &digits) {
    cmd->add_option("--format", format, "exact | decimal | dot")
        ->check(CLI::IsMember({"exact", "decimal", "dot"}))
        ->default_val("exact");
    cmd->add_option("--digits", digits, "digits after the point for --format decimal")
        ->check(CLI::Range(1u, 200u))
        ->default_val(10);
}

void add_circuit_source(CLI::App *cmd, CircuitSource &src) {
    auto *file = cmd->add_option("circuit", src.file, "circuit file");
    auto *expr = cmd->add_option("--expr", src.expr, "circuit given inline");
    file->excludes(expr);
    expr->excludes(file);
}

Output make_output(const std::string &format, unsigned digits) {
    Output o;
    o.format = format == "decimal" ? Format::decimal : format == "dot" ? Format::dot : Format::exact;
    o.digits = digits;
    return o;
}

Rational flag_rational(const std::string &flag, const std::string &text) {
    try {
        return Rational::parse(text);
    } catch (const DomainError &e) {
        throw UsageError(fmt::format("{}: {}", flag, e.what()));
    }
}

PswitchSet flag_set(const std::string &text) {
    try {
        return PswitchSet::parse(text);
    } catch (const DomainError &e) {
        throw UsageError(fmt::format("--set: {}", e.what()));
    }
}

std::string read_source(const CircuitSource &src) {
    if (!src.expr.empty()) return src.expr;
    if (src.file.empty()) throw UsageError("a circuit file or --expr is required");
    std::ifstream in(src.file);
    if (!in) throw UsageError(fmt::format("cannot read circuit file '{}'", src.file));
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Rational target_from(const std::string &target, const std::vector<std::string> &target_decimal) {
    if (!target.empty() && !target_decimal.empty())
        throw UsageError("--target and --target-decimal are mutually exclusive");
    if (!target_decimal.empty()) {
        unsigned long k = 0;
        try {
            k = std::stoul(target_decimal[1]);
        } catch (const std::exception &) {
            throw UsageError(fmt::format("--target-decimal: bad digit count '{}'", target_decimal[1]));
        }
        try {
            return Rational::parse(decimal_to_fraction(target_decimal[0], static_cast<unsigned>(k)));
        } catch (const DomainError &e) {
            throw UsageError(fmt::format("--target-decimal: {}", e.what()));
        }
    }
    if (target.empty()) throw UsageError("--target or --target-decimal is required");
    return flag_rational("--target", target);
}

std::optional<std::filesystem::path> cache_dir(const std::string &flag) {
    if (!flag.empty()) return std::filesystem::path(flag);
    if (const char *env = std::getenv("PSWITCH_CACHE_DIR"); env && *env) return std::filesystem::path(env);
    return std::nullopt;
}

void no_dot(const Output &o, const char *command) {
    if (o.format == Format::dot) throw UsageError(fmt::format("--format dot is not available for {}", command));
}

template <class T>
std::string join(const std::vector<T> &xs, auto &&show) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + show(xs[i]);
    return out;
}

void print_synthesis(std::ostream &out, const SynthesisResult &r, const Output &o, bool trace) {
    if (o.format == Format::dot) {
        out << to_dot(r.circuit);
        return;
    }
    const auto &t = r.trace;
    auto bound = size_bound(t.q, q_adic_form(t.target, t.q)->exponent);
    out << "circuit: " << r.circuit.str() << "\n";
    out << "size: " << r.circuit.size() << "\n";
    out << "value: " << o.value(r.circuit.evaluate()) << o.suffix() << "\n";
    out << "bound: " << bound.tightest;
    if (bound.multiple_of_six) out << " (log2 form " << bound.general << ", multiple-of-6 form " << *bound.multiple_of_six << ")";
    out << "\n";
    if (!trace) return;
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
        const auto &s = t.steps[i];
        out << fmt::format("step {}: p = {}, d = {}, insert {} in {}\n", i + 1, o.value(s.p), s.d.get_str(),
                           s.x.str(), orientation_name(s.orientation));
    }
    out << fmt::format("leaf: {}\n", t.terminal_leaf.str());
    out << "p-sequence: " << join(t.p_sequence(), [&](const Rational &v) { return o.value(v); }) << "\n";
    out << "d-sequence: " << join(t.d_sequence(), [](const BigInt &d) { return d.get_str(); }) << "\n";
}

// Distinct leaf values, or nullopt when some leaf sits at 0 or 1.
std::optional<PswitchSet> leaf_set(const std::vector<Rational> &ps) {
    std::set<Rational> distinct(ps.begin(), ps.end());
    for (const auto &p : distinct)
        if (!p.is_open_probability()) return std::nullopt;
    return PswitchSet(std::vector<Rational>(distinct.begin(), distinct.end()));
}

}  // namespace

std::string decimal_to_fraction(const std::string &decimal, unsigned digits) {
    auto dot = decimal.find('.');
    std::string whole = decimal.substr(0, dot);
    std::string frac = dot == std::string::npos ? "" : decimal.substr(dot + 1);
    auto all_digits = [](const std::string &s) {
        return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
    };
    if ((whole.empty() && frac.empty()) || !all_digits(whole) || !all_digits(frac))
        throw DomainError(fmt::format("'{}' is not a plain decimal", decimal));
    if (frac.size() > digits)
        throw DomainError(fmt::format("'{}' has more than {} fractional digits", decimal, digits));
    frac.append(digits - frac.size(), '0');
    BigInt num((whole.empty() ? "0" : whole) + frac, 10);
    return Rational(num, ipow(BigInt(10), digits)).str();
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Exact synthesis, approximation and robustness analysis of stochastic switching circuits",
                 "pswitch"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "pswitch 1.0");

    std::string format = "exact";
    unsigned digits = 10;
    std::string cache_flag;
    CircuitSource src;

    auto *eval = app.add_subcommand("eval", "closure probability of a circuit");
    add_circuit_source(eval, src);
    add_output_flags(eval, format, digits);
    std::vector<std::string> conditions;
    eval->add_option("--condition", conditions, "condition a switch first, ID:closed or ID:open (repeatable)");

    auto *dual = app.add_subcommand("dual", "dual circuit and its closure probability");
    add_circuit_source(dual, src);
    add_output_flags(dual, format, digits);

    auto *synth = app.add_subcommand("synth", "exact ssp synthesis of a/q^n");
    int q = 0;
    std::string target;
    std::vector<std::string> target_decimal;
    std::string method = "backward";
    bool trace = false;
    synth->add_option("--q", q, "denominator base")->required();
    synth->add_option("--target", target, "target a/b");
    synth->add_option("--target-decimal", target_decimal, "target as decimal D with denominator 10^K")
        ->expected(2)
        ->type_name("D K");
    synth->add_option("--method", method, "backward | rules")->check(CLI::IsMember({"backward", "rules"}));
    synth->add_flag("--trace", trace, "print the residuals and d values");
    add_output_flags(synth, format, digits);

    auto *approx = app.add_subcommand("approx", "greedy approximation over a pswitch set");
    std::string set_text;
    std::size_t budget = 0, step = 2, max_step = kDefaultMaxStep;
    bool endpoints = false;
    approx->add_option("--set", set_text, "pswitch set, e.g. 1/5,2/5")->required();
    approx->add_option("--target", target, "target a/b");
    approx->add_option("--target-decimal", target_decimal, "target as decimal D with denominator 10^K")
        ->expected(2)
        ->type_name("D K");
    approx->add_option("--n", budget, "switch budget")->required()->check(CLI::PositiveNumber);
    approx->add_option("--m", step, "insertions per greedy round")->check(CLI::PositiveNumber);
    approx->add_option("--max-m", max_step, "cap on --m")->check(CLI::PositiveNumber);
    approx->add_flag("--endpoints", endpoints, "allow switches of probability 0 and 1");
    add_output_flags(approx, format, digits);

    auto *robust = app.add_subcommand("robust", "error of a circuit under per-switch allowance epsilon");
    add_circuit_source(robust, src);
    std::string eps_text;
    std::string robust_method = "auto";
    std::size_t max_switches = 20;
    std::vector<std::size_t> contributions;
    robust->add_option("--eps", eps_text, "per-switch allowance a/b")->required();
    robust->add_option("--method", robust_method, "auto | enumerate | monotone")
        ->check(CLI::IsMember({"auto", "enumerate", "monotone"}));
    robust->add_option("--max-switches", max_switches, "vertex enumeration cap");
    robust->add_option("--contribution", contributions, "switch index (repeatable)");
    add_output_flags(robust, format, digits);

    auto *enumerate_cmd = app.add_subcommand("enum", "values realizable with few switches");
    std::size_t max_size = 0;
    std::string family_text = "sp";
    bool list = false;
    auto *enum_q = enumerate_cmd->add_option("--q", q, "use the uniform set 1/q..(q-1)/q");
    auto *enum_set = enumerate_cmd->add_option("--set", set_text, "pswitch set");
    enum_q->excludes(enum_set);
    enum_set->excludes(enum_q);
    enumerate_cmd->add_option("--max-size", max_size, "largest circuit size")->required()->check(CLI::PositiveNumber);
    enumerate_cmd->add_option("--family", family_text, "sp | ssp")->check(CLI::IsMember({"sp", "ssp"}));
    enumerate_cmd->add_option("--target", target, "report the optimal size of a/b");
    enumerate_cmd->add_flag("--list", list, "print every entry as 'size value witness'");
    enumerate_cmd->add_option("--cache-dir", cache_flag, "table cache directory (default $PSWITCH_CACHE_DIR)");
    add_output_flags(enumerate_cmd, format, digits);

    auto *fig7 = app.add_subcommand("fig7", "Algorithm 1 sizes against optimal sizes");
    std::vector<std::size_t> sizes;
    fig7->add_option("--q", q, "denominator base")->required();
    fig7->add_option("--sizes", sizes, "optimal sizes, e.g. 3,4")->required()->delimiter(',');
    fig7->add_option("--cache-dir", cache_flag, "table cache directory (default $PSWITCH_CACHE_DIR)");
    add_output_flags(fig7, format, digits);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    Output o = make_output(format, digits);
    try {
        if (eval->parsed()) {
            std::vector<std::pair<std::size_t, SwitchState>> conds;
            for (const auto &c : conditions) {
                auto colon = c.find(':');
                std::string state = colon == std::string::npos ? "" : c.substr(colon + 1);
                if (state != "closed" && state != "open")
                    throw UsageError(fmt::format("--condition '{}': expected ID:closed or ID:open", c));
                std::size_t id = 0;
                try {
                    id = std::stoul(c.substr(0, colon));
                } catch (const std::exception &) {
                    throw UsageError(fmt::format("--condition '{}': bad switch id", c));
                }
                conds.emplace_back(id, state == "closed" ? SwitchState::closed : SwitchState::open);
            }
            auto text = read_source(src);
            AnyCircuit circuit = parse_circuit(text);
            if (!conds.empty()) {
                GeneralCircuit g = std::holds_alternative<GeneralCircuit>(circuit)
                                       ? std::get<GeneralCircuit>(circuit)
                                       : GeneralCircuit::from_sp(std::get<SpCircuit>(circuit));
                for (auto [id, state] : conds) g = g.condition(id, state);
                circuit = g;
            }
            if (o.format == Format::dot) {
                std::visit([&](const auto &c) { out << to_dot(c); }, circuit);
            } else {
                Rational v = std::visit([](const auto &c) { return c.evaluate(); }, circuit);
                out << o.value(v) << o.suffix() << "\n";
            }
        } else if (dual->parsed()) {
            AnyCircuit circuit = parse_circuit(read_source(src));
            if (!std::holds_alternative<SpCircuit>(circuit))
                throw DomainError("dual is defined for series-parallel circuits only");
            SpCircuit d = std::get<SpCircuit>(circuit).dual();
            if (o.format == Format::dot)
                out << to_dot(d);
            else
                out << d.str() << "\n" << o.value(d.evaluate()) << o.suffix() << "\n";
        } else if (synth->parsed()) {
            Rational t = target_from(target, target_decimal);
            auto result = method == "rules" ? synth_rule_based(t, q) : synth_backward(t, q);
            print_synthesis(out, result, o, trace);
        } else if (approx->parsed()) {
            ApproxConfig config{flag_set(set_text), target_from(target, target_decimal), budget, step, max_step,
                                endpoints};
            try {
                config.validate();
            } catch (const DomainError &e) {
                throw UsageError(e.what());
            }
            auto result = approx_greedy(config);
            if (o.format == Format::dot) {
                out << to_dot(result.circuit);
            } else {
                out << fmt::format("{} (error {}){}\n", o.value(result.achieved), o.value(result.error), o.suffix());
                out << "circuit: " << result.circuit.str() << "\n";
                out << "size: " << result.circuit.size() << "\n";
            }
        } else if (robust->parsed()) {
            no_dot(o, "robust");
            Rational eps = flag_rational("--eps", eps_text);
            if (eps.sign() < 0) throw UsageError("--eps must be nonnegative");
            AnyCircuit circuit = parse_circuit(read_source(src));
            bool is_sp = std::holds_alternative<SpCircuit>(circuit);
            std::vector<Rational> ps;
            if (is_sp) {
                ps = std::get<SpCircuit>(circuit).leaf_probabilities();
            } else {
                for (const auto &e : std::get<GeneralCircuit>(circuit).edges()) ps.push_back(e.probability);
            }
            std::size_t n = ps.size();
            bool enumerate_vertices =
                robust_method == "enumerate" || (robust_method == "auto" && n <= max_switches);
            WorstCaseOptions opts{max_switches, {}};
            Rational worst = std::visit(
                [&](const auto &c) {
                    return enumerate_vertices ? worst_case_error(c, eps, opts) : monotone_worst_case_error(c, eps);
                },
                circuit);
            out << "switches: " << n << "\n";
            out << "epsilon: " << o.value(eps) << "\n";
            out << "worst-case error: " << o.value(worst)
                << (enumerate_vertices ? " (vertex enumeration)" : " (monotone extremes)") << "\n";
            out << "bound n*eps: " << o.value(bound_general(n, eps)) << "\n";
            if (auto set = leaf_set(ps)) {
                auto sp = bound_sp(*set, n, eps);
                out << fmt::format("bound c*sqrt(n)*eps: {} (square {}, truncated to {} digits)\n",
                                   sp.decimal(o.digits), o.value(sp.square()), o.digits);
                if (is_sp && std::get<SpCircuit>(circuit).is_ssp())
                    out << "bound ssp: " << o.value(bound_ssp(*set, eps)) << "\n";
            }
            for (std::size_t id : contributions) {
                Rational c = std::visit([&](const auto &x) { return error_contribution(x, id, eps); }, circuit);
                out << fmt::format("contribution {}: {}\n", id, o.value(c));
            }
            if (o.format == Format::decimal) out << "values rounded to " << o.digits << " decimal digits\n";
        } else if (enumerate_cmd->parsed()) {
            no_dot(o, "enum");
            if (!*enum_q && !*enum_set) throw UsageError("enum needs --q or --set");
            PswitchSet set = *enum_q ? (q >= 2 ? PswitchSet::uniform(q) : throw UsageError("--q must be >= 2"))
                                     : flag_set(set_text);
            Family family = parse_family(family_text);
            std::optional<Rational> query;
            if (!target.empty()) query = flag_rational("--target", target);
            auto dir = cache_dir(cache_flag);
            auto table = dir ? enumerate_cached(set, max_size, family, *dir) : enumerate(set, max_size, family);
            out << fmt::format("family {}, set {}, max size {}\n", family_name(family), set.str(), max_size);
            for (std::size_t k = 1; k <= max_size; ++k)
                out << fmt::format("size {}: {} new values\n", k, table.new_at(k).size());
            if (list)
                for (std::size_t k = 1; k <= max_size; ++k)
                    for (const auto &v : table.new_at(k))
                        out << k << " " << o.value(v) << " " << table.witness(v).str() << "\n";
            if (query) {
                auto r = optimal_size(table, *query);
                switch (r.status) {
                    case OptimalSize::Status::found:
                        out << fmt::format("{}: optimal size {}, witness {}\n", query->str(), r.size,
                                           table.witness(*query).str());
                        break;
                    case OptimalSize::Status::not_within_bound:
                        out << fmt::format("{}: not realizable with at most {} switches\n", query->str(), max_size);
                        break;
                    case OptimalSize::Status::never:
                        out << fmt::format("{}: never realizable\n", query->str());
                        break;
                }
            }
        } else if (fig7->parsed()) {
            no_dot(o, "fig7");
            auto dir = cache_dir(cache_flag);
            auto report = dir ? fig7_experiment(q, sizes, *dir) : fig7_experiment(q, sizes);
            out << report.str();
            out << "bounds hold: " << (report.bounds_hold() ? "yes" : "no") << "\n";
            out << "average equals optimal size: " << (report.matches_optimal() ? "yes" : "no") << "\n";
        }
    } catch (const UsageError &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ResourceLimitError &e) {
        err << "error: " << e.what() << "\n";
        return kExitResource;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitOk;
}

}  // namespace pswitch::cli
