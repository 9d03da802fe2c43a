#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "config.hpp"
#include "simplab/bench.hpp"
#include "simplab/determinant.hpp"
#include "simplab/errors.hpp"
#include "simplab/expr.hpp"
#include "simplab/int_matrix.hpp"
#include "simplab/permanent.hpp"
#include "simplab/recurrence.hpp"
#include "simplab/rewrite.hpp"

namespace simplab::cli {

namespace {

using nlohmann::json;

constexpr std::size_t kCheckLimit = 8;
constexpr std::int64_t kFibNaiveLimit = 30;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

/// Parses "4,6..8,10" into {4, 6, 7, 8, 10}; an empty string is an empty list.
std::vector<std::size_t> parse_sizes(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    auto number = [](const std::string& s) {
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos || s.size() > 9) {
            throw std::invalid_argument("sizes: '" + s + "' is not a size");
        }
        return static_cast<std::size_t>(std::stoul(s));
    };
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        if (auto dots = item.find(".."); dots != std::string::npos) {
            const std::size_t lo = number(item.substr(0, dots));
            const std::size_t hi = number(item.substr(dots + 2));
            if (lo > hi) throw std::invalid_argument("sizes: empty range '" + item + "'");
            for (std::size_t n = lo; n <= hi; ++n) out.push_back(n);
        } else {
            out.push_back(number(item));
        }
    }
    return out;
}

struct Invocation {
    // Global settings as typed; applied over the config file.
    std::string config_path;
    std::string weights, budget, format;
    unsigned trials = 0;
    std::uint64_t seed = 0;
    bool check = false;

    std::string expr_text;
    std::string rules_path;
    std::vector<std::string> bindings;
    std::string modulus;
    std::string matrix_path;
    std::string algorithm;
    std::size_t row = 1;
    std::string sizes;
    std::size_t reps = 3;
    bool summary = false;
    std::int64_t n = 0;
    std::string method;
    bool count_ops = false;
    std::string recurrence_text;
};

class Commands {
public:
    Commands(const Config& config, const Invocation& inv, std::ostream& out, std::ostream& err)
        : config_(config), inv_(inv), out_(out), err_(err) {}

    int simplify_cmd() {
        const Expr input = parse(inv_.expr_text);
        const RuleSet rules = inv_.rules_path.empty() ? default_rules() : parse_rules(read_file(inv_.rules_path));
        SaturationOptions options;
        options.seed = config_.seed;
        const SimplifyResult r = simplify(input, rules, config_.weights, config_.budget, options);
        const auto check = probably_equivalent(input, r.best, config_.trials, config_.seed);
        const bool minimal = r.best_cost == r.original_cost;
        const std::string status = minimal ? "already minimal (within budget)" : "simplified";

        switch (config_.format) {
            case OutputFormat::Text:
                out_ << "original: " << render(input) << "\n"
                     << "original_cost: " << r.original_cost << "\n"
                     << "best: " << render(r.best) << "\n"
                     << "best_cost: " << r.best_cost << "\n"
                     << "dag_cost: " << r.best_dag_cost << "\n"
                     << "saturated: " << (r.saturated ? "true" : "false") << "\n"
                     << "stop: " << stop_reason_name(r.stop) << "\n"
                     << "iterations: " << r.iterations_used << "\n"
                     << "nodes: " << r.nodes_used << "\n"
                     << "classes: " << r.classes_used << "\n"
                     << "equivalent: " << (check.equivalent ? "true" : "false") << " ("
                     << check.trials_run << " trials)\n"
                     << "status: " << status << "\n";
                break;
            case OutputFormat::Json:
                out_ << json{{"original", render(input)},
                             {"original_cost", r.original_cost},
                             {"best", render(r.best)},
                             {"best_cost", r.best_cost},
                             {"dag_cost", r.best_dag_cost},
                             {"saturated", r.saturated},
                             {"stop", stop_reason_name(r.stop)},
                             {"iterations", r.iterations_used},
                             {"nodes", r.nodes_used},
                             {"classes", r.classes_used},
                             {"equivalent", check.equivalent},
                             {"trials", check.trials_run},
                             {"minimal", minimal},
                             {"status", status}}
                            .dump(2)
                     << "\n";
                break;
            case OutputFormat::Csv:
                out_ << "original,original_cost,best,best_cost,dag_cost,saturated,stop,iterations,nodes,"
                        "classes,equivalent,minimal\n"
                     << csv_quote(render(input)) << "," << r.original_cost << "," << csv_quote(render(r.best))
                     << "," << r.best_cost << "," << r.best_dag_cost << "," << (r.saturated ? "true" : "false")
                     << "," << stop_reason_name(r.stop) << "," << r.iterations_used << "," << r.nodes_used
                     << "," << r.classes_used << "," << (check.equivalent ? "true" : "false") << ","
                     << (minimal ? "true" : "false") << "\n";
                break;
        }
        if (!check.equivalent) {
            err_ << "error: result is not equivalent to the input\n";
            return kConsistencyFailure;
        }
        return kSuccess;
    }

    int eval_cmd() {
        const Expr e = parse(inv_.expr_text);
        std::map<std::string, Integer> values;
        for (const std::string& b : inv_.bindings) {
            const auto eq = b.find('=');
            if (eq == std::string::npos || eq == 0) throw std::invalid_argument("--var expects name=value, got '" + b + "'");
            const Expr v = parse(b.substr(eq + 1));
            if (!v.is_const()) throw std::invalid_argument("--var value must be an integer literal: '" + b + "'");
            values[b.substr(0, eq)] = v.value();
        }
        std::optional<Integer> modulus;
        if (!inv_.modulus.empty()) modulus = Integer(inv_.modulus);
        const Integer value = evaluate(e, Assignment(values, modulus));
        emit_value("eval", std::nullopt, value, std::nullopt);
        return kSuccess;
    }

    int matrix_cmd(bool permanent) {
        const IntMatrix m = parse_matrix(read_file(inv_.matrix_path));
        const std::string name = normalize_matrix_algorithm(permanent);
        const auto algorithm = parse_algorithm(name);
        if (!algorithm) throw std::invalid_argument("unknown algorithm '" + inv_.algorithm + "'");

        if (inv_.row < 1 || inv_.row > m.size()) {
            throw std::invalid_argument("--row must be between 1 and " + std::to_string(m.size()));
        }
        Integer value;
        switch (*algorithm) {
            case Algorithm::PermExpand: value = perm_expand(m, inv_.row); break;
            case Algorithm::DetCofactor: value = det_cofactor(m, inv_.row); break;
            default: value = run_algorithm(*algorithm, m); break;
        }

        std::optional<std::string> check;
        if (config_.check) {
            if (m.size() <= kCheckLimit) {
                const Integer oracle = permanent ? perm_naive(m) : det_cofactor(m, 1);
                if (oracle != value) {
                    err_ << "error: check failed: " << algorithm_id(*algorithm) << " gave " << value
                         << " but " << (permanent ? "perm_naive" : "det_cofactor") << " gave " << oracle << "\n";
                    return kConsistencyFailure;
                }
                check = "passed";
            } else {
                check = "skipped";
                err_ << "note: check skipped (n > " << kCheckLimit << ")\n";
            }
        }
        emit_value(std::string(algorithm_id(*algorithm)), m.size(), value, check);
        return kSuccess;
    }

    int bench_cmd() {
        const auto algorithm = parse_algorithm(inv_.algorithm);
        if (!algorithm) throw std::invalid_argument("unknown algorithm '" + inv_.algorithm + "'");
        const std::vector<std::size_t> sizes = parse_sizes(inv_.sizes);
        const auto records = bench(*algorithm, sizes, inv_.reps, config_.seed);
        if (config_.format == OutputFormat::Json) {
            json rows = json::array();
            for (const auto& r : records) {
                rows.push_back({{"algorithm", r.algorithm}, {"n", r.n}, {"rep", r.rep},
                                {"wall_seconds", r.wall_seconds}, {"digest", r.digest}});
            }
            out_ << rows.dump(2) << "\n";
        } else {
            out_ << bench_csv(records);
        }
        if (inv_.summary) {
            const auto medians = median_seconds(records);
            for (std::size_t i = 1; i < medians.size(); ++i) {
                char line[128];
                std::snprintf(line, sizeof line, "# ratio n=%zu/n=%zu: %.3f\n", medians[i].first,
                              medians[i - 1].first, medians[i].second / medians[i - 1].second);
                out_ << line;
            }
        }
        return kSuccess;
    }

    int fib_cmd() {
        const std::string method = inv_.method;
        if (inv_.n < 0) throw std::out_of_range("fib: n must be non-negative");
        EvalReport report;
        bool have_report = false;
        if (method == "naive") {
            if (inv_.n > kFibNaiveLimit) throw GuardError("fib naive", kFibNaiveLimit, static_cast<std::size_t>(inv_.n));
            report = inv_.n == 0 ? EvalReport{0, 0, 0} : eval_naive(fibonacci_recurrence(), inv_.n, config_.weights);
            have_report = true;
        } else if (method == "memo") {
            report = inv_.n == 0 ? EvalReport{0, 0, 0} : eval_memo(fibonacci_recurrence(), inv_.n, config_.weights);
            have_report = true;
        } else if (method == "doubling") {
            report = fib_fast_doubling_report(static_cast<std::uint64_t>(inv_.n));
            have_report = true;
        } else if (method == "binet") {
            if (inv_.n > kBinetMaxN || inv_.n < 1) {
                throw GuardError("fib binet", kBinetMaxN, static_cast<std::size_t>(inv_.n));
            }
            report.value = fib_binet_rounded(static_cast<int>(inv_.n));
        } else {
            throw std::invalid_argument("unknown method '" + method + "' (naive, memo, doubling, binet)");
        }

        if (config_.check) {
            const Integer oracle = fib_fast_doubling(static_cast<std::uint64_t>(inv_.n));
            if (oracle != report.value) {
                err_ << "error: check failed: " << method << " gave " << report.value
                     << " but fast doubling gave " << oracle << "\n";
                return kConsistencyFailure;
            }
        }
        emit_report("fib " + method, report, have_report && inv_.count_ops);
        return kSuccess;
    }

    int recur_cmd() {
        const Recurrence r = parse_recurrence(inv_.recurrence_text);
        EvalReport report;
        if (inv_.method == "naive") {
            report = eval_naive(r, inv_.n, config_.weights);
        } else if (inv_.method == "memo") {
            report = eval_memo(r, inv_.n, config_.weights);
        } else {
            throw std::invalid_argument("unknown method '" + inv_.method + "' (naive, memo)");
        }
        emit_report("recur " + inv_.method, report, inv_.count_ops);
        return kSuccess;
    }

    int rules_dump_cmd() {
        out_ << render_rules(default_rules());
        return kSuccess;
    }

private:
    std::string normalize_matrix_algorithm(bool permanent) const {
        std::string a = inv_.algorithm;
        if (a.empty()) a = permanent ? "ryser" : "elimination";
        std::replace(a.begin(), a.end(), '-', '_');
        const std::string prefix = permanent ? "perm_" : "det_";
        return a.starts_with(prefix) ? a : prefix + a;
    }

    void emit_value(const std::string& what, std::optional<std::size_t> n, const Integer& value,
                    const std::optional<std::string>& check) {
        switch (config_.format) {
            case OutputFormat::Text: out_ << value << "\n"; break;
            case OutputFormat::Json: {
                json j{{"command", what}, {"value", value.get_str()}};
                if (n) j["n"] = *n;
                if (check) j["check"] = *check;
                out_ << j.dump(2) << "\n";
                break;
            }
            case OutputFormat::Csv:
                out_ << "command,n,value,check\n"
                     << what << "," << (n ? std::to_string(*n) : "") << "," << value << ","
                     << check.value_or("") << "\n";
                break;
        }
    }

    void emit_report(const std::string& what, const EvalReport& r, bool with_counts) {
        switch (config_.format) {
            case OutputFormat::Text:
                if (with_counts) {
                    out_ << "value: " << r.value << "\ncalls: " << r.calls << "\nop_count: " << r.op_count << "\n";
                } else {
                    out_ << r.value << "\n";
                }
                break;
            case OutputFormat::Json: {
                json j{{"command", what}, {"n", inv_.n}, {"value", r.value.get_str()}};
                if (with_counts) {
                    j["calls"] = r.calls;
                    j["op_count"] = r.op_count;
                }
                out_ << j.dump(2) << "\n";
                break;
            }
            case OutputFormat::Csv:
                out_ << "command,n,value,calls,op_count\n"
                     << what << "," << inv_.n << "," << r.value << ","
                     << (with_counts ? std::to_string(r.calls) : "") << ","
                     << (with_counts ? std::to_string(r.op_count) : "") << "\n";
                break;
        }
    }

    const Config& config_;
    const Invocation& inv_;
    std::ostream& out_;
    std::ostream& err_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Invocation inv;
    CLI::App app{"Cost-based algebraic simplification, permanents and determinants", "simplab"};
    app.require_subcommand(1);
    app.fallthrough();

    app.add_option("--config", inv.config_path, "Flat key=value settings file");
    auto* weights_opt = app.add_option("--weights", inv.weights, "Operation weights add,mul,neg (default 1,1,0)");
    auto* budget_opt = app.add_option("--budget", inv.budget, "Saturation budget iters,nodes,classes (default 30,50000,20000)");
    auto* trials_opt = app.add_option("--trials", inv.trials, "Randomized equivalence trials (default 16)");
    auto* seed_opt = app.add_option("--seed", inv.seed, "Random seed (default 1)");
    auto* format_opt = app.add_option("--format", inv.format, "Output format: text, json or csv");
    auto* check_opt = app.add_flag("--check", inv.check, "Cross-check against a reference algorithm");

    auto* simplify = app.add_subcommand("simplify", "Find the cheapest equivalent expression");
    simplify->add_option("expr", inv.expr_text, "Expression")->required();
    simplify->add_option("--rules", inv.rules_path, "Rule file replacing the built-in rules");

    auto* eval = app.add_subcommand("eval", "Evaluate an expression exactly");
    eval->add_option("expr", inv.expr_text, "Expression")->required();
    eval->add_option("--var", inv.bindings, "Binding name=value (repeatable)");
    eval->add_option("--modulus", inv.modulus, "Reduce modulo this prime (> 2^60)");

    auto* perm = app.add_subcommand("perm", "Permanent of a matrix file");
    perm->add_option("matrix", inv.matrix_path, "Matrix file")->required();
    perm->add_option("--algorithm", inv.algorithm, "naive, expand, subset-dp or ryser (default ryser)");
    perm->add_option("--row", inv.row, "Expansion row for expand (1-based)");

    auto* det = app.add_subcommand("det", "Determinant of a matrix file");
    det->add_option("matrix", inv.matrix_path, "Matrix file")->required();
    det->add_option("--algorithm", inv.algorithm, "cofactor or elimination (default elimination)");
    det->add_option("--row", inv.row, "Expansion row for cofactor (1-based)");

    auto* bench = app.add_subcommand("bench", "Time an algorithm on seeded random matrices (CSV)");
    bench->add_option("--algorithm", inv.algorithm, "perm_naive, perm_expand, perm_subset_dp, perm_ryser, det_cofactor, det_elimination")->required();
    bench->add_option("--sizes", inv.sizes, "Sizes such as 16..22 or 50,100,200")->required();
    bench->add_option("--reps", inv.reps, "Repetitions per size (default 3)");
    bench->add_flag("--summary", inv.summary, "Append consecutive median-time ratios as # comments");

    auto* fib = app.add_subcommand("fib", "Fibonacci number F(n)");
    fib->add_option("n", inv.n, "Index")->required();
    fib->add_option("--method", inv.method, "naive (n <= 30), memo, doubling or binet (n <= 70)")->default_val("doubling");
    fib->add_flag("--count-ops", inv.count_ops, "Print call and operation counts");

    auto* recur = app.add_subcommand("recur", "Evaluate a recurrence 'f(n) = ...; f(0)=...'");
    recur->add_option("recurrence", inv.recurrence_text, "Recurrence text")->required();
    recur->add_option("n", inv.n, "Argument")->required();
    recur->add_option("--method", inv.method, "naive or memo")->default_val("memo");
    recur->add_flag("--count-ops", inv.count_ops, "Print call and operation counts");

    auto* rules = app.add_subcommand("rules", "Rule set utilities");
    rules->require_subcommand(1);
    auto* dump = rules->add_subcommand("dump", "Print the built-in rules in rule-file format");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }

    try {
        Config config;
        if (!inv.config_path.empty()) apply_config_file(config, read_file(inv.config_path));
        if (*weights_opt) config.weights = parse_weights(inv.weights);
        if (*budget_opt) config.budget = parse_budget(inv.budget);
        if (*trials_opt) apply_setting(config, "trials", std::to_string(inv.trials));
        if (*seed_opt) config.seed = inv.seed;
        if (*format_opt) config.format = parse_format(inv.format);
        if (*check_opt) config.check = inv.check;

        Commands commands(config, inv, out, err);
        if (simplify->parsed()) return commands.simplify_cmd();
        if (eval->parsed()) return commands.eval_cmd();
        if (perm->parsed()) return commands.matrix_cmd(true);
        if (det->parsed()) return commands.matrix_cmd(false);
        if (bench->parsed()) return commands.bench_cmd();
        if (fib->parsed()) return commands.fib_cmd();
        if (recur->parsed()) return commands.recur_cmd();
        if (dump->parsed()) return commands.rules_dump_cmd();
        err << "error: no command\n";
        return kUsageError;
    } catch (const GuardError& e) {
        err << "error: " << e.what() << "\n";
        return kGuardViolation;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
        return kGuardViolation;
    } catch (const ConsistencyError& e) {
        err << "error: " << e.what() << "\n";
        return kConsistencyFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }
}

}  // namespace simplab::cli
