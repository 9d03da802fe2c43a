#include "simplab/recurrence.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <tuple>

#include "simplab/errors.hpp"

namespace simplab {

namespace {

std::string slot_name(std::size_t i) { return "f_" + std::to_string(i); }

}  // namespace

Recurrence::Recurrence(std::map<std::int64_t, Integer> base_cases, Expr step)
    : base_(std::move(base_cases)), step_(std::move(step)) {
    if (base_.empty()) throw std::invalid_argument("recurrence needs at least one base case");
    if (base_.rbegin()->first - base_.begin()->first + 1 != static_cast<std::int64_t>(base_.size())) {
        throw std::invalid_argument("recurrence base cases must be consecutive arguments");
    }
    used_.assign(base_.size(), false);
    for (const std::string& v : variables(step_)) {
        if (v == "n") continue;
        bool ok = false;
        if (v.size() > 2 && v.starts_with("f_")) {
            const std::string digits = v.substr(2);
            if (digits.size() < 6 && std::all_of(digits.begin(), digits.end(), [](char c) {
                    return std::isdigit(static_cast<unsigned char>(c));
                })) {
                const std::size_t i = std::stoul(digits);
                if (i >= 1 && i <= base_.size()) {
                    used_[i - 1] = true;
                    ok = true;
                }
            }
        }
        if (!ok) {
            throw std::invalid_argument("recurrence step uses '" + v + "'; expected n or f_1..f_" +
                                        std::to_string(base_.size()));
        }
    }
}

Recurrence parse_recurrence(std::string_view text) {
    std::vector<std::pair<std::string_view, std::size_t>> clauses;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == ';') {
            clauses.emplace_back(text.substr(start, i - start), start);
            start = i + 1;
        }
    }

    // Splits "f(<arg>) = <rhs>" and returns arg text, rhs text and rhs offset.
    auto split = [](std::string_view clause, std::size_t base) {
        std::size_t i = 0;
        auto skip = [&] {
            while (i < clause.size() && std::isspace(static_cast<unsigned char>(clause[i]))) ++i;
        };
        skip();
        if (clause.substr(i, 2) != "f(") throw ParseError("expected 'f('", base + i);
        i += 2;
        const std::size_t close = clause.find(')', i);
        if (close == std::string_view::npos) throw ParseError("expected ')'", base + clause.size());
        std::string_view arg = clause.substr(i, close - i);
        i = close + 1;
        skip();
        if (i >= clause.size() || clause[i] != '=') throw ParseError("expected '='", base + i);
        ++i;
        return std::tuple{arg, clause.substr(i), base + i};
    };

    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };

    std::optional<Expr> step;
    std::map<std::int64_t, Integer> base;
    for (const auto& [clause, offset] : clauses) {
        if (trim(clause).empty()) continue;
        auto [arg, rhs, rhs_offset] = split(clause, offset);
        auto parse_rhs = [&, rhs = rhs, rhs_offset = rhs_offset] {
            try {
                return parse(rhs);
            } catch (const ParseError& e) {
                throw ParseError(e.what(), rhs_offset + e.offset());
            }
        };
        if (trim(arg) == "n") {
            if (step) throw ParseError("duplicate step definition", offset);
            step = parse_rhs();
            continue;
        }
        Expr a = parse(trim(arg));
        Expr v = parse_rhs();
        if (!a.is_const() || !v.is_const() || !a.value().fits_slong_p()) {
            throw ParseError("base case must be f(<integer>) = <integer>", offset);
        }
        if (!base.emplace(a.value().get_si(), v.value()).second) {
            throw ParseError("duplicate base case", offset);
        }
    }
    if (!step) throw ParseError("missing 'f(n) = ...' step", text.size());
    return Recurrence(std::move(base), *step);
}

Recurrence increment_recurrence() {
    return Recurrence({{0, Integer(0)}}, parse("f_1 + 1"));
}

Recurrence fibonacci_recurrence() {
    return Recurrence({{1, Integer(1)}, {2, Integer(1)}}, parse("f_1 + f_2"));
}

namespace {

class NaiveEvaluator {
public:
    NaiveEvaluator(const Recurrence& r, const CostModel& model)
        : r_(r), step_cost_(cost(r.step(), model)) {}

    Integer operator()(std::int64_t n) {
        ++report.calls;
        if (auto it = r_.base_cases().find(n); it != r_.base_cases().end()) return it->second;
        Assignment a;
        for (std::size_t i = 1; i <= r_.order(); ++i) {
            if (r_.uses(i)) a.set(slot_name(i), (*this)(n - static_cast<std::int64_t>(i)));
        }
        a.set("n", Integer(static_cast<long>(n)));
        report.op_count += step_cost_;
        return evaluate(r_.step(), a);
    }

    EvalReport report;

private:
    const Recurrence& r_;
    std::uint64_t step_cost_;
};

void check_argument(const Recurrence& r, std::int64_t n) {
    if (n < r.smallest_base()) {
        throw std::out_of_range("f(" + std::to_string(n) + ") is below every base case (smallest f(" +
                                std::to_string(r.smallest_base()) + "))");
    }
}

}  // namespace

EvalReport eval_naive(const Recurrence& r, std::int64_t n, const CostModel& model) {
    check_argument(r, n);
    NaiveEvaluator eval(r, model);
    eval.report.value = eval(n);
    return std::move(eval.report);
}

EvalReport eval_memo(const Recurrence& r, std::int64_t n, const CostModel& model) {
    check_argument(r, n);
    EvalReport report;
    if (auto it = r.base_cases().find(n); it != r.base_cases().end()) {
        report.value = it->second;
        report.calls = 1;
        return report;
    }
    const std::uint64_t step_cost = cost(r.step(), model);
    // window[i - 1] holds f(m - i) for the argument m being computed.
    std::vector<Integer> window;
    for (auto it = r.base_cases().rbegin(); it != r.base_cases().rend(); ++it) window.push_back(it->second);
    report.calls = window.size();
    for (std::int64_t m = r.first_recursive(); m <= n; ++m) {
        Assignment a;
        for (std::size_t i = 1; i <= r.order(); ++i) {
            if (r.uses(i)) a.set(slot_name(i), window[i - 1]);
        }
        a.set("n", Integer(static_cast<long>(m)));
        Integer value = evaluate(r.step(), a);
        window.pop_back();
        window.insert(window.begin(), std::move(value));
        ++report.calls;
        report.op_count += step_cost;
    }
    report.value = window.front();
    return report;
}

EvalReport fib_fast_doubling_report(std::uint64_t n) {
    EvalReport report;
    Integer a = 0;  // F(m)
    Integer b = 1;  // F(m+1)
    for (int bit = 63; bit >= 0; --bit) {
        if (((n >> bit) == 0)) continue;
        Integer c = a * (2 * b - a);  // F(2m)
        Integer d = a * a + b * b;    // F(2m+1)
        report.op_count += 6;
        ++report.calls;
        if ((n >> bit) & 1) {
            a = d;
            b = c + d;
            ++report.op_count;
        } else {
            a = std::move(c);
            b = std::move(d);
        }
    }
    report.value = a;
    return report;
}

Integer fib_fast_doubling(std::uint64_t n) { return fib_fast_doubling_report(n).value; }

Integer fib_binet_rounded(int n) {
    if (n < 1 || n > kBinetMaxN) {
        throw std::out_of_range("binet: n = " + std::to_string(n) + " outside [1, " +
                                std::to_string(kBinetMaxN) + "]");
    }
    const double sqrt5 = std::sqrt(5.0);
    const double phi = (1.0 + sqrt5) / 2.0;
    return Integer(static_cast<long>(std::llround(std::pow(phi, n) / sqrt5)));
}

const std::vector<ClosedForm>& closed_form_catalog() {
    static const std::vector<ClosedForm> catalog = {
        {"increment", increment_recurrence(), "n",
         [](std::int64_t n) { return Integer(static_cast<long>(n)); }},
        {"fibonacci", fibonacci_recurrence(), "fast doubling of F(n)",
         [](std::int64_t n) { return fib_fast_doubling(static_cast<std::uint64_t>(n)); }},
    };
    return catalog;
}

}  // namespace simplab
