#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "simplab/expr.hpp"

namespace simplab {

/// Scalar integer recurrence f(n) = step(f(n-1), ..., f(n-k), n).
///
/// The step expression refers to f(n-i) as the variable `f_i` and to the
/// argument as `n`. Base cases are the k consecutive arguments directly
/// below the first recursive argument.
class Recurrence {
public:
    /// Throws std::invalid_argument if the base cases are not consecutive or
    /// the step uses a variable other than f_1..f_k and n.
    Recurrence(std::map<std::int64_t, Integer> base_cases, Expr step);

    std::size_t order() const noexcept { return base_.size(); }
    const std::map<std::int64_t, Integer>& base_cases() const noexcept { return base_; }
    const Expr& step() const noexcept { return step_; }
    std::int64_t smallest_base() const noexcept { return base_.begin()->first; }
    std::int64_t first_recursive() const noexcept { return base_.rbegin()->first + 1; }
    /// Whether the step reads f(n-i), 1-based.
    bool uses(std::size_t i) const { return used_.at(i - 1); }

private:
    std::map<std::int64_t, Integer> base_;
    Expr step_;
    std::vector<bool> used_;
};

/// Reads `f(n) = <expr over f_1..f_k, n>; f(a)=v; f(a+1)=w; ...`.
/// Throws ParseError or std::invalid_argument.
Recurrence parse_recurrence(std::string_view text);

/// f(n) = f(n-1) + 1 with f(0) = 0; closed form n.
Recurrence increment_recurrence();
/// f(n) = f(n-1) + f(n-2) with f(1) = f(2) = 1.
Recurrence fibonacci_recurrence();

struct EvalReport {
    Integer value;
    /// Step-expression cost summed over every evaluated step.
    std::uint64_t op_count = 0;
    std::uint64_t calls = 0;
};

/// Literal recursion without memoization; `calls` counts every invocation.
/// Throws std::out_of_range when n is below every base case.
EvalReport eval_naive(const Recurrence& r, std::int64_t n, const CostModel& model = {});

/// Each argument evaluated once, bottom-up; `calls` counts distinct arguments.
EvalReport eval_memo(const Recurrence& r, std::int64_t n, const CostModel& model = {});

/// Exact F(n) with F(0) = 0, F(1) = 1 via F(2m) = F(m)(2F(m+1) - F(m)) and
/// F(2m+1) = F(m)^2 + F(m+1)^2. `op_count` counts big-integer additions,
/// subtractions and multiplications, and `calls` counts doubling steps.
EvalReport fib_fast_doubling_report(std::uint64_t n);
Integer fib_fast_doubling(std::uint64_t n);

inline constexpr int kBinetMaxN = 70;

/// round(phi^n / sqrt(5)) in double precision, 1 <= n <= kBinetMaxN.
/// Throws std::out_of_range outside that range.
Integer fib_binet_rounded(int n);

/// Recurrence paired with a closed form that needs no recursion.
struct ClosedForm {
    std::string name;
    Recurrence recurrence;
    std::string formula;
    std::function<Integer(std::int64_t)> evaluate;
};

/// The increment recurrence (closed form n) and Fibonacci (fast doubling).
const std::vector<ClosedForm>& closed_form_catalog();

}  // namespace simplab
