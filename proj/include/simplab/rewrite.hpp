#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "simplab/egraph.hpp"
#include "simplab/expr.hpp"

namespace simplab {

/// Directed rewrite `lhs => rhs`. Pattern variables are Var nodes whose name
/// starts with '?'; every other Var must match literally.
struct Rule {
    std::string name;
    Expr lhs;
    Expr rhs;
};

struct RuleSet {
    std::vector<Rule> rules;
    /// Fold Add/Mul/Neg of constant classes into a Const member.
    bool constant_folding = true;
};

/// Reads a rule file: one `LHS => RHS` or `LHS <=> RHS` per line, `#`
/// comments and blank lines ignored. Throws ParseError (offset is relative to
/// the start of the text) or std::invalid_argument when the right-hand side
/// uses a pattern variable the left-hand side does not bind.
RuleSet parse_rules(std::string_view text);

/// One directed rule per line, readable by parse_rules.
std::string render_rules(const RuleSet& rules);

/// Add/Mul commutativity and associativity, distribution and factoring,
/// additive and multiplicative identities, the zero annihilator, double
/// negation, negation of sums, Neg(x) <=> (-1)*x, plus constant folding.
const RuleSet& default_rules();

/// Checks every rule by randomized identity testing with pattern variables as
/// free variables. Throws ConsistencyError naming the first unsound rule.
void audit_rules(const RuleSet& rules, unsigned trials = 16, std::uint64_t seed = 0);

struct SaturationBudget {
    std::size_t max_iterations = 30;
    std::size_t max_nodes = 50'000;
    std::size_t max_classes = 20'000;

    void validate() const;
};

enum class StopReason { Saturated, IterationLimit, NodeLimit, ClassLimit };

std::string_view stop_reason_name(StopReason reason) noexcept;

/// Result of equality saturation: the e-graph, the class of the input and
/// why growth stopped.
struct EquivalenceStructure {
    EGraph graph;
    ClassId root = 0;
    StopReason stop = StopReason::Saturated;
    std::size_t iterations = 0;

    bool saturated() const noexcept { return stop == StopReason::Saturated; }
    std::size_t node_count() const noexcept { return graph.node_count(); }
    std::size_t class_count() const noexcept { return graph.class_count(); }
    /// True when `e` is represented in the root class.
    bool root_contains(const Expr& e) const;
};

struct SaturationOptions {
    /// Rules producing more matches than this in one iteration are skipped
    /// for a while; both limit and ban length double with every ban.
    std::size_t match_limit = 1'000;
    std::size_t ban_length = 5;
    /// Randomized class-consistency audit after saturation.
    bool audit = true;
    std::uint64_t seed = 0;
};

/// Applies every rule to every represented term in batched rounds until no
/// rule adds anything or the budget is exhausted. Throws ConsistencyError if
/// the audit detects an unsound merge.
EquivalenceStructure saturate(const Expr& e, const RuleSet& rules,
                              const SaturationBudget& budget = {},
                              const SaturationOptions& options = {});

/// Cheapest member of the root class. Ties go to fewer nodes, then to the
/// lexicographically smaller rendering. Throws ConsistencyError when the
/// root class has no finite-cost member.
Expr extract_min_cost(const EquivalenceStructure& s, const CostModel& model = {});

struct SimplifyResult {
    Expr best;
    std::uint64_t original_cost = 0;
    std::uint64_t best_cost = 0;
    std::uint64_t best_dag_cost = 0;
    bool saturated = false;
    StopReason stop = StopReason::Saturated;
    std::size_t iterations_used = 0;
    std::size_t nodes_used = 0;
    std::size_t classes_used = 0;
};

/// saturate + extract_min_cost. When nothing strictly cheaper is found the
/// input itself is returned. The result is checked against the input with 16
/// randomized trials; a mismatch throws ConsistencyError.
SimplifyResult simplify(const Expr& e, const RuleSet& rules = default_rules(),
                        const CostModel& model = {}, const SaturationBudget& budget = {},
                        const SaturationOptions& options = {});

/// Minimality relative to the closure of `rules` within `budget`. `saturated`
/// separates "minimal for this rule set" from "nothing cheaper found in budget".
struct MinimalityCertificate {
    bool minimal = true;
    bool saturated = false;
    std::uint64_t cost = 0;
    std::optional<Expr> witness;
    std::optional<std::uint64_t> witness_cost;
};

MinimalityCertificate certify_locally_minimal(const Expr& e, const RuleSet& rules = default_rules(),
                                              const CostModel& model = {},
                                              const SaturationBudget& budget = {},
                                              const SaturationOptions& options = {});

}  // namespace simplab
