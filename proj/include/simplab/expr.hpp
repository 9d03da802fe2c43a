#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace simplab {

using Integer = mpz_class;

enum class Op : std::uint8_t { Const, Var, Add, Mul, Neg };

std::string_view op_name(Op op) noexcept;

class ExprNode;

/// Immutable algebraic expression over integer constants and named variables.
///
/// Add and Mul are n-ary (at least two children), Neg is unary. Nodes are
/// shared between expressions; equality and hashing are structural, and both
/// are O(1) for distinct hashes thanks to a hash cached at construction.
class Expr {
public:
    static Expr constant(Integer value);
    static Expr constant(long value) { return constant(Integer(value)); }
    static Expr var(std::string name);
    static Expr add(std::vector<Expr> children);
    static Expr mul(std::vector<Expr> children);
    static Expr neg(Expr child);
    static Expr add(Expr a, Expr b) { return add(std::vector<Expr>{std::move(a), std::move(b)}); }
    static Expr mul(Expr a, Expr b) { return mul(std::vector<Expr>{std::move(a), std::move(b)}); }

    Op op() const noexcept;
    bool is_const() const noexcept { return op() == Op::Const; }
    bool is_var() const noexcept { return op() == Op::Var; }

    /// Valid only for Const.
    const Integer& value() const;
    /// Valid only for Var.
    const std::string& name() const;
    std::span<const Expr> children() const noexcept;
    const Expr& child(std::size_t i) const { return children()[i]; }

    std::size_t hash() const noexcept;
    /// Number of nodes in the tree (each occurrence counted).
    std::size_t size() const noexcept;
    std::size_t depth() const noexcept;

    friend bool operator==(const Expr& a, const Expr& b) noexcept;
    friend bool operator!=(const Expr& a, const Expr& b) noexcept { return !(a == b); }

private:
    explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
    std::shared_ptr<const ExprNode> node_;
};

struct ExprHash {
    std::size_t operator()(const Expr& e) const noexcept { return e.hash(); }
};

/// Variable names occurring in `e`, sorted.
std::set<std::string> variables(const Expr& e);

/// Replaces every Var whose name is a key of `bindings`.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings);

// ---------------------------------------------------------------------------
// Text form

struct ParseOptions {
    /// Accept `?name` pattern variables (rule files).
    bool pattern_variables = false;
    /// Largest literal exponent accepted by `^`.
    unsigned max_exponent = 16;
};

/// Parses the infix grammar
///
///     expr   := term (("+"|"-") term)*
///     term   := factor ("*" factor)*
///     factor := atom ("^" INT)?
///     atom   := INT | VAR | "(" expr ")" | "-" atom
///
/// `a - b` becomes Add(a, Neg(b)); `-` directly followed by a literal is a
/// negative constant. `x^k` is expanded into a product of k copies of x.
/// Throws ParseError.
Expr parse(std::string_view text, const ParseOptions& options = {});

/// Fully parenthesized canonical text; `parse(render(e)) == e`.
std::string render(const Expr& e);

// ---------------------------------------------------------------------------
// Semantics

struct CostModel {
    std::uint64_t weight_add = 1;
    std::uint64_t weight_mul = 1;
    std::uint64_t weight_neg = 0;

    /// Throws std::invalid_argument unless add and mul weights are positive.
    void validate() const;

    std::uint64_t weight(Op op) const noexcept;
};

/// Tree cost: an n-ary Add/Mul contributes (n-1) times its weight, every
/// occurrence counted.
std::uint64_t cost(const Expr& e, const CostModel& model = {});

/// Cost with structurally identical subtrees counted once.
std::uint64_t dag_cost(const Expr& e, const CostModel& model = {});

/// Published modulus for randomized identity testing: 2^62 - 57.
inline constexpr std::uint64_t kEquivalencePrime = 4611686018427387847ULL;

class Assignment {
public:
    Assignment() = default;
    explicit Assignment(std::map<std::string, Integer> values,
                        std::optional<Integer> modulus = std::nullopt);

    Assignment& set(const std::string& name, Integer value);
    const Integer* find(const std::string& name) const;
    const std::map<std::string, Integer>& values() const noexcept { return values_; }
    const std::optional<Integer>& modulus() const noexcept { return modulus_; }

private:
    std::map<std::string, Integer> values_;
    std::optional<Integer> modulus_;
};

/// Exact value of `e`; reduced into [0, p) when the assignment has a modulus.
/// Throws UnboundVariableError.
Integer evaluate(const Expr& e, const Assignment& assignment);

struct EquivalenceCheck {
    bool equivalent = true;
    /// Point (mod kEquivalencePrime) where the two sides differ.
    std::optional<std::map<std::string, Integer>> witness;
    unsigned trials_run = 0;

    explicit operator bool() const noexcept { return equivalent; }
};

/// Randomized identity test: evaluates both sides at `trials` seeded random
/// points modulo kEquivalencePrime. A negative answer is definitive.
EquivalenceCheck probably_equivalent(const Expr& a, const Expr& b, unsigned trials,
                                     std::uint64_t seed = 0);

}  // namespace simplab

template <>
struct std::hash<simplab::Expr> {
    std::size_t operator()(const simplab::Expr& e) const noexcept { return e.hash(); }
};
