#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "simplab/expr.hpp"

namespace simplab {

using ClassId = std::uint32_t;

/// One operator application inside an e-graph. Children are e-class ids;
/// Const and Var store an index into the graph's constant or symbol table.
struct ENode {
    Op op = Op::Const;
    std::uint32_t a = 0;
    std::uint32_t b = 0;

    std::size_t arity() const noexcept {
        return op == Op::Add || op == Op::Mul ? 2 : op == Op::Neg ? 1 : 0;
    }

    friend bool operator==(const ENode&, const ENode&) = default;
};

struct ENodeHash {
    std::size_t operator()(const ENode& n) const noexcept {
        std::uint64_t h = static_cast<std::uint64_t>(n.op) * 0x9e3779b97f4a7c15ULL;
        h ^= (static_cast<std::uint64_t>(n.a) << 32 | n.b) + 0x7f4a7c159e3779b9ULL + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

/// Congruence-closed term graph over binary Add/Mul, unary Neg and leaves.
///
/// Mutation (add, merge) is cheap and defers congruence repair; call
/// rebuild() before reading classes. Each class carries a folded constant
/// when one of its members is constant-valued, and rebuild() adds the
/// corresponding Const node to the class.
class EGraph {
public:
    /// With folding disabled only Const members give a class its constant.
    explicit EGraph(bool fold_constants = true) : fold_constants_(fold_constants) {}

    /// Adds `e` (n-ary Add/Mul are left-folded into binary nodes) and returns
    /// its class.
    ClassId add(const Expr& e);
    ClassId add(ENode node);

    ClassId find(ClassId id) const;
    /// Returns true when the two classes were distinct.
    bool merge(ClassId a, ClassId b);
    /// Restores congruence and the constant analysis. Throws ConsistencyError
    /// if two classes with different constants are merged.
    void rebuild();

    /// Class of `e` when every node of its binary form is already present.
    std::optional<ClassId> lookup(const Expr& e) const;

    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t class_count() const noexcept { return class_ids_.size(); }
    bool dirty() const noexcept { return dirty_; }

    /// Canonical class ids in ascending order (valid after rebuild).
    std::span<const ClassId> classes() const noexcept { return class_ids_; }
    /// Member nodes of a canonical class in insertion order (valid after rebuild).
    std::span<const ENode> nodes(ClassId id) const;
    const std::optional<Integer>& constant(ClassId id) const;

    const Integer& constant_value(const ENode& n) const { return constants_[n.a]; }
    const std::string& symbol(const ENode& n) const { return symbols_[n.a]; }
    std::optional<std::uint32_t> symbol_index(const std::string& name) const;
    std::uint32_t intern_constant(const Integer& v);
    std::uint32_t intern_symbol(const std::string& name);

    ENode canonicalize(ENode n) const;

    /// Evaluates every class at one random point modulo kEquivalencePrime and
    /// checks that all members of each class agree. Throws ConsistencyError.
    void audit(std::uint64_t seed) const;

private:
    std::optional<Integer> fold(const ENode& n) const;
    void rebuild_congruence();
    bool propagate_constants();
    void index_classes();

    std::vector<ENode> nodes_;
    std::vector<ClassId> node_class_;
    std::unordered_map<ENode, ClassId, ENodeHash> memo_;
    mutable std::vector<ClassId> parent_;
    std::vector<std::optional<Integer>> class_constant_;

    std::vector<Integer> constants_;
    std::map<Integer, std::uint32_t> constant_index_;
    std::vector<std::string> symbols_;
    std::map<std::string, std::uint32_t> symbol_index_;

    std::vector<ClassId> class_ids_;
    std::vector<std::vector<ENode>> class_members_;
    bool dirty_ = false;
    bool fold_constants_ = true;
};

}  // namespace simplab
