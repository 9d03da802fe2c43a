#include "simplab/egraph.hpp"

#include <random>

#include "simplab/errors.hpp"

namespace simplab {

namespace {

using u64 = std::uint64_t;
__extension__ typedef unsigned __int128 u128;

constexpr u64 kP = kEquivalencePrime;

u64 add_mod(u64 a, u64 b) { return static_cast<u64>((static_cast<u128>(a) + b) % kP); }
u64 mul_mod(u64 a, u64 b) { return static_cast<u64>((static_cast<u128>(a) * b) % kP); }
u64 neg_mod(u64 a) { return a == 0 ? 0 : kP - a; }

u64 reduce(const Integer& v) {
    Integer r;
    mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), kP);
    return r.get_ui();
}

}  // namespace

std::uint32_t EGraph::intern_constant(const Integer& v) {
    auto [it, inserted] = constant_index_.try_emplace(v, static_cast<std::uint32_t>(constants_.size()));
    if (inserted) constants_.push_back(v);
    return it->second;
}

std::uint32_t EGraph::intern_symbol(const std::string& name) {
    auto [it, inserted] = symbol_index_.try_emplace(name, static_cast<std::uint32_t>(symbols_.size()));
    if (inserted) symbols_.push_back(name);
    return it->second;
}

std::optional<std::uint32_t> EGraph::symbol_index(const std::string& name) const {
    auto it = symbol_index_.find(name);
    if (it == symbol_index_.end()) return std::nullopt;
    return it->second;
}

ClassId EGraph::find(ClassId id) const {
    while (parent_[id] != id) {
        parent_[id] = parent_[parent_[id]];
        id = parent_[id];
    }
    return id;
}

ENode EGraph::canonicalize(ENode n) const {
    switch (n.arity()) {
        case 2: n.b = find(n.b); [[fallthrough]];
        case 1: n.a = find(n.a); break;
        default: break;
    }
    return n;
}

std::optional<Integer> EGraph::fold(const ENode& n) const {
    switch (n.op) {
        case Op::Const: return constants_[n.a];
        case Op::Var: return std::nullopt;
        default: break;
    }
    if (!fold_constants_) return std::nullopt;
    switch (n.op) {
        case Op::Neg: {
            const auto& c = class_constant_[find(n.a)];
            if (!c) return std::nullopt;
            return Integer(-*c);
        }
        case Op::Add:
        case Op::Mul: {
            const auto& x = class_constant_[find(n.a)];
            const auto& y = class_constant_[find(n.b)];
            if (!x || !y) return std::nullopt;
            return n.op == Op::Add ? Integer(*x + *y) : Integer(*x * *y);
        }
        default: return std::nullopt;
    }
}

ClassId EGraph::add(ENode node) {
    node = canonicalize(node);
    if (auto it = memo_.find(node); it != memo_.end()) return find(it->second);
    const auto id = static_cast<ClassId>(parent_.size());
    parent_.push_back(id);
    class_constant_.push_back(fold(node));
    nodes_.push_back(node);
    node_class_.push_back(id);
    memo_.emplace(node, id);
    dirty_ = true;
    return id;
}

ClassId EGraph::add(const Expr& e) {
    switch (e.op()) {
        case Op::Const: return add(ENode{Op::Const, intern_constant(e.value()), 0});
        case Op::Var: return add(ENode{Op::Var, intern_symbol(e.name()), 0});
        case Op::Neg: return add(ENode{Op::Neg, add(e.child(0)), 0});
        case Op::Add:
        case Op::Mul: {
            auto kids = e.children();
            ClassId acc = add(kids[0]);
            for (std::size_t i = 1; i < kids.size(); ++i) {
                const ClassId rhs = add(kids[i]);
                acc = add(ENode{e.op(), acc, rhs});
            }
            return acc;
        }
    }
    throw std::logic_error("EGraph::add: unknown operator");
}

bool EGraph::merge(ClassId a, ClassId b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    auto& ca = class_constant_[a];
    auto& cb = class_constant_[b];
    if (ca && cb && *ca != *cb) {
        throw ConsistencyError("unsound rewrite: merged classes folding to " + ca->get_str() +
                               " and " + cb->get_str());
    }
    if (!ca && cb) ca = std::move(cb);
    cb.reset();
    parent_[b] = a;
    dirty_ = true;
    return true;
}

void EGraph::rebuild_congruence() {
    bool changed = true;
    while (changed) {
        changed = false;
        memo_.clear();
        memo_.reserve(nodes_.size());
        std::size_t kept = 0;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const ENode canon = canonicalize(nodes_[i]);
            const ClassId cls = find(node_class_[i]);
            auto [it, inserted] = memo_.try_emplace(canon, cls);
            if (!inserted) {
                if (find(it->second) != cls) changed |= merge(it->second, cls);
                continue;
            }
            nodes_[kept] = canon;
            node_class_[kept] = cls;
            ++kept;
        }
        nodes_.resize(kept);
        node_class_.resize(kept);
    }
}

bool EGraph::propagate_constants() {
    bool grew = true;
    while (grew) {
        grew = false;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const ClassId cls = find(node_class_[i]);
            auto value = fold(nodes_[i]);
            if (!value) continue;
            auto& current = class_constant_[cls];
            if (!current) {
                current = std::move(value);
                grew = true;
            } else if (*current != *value) {
                throw ConsistencyError("unsound rewrite: class folds to both " + current->get_str() +
                                       " and " + value->get_str());
            }
        }
    }

    // Every constant-valued class gets an explicit Const member.
    bool changed = false;
    const std::size_t count = parent_.size();
    for (ClassId id = 0; id < count; ++id) {
        if (parent_[id] != id || !class_constant_[id]) continue;
        const std::size_t before = nodes_.size();
        const ClassId c = add(ENode{Op::Const, intern_constant(*class_constant_[id]), 0});
        changed |= merge(id, c) || nodes_.size() != before;
    }
    return changed;
}

void EGraph::index_classes() {
    class_members_.assign(parent_.size(), {});
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        class_members_[find(node_class_[i])].push_back(nodes_[i]);
    }
    class_ids_.clear();
    for (ClassId id = 0; id < class_members_.size(); ++id) {
        if (!class_members_[id].empty()) class_ids_.push_back(id);
    }
}

void EGraph::rebuild() {
    do {
        rebuild_congruence();
    } while (propagate_constants());
    index_classes();
    dirty_ = false;
}

std::span<const ENode> EGraph::nodes(ClassId id) const { return class_members_[find(id)]; }

const std::optional<Integer>& EGraph::constant(ClassId id) const {
    return class_constant_[find(id)];
}

std::optional<ClassId> EGraph::lookup(const Expr& e) const {
    auto probe = [this](const ENode& n) -> std::optional<ClassId> {
        auto it = memo_.find(canonicalize(n));
        if (it == memo_.end()) return std::nullopt;
        return find(it->second);
    };
    switch (e.op()) {
        case Op::Const: {
            auto it = constant_index_.find(e.value());
            if (it == constant_index_.end()) return std::nullopt;
            return probe(ENode{Op::Const, it->second, 0});
        }
        case Op::Var: {
            auto idx = symbol_index(e.name());
            if (!idx) return std::nullopt;
            return probe(ENode{Op::Var, *idx, 0});
        }
        case Op::Neg: {
            auto c = lookup(e.child(0));
            if (!c) return std::nullopt;
            return probe(ENode{Op::Neg, *c, 0});
        }
        case Op::Add:
        case Op::Mul: {
            auto kids = e.children();
            auto acc = lookup(kids[0]);
            for (std::size_t i = 1; acc && i < kids.size(); ++i) {
                auto rhs = lookup(kids[i]);
                if (!rhs) return std::nullopt;
                acc = probe(ENode{e.op(), *acc, *rhs});
            }
            return acc;
        }
    }
    return std::nullopt;
}

void EGraph::audit(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::vector<u64> symbol_value(symbols_.size());
    for (auto& v : symbol_value) v = rng() % kP;

    std::vector<std::optional<u64>> value(parent_.size());
    auto eval = [&](const ENode& n) -> std::optional<u64> {
        switch (n.op) {
            case Op::Const: return reduce(constants_[n.a]);
            case Op::Var: return symbol_value[n.a];
            case Op::Neg: {
                const auto& x = value[find(n.a)];
                return x ? std::optional<u64>(neg_mod(*x)) : std::nullopt;
            }
            case Op::Add:
            case Op::Mul: {
                const auto& x = value[find(n.a)];
                const auto& y = value[find(n.b)];
                if (!x || !y) return std::nullopt;
                return n.op == Op::Add ? add_mod(*x, *y) : mul_mod(*x, *y);
            }
        }
        return std::nullopt;
    };

    bool progress = true;
    while (progress) {
        progress = false;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const ClassId cls = find(node_class_[i]);
            if (value[cls]) continue;
            if (auto v = eval(nodes_[i])) {
                value[cls] = v;
                progress = true;
            }
        }
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const ClassId cls = find(node_class_[i]);
        auto v = eval(nodes_[i]);
        if (v && value[cls] && *v != *value[cls]) {
            throw ConsistencyError("e-graph audit: class " + std::to_string(cls) +
                                   " holds members with different values");
        }
    }
}

}  // namespace simplab
