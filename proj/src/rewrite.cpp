#include "simplab/rewrite.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "simplab/errors.hpp"

namespace simplab {

namespace {

bool is_pattern_var(const Expr& e) { return e.is_var() && e.name().starts_with('?'); }

void pattern_vars(const Expr& e, std::set<std::string>& out) {
    if (is_pattern_var(e)) out.insert(e.name());
    for (const Expr& c : e.children()) pattern_vars(c, out);
}

Rule make_rule(std::string name, Expr lhs, Expr rhs) {
    if (is_pattern_var(lhs)) {
        throw std::invalid_argument("rule '" + name + "': left-hand side is a bare pattern variable");
    }
    std::set<std::string> bound, used;
    pattern_vars(lhs, bound);
    pattern_vars(rhs, used);
    for (const std::string& v : used) {
        if (!bound.contains(v)) {
            throw std::invalid_argument("rule '" + name + "': " + v +
                                        " appears only on the right-hand side");
        }
    }
    return Rule{std::move(name), std::move(lhs), std::move(rhs)};
}

void add_rule_line(RuleSet& set, const std::string& name, std::string_view line,
                   std::size_t line_offset) {
    const ParseOptions opts{.pattern_variables = true};
    const std::size_t bidi = line.find("<=>");
    const std::size_t uni = line.find("=>");
    if (uni == std::string_view::npos) throw ParseError("rule needs '=>' or '<=>'", line_offset);
    const bool both = bidi != std::string_view::npos;
    const std::size_t split = both ? bidi : uni;
    const std::size_t rhs_start = split + (both ? 3 : 2);

    auto parse_side = [&](std::string_view text, std::size_t base) {
        try {
            return parse(text, opts);
        } catch (const ParseError& e) {
            throw ParseError(std::string("rule '") + name + "': " + e.what(), base + e.offset());
        }
    };
    Expr lhs = parse_side(line.substr(0, split), line_offset);
    Expr rhs = parse_side(line.substr(rhs_start), line_offset + rhs_start);
    set.rules.push_back(make_rule(name, lhs, rhs));
    if (both) set.rules.push_back(make_rule(name + " (reverse)", rhs, lhs));
}

}  // namespace

RuleSet parse_rules(std::string_view text) {
    RuleSet set;
    std::size_t offset = 0;
    std::size_t line_no = 0;
    while (offset <= text.size()) {
        std::size_t end = text.find('\n', offset);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        std::string_view line = text.substr(offset, end - offset);
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
            add_rule_line(set, "line " + std::to_string(line_no), line, offset);
        }
        offset = end + 1;
    }
    audit_rules(set);
    return set;
}

std::string render_rules(const RuleSet& rules) {
    std::string out;
    if (rules.constant_folding) out += "# constant folding of Add/Mul/Neg is built in\n";
    for (const Rule& r : rules.rules) {
        out += "# " + r.name + "\n";
        out += render(r.lhs) + " => " + render(r.rhs) + "\n";
    }
    return out;
}

const RuleSet& default_rules() {
    static const RuleSet rules = [] {
        static constexpr std::pair<const char*, const char*> kRules[] = {
            {"add-commute", "?a + ?b => ?b + ?a"},
            {"mul-commute", "?a * ?b => ?b * ?a"},
            {"add-assoc", "?a + (?b + ?c) <=> (?a + ?b) + ?c"},
            {"mul-assoc", "?a * (?b * ?c) <=> (?a * ?b) * ?c"},
            {"distribute", "?a * (?b + ?c) <=> ?a * ?b + ?a * ?c"},
            {"add-zero", "?a + 0 => ?a"},
            {"mul-one", "?a * 1 => ?a"},
            {"mul-zero", "?a * 0 => 0"},
            {"neg-neg", "-(-(?a)) => ?a"},
            {"neg-add", "-(?a + ?b) => -(?a) + -(?b)"},
            {"neg-as-mul", "-(?a) <=> (-1) * ?a"},
        };
        RuleSet set;
        for (const auto& [name, text] : kRules) add_rule_line(set, name, text, 0);
        // Name the reverse of distribution for what it does.
        for (Rule& r : set.rules) {
            if (r.name == "distribute (reverse)") r.name = "factor";
        }
        audit_rules(set);
        return set;
    }();
    return rules;
}

void audit_rules(const RuleSet& rules, unsigned trials, std::uint64_t seed) {
    for (const Rule& r : rules.rules) {
        auto check = probably_equivalent(r.lhs, r.rhs, trials, seed);
        if (!check.equivalent) {
            throw ConsistencyError("unsound rule '" + r.name + "': " + render(r.lhs) +
                                   " => " + render(r.rhs));
        }
    }
}

void SaturationBudget::validate() const {
    if (max_iterations < 1 || max_nodes < 1 || max_classes < 1) {
        throw std::invalid_argument("saturation budget entries must be at least 1");
    }
}

std::string_view stop_reason_name(StopReason reason) noexcept {
    switch (reason) {
        case StopReason::Saturated: return "saturated";
        case StopReason::IterationLimit: return "iteration-limit";
        case StopReason::NodeLimit: return "node-limit";
        case StopReason::ClassLimit: return "class-limit";
    }
    return "?";
}

bool EquivalenceStructure::root_contains(const Expr& e) const {
    auto c = graph.lookup(e);
    return c && graph.find(*c) == graph.find(root);
}

// ---------------------------------------------------------------------------
// Pattern matching

namespace {

constexpr ClassId kUnbound = std::numeric_limits<ClassId>::max();

/// Binary pattern tree flattened into a vector; children precede parents.
struct Pattern {
    enum class Kind : std::uint8_t { Hole, Const, Var, Node };
    struct Item {
        Kind kind;
        Op op = Op::Const;
        std::uint32_t hole = 0;
        Integer value;
        std::string name;
        int a = -1;
        int b = -1;
    };
    std::vector<Item> items;
    int root = -1;
};

using Subst = std::vector<ClassId>;

/// Non-owning callable reference for the matcher's continuations.
class SubstSink {
public:
    template <typename F>
    SubstSink(F& f) : obj_(&f), call_([](void* o, Subst& s) { (*static_cast<F*>(o))(s); }) {}
    void operator()(Subst& s) const { call_(obj_, s); }

private:
    void* obj_;
    void (*call_)(void*, Subst&);
};

class CompiledRule {
public:
    CompiledRule(const Rule& rule) : name_(rule.name) {
        std::map<std::string, std::uint32_t> holes;
        lhs_.root = compile(rule.lhs, lhs_, holes);
        rhs_.root = compile(rule.rhs, rhs_, holes);
        hole_count_ = holes.size();
    }

    const std::string& name() const { return name_; }

    /// Calls `emit(root, subst)` for every match; stops early (returning
    /// false) once `limit` matches were produced.
    template <typename Emit>
    bool search(const EGraph& g, std::size_t limit, Emit&& emit) const {
        std::size_t count = 0;
        bool halted = false;
        Subst subst(hole_count_, kUnbound);
        for (ClassId c : g.classes()) {
            auto sink = [&](Subst& s) {
                if (++count > limit) {
                    halted = true;
                    return;
                }
                emit(c, s);
            };
            match(g, lhs_.root, c, subst, SubstSink(sink), halted);
            if (halted) return false;
        }
        return true;
    }

    ClassId instantiate(EGraph& g, const Subst& s) const { return build(g, rhs_.root, s); }

private:
    static int compile(const Expr& e, Pattern& p, std::map<std::string, std::uint32_t>& holes) {
        Pattern::Item item{};
        switch (e.op()) {
            case Op::Const:
                item.kind = Pattern::Kind::Const;
                item.value = e.value();
                break;
            case Op::Var:
                if (is_pattern_var(e)) {
                    item.kind = Pattern::Kind::Hole;
                    auto [it, _] = holes.try_emplace(e.name(), static_cast<std::uint32_t>(holes.size()));
                    item.hole = it->second;
                } else {
                    item.kind = Pattern::Kind::Var;
                    item.name = e.name();
                }
                break;
            case Op::Neg:
                item.kind = Pattern::Kind::Node;
                item.op = Op::Neg;
                item.a = compile(e.child(0), p, holes);
                break;
            case Op::Add:
            case Op::Mul: {
                auto kids = e.children();
                int acc = compile(kids[0], p, holes);
                for (std::size_t i = 1; i < kids.size(); ++i) {
                    const int rhs = compile(kids[i], p, holes);
                    Pattern::Item node{};
                    node.kind = Pattern::Kind::Node;
                    node.op = e.op();
                    node.a = acc;
                    node.b = rhs;
                    p.items.push_back(std::move(node));
                    acc = static_cast<int>(p.items.size()) - 1;
                }
                return acc;
            }
        }
        p.items.push_back(std::move(item));
        return static_cast<int>(p.items.size()) - 1;
    }

    void match(const EGraph& g, int at, ClassId c, Subst& s, SubstSink k, const bool& halted) const {
        const Pattern::Item& item = lhs_.items[at];
        switch (item.kind) {
            case Pattern::Kind::Hole: {
                ClassId& slot = s[item.hole];
                if (slot == kUnbound) {
                    slot = c;
                    k(s);
                    slot = kUnbound;
                } else if (g.find(slot) == c) {
                    k(s);
                }
                return;
            }
            case Pattern::Kind::Const: {
                const auto& v = g.constant(c);
                if (v && *v == item.value) k(s);
                return;
            }
            case Pattern::Kind::Var: {
                auto idx = g.symbol_index(item.name);
                if (!idx) return;
                for (const ENode& n : g.nodes(c)) {
                    if (n.op == Op::Var && n.a == *idx) {
                        k(s);
                        return;
                    }
                }
                return;
            }
            case Pattern::Kind::Node:
                for (const ENode& n : g.nodes(c)) {
                    if (halted) return;
                    if (n.op != item.op) continue;
                    if (item.op == Op::Neg) {
                        match(g, item.a, g.find(n.a), s, k, halted);
                    } else {
                        auto second = [&](Subst& s1) {
                            match(g, item.b, g.find(n.b), s1, k, halted);
                        };
                        match(g, item.a, g.find(n.a), s, SubstSink(second), halted);
                    }
                }
                return;
        }
    }

    ClassId build(EGraph& g, int at, const Subst& s) const {
        const Pattern::Item& item = rhs_.items[at];
        switch (item.kind) {
            case Pattern::Kind::Hole: return s[item.hole];
            case Pattern::Kind::Const: return g.add(ENode{Op::Const, g.intern_constant(item.value), 0});
            case Pattern::Kind::Var: return g.add(ENode{Op::Var, g.intern_symbol(item.name), 0});
            case Pattern::Kind::Node: {
                const ClassId a = build(g, item.a, s);
                const ClassId b = item.op == Op::Neg ? 0 : build(g, item.b, s);
                return g.add(ENode{item.op, a, b});
            }
        }
        throw std::logic_error("unreachable pattern kind");
    }

    std::string name_;
    Pattern lhs_;
    Pattern rhs_;
    std::size_t hole_count_ = 0;
};

struct Match {
    std::size_t rule;
    ClassId root;
    Subst subst;
};

struct RuleSchedule {
    std::size_t banned_until = 0;
    std::size_t times_banned = 0;
};

}  // namespace

EquivalenceStructure saturate(const Expr& e, const RuleSet& rules, const SaturationBudget& budget,
                              const SaturationOptions& options) {
    budget.validate();
    EquivalenceStructure s{EGraph(rules.constant_folding)};
    s.root = s.graph.add(e);
    s.graph.rebuild();

    std::vector<CompiledRule> compiled(rules.rules.begin(), rules.rules.end());
    std::vector<RuleSchedule> schedule(compiled.size());
    std::vector<Match> matches;

    s.stop = StopReason::IterationLimit;
    for (std::size_t iter = 0; iter < budget.max_iterations; ++iter) {
        matches.clear();
        bool any_banned = false;
        for (std::size_t r = 0; r < compiled.size(); ++r) {
            RuleSchedule& sched = schedule[r];
            if (iter < sched.banned_until) {
                any_banned = true;
                continue;
            }
            const std::size_t limit = options.match_limit << sched.times_banned;
            const std::size_t first = matches.size();
            const bool complete = compiled[r].search(
                s.graph, limit, [&](ClassId root, const Subst& subst) {
                    matches.push_back(Match{r, root, subst});
                });
            if (!complete) {
                matches.resize(first);
                sched.banned_until = iter + (options.ban_length << sched.times_banned);
                ++sched.times_banned;
                any_banned = true;
            }
        }

        const std::size_t nodes_before = s.graph.node_count();
        bool changed = false;
        for (const Match& m : matches) {
            const ClassId rhs = compiled[m.rule].instantiate(s.graph, m.subst);
            changed |= s.graph.merge(m.root, rhs);
            if (s.graph.node_count() > budget.max_nodes) break;
        }
        changed |= s.graph.node_count() != nodes_before;
        s.graph.rebuild();
        s.iterations = iter + 1;

        if (s.graph.node_count() > budget.max_nodes) {
            s.stop = StopReason::NodeLimit;
            break;
        }
        if (s.graph.class_count() > budget.max_classes) {
            s.stop = StopReason::ClassLimit;
            break;
        }
        if (!changed) {
            if (!any_banned) {
                s.stop = StopReason::Saturated;
                break;
            }
            // Nothing new from the active rules: let the banned ones back in.
            for (RuleSchedule& sched : schedule) sched.banned_until = 0;
        }
    }
    s.root = s.graph.find(s.root);
    if (options.audit) s.graph.audit(options.seed);
    return s;
}

// ---------------------------------------------------------------------------
// Extraction

namespace {

struct Choice {
    std::uint64_t cost = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t size = std::numeric_limits<std::uint64_t>::max();
    bool finite() const { return size != std::numeric_limits<std::uint64_t>::max(); }
    friend bool operator<(const Choice& x, const Choice& y) {
        return x.cost != y.cost ? x.cost < y.cost : x.size < y.size;
    }
    friend bool operator==(const Choice&, const Choice&) = default;
};

class Extractor {
public:
    Extractor(const EGraph& g, const CostModel& model) : g_(g), model_(model) {
        best_.resize(index_bound());
        solve_costs();
        choose_renderings();
    }

    Expr build(ClassId c) {
        c = g_.find(c);
        if (auto it = built_.find(c); it != built_.end()) return it->second;
        if (!best_[c].finite()) {
            throw ConsistencyError("extraction: class " + std::to_string(c) +
                                   " has no finite-cost member");
        }
        const ENode& n = chosen_[c];
        Expr e = [&] {
            switch (n.op) {
                case Op::Const: return Expr::constant(g_.constant_value(n));
                case Op::Var: return Expr::var(g_.symbol(n));
                case Op::Neg: return Expr::neg(build(n.a));
                default: return n.op == Op::Add ? Expr::add(build(n.a), build(n.b))
                                                 : Expr::mul(build(n.a), build(n.b));
            }
        }();
        built_.emplace(c, e);
        return e;
    }

private:
    std::size_t index_bound() const {
        ClassId hi = 0;
        for (ClassId c : g_.classes()) hi = std::max(hi, c);
        return static_cast<std::size_t>(hi) + 1;
    }

    Choice evaluate(const ENode& n) const {
        Choice out;
        switch (n.arity()) {
            case 0: return Choice{0, 1};
            case 1: {
                const Choice& a = best_[g_.find(n.a)];
                if (!a.finite()) return out;
                return Choice{a.cost + model_.weight(n.op), a.size + 1};
            }
            default: {
                const Choice& a = best_[g_.find(n.a)];
                const Choice& b = best_[g_.find(n.b)];
                if (!a.finite() || !b.finite()) return out;
                return Choice{a.cost + b.cost + model_.weight(n.op), a.size + b.size + 1};
            }
        }
    }

    void solve_costs() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (ClassId c : g_.classes()) {
                for (const ENode& n : g_.nodes(c)) {
                    const Choice cand = evaluate(n);
                    if (cand.finite() && cand < best_[c]) {
                        best_[c] = cand;
                        changed = true;
                    }
                }
            }
        }
    }

    // Children of an optimal node are strictly smaller, so visiting classes by
    // increasing size finalizes every child rendering before its parents.
    void choose_renderings() {
        std::vector<ClassId> order;
        for (ClassId c : g_.classes()) {
            if (best_[c].finite()) order.push_back(c);
        }
        std::stable_sort(order.begin(), order.end(),
                         [&](ClassId x, ClassId y) { return best_[x].size < best_[y].size; });
        rendering_.resize(best_.size());
        chosen_.resize(best_.size());
        for (ClassId c : order) {
            bool have = false;
            for (const ENode& n : g_.nodes(c)) {
                if (!(evaluate(n) == best_[c])) continue;
                std::string text = render_node(n);
                if (!have || text < rendering_[c]) {
                    rendering_[c] = std::move(text);
                    chosen_[c] = n;
                    have = true;
                }
            }
        }
    }

    std::string render_node(const ENode& n) const {
        switch (n.op) {
            case Op::Const: return render(Expr::constant(g_.constant_value(n)));
            case Op::Var: return g_.symbol(n);
            case Op::Neg: return "(-(" + rendering_[g_.find(n.a)] + "))";
            default: {
                const char sym = n.op == Op::Add ? '+' : '*';
                return "(" + rendering_[g_.find(n.a)] + sym + rendering_[g_.find(n.b)] + ")";
            }
        }
    }

    const EGraph& g_;
    const CostModel& model_;
    std::vector<Choice> best_;
    std::vector<std::string> rendering_;
    std::vector<ENode> chosen_;
    std::unordered_map<ClassId, Expr> built_;
};

}  // namespace

Expr extract_min_cost(const EquivalenceStructure& s, const CostModel& model) {
    model.validate();
    Extractor extractor(s.graph, model);
    return extractor.build(s.root);
}

SimplifyResult simplify(const Expr& e, const RuleSet& rules, const CostModel& model,
                        const SaturationBudget& budget, const SaturationOptions& options) {
    model.validate();
    EquivalenceStructure s = saturate(e, rules, budget, options);
    Expr candidate = extract_min_cost(s, model);

    SimplifyResult result{.best = e};
    result.original_cost = cost(e, model);
    result.best_cost = result.original_cost;
    if (const std::uint64_t c = cost(candidate, model); c < result.original_cost) {
        result.best = candidate;
        result.best_cost = c;
    }
    result.best_dag_cost = dag_cost(result.best, model);
    result.saturated = s.saturated();
    result.stop = s.stop;
    result.iterations_used = s.iterations;
    result.nodes_used = s.node_count();
    result.classes_used = s.class_count();

    if (!probably_equivalent(e, result.best, 16, options.seed)) {
        throw ConsistencyError("simplify: result " + render(result.best) +
                               " is not equivalent to " + render(e));
    }
    return result;
}

MinimalityCertificate certify_locally_minimal(const Expr& e, const RuleSet& rules,
                                              const CostModel& model,
                                              const SaturationBudget& budget,
                                              const SaturationOptions& options) {
    model.validate();
    EquivalenceStructure s = saturate(e, rules, budget, options);
    Expr candidate = extract_min_cost(s, model);

    MinimalityCertificate cert;
    cert.cost = cost(e, model);
    cert.saturated = s.saturated();
    if (const std::uint64_t c = cost(candidate, model); c < cert.cost) {
        cert.minimal = false;
        cert.witness = candidate;
        cert.witness_cost = c;
    }
    return cert;
}

}  // namespace simplab
