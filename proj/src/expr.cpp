#include "simplab/expr.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include "simplab/errors.hpp"

namespace simplab {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) noexcept {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t integer_hash(const Integer& v) noexcept {
    const mpz_srcptr z = v.get_mpz_t();
    std::size_t h = static_cast<std::size_t>(z->_mp_size);
    const int limbs = std::abs(z->_mp_size);
    for (int i = 0; i < limbs; ++i) h = mix(h, static_cast<std::size_t>(z->_mp_d[i]));
    return h;
}

}  // namespace

class ExprNode {
public:
    Op op;
    Integer value;
    std::string name;
    std::vector<Expr> children;
    std::size_t hash = 0;
    std::size_t size = 1;
    std::size_t depth = 0;
};

std::string_view op_name(Op op) noexcept {
    switch (op) {
        case Op::Const: return "const";
        case Op::Var: return "var";
        case Op::Add: return "add";
        case Op::Mul: return "mul";
        case Op::Neg: return "neg";
    }
    return "?";
}

Expr Expr::constant(Integer value) {
    auto node = std::make_shared<ExprNode>();
    node->op = Op::Const;
    node->value = std::move(value);
    node->hash = mix(integer_hash(node->value), 1);
    return Expr(std::move(node));
}

Expr Expr::var(std::string name) {
    if (name.empty()) throw std::invalid_argument("variable name must be non-empty");
    auto node = std::make_shared<ExprNode>();
    node->op = Op::Var;
    node->hash = mix(std::hash<std::string>{}(name), 2);
    node->name = std::move(name);
    return Expr(std::move(node));
}

namespace {

std::shared_ptr<ExprNode> make_interior(Op op, std::vector<Expr> children) {
    auto node = std::make_shared<ExprNode>();
    node->op = op;
    std::size_t h = static_cast<std::size_t>(op) * 0x100000001b3ULL;
    for (const Expr& c : children) {
        h = mix(h, c.hash());
        node->size += c.size();
        node->depth = std::max(node->depth, c.depth() + 1);
    }
    node->hash = h;
    node->children = std::move(children);
    return node;
}

}  // namespace

Expr Expr::add(std::vector<Expr> children) {
    if (children.size() < 2) throw std::invalid_argument("Add needs at least two children");
    return Expr(make_interior(Op::Add, std::move(children)));
}

Expr Expr::mul(std::vector<Expr> children) {
    if (children.size() < 2) throw std::invalid_argument("Mul needs at least two children");
    return Expr(make_interior(Op::Mul, std::move(children)));
}

Expr Expr::neg(Expr child) {
    std::vector<Expr> children;
    children.push_back(std::move(child));
    return Expr(make_interior(Op::Neg, std::move(children)));
}

Op Expr::op() const noexcept { return node_->op; }

const Integer& Expr::value() const {
    if (node_->op != Op::Const) throw std::logic_error("value() on non-constant expression");
    return node_->value;
}

const std::string& Expr::name() const {
    if (node_->op != Op::Var) throw std::logic_error("name() on non-variable expression");
    return node_->name;
}

std::span<const Expr> Expr::children() const noexcept { return node_->children; }
std::size_t Expr::hash() const noexcept { return node_->hash; }
std::size_t Expr::size() const noexcept { return node_->size; }
std::size_t Expr::depth() const noexcept { return node_->depth; }

bool operator==(const Expr& a, const Expr& b) noexcept {
    if (a.node_ == b.node_) return true;
    const ExprNode& x = *a.node_;
    const ExprNode& y = *b.node_;
    if (x.hash != y.hash || x.op != y.op || x.size != y.size) return false;
    switch (x.op) {
        case Op::Const: return x.value == y.value;
        case Op::Var: return x.name == y.name;
        default: return std::equal(x.children.begin(), x.children.end(), y.children.begin(),
                                   y.children.end());
    }
}

namespace {

void collect_variables(const Expr& e, std::set<std::string>& out) {
    if (e.is_var()) {
        out.insert(e.name());
        return;
    }
    for (const Expr& c : e.children()) collect_variables(c, out);
}

}  // namespace

std::set<std::string> variables(const Expr& e) {
    std::set<std::string> out;
    collect_variables(e, out);
    return out;
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings) {
    switch (e.op()) {
        case Op::Const: return e;
        case Op::Var: {
            auto it = bindings.find(e.name());
            return it == bindings.end() ? e : it->second;
        }
        case Op::Neg: return Expr::neg(substitute(e.child(0), bindings));
        case Op::Add:
        case Op::Mul: {
            std::vector<Expr> kids;
            kids.reserve(e.children().size());
            for (const Expr& c : e.children()) kids.push_back(substitute(c, bindings));
            return e.op() == Op::Add ? Expr::add(std::move(kids)) : Expr::mul(std::move(kids));
        }
    }
    return e;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
public:
    Parser(std::string_view text, const ParseOptions& options) : text_(text), options_(options) {}

    Expr parse_all() {
        Expr e = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) fail(std::string("unexpected '") + text_[pos_] + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool accept(char c) {
        if (!peek(c)) return false;
        ++pos_;
        return true;
    }

    Expr parse_expr() {
        std::vector<Expr> terms;
        terms.push_back(parse_term());
        for (;;) {
            if (accept('+')) {
                terms.push_back(parse_term());
            } else if (accept('-')) {
                terms.push_back(Expr::neg(parse_term()));
            } else {
                break;
            }
        }
        return terms.size() == 1 ? terms.front() : Expr::add(std::move(terms));
    }

    Expr parse_term() {
        std::vector<Expr> factors;
        factors.push_back(parse_factor());
        while (accept('*')) factors.push_back(parse_factor());
        return factors.size() == 1 ? factors.front() : Expr::mul(std::move(factors));
    }

    Expr parse_factor() {
        Expr base = parse_atom();
        if (!accept('^')) return base;
        skip_ws();
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            fail("exponent must be a non-negative integer literal");
        }
        const std::size_t start = pos_;
        std::string digits = read_digits();
        if (digits.size() > 6 || std::stoul(digits) > options_.max_exponent) {
            pos_ = start;
            fail("exponent " + digits + " out of range [0, " +
                 std::to_string(options_.max_exponent) + "]");
        }
        const unsigned k = static_cast<unsigned>(std::stoul(digits));
        if (k == 0) return Expr::constant(1);
        if (k == 1) return base;
        return Expr::mul(std::vector<Expr>(k, base));
    }

    Expr parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) return Expr::constant(Integer(read_digits()));
        if (std::isalpha(static_cast<unsigned char>(c))) return Expr::var(read_identifier());
        if (c == '?' && options_.pattern_variables) {
            ++pos_;
            if (pos_ >= text_.size() || !std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
                fail("expected pattern variable name after '?'");
            }
            return Expr::var("?" + read_identifier());
        }
        if (c == '(') {
            ++pos_;
            Expr inner = parse_expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (c == '-') {
            ++pos_;
            skip_ws();
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                return Expr::constant(-Integer(read_digits()));
            }
            return Expr::neg(parse_atom());
        }
        fail(std::string("unexpected '") + c + "'");
    }

    std::string read_digits() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    std::string read_identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    std::string_view text_;
    const ParseOptions& options_;
    std::size_t pos_ = 0;
};

void render_into(const Expr& e, std::string& out) {
    switch (e.op()) {
        case Op::Const:
            if (e.value() < 0) {
                out += '(';
                out += e.value().get_str();
                out += ')';
            } else {
                out += e.value().get_str();
            }
            return;
        case Op::Var: out += e.name(); return;
        case Op::Neg:
            out += "(-(";
            render_into(e.child(0), out);
            out += "))";
            return;
        case Op::Add:
        case Op::Mul: {
            const char sym = e.op() == Op::Add ? '+' : '*';
            out += '(';
            bool first = true;
            for (const Expr& c : e.children()) {
                if (!first) out += sym;
                first = false;
                render_into(c, out);
            }
            out += ')';
            return;
        }
    }
}

}  // namespace

Expr parse(std::string_view text, const ParseOptions& options) {
    return Parser(text, options).parse_all();
}

std::string render(const Expr& e) {
    std::string out;
    render_into(e, out);
    return out;
}

// ---------------------------------------------------------------------------
// Cost

void CostModel::validate() const {
    if (weight_add < 1 || weight_mul < 1) {
        throw std::invalid_argument("cost model: add and mul weights must be at least 1");
    }
}

std::uint64_t CostModel::weight(Op op) const noexcept {
    switch (op) {
        case Op::Add: return weight_add;
        case Op::Mul: return weight_mul;
        case Op::Neg: return weight_neg;
        default: return 0;
    }
}

namespace {

std::uint64_t node_cost(const Expr& e, const CostModel& model) {
    switch (e.op()) {
        case Op::Add:
        case Op::Mul: return (e.children().size() - 1) * model.weight(e.op());
        case Op::Neg: return model.weight_neg;
        default: return 0;
    }
}

}  // namespace

std::uint64_t cost(const Expr& e, const CostModel& model) {
    std::uint64_t total = node_cost(e, model);
    for (const Expr& c : e.children()) total += cost(c, model);
    return total;
}

std::uint64_t dag_cost(const Expr& e, const CostModel& model) {
    std::unordered_set<Expr, ExprHash> seen;
    std::uint64_t total = 0;
    std::vector<Expr> stack{e};
    while (!stack.empty()) {
        Expr cur = std::move(stack.back());
        stack.pop_back();
        if (!seen.insert(cur).second) continue;
        total += node_cost(cur, model);
        for (const Expr& c : cur.children()) stack.push_back(c);
    }
    return total;
}

// ---------------------------------------------------------------------------
// Evaluation

Assignment::Assignment(std::map<std::string, Integer> values, std::optional<Integer> modulus)
    : values_(std::move(values)), modulus_(std::move(modulus)) {
    if (modulus_) {
        const Integer two60 = Integer(1) << 60;
        if (*modulus_ <= two60 || mpz_probab_prime_p(modulus_->get_mpz_t(), 30) == 0) {
            throw std::invalid_argument("assignment modulus must be a prime above 2^60");
        }
    }
}

Assignment& Assignment::set(const std::string& name, Integer value) {
    values_[name] = std::move(value);
    return *this;
}

const Integer* Assignment::find(const std::string& name) const {
    auto it = values_.find(name);
    return it == values_.end() ? nullptr : &it->second;
}

namespace {

Integer eval_rec(const Expr& e, const Assignment& a, const Integer* mod) {
    Integer r;
    switch (e.op()) {
        case Op::Const: r = e.value(); break;
        case Op::Var: {
            const Integer* v = a.find(e.name());
            if (v == nullptr) throw UnboundVariableError(e.name());
            r = *v;
            break;
        }
        case Op::Neg: r = -eval_rec(e.child(0), a, mod); break;
        case Op::Add:
            r = 0;
            for (const Expr& c : e.children()) r += eval_rec(c, a, mod);
            break;
        case Op::Mul:
            r = 1;
            for (const Expr& c : e.children()) {
                r *= eval_rec(c, a, mod);
                if (mod) mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), mod->get_mpz_t());
            }
            break;
    }
    if (mod) mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), mod->get_mpz_t());
    return r;
}

}  // namespace

Integer evaluate(const Expr& e, const Assignment& assignment) {
    const auto& mod = assignment.modulus();
    return eval_rec(e, assignment, mod ? &*mod : nullptr);
}

EquivalenceCheck probably_equivalent(const Expr& a, const Expr& b, unsigned trials,
                                     std::uint64_t seed) {
    if (trials == 0) throw std::invalid_argument("probably_equivalent: trials must be >= 1");
    std::set<std::string> names = variables(a);
    names.merge(variables(b));

    const Integer prime(std::to_string(kEquivalencePrime));
    std::mt19937_64 rng(seed);
    EquivalenceCheck result;
    for (unsigned t = 0; t < trials; ++t) {
        std::map<std::string, Integer> point;
        for (const std::string& name : names) {
            point.emplace(name, Integer(std::to_string(rng() % kEquivalencePrime)));
        }
        Assignment assignment(point, prime);
        ++result.trials_run;
        if (evaluate(a, assignment) != evaluate(b, assignment)) {
            result.equivalent = false;
            result.witness = std::move(point);
            return result;
        }
    }
    return result;
}

}  // namespace simplab
