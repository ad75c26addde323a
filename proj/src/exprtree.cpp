#include "gpsr/exprtree.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <unordered_set>

namespace gpsr {

namespace {
constexpr double kProtectEps = 1e-9;
}

int op_arity(OpCode op) {
    switch (op) {
        case OpCode::Add:
        case OpCode::Sub:
        case OpCode::Mul:
        case OpCode::Div:
            return 2;
        default:
            return 1;
    }
}

std::string_view op_name(OpCode op) {
    switch (op) {
        case OpCode::Add: return "add";
        case OpCode::Sub: return "sub";
        case OpCode::Mul: return "mul";
        case OpCode::Div: return "div";
        case OpCode::Sqrt: return "sqrt";
        case OpCode::Sin: return "sin";
        case OpCode::Cos: return "cos";
        case OpCode::Tan: return "tan";
        case OpCode::Exp: return "exp";
        case OpCode::Log: return "log";
    }
    return "?";
}

Primitive Primitive::function(OpCode op) {
    Primitive p;
    p.name = std::string(op_name(op));
    p.kind = PrimKind::Function;
    p.arity = op_arity(op);
    p.op = op;
    return p;
}

Primitive Primitive::variable(std::string name, int index) {
    Primitive p;
    p.name = std::move(name);
    p.kind = PrimKind::Variable;
    p.var_index = index;
    return p;
}

Primitive Primitive::constant(double value) {
    Primitive p;
    p.kind = PrimKind::Constant;
    p.constant_value = value;
    return p;
}

bool Primitive::operator==(const Primitive& other) const {
    if (kind != other.kind || arity != other.arity) return false;
    switch (kind) {
        case PrimKind::Function: return op == other.op;
        case PrimKind::Variable: return name == other.name && var_index == other.var_index;
        case PrimKind::Constant: return constant_value == other.constant_value;
    }
    return false;
}

void PrimitiveSet::validate() const {
    std::unordered_set<std::string> names;
    for (const auto& f : functions) {
        if (f.kind != PrimKind::Function || f.arity < 1)
            throw ConfigError("primitive set: '" + f.name + "' is not a valid function");
        if (!names.insert(f.name).second)
            throw ConfigError("primitive set: duplicate name '" + f.name + "'");
    }
    for (const auto& v : variables) {
        if (v.kind != PrimKind::Variable || v.arity != 0)
            throw ConfigError("primitive set: '" + v.name + "' is not a valid variable");
        if (!names.insert(v.name).second)
            throw ConfigError("primitive set: duplicate name '" + v.name + "'");
    }
    if (variables.empty() && !ephemeral_range.has_value())
        throw ConfigError("primitive set has no terminals; trees cannot be closed");
    if (ephemeral_range && !(std::isfinite(ephemeral_range->first) &&
                             std::isfinite(ephemeral_range->second) &&
                             ephemeral_range->first <= ephemeral_range->second))
        throw ConfigError("primitive set: invalid ephemeral constant range");
}

ExprTree::ExprTree(std::vector<Primitive> preorder) : nodes_(std::move(preorder)) {
    if (nodes_.empty()) throw std::invalid_argument("ExprTree: empty node list");
    std::size_t pending = 1;
    for (const auto& n : nodes_) {
        if (pending == 0) throw std::invalid_argument("ExprTree: trailing nodes after root closes");
        pending += static_cast<std::size_t>(n.arity);
        --pending;
    }
    if (pending != 0) throw std::invalid_argument("ExprTree: function node missing children");
}

std::size_t ExprTree::subtree_end(std::size_t i) const {
    if (i >= nodes_.size()) throw std::out_of_range("ExprTree::subtree_end: index out of range");
    std::size_t end = i;
    std::size_t pending = 1;
    while (pending > 0) {
        pending += static_cast<std::size_t>(nodes_[end].arity);
        --pending;
        ++end;
    }
    return end;
}

ExprTree ExprTree::subtree(std::size_t i) const {
    std::size_t end = subtree_end(i);
    return ExprTree(std::vector<Primitive>(nodes_.begin() + static_cast<std::ptrdiff_t>(i),
                                           nodes_.begin() + static_cast<std::ptrdiff_t>(end)));
}

// ---------------------------------------------------------------------------
// Random generation. Node counts reachable from the set's arities are
// precomputed, then a tree of an exact reachable size in the window is built
// top-down, so every call lands in [min_size, max_size] without retries.

namespace {

struct SizeTables {
    int max_size = 0;
    int max_arity = 0;
    std::vector<char> reach;                 // reach[s]: some tree has exactly s nodes
    std::vector<std::vector<char>> split;    // split[k][m]: m nodes fill k subtrees

    SizeTables(const PrimitiveSet& pset, int max) : max_size(max) {
        for (const auto& f : pset.functions) max_arity = std::max(max_arity, f.arity);
        reach.assign(static_cast<std::size_t>(max + 1), 0);
        split.assign(static_cast<std::size_t>(max_arity + 1),
                     std::vector<char>(static_cast<std::size_t>(max + 1), 0));
        split[0][0] = 1;
        bool has_terminal = !pset.variables.empty() || pset.ephemeral_range.has_value();
        for (int s = 1; s <= max; ++s) {
            if (s == 1) {
                reach[1] = has_terminal ? 1 : 0;
            } else {
                for (const auto& f : pset.functions) {
                    if (f.arity <= max_arity && split[static_cast<std::size_t>(f.arity)][static_cast<std::size_t>(s - 1)]) {
                        reach[static_cast<std::size_t>(s)] = 1;
                        break;
                    }
                }
            }
            for (int k = 1; k <= max_arity; ++k) {
                for (int r = 1; r <= s; ++r) {
                    if (reach[static_cast<std::size_t>(r)] &&
                        split[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(s - r)]) {
                        split[static_cast<std::size_t>(k)][static_cast<std::size_t>(s)] = 1;
                        break;
                    }
                }
            }
        }
    }

    bool reachable(int s) const { return s >= 1 && s <= max_size && reach[static_cast<std::size_t>(s)]; }
    bool can_split(int k, int m) const {
        return k >= 0 && k <= max_arity && m >= 0 && m <= max_size &&
               split[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)];
    }
};

void emit_terminal(const PrimitiveSet& pset, Rng& rng, std::vector<Primitive>& out) {
    std::size_t options = pset.variables.size() + (pset.ephemeral_range ? 1 : 0);
    std::size_t pick = rng.index(options);
    if (pick < pset.variables.size()) {
        out.push_back(pset.variables[pick]);
    } else {
        auto [lo, hi] = *pset.ephemeral_range;
        out.push_back(Primitive::constant(rng.uniform(lo, hi)));
    }
}

void build_exact(const PrimitiveSet& pset, const SizeTables& tables, int target, Rng& rng,
                 std::vector<Primitive>& out) {
    if (target == 1) {
        emit_terminal(pset, rng, out);
        return;
    }
    std::vector<const Primitive*> feasible;
    for (const auto& f : pset.functions)
        if (tables.can_split(f.arity, target - 1)) feasible.push_back(&f);
    const Primitive& f = *feasible[rng.index(feasible.size())];
    out.push_back(f);
    int remaining = target - 1;
    for (int child = 0; child < f.arity; ++child) {
        int siblings_left = f.arity - child - 1;
        std::vector<int> choices;
        for (int c = 1; c <= remaining - siblings_left; ++c)
            if (tables.reachable(c) && tables.can_split(siblings_left, remaining - c))
                choices.push_back(c);
        int c = choices[rng.index(choices.size())];
        build_exact(pset, tables, c, rng, out);
        remaining -= c;
    }
}

}  // namespace

bool tree_size_constructible(const PrimitiveSet& pset, int min_size, int max_size) {
    if (min_size < 1 || min_size > max_size) return false;
    SizeTables tables(pset, max_size);
    for (int s = min_size; s <= max_size; ++s)
        if (tables.reachable(s)) return true;
    return false;
}

ExprTree grow_tree(const PrimitiveSet& pset, int min_size, int max_size, Rng& rng) {
    if (min_size < 1 || min_size > max_size)
        throw ConfigError("grow_tree: require 1 <= min_size <= max_size");
    pset.validate();
    SizeTables tables(pset, max_size);
    std::vector<int> targets;
    for (int s = min_size; s <= max_size; ++s)
        if (tables.reachable(s)) targets.push_back(s);
    if (targets.empty())
        throw ConfigError("grow_tree: no tree with size in [" + std::to_string(min_size) + ", " +
                          std::to_string(max_size) + "] is constructible from this primitive set");
    int target = targets[rng.index(targets.size())];
    std::vector<Primitive> out;
    out.reserve(static_cast<std::size_t>(target));
    build_exact(pset, tables, target, rng, out);
    return ExprTree(std::move(out));
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

template <typename Lookup>
double eval_rec(const std::vector<Primitive>& nodes, std::size_t& pos, const Lookup& lookup) {
    const Primitive& p = nodes[pos++];
    switch (p.kind) {
        case PrimKind::Constant:
            return p.constant_value;
        case PrimKind::Variable:
            return lookup(p);
        case PrimKind::Function:
            break;
    }
    double a = eval_rec(nodes, pos, lookup);
    if (p.arity == 1) {
        switch (p.op) {
            case OpCode::Sqrt: return std::sqrt(std::fabs(a));
            case OpCode::Sin: return std::sin(a);
            case OpCode::Cos: return std::cos(a);
            case OpCode::Tan: return std::tan(a);
            case OpCode::Exp: return std::exp(a);
            case OpCode::Log: return std::fabs(a) < kProtectEps ? 0.0 : std::log(std::fabs(a));
            default: break;
        }
    }
    double b = eval_rec(nodes, pos, lookup);
    switch (p.op) {
        case OpCode::Add: return a + b;
        case OpCode::Sub: return a - b;
        case OpCode::Mul: return a * b;
        case OpCode::Div: return std::fabs(b) < kProtectEps ? 1.0 : a / b;
        default: break;
    }
    throw std::logic_error("evaluate: unreachable opcode");
}

}  // namespace

double evaluate(const ExprTree& tree, const Bindings& bindings) {
    std::size_t pos = 0;
    return eval_rec(tree.nodes(), pos, [&](const Primitive& p) {
        auto it = bindings.find(p.name);
        if (it == bindings.end())
            throw std::out_of_range("evaluate: no binding for variable '" + p.name + "'");
        return it->second;
    });
}

double evaluate(const ExprTree& tree, std::span<const double> row) {
    std::size_t pos = 0;
    return eval_rec(tree.nodes(), pos, [&](const Primitive& p) {
        return row[static_cast<std::size_t>(p.var_index)];
    });
}

ExprTree replace_subtree(const ExprTree& tree, std::size_t index, const ExprTree& replacement) {
    if (index >= tree.size())
        throw std::out_of_range("replace_subtree: index out of range");
    std::size_t end = tree.subtree_end(index);
    std::vector<Primitive> out;
    out.reserve(tree.size() - (end - index) + replacement.size());
    const auto& src = tree.nodes();
    out.insert(out.end(), src.begin(), src.begin() + static_cast<std::ptrdiff_t>(index));
    out.insert(out.end(), replacement.nodes().begin(), replacement.nodes().end());
    out.insert(out.end(), src.begin() + static_cast<std::ptrdiff_t>(end), src.end());
    return ExprTree(std::move(out));
}

// ---------------------------------------------------------------------------
// Text form

std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    (void)ec;
    return std::string(buf, ptr);
}

namespace {

void to_text_rec(const std::vector<Primitive>& nodes, std::size_t& pos, std::string& out) {
    const Primitive& p = nodes[pos++];
    switch (p.kind) {
        case PrimKind::Constant:
            out += format_double(p.constant_value);
            return;
        case PrimKind::Variable:
            out += p.name;
            return;
        case PrimKind::Function:
            out += '(';
            out += p.name;
            for (int i = 0; i < p.arity; ++i) {
                out += ' ';
                to_text_rec(nodes, pos, out);
            }
            out += ')';
            return;
    }
}

struct Parser {
    std::string_view text;
    std::size_t pos = 0;
    const PrimitiveSet& pset;
    std::unordered_map<std::string_view, const Primitive*> names;

    explicit Parser(std::string_view t, const PrimitiveSet& ps) : text(t), pset(ps) {
        for (const auto& f : pset.functions) names.emplace(f.name, &f);
        for (const auto& v : pset.variables) names.emplace(v.name, &v);
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    std::string_view atom() {
        std::size_t start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
               text[pos] != '(' && text[pos] != ')')
            ++pos;
        if (pos == start) throw ParseError("expected a token", pos);
        return text.substr(start, pos - start);
    }

    void expr(std::vector<Primitive>& out) {
        skip_ws();
        if (pos >= text.size()) throw ParseError("unexpected end of input", pos);
        if (text[pos] == '(') {
            std::size_t open = pos;
            ++pos;
            skip_ws();
            std::size_t name_pos = pos;
            std::string_view name = atom();
            auto it = names.find(name);
            if (it == names.end() || it->second->kind != PrimKind::Function)
                throw ParseError("unknown function '" + std::string(name) + "'", name_pos);
            out.push_back(*it->second);
            for (int i = 0; i < it->second->arity; ++i) expr(out);
            skip_ws();
            if (pos >= text.size() || text[pos] != ')')
                throw ParseError("expected ')' to close '(' ", open);
            ++pos;
            return;
        }
        if (text[pos] == ')') throw ParseError("unexpected ')'", pos);
        std::size_t tok_pos = pos;
        std::string_view tok = atom();
        if (auto it = names.find(tok); it != names.end()) {
            if (it->second->kind == PrimKind::Function)
                throw ParseError("function '" + std::string(tok) + "' used without arguments", tok_pos);
            out.push_back(*it->second);
            return;
        }
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        if (ec != std::errc{} || ptr != tok.data() + tok.size())
            throw ParseError("unknown symbol '" + std::string(tok) + "'", tok_pos);
        out.push_back(Primitive::constant(value));
    }
};

}  // namespace

std::string to_text(const ExprTree& tree) {
    std::string out;
    std::size_t pos = 0;
    to_text_rec(tree.nodes(), pos, out);
    return out;
}

ExprTree parse(std::string_view text, const PrimitiveSet& pset) {
    Parser p(text, pset);
    std::vector<Primitive> out;
    p.expr(out);
    p.skip_ws();
    if (p.pos != text.size()) throw ParseError("trailing input after expression", p.pos);
    return ExprTree(std::move(out));
}

}  // namespace gpsr
