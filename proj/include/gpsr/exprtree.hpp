#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gpsr/rng.hpp"

namespace gpsr {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"),
          position(pos) {}
    std::size_t position;
};

enum class OpCode { Add, Sub, Mul, Div, Sqrt, Sin, Cos, Tan, Exp, Log };

int op_arity(OpCode op);
std::string_view op_name(OpCode op);

enum class PrimKind { Function, Variable, Constant };

struct Primitive {
    std::string name;
    PrimKind kind = PrimKind::Constant;
    int arity = 0;
    OpCode op = OpCode::Add;       // functions only
    int var_index = -1;            // variables only; column in a case row
    double constant_value = 0.0;   // constants only

    static Primitive function(OpCode op);
    static Primitive variable(std::string name, int index);
    static Primitive constant(double value);

    bool operator==(const Primitive& other) const;
};

struct PrimitiveSet {
    std::vector<Primitive> functions;
    std::vector<Primitive> variables;
    std::optional<std::pair<double, double>> ephemeral_range;

    /// Throws ConfigError on arity violations, duplicate names, or a set
    /// with no terminals at all.
    void validate() const;
};

// Expression tree stored as a pre-order node sequence. Node indices used by
// replace_subtree and the crossover operators refer to this pre-order.
class ExprTree {
public:
    ExprTree() = default;
    explicit ExprTree(std::vector<Primitive> preorder);

    std::size_t size() const { return nodes_.size(); }
    bool empty() const { return nodes_.empty(); }
    const Primitive& node(std::size_t i) const { return nodes_[i]; }
    const std::vector<Primitive>& nodes() const { return nodes_; }

    /// One past the last node of the subtree rooted at i.
    std::size_t subtree_end(std::size_t i) const;
    ExprTree subtree(std::size_t i) const;

    bool operator==(const ExprTree& other) const { return nodes_ == other.nodes_; }

private:
    std::vector<Primitive> nodes_;
};

using Bindings = std::unordered_map<std::string, double>;

/// Random tree with node count in [min_size, max_size]. Ephemeral constants
/// are drawn from the set's range and frozen into their nodes. Throws
/// ConfigError when no size in the window is constructible from the set.
ExprTree grow_tree(const PrimitiveSet& pset, int min_size, int max_size, Rng& rng);

/// True when some node count in [min_size, max_size] is constructible.
bool tree_size_constructible(const PrimitiveSet& pset, int min_size, int max_size);

/// Recursive evaluation with Koza-style protection: div returns 1 on a
/// near-zero denominator, log and sqrt act on |x|, log of near-zero is 0.
/// exp and tan are unprotected and may return non-finite values.
double evaluate(const ExprTree& tree, const Bindings& bindings);

/// Fast path: variables resolved through their var_index into row.
double evaluate(const ExprTree& tree, std::span<const double> row);

/// New tree with the subtree rooted at index swapped for replacement.
/// Inputs are untouched. Throws std::out_of_range on a bad index.
ExprTree replace_subtree(const ExprTree& tree, std::size_t index, const ExprTree& replacement);

/// Parenthesized prefix notation, e.g. "(add x (sin x))". Constants are
/// rendered with shortest round-trip precision.
std::string to_text(const ExprTree& tree);

/// Inverse of to_text; names resolved against pset, bare numbers become
/// constants. Throws ParseError with a byte position on malformed input.
ExprTree parse(std::string_view text, const PrimitiveSet& pset);

/// Shortest decimal rendering that round-trips to the same double.
std::string format_double(double x);

}  // namespace gpsr
