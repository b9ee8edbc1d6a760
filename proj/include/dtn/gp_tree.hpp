#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dtn/rng.hpp"

namespace dtn::gp {

enum class GpType : uint8_t { Condition, Body };

enum class GpOp : uint8_t {
    // non-terminals
    Or,
    Not,
    NotEqual,
    If,
    Sequence,
    // condition terminals
    IsTransferring,
    CanStartTransfer,
    // body terminals
    Update,
    ExchangeDeliverableMessages,
    TryAllMessagesToAllConnections,
    TryOtherMessages,
    Return,
};

constexpr int kGpOpCount = 12;

struct GpOpInfo {
    const char* name;
    int arity;           // 0 for terminals
    GpType args[2];
    GpType ret;
};

const GpOpInfo& op_info(GpOp op);
GpOp op_from_name(std::string_view name);
inline bool is_terminal(GpOp op) { return op_info(op).arity == 0; }

// Which baseline protocol is being improved; tryOtherMessages is only part of
// the PRoPHET terminal set.
enum class GpTarget { Epidemic, Prophet };

struct GpNode {
    GpOp op = GpOp::Return;
    std::vector<GpNode> children;

    bool operator==(const GpNode&) const = default;
};

enum class GpOrigin : uint8_t { Random, Crossover, Mutation, Repair, Loaded };

// Typed expression tree over the router-update grammar. Root type is body.
struct GpTree {
    GpNode root;
    std::string unique_id;
    GpOrigin origin = GpOrigin::Random;

    bool operator==(const GpTree& o) const { return root == o.root; }
};

// --- structure helpers ------------------------------------------------------

int node_count(const GpNode& n);
int tree_depth(const GpNode& n);
// Preorder access; index 0 is the node itself.
GpNode* node_at(GpNode& root, int index);
const GpNode* node_at(const GpNode& root, int index);
bool contains_op(const GpNode& n, GpOp op);

// --- text form ---------------------------------------------------------------

// Parenthesized prefix text, e.g.
// "sequence(update,if(or(isTransferring,not(canStartTransfer)),return))".
std::string serialize(const GpNode& n);
std::string serialize(const GpTree& t);
GpTree parse_tree(std::string_view text);

// --- grammar operations ------------------------------------------------------

// Grow-initialization: type-correct body-rooted tree within both limits,
// guaranteed to contain a return terminal.
GpTree grow_random(Rng& rng, GpTarget target, int max_depth, int max_nodes);

// Recursive arity/type check from the root plus the >=1 return rule.
bool check_validity(const GpTree& t);

// Type-driven repair; returns nullopt when the tree cannot be made valid.
// Valid trees are returned unchanged.
std::optional<GpTree> repair(const GpTree& t, Rng& rng, GpTarget target);

// Single-node crossover: one node picked uniformly in each tree, subtrees
// swapped. Offspring are expected to be repaired before evaluation.
std::pair<GpTree, GpTree> crossover(const GpTree& a, const GpTree& b, Rng& rng);

// Swap-mutation: every node selected independently with node_prob and swapped
// (with its subtree) with another uniformly chosen node of the same tree.
// Nested selections (one node inside the other's subtree) are skipped.
GpTree mutate(const GpTree& t, Rng& rng, double node_prob);

} // namespace dtn::gp
