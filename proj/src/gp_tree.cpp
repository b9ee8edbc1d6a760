#include "dtn/gp_tree.hpp"

#include <algorithm>
#include <array>

#include "dtn/error.hpp"

namespace dtn::gp {

namespace {

constexpr GpType kCond = GpType::Condition;
constexpr GpType kBody = GpType::Body;

constexpr std::array<GpOpInfo, kGpOpCount> kOps{{
    {"or", 2, {kCond, kCond}, kCond},
    {"not", 1, {kCond, kCond}, kCond},
    {"notEqual", 2, {kCond, kCond}, kCond},
    {"if", 2, {kCond, kBody}, kBody},
    {"sequence", 2, {kBody, kBody}, kBody},
    {"isTransferring", 0, {}, kCond},
    {"canStartTransfer", 0, {}, kCond},
    {"update", 0, {}, kBody},
    {"exchangeDeliverableMessages", 0, {}, kBody},
    {"tryAllMessagesToAllConnections", 0, {}, kBody},
    {"tryOtherMessages", 0, {}, kBody},
    {"return", 0, {}, kBody},
}};

// Terminal pools per type (body pool depends on the GP target).
std::vector<GpOp> terminal_pool(GpType type, GpTarget target) {
    if (type == kCond) return {GpOp::IsTransferring, GpOp::CanStartTransfer};
    std::vector<GpOp> pool{GpOp::Update, GpOp::ExchangeDeliverableMessages,
                           GpOp::TryAllMessagesToAllConnections, GpOp::Return};
    if (target == GpTarget::Prophet) pool.insert(pool.end() - 1, GpOp::TryOtherMessages);
    return pool;
}

std::vector<GpOp> nonterminal_pool(GpType ret) {
    if (ret == kCond) return {GpOp::Or, GpOp::Not, GpOp::NotEqual};
    return {GpOp::If, GpOp::Sequence};
}

// The type a node advertises regardless of the state of its children.
GpType apparent_type(const GpNode& n) { return op_info(n.op).ret; }

} // namespace

const GpOpInfo& op_info(GpOp op) { return kOps[static_cast<int>(op)]; }

GpOp op_from_name(std::string_view name) {
    for (int i = 0; i < kGpOpCount; ++i)
        if (name == kOps[i].name) return static_cast<GpOp>(i);
    throw ParseError("unknown tree node '" + std::string(name) + "'", 1);
}

int node_count(const GpNode& n) {
    int c = 1;
    for (const GpNode& ch : n.children) c += node_count(ch);
    return c;
}

int tree_depth(const GpNode& n) {
    int d = 0;
    for (const GpNode& ch : n.children) d = std::max(d, tree_depth(ch));
    return d + 1;
}

namespace {
GpNode* node_at_impl(GpNode& n, int& index) {
    if (index == 0) return &n;
    --index;
    for (GpNode& ch : n.children)
        if (GpNode* hit = node_at_impl(ch, index)) return hit;
    return nullptr;
}
} // namespace

GpNode* node_at(GpNode& root, int index) { return node_at_impl(root, index); }

const GpNode* node_at(const GpNode& root, int index) {
    return node_at_impl(const_cast<GpNode&>(root), index);
}

bool contains_op(const GpNode& n, GpOp op) {
    if (n.op == op) return true;
    for (const GpNode& ch : n.children)
        if (contains_op(ch, op)) return true;
    return false;
}

// ---------------------------------------------------------------------------
// text form
// ---------------------------------------------------------------------------

std::string serialize(const GpNode& n) {
    std::string out = op_info(n.op).name;
    if (!n.children.empty()) {
        out += '(';
        for (size_t i = 0; i < n.children.size(); ++i) {
            if (i) out += ',';
            out += serialize(n.children[i]);
        }
        out += ')';
    }
    return out;
}

std::string serialize(const GpTree& t) { return serialize(t.root); }

namespace {

struct TreeCursor {
    std::string_view text;
    size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n' ||
                                     text[pos] == '\r'))
            ++pos;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, 1, static_cast<int>(pos) + 1);
    }
};

GpNode parse_node(TreeCursor& c) {
    c.skip_ws();
    size_t start = c.pos;
    while (c.pos < c.text.size() &&
           (std::isalnum(static_cast<unsigned char>(c.text[c.pos])) || c.text[c.pos] == '_'))
        ++c.pos;
    if (c.pos == start) c.fail("expected a node name");
    GpNode n;
    n.op = op_from_name(c.text.substr(start, c.pos - start));
    c.skip_ws();
    if (c.pos < c.text.size() && c.text[c.pos] == '(') {
        ++c.pos;
        while (true) {
            n.children.push_back(parse_node(c));
            c.skip_ws();
            if (c.pos >= c.text.size()) c.fail("unterminated argument list");
            if (c.text[c.pos] == ',') {
                ++c.pos;
                continue;
            }
            if (c.text[c.pos] == ')') {
                ++c.pos;
                break;
            }
            c.fail("expected ',' or ')'");
        }
    }
    return n;
}

} // namespace

GpTree parse_tree(std::string_view text) {
    TreeCursor c{text};
    GpTree t;
    t.root = parse_node(c);
    t.origin = GpOrigin::Loaded;
    c.skip_ws();
    if (c.pos != c.text.size()) c.fail("trailing characters after tree");
    return t;
}

// ---------------------------------------------------------------------------
// grow
// ---------------------------------------------------------------------------

namespace {

// budget counts nodes still permitted, including the one about to be created
GpNode grow_node(Rng& rng, GpTarget target, GpType type, int depth_left, int& budget) {
    const auto terminals = terminal_pool(type, target);
    std::vector<GpOp> pool = terminals;
    if (depth_left > 1) {
        for (GpOp nt : nonterminal_pool(type))
            if (budget >= 1 + op_info(nt).arity) pool.push_back(nt);
    }
    GpNode n;
    n.op = pool[rng.uniform_index(pool.size())];
    --budget;
    const GpOpInfo& info = op_info(n.op);
    for (int i = 0; i < info.arity; ++i) {
        // reserve one node for each sibling still to be grown
        const int reserved = info.arity - i - 1;
        int sub_budget = budget - reserved;
        const int before = sub_budget;
        n.children.push_back(grow_node(rng, target, info.args[i], depth_left - 1, sub_budget));
        budget -= before - sub_budget;
    }
    return n;
}

// replace one uniformly chosen body-typed leaf with `return`
void force_return(GpNode& root, Rng& rng) {
    std::vector<GpNode*> body_leaves;
    auto collect = [&](auto&& self, GpNode& n) -> void {
        if (n.children.empty() && apparent_type(n) == kBody) body_leaves.push_back(&n);
        for (GpNode& ch : n.children) self(self, ch);
    };
    collect(collect, root);
    GpNode* leaf = body_leaves[rng.uniform_index(body_leaves.size())];
    leaf->op = GpOp::Return;
}

} // namespace

GpTree grow_random(Rng& rng, GpTarget target, int max_depth, int max_nodes) {
    if (max_depth < 1 || max_nodes < 1) throw ConfigError("grow limits must be >= 1");
    GpTree t;
    int budget = max_nodes;
    t.root = grow_node(rng, target, kBody, max_depth, budget);
    if (!contains_op(t.root, GpOp::Return)) force_return(t.root, rng);
    t.origin = GpOrigin::Random;
    return t;
}

// ---------------------------------------------------------------------------
// validity + repair
// ---------------------------------------------------------------------------

namespace {

bool check_node(const GpNode& n, GpType want) {
    const GpOpInfo& info = op_info(n.op);
    if (info.ret != want) return false;
    if (static_cast<int>(n.children.size()) != info.arity) return false;
    for (int i = 0; i < info.arity; ++i)
        if (!check_node(n.children[i], info.args[i])) return false;
    return true;
}

// Top-down type coercion. Returns false when the node cannot be fixed.
bool repair_node(GpNode& n, GpType want, Rng& rng, GpTarget target) {
    if (is_terminal(n.op)) {
        n.children.clear();
        if (apparent_type(n) != want) {
            const auto pool = terminal_pool(want, target);
            n.op = pool[rng.uniform_index(pool.size())];
        }
        return true;
    }

    const int nch = static_cast<int>(n.children.size());
    if (apparent_type(n) != want) {
        // replace with a non-terminal matching the children's signature...
        std::vector<GpOp> exact;
        std::vector<GpOp> arity_only;
        for (GpOp cand : nonterminal_pool(want)) {
            const GpOpInfo& info = op_info(cand);
            if (info.arity != nch) continue;
            arity_only.push_back(cand);
            bool match = true;
            for (int i = 0; i < nch; ++i)
                if (info.args[i] != apparent_type(n.children[i])) match = false;
            if (match) exact.push_back(cand);
        }
        // ...or at least the child count, coercing the children afterwards
        const auto& pool = !exact.empty() ? exact : arity_only;
        if (pool.empty()) return false;
        n.op = pool[rng.uniform_index(pool.size())];
    }

    const GpOpInfo& info = op_info(n.op);
    while (static_cast<int>(n.children.size()) > info.arity) n.children.pop_back();
    while (static_cast<int>(n.children.size()) < info.arity) {
        const auto pool = terminal_pool(info.args[n.children.size()], target);
        n.children.push_back(GpNode{pool[rng.uniform_index(pool.size())], {}});
    }
    for (int i = 0; i < info.arity; ++i)
        if (!repair_node(n.children[i], info.args[i], rng, target)) return false;
    return true;
}

} // namespace

bool check_validity(const GpTree& t) {
    return check_node(t.root, kBody) && contains_op(t.root, GpOp::Return);
}

std::optional<GpTree> repair(const GpTree& t, Rng& rng, GpTarget target) {
    if (check_validity(t)) return t;
    GpTree fixed = t;
    if (!repair_node(fixed.root, kBody, rng, target)) return std::nullopt;
    if (!contains_op(fixed.root, GpOp::Return)) force_return(fixed.root, rng);
    if (!check_validity(fixed)) return std::nullopt;
    fixed.origin = GpOrigin::Repair;
    return fixed;
}

// ---------------------------------------------------------------------------
// variation operators
// ---------------------------------------------------------------------------

std::pair<GpTree, GpTree> crossover(const GpTree& a, const GpTree& b, Rng& rng) {
    GpTree oa = a;
    GpTree ob = b;
    const int ia = static_cast<int>(rng.uniform_index(node_count(oa.root)));
    const int ib = static_cast<int>(rng.uniform_index(node_count(ob.root)));
    std::swap(*node_at(oa.root, ia), *node_at(ob.root, ib));
    oa.origin = ob.origin = GpOrigin::Crossover;
    return {std::move(oa), std::move(ob)};
}

namespace {

// subtree of the node at preorder index i spans [i, i + size_i)
bool nested(const GpNode& root, int i, int j) {
    const int si = node_count(*node_at(root, i));
    const int sj = node_count(*node_at(root, j));
    return (j >= i && j < i + si) || (i >= j && i < j + sj);
}

} // namespace

GpTree mutate(const GpTree& t, Rng& rng, double node_prob) {
    GpTree out = t;
    const int n = node_count(out.root);
    for (int i = 0; i < n; ++i) {
        if (!rng.bernoulli(node_prob)) continue;
        if (n < 2) continue;
        int j = static_cast<int>(rng.uniform_index(n - 1));
        if (j >= i) ++j;  // another node of the same tree
        if (nested(out.root, i, j)) continue;
        std::swap(*node_at(out.root, i), *node_at(out.root, j));
    }
    out.origin = GpOrigin::Mutation;
    return out;
}

} // namespace dtn::gp
