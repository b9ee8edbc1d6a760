#pragma once

#include "dtn/gp_tree.hpp"

namespace dtn {
class World;
struct Host;
}

namespace dtn::gp {

// Executes one update() invocation of the tree against the routing
// primitives: `sequence` runs children left-to-right, `if` runs its body when
// the condition holds, `or` short-circuits, `notEqual` is boolean XOR, and
// `return` unwinds the whole invocation.
void interpret_update(const GpTree& tree, World& w, Host& h);

} // namespace dtn::gp
