#include "dtn/gp_interpreter.hpp"

#include <stdexcept>

#include "dtn/routing_ops.hpp"

namespace dtn::gp {

namespace {

enum class Flow { Continue, Return };

bool eval_condition(const GpNode& n, World& w, Host& h) {
    switch (n.op) {
        case GpOp::Or: return eval_condition(n.children[0], w, h) || eval_condition(n.children[1], w, h);
        case GpOp::Not: return !eval_condition(n.children[0], w, h);
        case GpOp::NotEqual:
            return eval_condition(n.children[0], w, h) != eval_condition(n.children[1], w, h);
        case GpOp::IsTransferring: return is_transferring(w, h);
        case GpOp::CanStartTransfer: return can_start_transfer(w, h);
        default: throw std::logic_error("body node in a condition slot");
    }
}

Flow eval_body(const GpNode& n, World& w, Host& h) {
    switch (n.op) {
        case GpOp::If:
            if (eval_condition(n.children[0], w, h)) return eval_body(n.children[1], w, h);
            return Flow::Continue;
        case GpOp::Sequence:
            if (eval_body(n.children[0], w, h) == Flow::Return) return Flow::Return;
            return eval_body(n.children[1], w, h);
        case GpOp::Update: super_update(w, h); return Flow::Continue;
        case GpOp::ExchangeDeliverableMessages:
            exchange_deliverable_messages(w, h);  // boolean result discarded
            return Flow::Continue;
        case GpOp::TryAllMessagesToAllConnections:
            try_all_messages_to_all_connections(w, h);
            return Flow::Continue;
        case GpOp::TryOtherMessages:
            try_other_messages(w, h);
            return Flow::Continue;
        case GpOp::Return: return Flow::Return;
        default: throw std::logic_error("condition node in a body slot");
    }
}

} // namespace

void interpret_update(const GpTree& tree, World& w, Host& h) { eval_body(tree.root, w, h); }

} // namespace dtn::gp
