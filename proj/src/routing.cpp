#include "dtn/routing_ops.hpp"

#include <algorithm>
#include <cmath>

#include "dtn/gp_interpreter.hpp"

namespace dtn {

// ---------------------------------------------------------------------------
// PRoPHET delivery-predictability bookkeeping
// ---------------------------------------------------------------------------

void prophet_on_contact_direct(RouterState& a, int b_id, const ProphetParams& p) {
    double& pred = a.preds[b_id];
    pred = pred + (1.0 - pred) * p.p_init;
}

void prophet_on_contact_transitive(RouterState& a, int a_id, int b_id, const RouterState& b,
                                   const ProphetParams& p) {
    const double p_ab = a.pred_for(b_id);
    for (const auto& [c_id, p_bc] : b.preds) {
        if (c_id == a_id) continue;
        double& pred = a.preds[c_id];
        pred = pred + (1.0 - pred) * p_ab * p_bc * p.beta;
    }
}

void prophet_age(RouterState& st, double now, const ProphetParams& p) {
    const int64_t k =
        static_cast<int64_t>(std::floor((now - st.last_age_update) / p.seconds_in_time_unit));
    if (k <= 0) return;
    double factor = 1.0;
    for (int64_t i = 0; i < k; ++i) factor *= p.gamma;
    for (auto& [id, pred] : st.preds) pred *= factor;
    st.last_age_update += static_cast<double>(k) * p.seconds_in_time_unit;
}

// ---------------------------------------------------------------------------
// Router primitives
// ---------------------------------------------------------------------------

bool is_transferring(const World&, const Host& h) {
    if (h.sending != nullptr) return true;
    if (h.conns.empty()) return false;
    for (const Connection* c : h.conns)
        if (!c->idle()) return true;
    return false;
}

bool can_start_transfer(const World&, const Host& h) {
    if (h.buffer.entries.empty()) return false;
    for (const Connection* c : h.conns)
        if (c->idle()) return true;
    return false;
}

bool exchange_deliverable_messages(World& w, Host& h) {
    // own messages whose destination is a directly connected peer
    for (const BufferEntry& e : h.buffer.entries) {
        for (Connection* c : h.conns) {
            if (c->other(h.id) != e.msg.destination) continue;
            if (!w.can_send_on(h, *c)) continue;
            if (!w.receiver_accepts(w.hosts()[e.msg.destination], e.msg)) continue;
            w.start_transfer(h, *c, e.msg);
            return true;
        }
    }
    // each peer gets one chance to respond with a message destined to us
    for (Connection* c : h.conns) {
        if (!c->idle()) continue;
        Host& peer = w.hosts()[c->other(h.id)];
        if (is_transferring(w, peer)) continue;
        for (const BufferEntry& e : peer.buffer.entries) {
            if (e.msg.destination != h.id) continue;
            if (!w.can_send_on(peer, *c)) continue;
            if (!w.receiver_accepts(h, e.msg)) continue;
            w.start_transfer(peer, *c, e.msg);
            return true;
        }
    }
    return false;
}

bool try_all_messages_to_all_connections(World& w, Host& h) {
    for (Connection* c : h.conns) {
        if (!w.can_send_on(h, *c)) continue;
        const Host& peer = w.hosts()[c->other(h.id)];
        for (const BufferEntry& e : h.buffer.entries) {
            if (!w.receiver_accepts(peer, e.msg)) continue;
            w.start_transfer(h, *c, e.msg);
            return true;
        }
    }
    return false;
}

bool try_other_messages(World& w, Host& h) {
    struct Candidate {
        double peer_pred;
        double t_receive;
        size_t order;  // collection order, stabilizes remaining ties
        const Message* msg;
        Connection* conn;
    };
    std::vector<Candidate> candidates;
    for (Connection* c : h.conns) {
        const Host& peer = w.hosts()[c->other(h.id)];
        for (const BufferEntry& e : h.buffer.entries) {
            const double peer_p = peer.router.pred_for(e.msg.destination);
            if (peer_p > h.router.pred_for(e.msg.destination))
                candidates.push_back({peer_p, e.t_receive, candidates.size(), &e.msg, c});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.peer_pred != b.peer_pred) return a.peer_pred > b.peer_pred;
        if (a.t_receive != b.t_receive) return a.t_receive < b.t_receive;
        return a.order < b.order;
    });
    for (const Candidate& cand : candidates) {
        if (!w.can_send_on(h, *cand.conn)) continue;
        if (!w.receiver_accepts(w.hosts()[cand.conn->other(h.id)], *cand.msg)) continue;
        w.start_transfer(h, *cand.conn, *cand.msg);
        return true;
    }
    return false;
}

void super_update(World& w, Host& h) {
    w.drop_expired(h);
    if (is_prophet_kind(h.router.kind)) prophet_age(h.router, w.now(), w.params().prophet);
}

void native_epidemic_update(World& w, Host& h) {
    super_update(w, h);
    if (is_transferring(w, h) || !can_start_transfer(w, h)) {
        return;  // transferring, don't try other connections yet
    }
    if (exchange_deliverable_messages(w, h)) {
        return;  // started a transfer, don't try others (yet)
    }
    try_all_messages_to_all_connections(w, h);
}

void native_prophet_update(World& w, Host& h) {
    super_update(w, h);
    if (!can_start_transfer(w, h) || is_transferring(w, h)) {
        return;  // nothing to transfer or is currently transferring
    }
    if (exchange_deliverable_messages(w, h)) {
        return;
    }
    try_other_messages(w, h);
}

void update_host(World& w, Host& h) {
    switch (h.router.kind) {
        case RouterKind::Epidemic: native_epidemic_update(w, h); break;
        case RouterKind::Prophet: native_prophet_update(w, h); break;
        case RouterKind::EvolvedEpidemic:
        case RouterKind::EvolvedProphet: gp::interpret_update(*h.tree, w, h); break;
    }
}

} // namespace dtn
