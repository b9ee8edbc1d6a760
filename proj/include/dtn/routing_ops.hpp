#pragma once

#include "dtn/netsim.hpp"

namespace dtn {

// Router primitive vocabulary. Each send primitive starts at most one
// transfer per call and returns whether one started.

// True iff the host is the sender of an active transfer, or it has
// connections and at least one of them is busy transferring.
bool is_transferring(const World& w, const Host& h);

// True iff the buffer is nonempty and at least one connection is idle.
bool can_start_transfer(const World& w, const Host& h);

// Tries to hand buffered messages straight to their final recipient: scans the
// own buffer oldest-first for messages destined to a connected peer, then
// gives each peer one chance to start a deliverable transfer toward this host.
bool exchange_deliverable_messages(World& w, Host& h);

// Epidemic forwarding step: connections in creation order, buffered messages
// oldest-first, first transfer whose receiver does not already hold the copy.
bool try_all_messages_to_all_connections(World& w, Host& h);

// PRoPHET forwarding step: candidate (message, connection) pairs where the
// peer's delivery predictability for the destination strictly exceeds our
// own, tried in descending peer-predictability order (older message first on
// ties).
bool try_other_messages(World& w, Host& h);

// Housekeeping shared by every router: TTL-expired buffer drops plus
// predictability aging for Prophet kinds. Transfer completion is already
// handled by the engine's tick.
void super_update(World& w, Host& h);

// The stock update() control flows.
void native_epidemic_update(World& w, Host& h);
void native_prophet_update(World& w, Host& h);

// Dispatches on the host's router kind (evolved kinds run the GP interpreter).
void update_host(World& w, Host& h);

} // namespace dtn
