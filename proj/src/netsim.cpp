#include "dtn/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dtn/error.hpp"
#include "dtn/routing_ops.hpp"

namespace dtn {

namespace {
constexpr double kInfinity = std::numeric_limits<double>::infinity();
constexpr int64_t kCellStride = 1 << 21;
constexpr int64_t kCellOffset = 1 << 19;
}

World::World(MapGraph map, std::vector<RadioInterface> ifaces, std::vector<HostGroupConfig> groups,
             WorldParams params)
    : map_(std::move(map)),
      ifaces_(std::move(ifaces)),
      groups_(std::move(groups)),
      params_(params),
      events_rng_(Rng::substream(params.seed, 0xEE11)),
      shuffle_rng_(Rng::substream(params.seed, 0x5AFF)) {
    if (params_.dt_num <= 0 || params_.dt_den <= 0)
        throw ConfigError("update interval must be positive");
    if (ifaces_.size() > 8) throw ConfigError("at most 8 interface classes are supported");
    next_msg_time_ = params_.warmup + events_rng_.uniform(params_.msg_interval_min,
                                                          params_.msg_interval_max);
}

Host& World::add_host(int group, RouterKind router, const gp::GpTree* tree) {
    Host h;
    h.id = static_cast<int>(hosts_.size());
    h.group = group;
    h.rng = Rng::substream(params_.seed, static_cast<uint64_t>(h.id) + 1);
    h.mob = init_position(map_, groups_[group].mobility, h.rng);
    h.buffer.capacity = groups_[group].buffer_capacity;
    h.router.kind = router;
    h.tree = tree;
    h.next_ttl_check = kInfinity;
    hosts_.push_back(std::move(h));
    Host& ref = hosts_.back();
    for (int k : groups_[group].ifaces) hosts_with_iface_[k].push_back(ref.id);
    return ref;
}

int World::time_decimals() const {
    int d = 0;
    for (int64_t den = params_.dt_den; den > 1; den /= 10) ++d;
    return d;
}

int64_t World::total_ticks() const {
    const double total = params_.warmup + params_.end_time;
    return static_cast<int64_t>(std::llround(total * static_cast<double>(params_.dt_den) /
                                             static_cast<double>(params_.dt_num)));
}

int World::active_transfer_count() const {
    int n = 0;
    for (const Connection& c : conns_)
        if (c.transfer) ++n;
    return n;
}

void World::run() { run_until(params_.warmup + params_.end_time); }

void World::run_until(double time) {
    while (now() < time) tick();
}

void World::tick() {
    const double t = now();
    const double dtv = dt();
    const double t_end = time_of(tick_count_ + 1);
    const bool active = t >= params_.warmup;

    if (active) generate_messages();

    for (Host& h : hosts_)
        mobility_step(h.mob, map_, groups_[h.group].mobility, t, dtv, t_end, h.rng);

    if (active) {
        update_connectivity();
        progress_transfers();
        if (params_.randomize_update_order) {
            std::vector<int> order(hosts_.size());
            for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
            for (size_t i = order.size(); i > 1; --i)
                std::swap(order[i - 1], order[shuffle_rng_.uniform_index(i)]);
            for (int id : order) update_host(*this, hosts_[id]);
        } else {
            for (Host& h : hosts_) update_host(*this, h);
        }
        ttl_sweep();
    }
    ++tick_count_;
}

void World::generate_messages() {
    const double t = now();
    while (t >= next_msg_time_) {
        const int span = params_.msg_hosts_hi - params_.msg_hosts_lo;
        const int source =
            params_.msg_hosts_lo + static_cast<int>(events_rng_.uniform_index(span));
        int dest = params_.msg_hosts_lo + static_cast<int>(events_rng_.uniform_index(span - 1));
        if (dest >= source) ++dest;  // skip the source, keeping the draw uniform
        const int64_t size = events_rng_.uniform_int(params_.msg_size_min, params_.msg_size_max);

        Message m;
        m.id = ++msg_counter_;
        m.source = source;
        m.destination = dest;
        m.size = size;
        m.t_creation = t;
        m.ttl = groups_[hosts_[source].group].ttl_seconds;
        m.hop_path.push_back(source);

        log_.append(t, EventKind::Created, m.id, source, dest);
        enqueue_incoming(hosts_[source], m, t);

        next_msg_time_ += events_rng_.uniform(params_.msg_interval_min, params_.msg_interval_max);
    }
}

void World::destroy_connection(std::list<Connection>::iterator it) {
    Connection& c = *it;
    if (c.transfer) {
        const int recv = c.other(c.transfer->sender);
        log_.append(now(), EventKind::Aborted, c.transfer->msg.id, c.transfer->sender, recv);
        hosts_[c.transfer->sender].sending = nullptr;
        --hosts_[recv].receiving_count;
    }
    std::erase(hosts_[c.a].conns, &c);
    std::erase(hosts_[c.b].conns, &c);
    conns_.erase(it);
}

void World::on_contact(Host& a, Host& b) {
    if (!is_prophet_kind(a.router.kind) || !is_prophet_kind(b.router.kind)) return;
    // lower id first; each side sees the peer's current table
    Host* first = a.id < b.id ? &a : &b;
    Host* second = a.id < b.id ? &b : &a;
    prophet_on_contact_direct(first->router, second->id, params_.prophet);
    prophet_on_contact_transitive(first->router, first->id, second->id, second->router,
                                  params_.prophet);
    prophet_on_contact_direct(second->router, first->id, params_.prophet);
    prophet_on_contact_transitive(second->router, second->id, first->id, first->router,
                                  params_.prophet);
}

void World::update_connectivity() {
    // drop pass, in creation order
    for (auto it = conns_.begin(); it != conns_.end();) {
        const RadioInterface& ifc = ifaces_[it->iface];
        const double d = distance(hosts_[it->a].mob.pos, hosts_[it->b].mob.pos);
        if (d > ifc.range) {
            auto victim = it++;
            destroy_connection(victim);
        } else {
            ++it;
        }
    }

    // create pass: per interface class, candidate pairs in ascending id order
    for (size_t k = 0; k < ifaces_.size(); ++k) {
        const std::vector<int>& members = hosts_with_iface_[k];
        if (members.size() < 2) continue;
        const RadioInterface& ifc = ifaces_[k];
        const double cell = ifc.range * std::max(1.0, params_.cell_size_mult);

        cell_scratch_.clear();
        for (int id : members) {
            const Point2D p = hosts_[id].mob.pos;
            const int64_t cx = static_cast<int64_t>(std::floor(p.x / cell)) + kCellOffset;
            const int64_t cy = static_cast<int64_t>(std::floor(p.y / cell)) + kCellOffset;
            cell_scratch_.push_back({cy * kCellStride + cx, id});
        }
        std::sort(cell_scratch_.begin(), cell_scratch_.end());

        std::vector<int> candidates;
        for (int a : members) {
            const Point2D pa = hosts_[a].mob.pos;
            const int64_t cx = static_cast<int64_t>(std::floor(pa.x / cell)) + kCellOffset;
            const int64_t cy = static_cast<int64_t>(std::floor(pa.y / cell)) + kCellOffset;
            candidates.clear();
            for (int64_t dy = -1; dy <= 1; ++dy) {
                const int64_t lo = (cy + dy) * kCellStride + (cx - 1);
                auto it = std::lower_bound(cell_scratch_.begin(), cell_scratch_.end(),
                                           std::pair<int64_t, int>{lo, -1});
                for (; it != cell_scratch_.end() && it->first <= lo + 2; ++it)
                    if (it->second > a) candidates.push_back(it->second);
            }
            std::sort(candidates.begin(), candidates.end());
            for (int b : candidates) {
                if (distance(pa, hosts_[b].mob.pos) > ifc.range) continue;
                const bool exists = std::any_of(
                    hosts_[a].conns.begin(), hosts_[a].conns.end(), [&](const Connection* c) {
                        return c->iface == static_cast<int>(k) && c->other(a) == b;
                    });
                if (exists) continue;
                conns_.push_back({a, b, static_cast<int>(k), std::nullopt});
                Connection& c = conns_.back();
                hosts_[a].conns.push_back(&c);
                hosts_[b].conns.push_back(&c);
                on_contact(hosts_[a], hosts_[b]);
            }
        }
    }
}

void World::progress_transfers() {
    const double step_bytes_per_speed = dt();
    for (auto it = conns_.begin(); it != conns_.end(); ++it) {
        Connection& c = *it;
        if (!c.transfer) continue;
        c.transfer->bytes_remaining -= ifaces_[c.iface].transmit_speed * step_bytes_per_speed;
        if (c.transfer->bytes_remaining > 0.0) continue;

        const int sender = c.transfer->sender;
        const int receiver = c.other(sender);
        Message msg = std::move(c.transfer->msg);
        c.transfer.reset();
        hosts_[sender].sending = nullptr;
        --hosts_[receiver].receiving_count;

        msg.hop_path.push_back(receiver);
        log_.append(now(), EventKind::Relayed, msg.id, sender, receiver);
        Host& r = hosts_[receiver];
        if (receiver == msg.destination) {
            if (!r.delivered_here.contains(msg.id)) {
                r.delivered_here.insert(msg.id);
                log_.append(now(), EventKind::Delivered, msg.id, sender, receiver);
            }
            // final recipients do not buffer (or forward) their own messages
        } else {
            enqueue_incoming(r, msg, now());
        }
    }
}

bool World::can_send_on(const Host& sender, const Connection& c) const {
    if (!c.idle() || sender.sending != nullptr) return false;
    if (params_.forbid_simultaneous_send_receive && sender.receiving_count > 0) return false;
    return true;
}

bool World::receiver_accepts(const Host& receiver, const Message& msg) const {
    if (receiver.holds(msg.id)) return false;
    if (receiver.id == msg.destination && receiver.delivered_here.contains(msg.id)) return false;
    if (params_.forbid_simultaneous_send_receive &&
        (receiver.sending != nullptr || receiver.receiving_count > 0))
        return false;
    return true;
}

void World::start_transfer(Host& sender, Connection& c, const Message& msg) {
    const int receiver = c.other(sender.id);
    c.transfer = ActiveTransfer{msg, static_cast<double>(msg.size), sender.id};
    sender.sending = &c;
    ++hosts_[receiver].receiving_count;
    log_.append(now(), EventKind::Started, msg.id, sender.id, receiver);
}

void World::drop_entry(Host& host, size_t index) {
    const BufferEntry& e = host.buffer.entries[index];
    log_.append(now(), EventKind::Dropped, e.msg.id, host.id, -1);
    host.buffer.used -= e.msg.size;
    host.holdings.erase(e.msg.id);
    host.buffer.entries.erase(host.buffer.entries.begin() + index);
}

void World::enqueue_incoming(Host& host, const Message& msg, double t) {
    if (host.holds(msg.id)) return;            // duplicate, no event
    if (msg.size > host.buffer.capacity) return;  // larger than the whole buffer
    while (host.buffer.capacity - host.buffer.used < msg.size) drop_entry(host, 0);
    host.buffer.used += msg.size;
    host.holdings.insert(msg.id);
    host.buffer.entries.push_back({msg, t});
    host.next_ttl_check = std::min(host.next_ttl_check, msg.t_creation + msg.ttl);
}

void World::refresh_ttl_check(Host& host) {
    host.next_ttl_check = kInfinity;
    for (const BufferEntry& e : host.buffer.entries)
        host.next_ttl_check = std::min(host.next_ttl_check, e.msg.t_creation + e.msg.ttl);
}

void World::drop_expired(Host& host) {
    const double t = now();
    if (t <= host.next_ttl_check) return;
    for (size_t i = 0; i < host.buffer.entries.size();) {
        const Message& m = host.buffer.entries[i].msg;
        if (t - m.t_creation > m.ttl)
            drop_entry(host, i);
        else
            ++i;
    }
    refresh_ttl_check(host);
}

void World::ttl_sweep() {
    for (Host& h : hosts_) drop_expired(h);
}

} // namespace dtn
