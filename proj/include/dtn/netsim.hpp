#pragma once

#include <cstdint>
#include <deque>
#include <list>
#include <optional>
#include <unordered_set>
#include <vector>

#include "dtn/events.hpp"
#include "dtn/mobility.hpp"
#include "dtn/routing.hpp"
#include "dtn/worldmap.hpp"

namespace dtn {

namespace gp {
struct GpTree;
}

struct Message {
    int id = 0;
    int source = 0;
    int destination = 0;
    int64_t size = 0;  // bytes
    double t_creation = 0.0;
    double ttl = 0.0;  // seconds
    std::vector<int> hop_path;  // starts with source; grows as the copy is relayed
};

struct RadioInterface {
    std::string name;
    double transmit_speed = 0.0;  // bytes/second
    double range = 0.0;           // meters
};

struct ActiveTransfer {
    Message msg;  // snapshot of the sender's copy at start time
    double bytes_remaining = 0.0;
    int sender = -1;
};

struct Connection {
    int a = -1;  // a < b
    int b = -1;
    int iface = 0;  // index into World::interfaces
    std::optional<ActiveTransfer> transfer;

    int other(int host) const { return host == a ? b : a; }
    bool idle() const { return !transfer.has_value(); }
};

struct BufferEntry {
    Message msg;
    double t_receive = 0.0;
};

// Drop-oldest FIFO store; entries are ordered by receive time.
struct MessageBuffer {
    int64_t capacity = 0;
    int64_t used = 0;
    std::deque<BufferEntry> entries;
};

struct HostGroupConfig {
    GroupMobilityConfig mobility;
    std::vector<int> ifaces;     // indices into World::interfaces
    int64_t buffer_capacity = 5'000'000;
    double ttl_seconds = 18000.0;
    std::string group_id = "p";
};

struct Host {
    int id = -1;
    int group = -1;
    MobilityState mob;
    MessageBuffer buffer;
    RouterState router;
    std::vector<Connection*> conns;  // creation order
    Connection* sending = nullptr;   // the transfer this host currently sends, if any
    int receiving_count = 0;
    const gp::GpTree* tree = nullptr;  // update body for evolved kinds
    Rng rng{0};

    std::unordered_set<int> holdings;        // buffered message ids
    std::unordered_set<int> delivered_here;  // ids already delivered to this host
    double next_ttl_check = 0.0;

    bool holds(int msg_id) const { return holdings.contains(msg_id); }
};

// Scenario-level knobs the engine needs at run time.
struct WorldParams {
    int64_t dt_num = 1;  // update interval = dt_num / dt_den seconds
    int64_t dt_den = 10;
    double warmup = 1000.0;
    double end_time = 43200.0;  // message-generation window after warmup
    double msg_interval_min = 25.0;
    double msg_interval_max = 35.0;
    int64_t msg_size_min = 500'000;
    int64_t msg_size_max = 1'000'000;
    int msg_hosts_lo = 0;   // source/destination address range [lo, hi)
    int msg_hosts_hi = 0;
    std::string msg_prefix = "M";
    uint64_t seed = 1;
    double cell_size_mult = 5.0;
    bool randomize_update_order = false;
    bool forbid_simultaneous_send_receive = false;
    ProphetParams prophet;
};

// One simulation world: single-threaded, deterministic for a fixed seed.
class World {
public:
    World(MapGraph map, std::vector<RadioInterface> ifaces, std::vector<HostGroupConfig> groups,
          WorldParams params);

    // hosts keep pointers into the connection list
    World(const World&) = delete;
    World& operator=(const World&) = delete;

    // Adds one host to the given group, drawing its start position from the
    // host's own seed-derived stream.
    Host& add_host(int group, RouterKind router, const gp::GpTree* tree = nullptr);

    void run();                   // simulates warmup + end_time
    void run_until(double time);  // partial run, for tests
    void tick();

    double now() const { return time_of(tick_count_); }
    double time_of(int64_t tick) const {
        return static_cast<double>(tick * params_.dt_num) / static_cast<double>(params_.dt_den);
    }
    double dt() const { return time_of(1); }
    int time_decimals() const;
    int64_t total_ticks() const;

    const EventLog& log() const { return log_; }
    const MapGraph& map() const { return map_; }
    const WorldParams& params() const { return params_; }
    const std::vector<RadioInterface>& interfaces() const { return ifaces_; }
    std::vector<Host>& hosts() { return hosts_; }
    const std::vector<Host>& hosts() const { return hosts_; }
    const HostGroupConfig& group_config(int g) const { return groups_[g]; }
    int active_transfer_count() const;
    std::string events_csv() const { return to_csv(log_, params_.msg_prefix, time_decimals()); }

    // Transfer mechanics (used by the routing primitives).
    bool can_send_on(const Host& sender, const Connection& c) const;
    bool receiver_accepts(const Host& receiver, const Message& msg) const;
    void start_transfer(Host& sender, Connection& c, const Message& msg);

    // Inserts a copy at `host`, evicting oldest entries as needed. Duplicates
    // and messages larger than the whole buffer are rejected silently.
    void enqueue_incoming(Host& host, const Message& msg, double now);

    void drop_expired(Host& host);  // TTL sweep for one host buffer

private:
    void generate_messages();
    void update_connectivity();
    void progress_transfers();
    void ttl_sweep();
    void destroy_connection(std::list<Connection>::iterator it);
    void drop_entry(Host& host, size_t index);
    void on_contact(Host& a, Host& b);
    void refresh_ttl_check(Host& host);

    MapGraph map_;
    std::vector<RadioInterface> ifaces_;
    std::vector<HostGroupConfig> groups_;
    WorldParams params_;
    std::vector<Host> hosts_;
    std::list<Connection> conns_;
    EventLog log_;
    int64_t tick_count_ = 0;
    Rng events_rng_;
    Rng shuffle_rng_;
    double next_msg_time_ = 0.0;
    int msg_counter_ = 0;
    std::vector<int> hosts_with_iface_[8];  // per interface class (≤ 8 classes)
    std::vector<std::pair<int64_t, int>> cell_scratch_;
};

} // namespace dtn
