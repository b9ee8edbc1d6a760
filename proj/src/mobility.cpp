#include "dtn/mobility.hpp"

#include <stdexcept>

#include "dtn/error.hpp"

namespace dtn {

namespace {

std::vector<int> allowed_nodes(const MapGraph& g, uint32_t mask) {
    std::vector<int> out;
    for (int v = 0; v < g.node_count(); ++v)
        if (g.node_layers[v] & mask) out.push_back(v);
    return out;
}

// Picks the next journey once a wait has elapsed: destination, path and speed.
void choose_next(MobilityState& st, const MapGraph& g, const GroupMobilityConfig& cfg, Rng& rng) {
    int dest;
    if (cfg.model == MobilityModel::MapRoute) {
        const RouteDefinition& route = *cfg.route;
        const int n = static_cast<int>(route.stops.size());
        std::vector<int> neighbors;
        if (cfg.route->type == RouteType::Circular) {
            neighbors.push_back((st.route_stop + 1) % n);
            neighbors.push_back((st.route_stop + n - 1) % n);
        } else {
            if (st.route_stop + 1 < n) neighbors.push_back(st.route_stop + 1);
            if (st.route_stop - 1 >= 0) neighbors.push_back(st.route_stop - 1);
        }
        // dedup (2-stop circular routes yield the same neighbor twice)
        if (neighbors.size() == 2 && neighbors[0] == neighbors[1]) neighbors.pop_back();
        // avoid the stop we came from unless it is the only option
        if (neighbors.size() > 1 && st.prev_stop >= 0) {
            std::erase(neighbors, st.prev_stop);
        }
        const int next_stop = neighbors[rng.uniform_index(neighbors.size())];
        st.prev_stop = st.route_stop;
        st.route_stop = next_stop;
        dest = route.stops[next_stop];
    } else {
        const auto allowed = allowed_nodes(g, cfg.layer_mask);
        dest = allowed[rng.uniform_index(allowed.size())];
    }
    st.path = shortest_path(g, st.seg_from, dest,
                            cfg.model == MobilityModel::MapRoute ? ~0u : cfg.layer_mask);
    st.path_pos = 1;  // path[0] is the node we stand on
    st.seg_progress = 0.0;
    st.speed = rng.uniform(cfg.speed_min, cfg.speed_max);
}

void advance(MobilityState& st, const MapGraph& g, const GroupMobilityConfig& cfg, double dist,
             double t_end, Rng& rng) {
    while (dist > 0.0 && st.moving()) {
        const int nxt = st.path[st.path_pos];
        const double seg_len = distance(g.nodes[st.seg_from], g.nodes[nxt]);
        const double remain = seg_len - st.seg_progress;
        if (dist >= remain) {
            dist -= remain;
            st.seg_from = nxt;
            st.seg_progress = 0.0;
            ++st.path_pos;
        } else {
            st.seg_progress += dist;
            dist = 0.0;
        }
    }
    if (st.moving()) {
        const int nxt = st.path[st.path_pos];
        const double seg_len = distance(g.nodes[st.seg_from], g.nodes[nxt]);
        st.pos = lerp(g.nodes[st.seg_from], g.nodes[nxt], st.seg_progress / seg_len);
    } else {
        st.pos = g.nodes[st.seg_from];
        // arrival: leftover distance is discarded, the wait starts at tick end
        st.wait_until = t_end + rng.uniform(cfg.wait_min, cfg.wait_max);
        st.path.clear();
        st.path_pos = 0;
    }
}

} // namespace

MobilityState init_position(const MapGraph& g, const GroupMobilityConfig& cfg, Rng& rng) {
    if (g.node_count() == 0) throw ConfigError("cannot place hosts on an empty map");
    MobilityState st;
    if (cfg.model == MobilityModel::MapRoute) {
        if (!cfg.route) throw ConfigError("MapRoute movement needs a route");
        st.route_stop = static_cast<int>(rng.uniform_index(cfg.route->stops.size()));
        st.seg_from = cfg.route->stops[st.route_stop];
    } else {
        const auto allowed = allowed_nodes(g, cfg.layer_mask);
        if (allowed.empty()) throw ConfigError("okMaps mask excludes every map node");
        st.seg_from = allowed[rng.uniform_index(allowed.size())];
    }
    st.pos = g.nodes[st.seg_from];
    return st;
}

void mobility_step(MobilityState& st, const MapGraph& g, const GroupMobilityConfig& cfg,
                   double now, double dt, double t_end, Rng& rng) {
    if (st.wait_until > now) return;
    if (!st.moving()) choose_next(st, g, cfg, rng);
    advance(st, g, cfg, st.speed * dt, t_end, rng);
}

} // namespace dtn
