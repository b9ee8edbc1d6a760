#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "dtn/rng.hpp"
#include "dtn/worldmap.hpp"

namespace dtn {

enum class MobilityModel { ShortestPathMapBased, MapRoute };

struct GroupMobilityConfig {
    MobilityModel model = MobilityModel::ShortestPathMapBased;
    double speed_min = 0.5;
    double speed_max = 1.5;
    double wait_min = 0.0;
    double wait_max = 120.0;
    std::shared_ptr<const RouteDefinition> route;  // MapRoute only
    uint32_t layer_mask = ~0u;  // okMaps restriction for destinations/paths
};

// Position of one host on the map plus its journey bookkeeping. A host is
// either waiting at a node (wait_until in the future, no remaining path) or
// advancing along the shortest path to its current destination at a constant
// per-leg speed.
struct MobilityState {
    Point2D pos;
    int seg_from = -1;          // node we are at / moving away from
    std::vector<int> path;      // nodes still to visit; path[path_pos] is next
    size_t path_pos = 0;
    double seg_progress = 0.0;  // meters advanced from seg_from toward path[path_pos]
    double speed = 0.0;         // current leg speed, constant per journey
    double wait_until = 0.0;    // sim time at which the current wait ends

    int route_stop = -1;        // MapRoute: index of the stop we sit at / head to
    int prev_stop = -1;         // MapRoute: stop we came from

    bool moving() const { return path_pos < path.size(); }
};

// Draws the initial placement: uniform over graph nodes for shortest-path
// movement, uniform over route stops for MapRoute.
MobilityState init_position(const MapGraph& g, const GroupMobilityConfig& cfg, Rng& rng);

// Advances one update interval ending at sim time t_end. Waiting hosts stay
// put; moving hosts advance speed*dt with leftover distance carried across
// vertices; on arrival a new wait is drawn, and once the wait has elapsed the
// next destination is chosen (uniform random node, or the next route stop
// avoiding the previous one unless it is the only option).
void mobility_step(MobilityState& st, const MapGraph& g, const GroupMobilityConfig& cfg,
                   double now, double dt, double t_end, Rng& rng);

} // namespace dtn
