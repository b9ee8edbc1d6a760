#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dtn/geometry.hpp"

namespace dtn {

struct MapEdge {
    int a = 0;
    int b = 0;            // a < b
    double length = 0.0;  // Euclidean distance of the endpoints
    uint32_t layers = 1;  // bitmask of the map files this edge appeared in
};

// Undirected geometric road graph. Connected by construction (smaller
// components are pruned on load) and free of zero-length edges. Immutable
// after construction; safe to share read-only across parallel simulations.
struct MapGraph {
    std::vector<Point2D> nodes;
    std::vector<uint32_t> node_layers;  // bitmask per node, parallel to nodes
    std::vector<MapEdge> edges;
    double world_width = 0.0;
    double world_height = 0.0;
    // translation applied on load; route files in the same source coordinate
    // space are shifted by the same amount
    double offset_x = 0.0;
    double offset_y = 0.0;

    // adjacency[v] = (neighbor, edge length), sorted by neighbor index
    std::vector<std::vector<std::pair<int, double>>> adjacency;

    int node_count() const { return static_cast<int>(nodes.size()); }
    void build_adjacency();
};

enum class RouteType { Circular = 1, PingPong = 2 };

// Stop sequence for MapRoute movement; every stop is a graph node index.
struct RouteDefinition {
    std::vector<int> stops;
    RouteType type = RouteType::Circular;
    double max_snap_distance = 0.0;  // largest stop-to-node snap applied on load
};

// Counters reported by the WKT loader / map merger.
struct MapLoadReport {
    int files = 0;
    int raw_nodes = 0;      // unique vertices before pruning
    int raw_edges = 0;
    int pruned_nodes = 0;   // vertices removed with unreachable components
    int pruned_edges = 0;
};

// Parses a WKT subset: LINESTRING, MULTILINESTRING and POINT. Vertices are
// deduplicated by exact coordinate match, consecutive vertices become edges,
// and coordinates are translated so the min corner is (0,0).
MapGraph load_wkt(std::string_view text, MapLoadReport* report = nullptr);

// Union of several WKT layers; layer k is recorded as bit (1 << k).
MapGraph merge_wkt_layers(std::span<const std::string> texts, MapLoadReport* report = nullptr);

// rows x cols lattice with 4-neighbor edges and the given spacing in meters.
MapGraph generate_grid(int rows, int cols, double spacing);

// Sparse irregular road net: n random points joined to their 3 nearest
// neighbors, with components bridged by their closest node pairs.
// Deterministic for a given seed.
MapGraph generate_sparse(int n, double width, double height, uint64_t seed);

// One LINESTRING per edge; coordinates printed losslessly.
std::string to_wkt(const MapGraph& g);

// Node indices of the minimum-length walk from `from` to `to`; first element
// is `from`, last is `to`. Only nodes/edges whose layer bits intersect
// layer_mask are used. Throws std::logic_error if no path exists.
std::vector<int> shortest_path(const MapGraph& g, int from, int to, uint32_t layer_mask = ~0u);

double path_length(const MapGraph& g, std::span<const int> path);

// Nearest graph node to p among nodes matching layer_mask (ties: lowest index).
int nearest_node(const MapGraph& g, Point2D p, uint32_t layer_mask = ~0u);

// Route stops parsed from a WKT LINESTRING and snapped to the nearest nodes.
RouteDefinition load_route(const MapGraph& g, std::string_view wkt_text, RouteType type);

RouteDefinition make_route(const MapGraph& g, std::span<const Point2D> stops, RouteType type);

} // namespace dtn
