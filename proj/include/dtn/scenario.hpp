#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dtn/gp_tree.hpp"
#include "dtn/metrics.hpp"
#include "dtn/netsim.hpp"
#include "dtn/settings.hpp"

namespace dtn {

struct InterfaceSpec {
    std::string name;
    double transmit_speed = 0.0;
    double range = 0.0;
};

struct GroupSpec {
    std::string group_id = "p";
    int nrof_hosts = 0;
    MobilityModel model = MobilityModel::ShortestPathMapBased;
    double speed_min = 0.5, speed_max = 1.5;
    double wait_min = 0.0, wait_max = 120.0;
    int64_t buffer_size = 5'000'000;
    double msg_ttl_minutes = 300.0;
    std::vector<int> ifaces;              // indices into ScenarioSpec::interfaces
    std::string route_file;               // MapRoute only; path or synthetic: URI
    RouteType route_type = RouteType::Circular;
    uint32_t ok_maps = ~0u;               // layer whitelist
};

// Fully resolved scenario: what build_scenario() extracts from a settings
// file. Map/route sources stay symbolic until a World is instantiated.
struct ScenarioSpec {
    std::string name = "scenario";
    std::vector<std::string> map_sources;  // file paths or synthetic: URIs
    std::string base_dir;                  // directory of the settings file
    std::vector<InterfaceSpec> interfaces;
    std::vector<GroupSpec> groups;
    WorldParams params;
    std::vector<std::string> warnings;     // unknown settings keys

    int total_hosts() const {
        int n = 0;
        for (const GroupSpec& g : groups) n += g.nrof_hosts;
        return n;
    }
};

// Resolves group defaults/overrides, interfaces, event generator parameters
// and consistency of the host address range. Unknown keys end up in
// spec.warnings.
ScenarioSpec build_scenario(const Settings& settings);

// Map sources:  path/to/file.wkt | synthetic:grid:ROWS,COLS,SPACING |
//               synthetic:sparse:N,WIDTH,HEIGHT,SEED
// Route specs:  path/to/route.wkt | synthetic:rect:X0,Y0,X1,Y1 |
//               synthetic:randomstops:N,SEED
MapGraph load_map(const ScenarioSpec& spec, MapLoadReport* report = nullptr);

struct RouterChoice {
    RouterKind kind = RouterKind::Epidemic;
    const gp::GpTree* tree = nullptr;  // evolved kinds
};

// "epidemic" | "prophet" | "tree:<path>"; the tree target is Prophet when the
// tree mentions tryOtherMessages, Epidemic otherwise.
RouterChoice parse_router_choice(const std::string& text, std::optional<gp::GpTree>& storage);

// Builds the world: loads/generates the map, resolves routes, instantiates
// hosts group by group. seed_override replaces MovementModel.rngSeed.
std::unique_ptr<World> make_world(const ScenarioSpec& spec, RouterChoice router,
                                  std::optional<uint64_t> seed_override = {});

struct SimulationResult {
    SimReport report;
    std::string events_csv;
    int in_flight_at_end = 0;
};

SimulationResult run_simulation(const ScenarioSpec& spec, RouterChoice router,
                                std::optional<uint64_t> seed_override = {},
                                bool keep_events = true);

} // namespace dtn
