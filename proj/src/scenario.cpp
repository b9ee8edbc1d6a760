#include "dtn/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dtn/error.hpp"

namespace dtn {

namespace {

// "0.1" -> (1, 10); keeps the update interval exact in tick arithmetic
std::pair<int64_t, int64_t> parse_decimal_rational(const std::string& text) {
    int64_t num = 0, den = 1;
    size_t i = 0;
    bool seen_digit = false, seen_dot = false;
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (c >= '0' && c <= '9') {
            num = num * 10 + (c - '0');
            if (seen_dot) den *= 10;
            seen_digit = true;
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else {
            throw ConfigError("update interval '" + text + "' must be a plain decimal");
        }
    }
    if (!seen_digit || num == 0) throw ConfigError("update interval must be positive");
    while (num % 10 == 0 && den % 10 == 0) {
        num /= 10;
        den /= 10;
    }
    return {num, den};
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        const size_t p = s.find(sep, start);
        if (p == std::string::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, p - start));
        start = p + 1;
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string resolve_path(const ScenarioSpec& spec, const std::string& path) {
    if (path.empty() || path[0] == '/' || spec.base_dir.empty()) return path;
    return spec.base_dir + "/" + path;
}

} // namespace

ScenarioSpec build_scenario(const Settings& settings) {
    ScenarioSpec spec;
    spec.name = settings.get_string("Scenario.name", "scenario");
    (void)settings.get_string("Scenario.simulateConnections", "true");

    const auto [dt_num, dt_den] =
        parse_decimal_rational(settings.get_string("Scenario.updateInterval", "0.1"));
    spec.params.dt_num = dt_num;
    spec.params.dt_den = dt_den;
    spec.params.end_time = settings.get_double("Scenario.endTime");
    spec.params.warmup = settings.get_double("MovementModel.warmup", 0.0);
    spec.params.seed = static_cast<uint64_t>(settings.get_i64("MovementModel.rngSeed", 1));
    if (settings.has("MovementModel.worldSize")) (void)settings.get_pair("MovementModel.worldSize");

    spec.params.cell_size_mult = settings.get_double("Optimization.cellSizeMult", 5.0);
    spec.params.randomize_update_order =
        settings.get_bool("Optimization.randomizeUpdateOrder", false);
    spec.params.forbid_simultaneous_send_receive =
        settings.get_bool("Scenario.forbidSimultaneousSendReceive", false);

    spec.params.prophet.seconds_in_time_unit =
        settings.get_double("ProphetRouter.secondsInTimeUnit", 30.0);
    spec.params.prophet.p_init = settings.get_double("ProphetRouter.pInit", 0.75);
    spec.params.prophet.beta = settings.get_double("ProphetRouter.beta", 0.25);
    spec.params.prophet.gamma = settings.get_double("ProphetRouter.gammaAging", 0.98);

    // map layers
    const int nrof_maps = static_cast<int>(settings.get_i64("MapBasedMovement.nrofMapFiles", 1));
    for (int k = 1; k <= nrof_maps; ++k)
        spec.map_sources.push_back(
            settings.get_string("MapBasedMovement.mapFile" + std::to_string(k)));

    // host groups
    const int ngroups = static_cast<int>(settings.get_i64("Scenario.nrofHostGroups"));
    auto iface_index = [&spec, &settings](const std::string& name) {
        for (size_t i = 0; i < spec.interfaces.size(); ++i)
            if (spec.interfaces[i].name == name) return static_cast<int>(i);
        InterfaceSpec ifc;
        ifc.name = name;
        (void)settings.get_string(name + ".type", "SimpleBroadcastInterface");
        ifc.transmit_speed = settings.get_double(name + ".transmitSpeed");
        ifc.range = settings.get_double(name + ".transmitRange");
        if (ifc.transmit_speed <= 0 || ifc.range <= 0)
            throw ConfigError("interface '" + name + "' needs positive speed and range");
        spec.interfaces.push_back(ifc);
        return static_cast<int>(spec.interfaces.size() - 1);
    };

    for (int g = 1; g <= ngroups; ++g) {
        GroupSpec gs;
        auto key = [&](const std::string& field) { return settings.group_key(g, field); };
        gs.group_id = settings.get_string(key("groupID"), "p");
        gs.nrof_hosts = static_cast<int>(settings.get_i64(key("nrofHosts")));
        if (gs.nrof_hosts <= 0) throw ConfigError("group " + std::to_string(g) + " has no hosts");
        const std::string model = settings.get_string(key("movementModel"));
        if (model == "ShortestPathMapBasedMovement") {
            gs.model = MobilityModel::ShortestPathMapBased;
        } else if (model == "MapRouteMovement") {
            gs.model = MobilityModel::MapRoute;
            gs.route_file = settings.get_string(key("routeFile"));
            gs.route_type = settings.get_i64(key("routeType"), 1) == 2 ? RouteType::PingPong
                                                                       : RouteType::Circular;
        } else {
            throw ConfigError("unsupported movement model '" + model + "'");
        }
        std::tie(gs.speed_min, gs.speed_max) = settings.get_pair(key("speed"));
        std::tie(gs.wait_min, gs.wait_max) = settings.get_pair(key("waitTime"));
        if (gs.speed_min <= 0 || gs.speed_max < gs.speed_min)
            throw ConfigError("group " + std::to_string(g) + " has an invalid speed range");
        if (gs.wait_min < 0 || gs.wait_max < gs.wait_min)
            throw ConfigError("group " + std::to_string(g) + " has an invalid wait range");
        gs.buffer_size = settings.get_i64(key("bufferSize"));
        gs.msg_ttl_minutes = settings.get_double(key("msgTtl"), 300.0);
        const int nifaces = static_cast<int>(settings.get_i64(key("nrofInterfaces"), 1));
        for (int k = 1; k <= nifaces; ++k)
            gs.ifaces.push_back(
                iface_index(settings.get_string(key("interface" + std::to_string(k)))));
        if (settings.has(key("okMaps"))) {
            gs.ok_maps = 0;
            for (const std::string& layer : split(settings.get_string(key("okMaps")), ','))
                gs.ok_maps |= 1u << (parse_size_value(layer) - 1);
        }
        (void)settings.get_string(key("router"), "");
        spec.groups.push_back(std::move(gs));
    }

    // event generator
    const int64_t nrof_events = settings.get_i64("Events.nrof", 1);
    if (nrof_events != 1) throw ConfigError("exactly one event generator is supported");
    (void)settings.get_string("Events1.class", "MessageEventGenerator");
    std::tie(spec.params.msg_interval_min, spec.params.msg_interval_max) =
        settings.get_pair("Events1.interval");
    std::tie(spec.params.msg_size_min, spec.params.msg_size_max) =
        settings.get_pair_i64("Events1.size");
    const auto hosts_range = settings.get_pair_i64("Events1.hosts");
    spec.params.msg_hosts_lo = static_cast<int>(hosts_range.first);
    spec.params.msg_hosts_hi = static_cast<int>(hosts_range.second);
    spec.params.msg_prefix = settings.get_string("Events1.prefix", "M");

    const int total = spec.total_hosts();
    if (spec.params.msg_hosts_lo < 0 || spec.params.msg_hosts_hi > total ||
        spec.params.msg_hosts_hi - spec.params.msg_hosts_lo < 2)
        throw ConfigError("Events1.hosts range [" + std::to_string(spec.params.msg_hosts_lo) +
                          "," + std::to_string(spec.params.msg_hosts_hi) +
                          ") is inconsistent with " + std::to_string(total) + " hosts");

    // report keys are accepted for settings-file compatibility
    (void)settings.get_string("Report.nrofReports", "");
    (void)settings.get_string("Report.warmup", "");
    (void)settings.get_string("Report.reportDir", "");
    for (int k = 1; k <= 4; ++k) (void)settings.get_string("Report.report" + std::to_string(k), "");

    for (const std::string& key : settings.unread_keys())
        spec.warnings.push_back("unknown setting '" + key + "' ignored");
    return spec;
}

// ---------------------------------------------------------------------------
// map / route resolution
// ---------------------------------------------------------------------------

namespace {

MapGraph synthetic_map(const std::string& uri) {
    const auto parts = split(uri, ':');  // synthetic : kind : args
    if (parts.size() != 3) throw ConfigError("malformed synthetic map '" + uri + "'");
    const auto args = split(parts[2], ',');
    if (parts[1] == "grid") {
        if (args.size() != 3) throw ConfigError("synthetic:grid needs ROWS,COLS,SPACING");
        return generate_grid(static_cast<int>(std::stol(args[0])),
                             static_cast<int>(std::stol(args[1])), std::stod(args[2]));
    }
    if (parts[1] == "sparse") {
        if (args.size() != 4) throw ConfigError("synthetic:sparse needs N,WIDTH,HEIGHT,SEED");
        return generate_sparse(static_cast<int>(std::stol(args[0])), std::stod(args[1]),
                               std::stod(args[2]), std::stoull(args[3]));
    }
    throw ConfigError("unknown synthetic map kind '" + parts[1] + "'");
}

std::shared_ptr<const RouteDefinition> resolve_route(const ScenarioSpec& spec, const MapGraph& map,
                                                     const GroupSpec& gs) {
    if (gs.route_file.starts_with("synthetic:")) {
        const auto parts = split(gs.route_file, ':');
        if (parts.size() != 3) throw ConfigError("malformed synthetic route '" + gs.route_file + "'");
        const auto args = split(parts[2], ',');
        std::vector<Point2D> stops;
        if (parts[1] == "rect") {
            if (args.size() != 4) throw ConfigError("synthetic:rect needs X0,Y0,X1,Y1");
            const double x0 = std::stod(args[0]), y0 = std::stod(args[1]);
            const double x1 = std::stod(args[2]), y1 = std::stod(args[3]);
            stops = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
        } else if (parts[1] == "randomstops") {
            if (args.size() != 2) throw ConfigError("synthetic:randomstops needs N,SEED");
            const int n = static_cast<int>(std::stol(args[0]));
            if (n < 2) throw ConfigError("synthetic:randomstops needs N >= 2");
            Rng rng(mix_seed(std::stoull(args[1])));
            for (int i = 0; i < n; ++i) {
                int node;
                do {
                    node = static_cast<int>(rng.uniform_index(map.nodes.size()));
                } while (!stops.empty() && map.nodes[node] == stops.back());
                stops.push_back(map.nodes[node]);
            }
        } else {
            throw ConfigError("unknown synthetic route kind '" + parts[1] + "'");
        }
        return std::make_shared<RouteDefinition>(make_route(map, stops, gs.route_type));
    }
    return std::make_shared<RouteDefinition>(
        load_route(map, read_file(resolve_path(spec, gs.route_file)), gs.route_type));
}

} // namespace

MapGraph load_map(const ScenarioSpec& spec, MapLoadReport* report) {
    if (spec.map_sources.empty()) throw ConfigError("scenario has no map sources");
    if (spec.map_sources.size() == 1 && spec.map_sources[0].starts_with("synthetic:")) {
        if (report) *report = MapLoadReport{.files = 1};
        return synthetic_map(spec.map_sources[0]);
    }
    std::vector<std::string> layers;
    for (const std::string& src : spec.map_sources) {
        if (src.starts_with("synthetic:"))
            layers.push_back(to_wkt(synthetic_map(src)));
        else
            layers.push_back(read_file(resolve_path(spec, src)));
    }
    return merge_wkt_layers(layers, report);
}

RouterChoice parse_router_choice(const std::string& text, std::optional<gp::GpTree>& storage) {
    RouterChoice rc;
    if (text == "epidemic") {
        rc.kind = RouterKind::Epidemic;
    } else if (text == "prophet") {
        rc.kind = RouterKind::Prophet;
    } else if (text.starts_with("tree:")) {
        const std::string path = text.substr(5);
        storage = gp::parse_tree(read_file(path));
        if (!gp::check_validity(*storage))
            throw ConfigError("tree file '" + path + "' does not pass the validity check");
        rc.tree = &*storage;
        rc.kind = gp::contains_op(storage->root, gp::GpOp::TryOtherMessages)
                      ? RouterKind::EvolvedProphet
                      : RouterKind::EvolvedEpidemic;
    } else {
        throw ConfigError("router must be 'epidemic', 'prophet' or 'tree:<path>'");
    }
    return rc;
}

std::unique_ptr<World> make_world(const ScenarioSpec& spec, RouterChoice router,
                                  std::optional<uint64_t> seed_override) {
    MapGraph map = load_map(spec);

    WorldParams params = spec.params;
    if (seed_override) params.seed = *seed_override;

    std::vector<RadioInterface> ifaces;
    for (const InterfaceSpec& i : spec.interfaces)
        ifaces.push_back({i.name, i.transmit_speed, i.range});

    std::vector<HostGroupConfig> groups;
    for (const GroupSpec& gs : spec.groups) {
        HostGroupConfig cfg;
        cfg.mobility.model = gs.model;
        cfg.mobility.speed_min = gs.speed_min;
        cfg.mobility.speed_max = gs.speed_max;
        cfg.mobility.wait_min = gs.wait_min;
        cfg.mobility.wait_max = gs.wait_max;
        cfg.mobility.layer_mask = gs.ok_maps;
        if (gs.model == MobilityModel::MapRoute)
            cfg.mobility.route = resolve_route(spec, map, gs);
        cfg.ifaces = gs.ifaces;
        cfg.buffer_capacity = gs.buffer_size;
        cfg.ttl_seconds = gs.msg_ttl_minutes * 60.0;
        cfg.group_id = gs.group_id;
        groups.push_back(std::move(cfg));
    }

    auto world = std::make_unique<World>(std::move(map), std::move(ifaces), std::move(groups),
                                         params);
    for (size_t g = 0; g < spec.groups.size(); ++g)
        for (int i = 0; i < spec.groups[g].nrof_hosts; ++i)
            world->add_host(static_cast<int>(g), router.kind, router.tree);
    return world;
}

SimulationResult run_simulation(const ScenarioSpec& spec, RouterChoice router,
                                std::optional<uint64_t> seed_override, bool keep_events) {
    auto world = make_world(spec, router, seed_override);
    world->run();
    SimulationResult out;
    out.report = compute_report(world->log());
    out.in_flight_at_end = world->active_transfer_count();
    if (keep_events) out.events_csv = world->events_csv();
    return out;
}

} // namespace dtn
