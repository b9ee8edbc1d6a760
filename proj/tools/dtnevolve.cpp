// Command-line front end: simulate | evolve | compare | crosstest.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "dtn/error.hpp"
#include "dtn/gp_evolve.hpp"
#include "dtn/scenario.hpp"

namespace fs = std::filesystem;
using namespace dtn;

namespace {

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << content;
}

ScenarioSpec load_scenario(const std::string& settings_path, bool print_warnings = true) {
    Settings settings = Settings::parse_file(settings_path);
    ScenarioSpec spec = build_scenario(settings);
    spec.base_dir = fs::path(settings_path).parent_path().string();
    if (print_warnings)
        for (const std::string& w : spec.warnings) std::cerr << "warning: " << w << "\n";
    return spec;
}

std::vector<double> delivery_samples(const ScenarioSpec& spec, const std::string& router_text,
                                     uint64_t base_seed, int seeds) {
    std::optional<gp::GpTree> tree;
    RouterChoice router = parse_router_choice(router_text, tree);
    std::vector<double> out;
    for (int s = 0; s < seeds; ++s) {
        SimulationResult r = run_simulation(spec, router, base_seed + s, /*keep_events=*/false);
        out.push_back(r.report.delivery_probability);
    }
    return out;
}

std::vector<double> samples_from_reports(const std::vector<std::string>& files) {
    std::vector<double> out;
    for (const std::string& f : files) {
        std::ifstream in(f);
        if (!in) throw ConfigError("cannot open report file '" + f + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        out.push_back(SimReport::parse(ss.str()).delivery_probability);
    }
    return out;
}

std::string comparison_csv(const std::string& label_a, const std::string& label_b,
                           const ComparisonResult& c) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%s,%s,%zu,%zu,%.6f,%.6f,%.6f\n", label_a.c_str(),
                  label_b.c_str(), c.sample_a.size(), c.sample_b.size(), c.median_a, c.median_b,
                  c.p_value);
    return std::string("side_a,side_b,n_a,n_b,median_a,median_b,p_value\n") + buf;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Delay-tolerant-network simulation and routing-protocol evolution"};
    app.require_subcommand(1);

    std::string settings_path, out_dir = ".";
    std::string router_text = "epidemic";
    std::string target_text = "epidemic";
    std::string tree_path;
    std::string router_a = "epidemic", router_b = "epidemic";
    std::vector<std::string> reports_a, reports_b, baseline_reports;
    int64_t seed = -1;
    uint64_t run_seed = 1;
    int seeds = 10;
    int pop = -1, gens = -1, steady = -1;
    int threads = static_cast<int>(std::thread::hardware_concurrency());
    int fitness_seeds = 1;
    int64_t sim_seed = -1;
    bool events_csv = false;

    auto* sim = app.add_subcommand("simulate", "Run one simulation and write the report");
    sim->add_option("--settings", settings_path, "settings file")->required();
    sim->add_option("--router", router_text, "epidemic | prophet | tree:<path>");
    sim->add_option("--seed", seed, "override MovementModel.rngSeed");
    sim->add_option("--out-dir", out_dir, "output directory");
    sim->add_flag("--events-csv", events_csv, "also write the event log CSV");

    auto* evo = app.add_subcommand("evolve", "Evolve the router update body");
    evo->add_option("--settings", settings_path, "settings file")->required();
    evo->add_option("--target", target_text, "epidemic | prophet");
    evo->add_option("--run-seed", run_seed, "seed of the evolutionary run");
    evo->add_option("--sim-seed", sim_seed, "simulation seed shared by all evaluations");
    evo->add_option("--pop", pop, "population size");
    evo->add_option("--gens", gens, "maximum number of generations");
    evo->add_option("--steady", steady, "steady-fitness stop (generations)");
    evo->add_option("--threads", threads, "parallel fitness evaluations");
    evo->add_option("--fitness-seeds", fitness_seeds, "average fitness over this many seeds");
    evo->add_option("--out-dir", out_dir, "output directory");

    auto* cmp = app.add_subcommand("compare", "Median delivery probability + rank-sum p-value");
    cmp->add_option("--settings", settings_path, "settings file (simulation mode)");
    cmp->add_option("--router-a", router_a, "side A router");
    cmp->add_option("--router-b", router_b, "side B router");
    cmp->add_option("--seeds", seeds, "simulations per side");
    cmp->add_option("--seed", seed, "base seed");
    cmp->add_option("--reports-a", reports_a, "side A report files (report mode)");
    cmp->add_option("--reports-b", reports_b, "side B report files (report mode)");
    cmp->add_option("--out-dir", out_dir, "output directory");

    auto* cross = app.add_subcommand("crosstest", "Evaluate a foreign tree on a target scenario");
    cross->add_option("--tree", tree_path, "evolved tree file")->required();
    cross->add_option("--settings", settings_path, "target scenario settings")->required();
    cross->add_option("--seeds", seeds, "simulations for the tree sample");
    cross->add_option("--seed", seed, "base seed");
    cross->add_option("--baseline-reports", baseline_reports, "baseline report files");
    cross->add_option("--baseline-router", router_b, "simulate the baseline side instead");
    cross->add_option("--out-dir", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            ScenarioSpec spec = load_scenario(settings_path);
            std::optional<gp::GpTree> tree;
            RouterChoice router = parse_router_choice(router_text, tree);
            std::optional<uint64_t> seed_override;
            if (seed >= 0) seed_override = static_cast<uint64_t>(seed);
            SimulationResult r = run_simulation(spec, router, seed_override, events_csv);
            write_file(fs::path(out_dir) / "report.txt", r.report.serialize());
            if (events_csv) write_file(fs::path(out_dir) / "events.csv", r.events_csv);
            std::cout << r.report.serialize();
        } else if (evo->parsed()) {
            ScenarioSpec spec = load_scenario(settings_path);
            if (target_text != "prophet" && target_text != "epidemic")
                throw ConfigError("target must be 'epidemic' or 'prophet'");
            const gp::GpTarget target =
                target_text == "prophet" ? gp::GpTarget::Prophet : gp::GpTarget::Epidemic;
            gp::GpParams params;
            if (pop > 0) params.population = pop;
            if (gens > 0) params.max_gens = gens;
            if (steady > 0) params.steady_fitness_gens = steady;
            params.threads = std::max(1, threads);
            params.fitness_seeds = std::max(1, fitness_seeds);
            const uint64_t ss = sim_seed >= 0 ? static_cast<uint64_t>(sim_seed) : spec.params.seed;
            gp::EvolveResult res = gp::evolve(spec, target, params, run_seed, ss,
                                              [](const gp::GenerationStats& g) {
                                                  std::cout << "gen " << g.gen << " best "
                                                            << g.best_fitness << " mean "
                                                            << g.mean_fitness << "\n";
                                              });
            write_file(fs::path(out_dir) / "best_tree.txt", gp::serialize(res.best.tree) + "\n");
            write_file(fs::path(out_dir) / "generations.csv",
                       gp::generation_csv(res.generations));
            if (res.best.report)
                write_file(fs::path(out_dir) / "best_report.txt", res.best.report->serialize());
            std::cout << "best fitness " << res.best.fitness << " ("
                      << gp::serialize(res.best.tree) << ")\n";
        } else if (cmp->parsed()) {
            std::vector<double> a, b;
            std::string label_a, label_b;
            if (!reports_a.empty() || !reports_b.empty()) {
                if (reports_a.empty() || reports_b.empty())
                    throw ConfigError("report mode needs both --reports-a and --reports-b");
                a = samples_from_reports(reports_a);
                b = samples_from_reports(reports_b);
                label_a = "reports_a";
                label_b = "reports_b";
            } else {
                if (settings_path.empty()) throw ConfigError("simulation mode needs --settings");
                ScenarioSpec spec = load_scenario(settings_path);
                const uint64_t base = seed >= 0 ? static_cast<uint64_t>(seed) : spec.params.seed;
                a = delivery_samples(spec, router_a, base, seeds);
                b = delivery_samples(spec, router_b, base, seeds);
                label_a = router_a;
                label_b = router_b;
            }
            if (a.size() < 2 || b.size() < 2)
                throw ConfigError("compare needs at least 2 runs per side");
            const ComparisonResult c = compare_samples(std::move(a), std::move(b));
            const std::string csv = comparison_csv(label_a, label_b, c);
            write_file(fs::path(out_dir) / "comparison.csv", csv);
            std::cout << csv;
        } else if (cross->parsed()) {
            ScenarioSpec spec = load_scenario(settings_path);
            const uint64_t base = seed >= 0 ? static_cast<uint64_t>(seed) : spec.params.seed;
            std::vector<double> tree_sample =
                delivery_samples(spec, "tree:" + tree_path, base, seeds);
            std::vector<double> baseline;
            std::string label_b;
            if (!baseline_reports.empty()) {
                baseline = samples_from_reports(baseline_reports);
                label_b = "baseline_reports";
            } else {
                baseline = delivery_samples(spec, router_b, base, seeds);
                label_b = router_b;
            }
            const ComparisonResult c = compare_samples(std::move(tree_sample), std::move(baseline));
            const std::string csv = comparison_csv("tree:" + tree_path, label_b, c);
            write_file(fs::path(out_dir) / "crosstest.csv", csv);
            std::cout << csv;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
