#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dtn/gp_tree.hpp"
#include "dtn/metrics.hpp"

namespace dtn {
struct ScenarioSpec;
}

namespace dtn::gp {

// Koza-style tableau of the evolutionary run.
struct GpParams {
    int population = 150;
    double offspring_fraction = 0.6;
    double crossover_prob = 0.1;
    double mutation_individual_prob = std::pow(0.1, 2.0 / 3.0);
    double mutation_node_prob = std::pow(0.1, 1.0 / 3.0);
    int tournament_size = 3;
    int init_max_depth = 5;
    int init_max_nodes = 50;
    int steady_fitness_gens = 50;
    int max_gens = 100;
    int threads = 1;
    int fitness_seeds = 1;  // >1 averages delivery probability over consecutive seeds
};

struct EvaluatedIndividual {
    GpTree tree;
    double fitness = 0.0;  // delivery probability; exactly 0 on failure
    uint64_t sim_seed = 0;
    std::optional<SimReport> report;  // empty for unrepairable/failed individuals
};

struct GenerationStats {
    int gen = 0;
    double best_fitness = 0.0;
    double mean_fitness = 0.0;
    std::string best_tree;  // serialized best individual of this generation
};

struct EvolveResult {
    EvaluatedIndividual best;  // best across all generations (ties: fewer nodes)
    std::vector<GenerationStats> generations;
};

// Delivery probability of one tree on one simulated scenario; simulation
// failures map to fitness 0.
EvaluatedIndividual evaluate(const GpTree& tree, const ScenarioSpec& scenario, GpTarget target,
                             uint64_t sim_seed);

// The full loop: grow-initialized population, tournament selection over the
// whole next population, single-node crossover and swap-mutation on the
// offspring fraction, repair before every evaluation, steady-fitness and
// max-generation stop rules. Individuals are evaluated on one shared
// simulation seed per run.
EvolveResult evolve(const ScenarioSpec& scenario, GpTarget target, const GpParams& params,
                    uint64_t run_seed, uint64_t sim_seed,
                    const std::function<void(const GenerationStats&)>& on_generation = nullptr);

// gen,best_fitness,mean_fitness,best_tree rows.
std::string generation_csv(const std::vector<GenerationStats>& generations);

} // namespace dtn::gp
