#include "dtn/gp_evolve.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <thread>

#include "dtn/scenario.hpp"

namespace dtn::gp {

EvaluatedIndividual evaluate(const GpTree& tree, const ScenarioSpec& scenario, GpTarget target,
                             uint64_t sim_seed) {
    EvaluatedIndividual out;
    out.tree = tree;
    out.sim_seed = sim_seed;
    if (!check_validity(tree)) return out;  // fitness 0, never simulated
    RouterChoice router;
    router.kind = target == GpTarget::Prophet ? RouterKind::EvolvedProphet
                                              : RouterKind::EvolvedEpidemic;
    router.tree = &tree;
    try {
        SimulationResult sim = run_simulation(scenario, router, sim_seed, /*keep_events=*/false);
        out.report = sim.report;
        out.fitness = sim.report.delivery_probability;
    } catch (const std::exception&) {
        out.report.reset();
        out.fitness = 0.0;
    }
    return out;
}

namespace {

double fitness_over_seeds(const GpTree& tree, const ScenarioSpec& scenario, GpTarget target,
                          uint64_t sim_seed, int seeds, EvaluatedIndividual& out) {
    if (seeds <= 1) {
        out = evaluate(tree, scenario, target, sim_seed);
        return out.fitness;
    }
    double sum = 0.0;
    for (int s = 0; s < seeds; ++s) {
        EvaluatedIndividual e = evaluate(tree, scenario, target, sim_seed + s);
        if (s == 0) out = e;
        sum += e.fitness;
    }
    out.fitness = sum / seeds;
    return out.fitness;
}

} // namespace

EvolveResult evolve(const ScenarioSpec& scenario, GpTarget target, const GpParams& params,
                    uint64_t run_seed, uint64_t sim_seed,
                    const std::function<void(const GenerationStats&)>& on_generation) {
    Rng rng(mix_seed(run_seed));
    const int n = params.population;

    std::vector<GpTree> pop;
    pop.reserve(n);
    for (int i = 0; i < n; ++i)
        pop.push_back(grow_random(rng, target, params.init_max_depth, params.init_max_nodes));

    EvolveResult result;
    int best_gen = 0;  // last generation with a strict best-fitness improvement
    double best_fitness_seen = -1.0;
    bool have_best = false;

    std::vector<EvaluatedIndividual> evaluated(n);
    for (int gen = 0;; ++gen) {
        // repair sequentially (draws from the run stream), evaluate in parallel
        std::vector<bool> repairable(n, true);
        for (int i = 0; i < n; ++i) {
            auto fixed = repair(pop[i], rng, target);
            if (fixed) {
                pop[i] = std::move(*fixed);
                pop[i].unique_id = "g" + std::to_string(gen) + "-i" + std::to_string(i);
            } else {
                repairable[i] = false;
            }
        }

        const int threads = std::max(1, params.threads);
        std::atomic<int> next{0};
        auto worker = [&]() {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                if (!repairable[i]) {
                    evaluated[i] = EvaluatedIndividual{pop[i], 0.0, sim_seed, std::nullopt};
                    continue;
                }
                fitness_over_seeds(pop[i], scenario, target, sim_seed, params.fitness_seeds,
                                   evaluated[i]);
            }
        };
        if (threads == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
            for (auto& t : pool) t.join();
        }

        GenerationStats stats;
        stats.gen = gen;
        int gen_best = 0;
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            sum += evaluated[i].fitness;
            if (evaluated[i].fitness > evaluated[gen_best].fitness) gen_best = i;
        }
        stats.best_fitness = evaluated[gen_best].fitness;
        stats.mean_fitness = sum / n;
        stats.best_tree = serialize(evaluated[gen_best].tree);
        result.generations.push_back(stats);
        if (on_generation) on_generation(stats);

        for (int i = 0; i < n; ++i) {
            const EvaluatedIndividual& e = evaluated[i];
            const bool better =
                !have_best || e.fitness > result.best.fitness ||
                (e.fitness == result.best.fitness &&
                 node_count(e.tree.root) < node_count(result.best.tree.root));
            if (better) {
                result.best = e;
                have_best = true;
            }
        }
        if (stats.best_fitness > best_fitness_seen) {
            best_fitness_seen = stats.best_fitness;
            best_gen = gen;
        }

        if (gen - best_gen >= params.steady_fitness_gens) break;
        if (gen + 1 >= params.max_gens) break;

        // tournament selection fills the entire next population
        std::vector<GpTree> next_pop;
        next_pop.reserve(n);
        for (int slot = 0; slot < n; ++slot) {
            int winner = -1;
            for (int t = 0; t < params.tournament_size; ++t) {
                const int cand = static_cast<int>(rng.uniform_index(n));
                if (winner < 0 || evaluated[cand].fitness > evaluated[winner].fitness)
                    winner = cand;
            }
            next_pop.push_back(evaluated[winner].tree);
        }

        // the first offspring_fraction*n selected are altered; the rest survive
        const int n_offspring = static_cast<int>(std::lround(params.offspring_fraction * n));

        std::vector<int> cx;
        for (int i = 0; i < n_offspring; ++i)
            if (rng.bernoulli(params.crossover_prob)) cx.push_back(i);
        for (size_t i = cx.size(); i > 1; --i)
            std::swap(cx[i - 1], cx[rng.uniform_index(i)]);
        for (size_t p = 0; p + 1 < cx.size(); p += 2) {
            auto [oa, ob] = crossover(next_pop[cx[p]], next_pop[cx[p + 1]], rng);
            next_pop[cx[p]] = std::move(oa);
            next_pop[cx[p + 1]] = std::move(ob);
        }

        for (int i = 0; i < n_offspring; ++i)
            if (rng.bernoulli(params.mutation_individual_prob))
                next_pop[i] = mutate(next_pop[i], rng, params.mutation_node_prob);

        pop = std::move(next_pop);
    }
    return result;
}

std::string generation_csv(const std::vector<GenerationStats>& generations) {
    std::string out = "gen,best_fitness,mean_fitness,best_tree\n";
    char buf[64];
    for (const GenerationStats& g : generations) {
        std::snprintf(buf, sizeof buf, "%d,%.6f,%.6f,", g.gen, g.best_fitness, g.mean_fitness);
        out += buf;
        out += '"' + g.best_tree + '"';
        out += '\n';
    }
    return out;
}

} // namespace dtn::gp
