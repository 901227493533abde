#include "fuzzyplan/ga_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "fuzzyplan/errors.hpp"
#include "fuzzyplan/kernels.hpp"

namespace fuzzyplan {

void validate(const GAConfig& cfg)
{
    if (cfg.populationSize < 2) {
        throw ValidationError("population size must be at least 2");
    }
    if (cfg.maxGenerations < 1) {
        throw ValidationError("max generations must be positive");
    }
    if (!(cfg.mutationProb >= 0.0 && cfg.mutationProb <= 1.0)) {
        throw ValidationError("mutation probability must lie in [0, 1]");
    }
    if (!(cfg.crossoverRate >= 0.0 && cfg.crossoverRate <= 1.0)) {
        throw ValidationError("crossover rate must lie in [0, 1]");
    }
    auto check_bounds = [](const ControllerBounds& b, double value, const char* what) {
        if (!(b.min > 0.0 && b.min <= value && value <= b.max && b.max <= 1.0)) {
            throw ValidationError(std::string(what) + " bounds must satisfy 0 < min <= initial <= max <= 1");
        }
    };
    if (cfg.mode == FitnessMode::AdaptiveFuzzyControlled) {
        check_bounds(cfg.mutationBounds, cfg.mutationProb, "mutation");
        check_bounds(cfg.crossoverBounds, cfg.crossoverRate, "crossover");
    }
    if (cfg.stagnationWindow < 1) {
        throw ValidationError("stagnation window must be positive");
    }
    if (cfg.workers < 1) {
        throw ValidationError("workers must be positive");
    }
    validate(cfg.weights);
}

std::size_t select(std::span<const RankKey> keys, Rng& rng)
{
    const std::size_t first = rng.index(keys.size());
    const std::size_t second = rng.index(keys.size());
    return fitter(keys[second], keys[first]) ? second : first;
}

double diversity(std::span<const PlanChromosome> pop, std::uint64_t sampleSeed)
{
    if (pop.size() < 2 || pop.front().size() == 0) {
        return 0.0;
    }
    const double n = static_cast<double>(pop.front().size());
    auto disagreement = [&](std::size_t i, std::size_t j) {
        return static_cast<double>(kernels::count_mismatches(pop[i].sequence, pop[j].sequence));
    };
    double total = 0.0;
    std::size_t pairs = 0;
    if (pop.size() <= 128) {
        for (std::size_t i = 0; i < pop.size(); ++i) {
            for (std::size_t j = i + 1; j < pop.size(); ++j) {
                total += disagreement(i, j);
                ++pairs;
            }
        }
    } else {
        Rng rng(mix_seed(sampleSeed));
        for (; pairs < 4096; ++pairs) {
            const std::size_t i = rng.index(pop.size());
            std::size_t j = rng.index(pop.size() - 1);
            j += j >= i ? 1 : 0;
            total += disagreement(i, j);
        }
    }
    return total / (static_cast<double>(pairs) * n);
}

std::size_t stagnation(std::span<const GenerationStats> history)
{
    if (history.empty()) {
        return 0;
    }
    std::size_t lastImprovement = 0;
    double best = history.front().maxFitness;
    for (std::size_t g = 1; g < history.size(); ++g) {
        if (history[g].populationAllFeasible != history[g - 1].populationAllFeasible) {
            best = history[g].maxFitness;
            lastImprovement = g;
        } else if (history[g].maxFitness > best) {
            best = history[g].maxFitness;
            lastImprovement = g;
        }
    }
    return history.size() - 1 - lastImprovement;
}

std::pair<double, double> controller_update(std::span<const GenerationStats> history, const FuzzySystem& controller,
                                            const GAConfig& cfg)
{
    if (history.empty()) {
        return {cfg.mutationProb, cfg.crossoverRate};
    }
    const auto& last = history.back();
    const double stagnant = std::min(
        1.0, static_cast<double>(stagnation(history)) / static_cast<double>(cfg.stagnationWindow));

    std::vector<double> crisp(controller.inputs().size(), 0.0);
    crisp[controller.input_index("stagnation")] = stagnant;
    crisp[controller.input_index("diversity")] = last.diversity;
    const double mutMul = controller.infer(crisp, controller.output_index("mutation"));
    const double crossMul = controller.infer(crisp, controller.output_index("crossover"));

    const double mut = std::clamp(last.mutationProb * mutMul, cfg.mutationBounds.min, cfg.mutationBounds.max);
    const double cross = std::clamp(last.crossoverRate * crossMul, cfg.crossoverBounds.min, cfg.crossoverBounds.max);
    return {mut, cross};
}

namespace {

// Evaluates metrics for the whole population, fanning out over threads.
// Each slot is written by exactly one worker, so the result does not
// depend on the worker count.
void evaluate_metrics(const ProductModel& model, std::span<const PlanChromosome> pop, std::span<PlanMetrics> out,
                      std::size_t workers)
{
    workers = std::min(workers, pop.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < pop.size(); ++i) {
            out[i] = metrics(model, pop[i]);
        }
        return;
    }
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    const std::size_t chunk = (pop.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(pop.size(), begin + chunk);
        threads.emplace_back([&, begin, end] {
            for (std::size_t i = begin; i < end; ++i) {
                out[i] = metrics(model, pop[i]);
            }
        });
    }
}

// Fuzzy fitness depends only on (l, o, g); memoized per run.
class FuzzyMemo {
public:
    FuzzyMemo(const FuzzySystem& ranking, std::size_t n)
        : ranking_(ranking), n_(n + 1), values_(n_ * n_ * n_, std::numeric_limits<double>::quiet_NaN())
    {
    }

    double operator()(const PlanMetrics& m)
    {
        double& slot = values_[(m.feasible * n_ + m.orientationChanges) * n_ + m.gripperChanges];
        if (std::isnan(slot)) {
            slot = fuzzy_fitness(m, ranking_);
        }
        return slot;
    }

private:
    const FuzzySystem& ranking_;
    std::size_t n_;
    std::vector<double> values_;
};

} // namespace

RunResult evolve(const ProductModel& model, const GAConfig& cfg, const FuzzyConfig& fuzzy, const EvolveHooks& hooks)
{
    validate(cfg);
    const auto started = std::chrono::steady_clock::now();
    const std::size_t n = model.size();
    const std::size_t popSize = cfg.populationSize;

    Rng rng(cfg.seed);
    std::vector<PlanChromosome> pop;
    pop.reserve(popSize);
    for (std::size_t i = 0; i < popSize; ++i) {
        pop.push_back(random_chromosome(model, rng));
    }

    FitnessContext ctx{cfg.mode, cfg.weights, &fuzzy.ranking, false};
    FuzzyMemo memo(fuzzy.ranking, n);

    double mutationProb = cfg.mutationProb;
    double crossoverRate = cfg.crossoverRate;

    RunResult result;
    result.stats.reserve(cfg.maxGenerations);
    std::vector<PlanMetrics> m(popSize);
    std::vector<double> fitness(popSize);
    std::vector<Ranked> ranking;

    for (std::size_t gen = 0; gen < cfg.maxGenerations; ++gen) {
        evaluate_metrics(model, pop, m, cfg.workers);

        const std::size_t feasibleCount = static_cast<std::size_t>(
            std::count_if(m.begin(), m.end(), [n](const PlanMetrics& pm) { return pm.feasible == n; }));
        if (is_adaptive(cfg.mode) && feasibleCount == popSize) {
            ctx.populationAllFeasible = true; // latched
        }

        for (std::size_t i = 0; i < popSize; ++i) {
            if (hooks.fitnessOverride) {
                fitness[i] = hooks.fitnessOverride(m[i]);
            } else if (cfg.mode == FitnessMode::FuzzyRanking) {
                fitness[i] = memo(m[i]);
            } else {
                fitness[i] = ctx.evaluate(m[i]);
            }
        }
        const auto keys = make_keys(m, fitness, ctx.tie_breaks());
        ranking = rank_keys(keys);

        GenerationStats s;
        s.generation = gen;
        s.maxFitness = ranking.front().fitness;
        double sum = 0.0;
        for (double f : fitness) {
            sum += f;
        }
        // Rounding of the sum may push the mean of equal values above the max.
        s.meanFitness = std::min(sum / static_cast<double>(popSize), s.maxFitness);
        s.bestMetrics = m[ranking.front().index];
        s.mutationProb = mutationProb;
        s.crossoverRate = crossoverRate;
        s.diversity = diversity(pop, cfg.seed ^ gen);
        s.populationAllFeasible = ctx.populationAllFeasible;
        s.feasibleCount = feasibleCount;
        result.stats.push_back(s);

        if (hooks.onGeneration) {
            hooks.onGeneration({gen, pop, m, fitness, ctx.populationAllFeasible});
        }
        if (gen + 1 == cfg.maxGenerations) {
            break;
        }

        if (cfg.mode == FitnessMode::AdaptiveFuzzyControlled) {
            std::tie(mutationProb, crossoverRate) = controller_update(result.stats, fuzzy.controller, cfg);
        }

        std::vector<PlanChromosome> next;
        next.reserve(popSize);
        next.push_back(pop[ranking.front().index]);
        const std::size_t bred = popSize - 1;
        const auto crossed = static_cast<std::size_t>(std::lround(crossoverRate * static_cast<double>(bred)));
        while (next.size() < 1 + crossed) {
            const auto& a = pop[select(keys, rng)];
            const auto& b = pop[select(keys, rng)];
            auto [c1, c2] = crossover(a, b, rng);
            next.push_back(std::move(c1));
            if (next.size() < 1 + crossed) {
                next.push_back(std::move(c2));
            }
        }
        while (next.size() < popSize) {
            next.push_back(pop[select(keys, rng)]);
        }
        for (std::size_t i = 1; i < popSize; ++i) {
            if (rng.bernoulli(mutationProb)) {
                next[i] = mutate(next[i], model, rng);
            }
        }
        pop = std::move(next);
    }

    const auto& top = ranking.front();
    result.best = pop[top.index];
    result.bestMetrics = m[top.index];
    result.bestFitness = top.fitness;
    result.referenceFitness = algebraic_fitness(result.bestMetrics, cfg.weights);
    result.success = cfg.target.has_value() && result.referenceFitness >= *cfg.target - 1e-9;
    result.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - started);
    return result;
}

} // namespace fuzzyplan
