#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fuzzyplan/fitness.hpp"
#include "fuzzyplan/fuzzy_engine.hpp"
#include "fuzzyplan/plan_encoding.hpp"
#include "fuzzyplan/product_model.hpp"
#include "fuzzyplan/random.hpp"

namespace fuzzyplan {

struct ControllerBounds {
    double min = 0.0;
    double max = 1.0;

    bool operator==(const ControllerBounds&) const = default;
};

struct GAConfig {
    std::size_t populationSize = 80;
    double mutationProb = 0.8;  // per individual
    double crossoverRate = 0.4; // share of each new generation bred by crossover
    std::size_t maxGenerations = 300;
    FitnessMode mode = FitnessMode::AlgebraicFixed;
    Weights weights;
    std::uint64_t seed = 1;
    ControllerBounds mutationBounds{0.2, 1.0};
    ControllerBounds crossoverBounds{0.1, 0.9};
    std::size_t stagnationWindow = 20; // generations without improvement that count as fully stagnant
    std::size_t workers = 1;           // threads used to evaluate a generation
    std::optional<double> target;      // success threshold on the algebraic fitness
};

void validate(const GAConfig& cfg);

struct GenerationStats {
    std::size_t generation = 0;
    double maxFitness = 0.0;
    double meanFitness = 0.0;
    PlanMetrics bestMetrics;
    double mutationProb = 0.0;  // rate that produced this generation
    double crossoverRate = 0.0; // rate that produced this generation
    double diversity = 0.0;
    bool populationAllFeasible = false; // adaptive phase flag used for this generation's fitness
    std::size_t feasibleCount = 0;      // individuals with a complete feasible sequence
};

struct RunResult {
    PlanChromosome best;
    PlanMetrics bestMetrics;
    double bestFitness = 0.0;     // under the run's mode
    double referenceFitness = 0.0; // algebraic fitness of `best` under the run's weights
    bool success = false;
    std::vector<GenerationStats> stats;
    std::chrono::nanoseconds elapsed{0};
};

/// Read-only view of one evaluated generation, for observers.
struct GenerationView {
    std::size_t generation = 0;
    std::span<const PlanChromosome> population;
    std::span<const PlanMetrics> metrics;
    std::span<const double> fitness;
    bool populationAllFeasible = false;
};

struct EvolveHooks {
    /// Replaces the mode's fitness when set.
    std::function<double(const PlanMetrics&)> fitnessOverride;
    std::function<void(const GenerationView&)> onGeneration;
};

/// Generational GA: evaluate, record statistics, then breed the next
/// generation with elitism 1, binary tournament selection, order crossover
/// and mutation. Deterministic for a fixed seed regardless of `workers`.
RunResult evolve(const ProductModel& model, const GAConfig& cfg, const FuzzyConfig& fuzzy = {},
                 const EvolveHooks& hooks = {});

/// Binary tournament: draws two indices, returns the fitter one (the first
/// drawn on equal keys).
std::size_t select(std::span<const RankKey> keys, Rng& rng);

/// Mean positionwise sequence disagreement over all pairs (or 4096 sampled
/// pairs for populations above 128), divided by the component count.
double diversity(std::span<const PlanChromosome> pop, std::uint64_t sampleSeed = 0);

/// Generations since the last strict improvement of the max fitness within
/// the current adaptive phase.
std::size_t stagnation(std::span<const GenerationStats> history);

/// Next (mutationProb, crossoverRate): current values times the controller
/// multipliers, clamped to the configured bounds.
std::pair<double, double> controller_update(std::span<const GenerationStats> history, const FuzzySystem& controller,
                                            const GAConfig& cfg);

} // namespace fuzzyplan
