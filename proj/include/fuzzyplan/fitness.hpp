#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fuzzyplan/fuzzy_engine.hpp"
#include "fuzzyplan/plan_encoding.hpp"

namespace fuzzyplan {

struct Weights {
    double feasible = 2.0;    // w1
    double orientation = 1.0; // w2
    double gripper = 1.0;     // w3

    bool operator==(const Weights&) const = default;
};

void validate(const Weights& w);

/// Run modes A-D.
enum class FitnessMode {
    AlgebraicFixed,          // A: weighted algebraic fitness
    FuzzyRanking,            // B: Mamdani ranking function
    AlgebraicAdaptive,       // C: feasibility-only phase, then algebraic
    AdaptiveFuzzyControlled, // D: as C, with fuzzy control of operator rates
};

char mode_letter(FitnessMode mode);
std::optional<FitnessMode> parse_mode(std::string_view text);
bool is_adaptive(FitnessMode mode);

/// w1 * l + w2 * (N - 1 - o) + w3 * (N - 1 - g)
double algebraic_fitness(const PlanMetrics& m, const Weights& w);

/// The feasible length alone until the population has been entirely
/// feasible once, the algebraic fitness afterwards.
double adaptive_fitness(const PlanMetrics& m, const Weights& w, bool populationAllFeasible);

/// Normalized (lN, oN, gN) fed to the ranking system.
std::array<double, 3> normalized_inputs(const PlanMetrics& m);

double fuzzy_fitness(const PlanMetrics& m, const FuzzySystem& ranking);

struct FitnessContext {
    FitnessMode mode = FitnessMode::AlgebraicFixed;
    Weights weights;
    const FuzzySystem* ranking = nullptr; // required for FuzzyRanking
    bool populationAllFeasible = false;   // adaptive phase flag

    double evaluate(const PlanMetrics& m) const;

    /// The adaptive feasibility phase ranks on l alone, without tie-breaks.
    bool tie_breaks() const { return !(is_adaptive(mode) && !populationAllFeasible); }
};

/// Ordering key: higher fitness first, then (when enabled) fewer
/// orientation changes, then fewer gripper changes.
struct RankKey {
    double fitness = 0.0;
    std::size_t orientationChanges = 0;
    std::size_t gripperChanges = 0;
    bool tieBreak = true;
};

/// Strictly better under the ranking order; equal keys compare false.
bool fitter(const RankKey& x, const RankKey& y);

struct Ranked {
    std::size_t index = 0; // position in the input population
    double fitness = 0.0;
};

/// Best first; equal keys keep input order.
std::vector<Ranked> rank_keys(std::span<const RankKey> keys);

std::vector<RankKey> make_keys(std::span<const PlanMetrics> metrics, std::span<const double> fitness,
                               bool tieBreak);

std::vector<Ranked> rank_population(std::span<const PlanMetrics> metrics, const FitnessContext& ctx);

std::vector<Ranked> rank_population(const ProductModel& model, std::span<const PlanChromosome> pop,
                                    const FitnessContext& ctx);

} // namespace fuzzyplan
