#include "fuzzyplan/fitness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fuzzyplan/errors.hpp"

namespace fuzzyplan {

void validate(const Weights& w)
{
    for (double v : {w.feasible, w.orientation, w.gripper}) {
        if (!std::isfinite(v) || v < 0.0) {
            throw ValidationError("weights: every weight must be a finite non-negative number");
        }
    }
    if (!(w.feasible + w.orientation + w.gripper > 0.0)) {
        throw ValidationError("weights: at least one weight must be positive");
    }
}

char mode_letter(FitnessMode mode)
{
    switch (mode) {
    case FitnessMode::AlgebraicFixed: return 'A';
    case FitnessMode::FuzzyRanking: return 'B';
    case FitnessMode::AlgebraicAdaptive: return 'C';
    case FitnessMode::AdaptiveFuzzyControlled: return 'D';
    }
    return '?';
}

std::optional<FitnessMode> parse_mode(std::string_view text)
{
    if (text.size() != 1) {
        return std::nullopt;
    }
    switch (text[0]) {
    case 'A': case 'a': return FitnessMode::AlgebraicFixed;
    case 'B': case 'b': return FitnessMode::FuzzyRanking;
    case 'C': case 'c': return FitnessMode::AlgebraicAdaptive;
    case 'D': case 'd': return FitnessMode::AdaptiveFuzzyControlled;
    default: return std::nullopt;
    }
}

bool is_adaptive(FitnessMode mode)
{
    return mode == FitnessMode::AlgebraicAdaptive || mode == FitnessMode::AdaptiveFuzzyControlled;
}

double algebraic_fitness(const PlanMetrics& m, const Weights& w)
{
    const double n = static_cast<double>(m.components);
    return w.feasible * static_cast<double>(m.feasible)
        + w.orientation * (n - 1.0 - static_cast<double>(m.orientationChanges))
        + w.gripper * (n - 1.0 - static_cast<double>(m.gripperChanges));
}

double adaptive_fitness(const PlanMetrics& m, const Weights& w, bool populationAllFeasible)
{
    return populationAllFeasible ? algebraic_fitness(m, w) : static_cast<double>(m.feasible);
}

std::array<double, 3> normalized_inputs(const PlanMetrics& m)
{
    const double n = static_cast<double>(std::max<std::size_t>(m.components, 1));
    const double span = static_cast<double>(std::max<std::size_t>(m.feasible, 2) - 1);
    return {static_cast<double>(m.feasible) / n, 1.0 - static_cast<double>(m.orientationChanges) / span,
            1.0 - static_cast<double>(m.gripperChanges) / span};
}

double fuzzy_fitness(const PlanMetrics& m, const FuzzySystem& ranking)
{
    const auto in = normalized_inputs(m);
    std::array<double, 3> ordered{};
    ordered[ranking.input_index("lN")] = in[0];
    ordered[ranking.input_index("oN")] = in[1];
    ordered[ranking.input_index("gN")] = in[2];
    return ranking.infer(ordered, ranking.output_index("quality"));
}

double FitnessContext::evaluate(const PlanMetrics& m) const
{
    switch (mode) {
    case FitnessMode::AlgebraicFixed: return algebraic_fitness(m, weights);
    case FitnessMode::FuzzyRanking:
        if (ranking == nullptr) {
            throw ValidationError("fuzzy ranking mode requires a ranking system");
        }
        return fuzzy_fitness(m, *ranking);
    case FitnessMode::AlgebraicAdaptive:
    case FitnessMode::AdaptiveFuzzyControlled: return adaptive_fitness(m, weights, populationAllFeasible);
    }
    return 0.0;
}

bool fitter(const RankKey& x, const RankKey& y)
{
    if (x.fitness != y.fitness) {
        return x.fitness > y.fitness;
    }
    if (!x.tieBreak || !y.tieBreak) {
        return false;
    }
    if (x.orientationChanges != y.orientationChanges) {
        return x.orientationChanges < y.orientationChanges;
    }
    return x.gripperChanges < y.gripperChanges;
}

std::vector<Ranked> rank_keys(std::span<const RankKey> keys)
{
    std::vector<std::size_t> order(keys.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return fitter(keys[i], keys[j]); });
    std::vector<Ranked> out;
    out.reserve(order.size());
    for (auto i : order) {
        out.push_back({i, keys[i].fitness});
    }
    return out;
}

std::vector<RankKey> make_keys(std::span<const PlanMetrics> metrics, std::span<const double> fitness, bool tieBreak)
{
    std::vector<RankKey> keys(metrics.size());
    for (std::size_t i = 0; i < metrics.size(); ++i) {
        keys[i] = {fitness[i], metrics[i].orientationChanges, metrics[i].gripperChanges, tieBreak};
    }
    return keys;
}

std::vector<Ranked> rank_population(std::span<const PlanMetrics> metrics, const FitnessContext& ctx)
{
    std::vector<double> fitness(metrics.size());
    for (std::size_t i = 0; i < metrics.size(); ++i) {
        fitness[i] = ctx.evaluate(metrics[i]);
    }
    const auto keys = make_keys(metrics, fitness, ctx.tie_breaks());
    return rank_keys(keys);
}

std::vector<Ranked> rank_population(const ProductModel& model, std::span<const PlanChromosome> pop,
                                    const FitnessContext& ctx)
{
    std::vector<PlanMetrics> m;
    m.reserve(pop.size());
    for (const auto& c : pop) {
        m.push_back(metrics(model, c));
    }
    return rank_population(m, ctx);
}

} // namespace fuzzyplan
