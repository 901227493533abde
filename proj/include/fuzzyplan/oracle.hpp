#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fuzzyplan/fitness.hpp"
#include "fuzzyplan/plan_encoding.hpp"
#include "fuzzyplan/product_model.hpp"

namespace fuzzyplan {

struct OracleOptions {
    std::size_t cap = 7;         // largest component count accepted
    bool pruneInfeasible = true; // stop a branch at its first non-removable step
    bool bound = true;           // skip branches whose best completion cannot reach the incumbent
    std::size_t reportCap = 64;  // maximizers kept in optimalPlans
};

struct OracleResult {
    double optimalFitness = 0.0;
    PlanMetrics optimalMetrics;           // metrics of the first maximizer found
    std::vector<PlanChromosome> optimalPlans; // at most reportCap entries
    std::uint64_t optimalCount = 0;       // maximizing leaves visited
    std::uint64_t statesExplored = 0;     // (component, direction, gripper) choices visited
};

/// Exhaustive depth-first search over every (component, direction,
/// gripper) choice at every position. Exact for the algebraic fitness.
///
/// With pruning, a branch ends at its first non-removable step; that leaf
/// stands for every completion of the prefix (they share l, o and g) and
/// is reported with the remaining components appended in ascending order.
/// With `bound`, a branch is skipped once even a perfect completion falls
/// strictly below the incumbent, so ties are never lost.
///
/// Throws ValidationError when the product exceeds `options.cap`.
OracleResult brute_force_optimal(const ProductModel& model, const Weights& w, const OracleOptions& options = {});

} // namespace fuzzyplan
