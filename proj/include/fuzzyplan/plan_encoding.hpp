#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fuzzyplan/product_model.hpp"
#include "fuzzyplan/random.hpp"

namespace fuzzyplan {

/// A complete disassembly plan: position k removes `sequence[k]` along
/// `dirs[k]` holding it with `grips[k]`.
struct PlanChromosome {
    std::vector<PartId> sequence;
    std::vector<DirIndex> dirs;
    std::vector<GripperIndex> grips;

    std::size_t size() const { return sequence.size(); }
    bool operator==(const PlanChromosome&) const = default;
};

/// Quantities extracted from a plan for the fitness functions.
/// `feasible` is the length of the longest executable prefix; orientation
/// and gripper changes are counted only inside that prefix.
struct PlanMetrics {
    std::size_t feasible = 0;
    std::size_t orientationChanges = 0;
    std::size_t gripperChanges = 0;
    std::size_t components = 0;

    bool operator==(const PlanMetrics&) const = default;
};

/// Empty string when `c` is a valid plan for `model`, else a description
/// of the first violated invariant.
std::string check_chromosome(const ProductModel& model, const PlanChromosome& c);

PlanChromosome random_chromosome(const ProductModel& model, Rng& rng);

PlanMetrics metrics(const ProductModel& model, const PlanChromosome& c);

/// Two-point order crossover (OX1) on the sequence with the segment
/// [lo, hi) copied from the first parent; remaining slots are filled from
/// the other parent in its order, starting after the segment and wrapping.
/// Direction and gripper genes travel with their component.
std::pair<PlanChromosome, PlanChromosome> order_crossover(const PlanChromosome& a, const PlanChromosome& b,
                                                          std::size_t lo, std::size_t hi);

/// order_crossover with random cut points lo < hi.
std::pair<PlanChromosome, PlanChromosome> crossover(const PlanChromosome& a, const PlanChromosome& b, Rng& rng);

/// One swap of two sequence positions, then one direction reset and one
/// gripper reset at independently chosen positions.
PlanChromosome mutate(const PlanChromosome& c, const ProductModel& model, Rng& rng);

/// Reverse of the disassembly order, used for assembly-order reporting.
std::vector<PartId> assembly_order(const PlanChromosome& c);

nlohmann::json plan_to_json(const ProductModel& model, const PlanChromosome& c, const PlanMetrics& m);

} // namespace fuzzyplan
