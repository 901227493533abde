#include "fuzzyplan/plan_encoding.hpp"

#include <algorithm>
#include <numeric>

namespace fuzzyplan {

std::string check_chromosome(const ProductModel& model, const PlanChromosome& c)
{
    const std::size_t n = model.size();
    if (c.sequence.size() != n || c.dirs.size() != n || c.grips.size() != n) {
        return "section lengths differ from component count";
    }
    std::vector<bool> seen(n, false);
    for (std::size_t k = 0; k < n; ++k) {
        const auto p = c.sequence[k];
        if (p < 0 || static_cast<std::size_t>(p) >= n) {
            return "sequence[" + std::to_string(k) + "] out of range";
        }
        if (seen[p]) {
            return "sequence repeats component " + std::to_string(p);
        }
        seen[p] = true;
        if (c.dirs[k] >= model.direction_count()) {
            return "dirs[" + std::to_string(k) + "] is not a declared direction";
        }
        const auto allowed = model.allowed_grippers(p);
        if (std::find(allowed.begin(), allowed.end(), c.grips[k]) == allowed.end()) {
            return "grips[" + std::to_string(k) + "] not allowed for component " + std::to_string(p);
        }
    }
    return {};
}

PlanChromosome random_chromosome(const ProductModel& model, Rng& rng)
{
    const std::size_t n = model.size();
    PlanChromosome c;
    c.sequence.resize(n);
    std::iota(c.sequence.begin(), c.sequence.end(), PartId{0});
    // Fisher-Yates
    for (std::size_t i = n; i > 1; --i) {
        std::swap(c.sequence[i - 1], c.sequence[rng.index(i)]);
    }
    c.dirs.resize(n);
    c.grips.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        c.dirs[k] = static_cast<DirIndex>(rng.index(model.direction_count()));
        const auto allowed = model.allowed_grippers(c.sequence[k]);
        c.grips[k] = allowed[rng.index(allowed.size())];
    }
    return c;
}

PlanMetrics metrics(const ProductModel& model, const PlanChromosome& c)
{
    PlanMetrics m;
    m.components = model.size();
    RemovedSet removed(model.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (!removable(model, c.sequence[k], c.dirs[k], removed)) {
            break;
        }
        removed.insert(c.sequence[k]);
        if (k > 0) {
            m.orientationChanges += c.dirs[k] != c.dirs[k - 1] ? 1 : 0;
            m.gripperChanges += c.grips[k] != c.grips[k - 1] ? 1 : 0;
        }
        m.feasible = k + 1;
    }
    return m;
}

namespace {

PlanChromosome ox_child(const PlanChromosome& keep, const PlanChromosome& fill, std::size_t lo, std::size_t hi)
{
    const std::size_t n = keep.size();
    PlanChromosome child;
    child.sequence.assign(n, -1);
    child.dirs.assign(n, 0);
    child.grips.assign(n, 0);
    std::vector<bool> taken(n, false);
    for (std::size_t k = lo; k < hi; ++k) {
        child.sequence[k] = keep.sequence[k];
        child.dirs[k] = keep.dirs[k];
        child.grips[k] = keep.grips[k];
        taken[keep.sequence[k]] = true;
    }
    std::size_t write = hi % n;
    for (std::size_t step = 0; step < n; ++step) {
        const std::size_t read = (hi + step) % n;
        const auto p = fill.sequence[read];
        if (taken[p]) {
            continue;
        }
        child.sequence[write] = p;
        child.dirs[write] = fill.dirs[read];
        child.grips[write] = fill.grips[read];
        taken[p] = true;
        write = (write + 1) % n;
    }
    return child;
}

} // namespace

std::pair<PlanChromosome, PlanChromosome> order_crossover(const PlanChromosome& a, const PlanChromosome& b,
                                                          std::size_t lo, std::size_t hi)
{
    if (a.size() == 0) {
        return {a, b};
    }
    return {ox_child(a, b, lo, hi), ox_child(b, a, lo, hi)};
}

std::pair<PlanChromosome, PlanChromosome> crossover(const PlanChromosome& a, const PlanChromosome& b, Rng& rng)
{
    const std::size_t n = a.size();
    if (n < 2) {
        return {a, b};
    }
    std::size_t lo = rng.index(n);
    std::size_t hi = rng.index(n);
    while (hi == lo) {
        hi = rng.index(n);
    }
    if (lo > hi) {
        std::swap(lo, hi);
    }
    return order_crossover(a, b, lo, hi + 1);
}

PlanChromosome mutate(const PlanChromosome& c, const ProductModel& model, Rng& rng)
{
    PlanChromosome out = c;
    const std::size_t n = out.size();
    if (n == 0) {
        return out;
    }
    if (n >= 2) {
        const std::size_t i = rng.index(n);
        std::size_t j = rng.index(n - 1);
        if (j >= i) {
            ++j;
        }
        std::swap(out.sequence[i], out.sequence[j]);
        std::swap(out.dirs[i], out.dirs[j]);
        std::swap(out.grips[i], out.grips[j]);
    }
    const std::size_t dpos = rng.index(n);
    out.dirs[dpos] = static_cast<DirIndex>(rng.index(model.direction_count()));
    const std::size_t gpos = rng.index(n);
    const auto allowed = model.allowed_grippers(out.sequence[gpos]);
    out.grips[gpos] = allowed[rng.index(allowed.size())];
    return out;
}

std::vector<PartId> assembly_order(const PlanChromosome& c)
{
    return {c.sequence.rbegin(), c.sequence.rend()};
}

nlohmann::json plan_to_json(const ProductModel& model, const PlanChromosome& c, const PlanMetrics& m)
{
    using nlohmann::json;
    json steps = json::array();
    for (std::size_t k = 0; k < c.size(); ++k) {
        const auto p = c.sequence[k];
        steps.push_back({{"part", p},
                         {"name", model.components()[p].name},
                         {"direction", model.directions()[c.dirs[k]].label},
                         {"gripper", model.gripper_catalog()[c.grips[k]]}});
    }
    json assembly = json::array();
    for (std::size_t k = c.size(); k-- > 0;) {
        const auto& dir = model.directions()[c.dirs[k]];
        // Insertion runs against the removal direction.
        const auto& insert_dir = dir.opposite ? model.directions()[*dir.opposite].label : dir.label;
        assembly.push_back({{"part", c.sequence[k]},
                            {"name", model.components()[c.sequence[k]].name},
                            {"direction", insert_dir},
                            {"gripper", model.gripper_catalog()[c.grips[k]]}});
    }
    return {{"disassembly", std::move(steps)},
            {"assembly", std::move(assembly)},
            {"metrics",
             {{"feasible_length", m.feasible},
              {"orientation_changes", m.orientationChanges},
              {"gripper_changes", m.gripperChanges},
              {"components", m.components}}}};
}

} // namespace fuzzyplan
