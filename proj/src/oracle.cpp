#include "fuzzyplan/oracle.hpp"

#include <limits>

#include "fuzzyplan/errors.hpp"

namespace fuzzyplan {

namespace {

constexpr double kTieTolerance = 1e-9;

class Search {
public:
    Search(const ProductModel& model, const Weights& w, const OracleOptions& opt)
        : model_(model), w_(w), opt_(opt), n_(model.size()), removed_(model.size()), used_(model.size(), false)
    {
        plan_.sequence.reserve(n_);
        plan_.dirs.reserve(n_);
        plan_.grips.reserve(n_);
    }

    OracleResult run()
    {
        result_.optimalFitness = -std::numeric_limits<double>::infinity();
        if (n_ == 0) {
            leaf(0, 0, 0);
        } else {
            descend(true, 0, 0, 0);
        }
        return std::move(result_);
    }

private:
    double fitness(std::size_t l, std::size_t o, std::size_t g) const
    {
        return algebraic_fitness({l, o, g, n_}, w_);
    }

    // Best value any completion of a feasible prefix with (o, g) could reach.
    double upper_bound(std::size_t o, std::size_t g) const { return fitness(n_, o, g); }

    void leaf(std::size_t l, std::size_t o, std::size_t g)
    {
        const double f = fitness(l, o, g);
        if (f > result_.optimalFitness + kTieTolerance) {
            result_.optimalFitness = f;
            result_.optimalMetrics = {l, o, g, n_};
            result_.optimalPlans.clear();
            result_.optimalCount = 0;
        }
        if (f >= result_.optimalFitness - kTieTolerance) {
            ++result_.optimalCount;
            if (result_.optimalPlans.size() < opt_.reportCap) {
                result_.optimalPlans.push_back(completed());
            }
        }
    }

    PlanChromosome completed() const
    {
        PlanChromosome c = plan_;
        for (std::size_t p = 0; p < n_; ++p) {
            if (!used_[p]) {
                c.sequence.push_back(static_cast<PartId>(p));
                c.dirs.push_back(0);
                c.grips.push_back(model_.allowed_grippers(static_cast<PartId>(p)).front());
            }
        }
        return c;
    }

    // `feasible`: every step so far was removable. `l`, `o`, `g` describe
    // the feasible prefix.
    void descend(bool feasible, std::size_t l, std::size_t o, std::size_t g)
    {
        const std::size_t k = plan_.sequence.size();
        if (k == n_) {
            leaf(l, o, g);
            return;
        }
        if (opt_.bound && feasible && upper_bound(o, g) < result_.optimalFitness - kTieTolerance) {
            return;
        }
        const std::size_t dirCount = model_.direction_count();
        // Trying the previous direction and gripper first reaches strong
        // incumbents early; the visiting order does not affect the optimum.
        const std::size_t prevDir = k > 0 ? plan_.dirs.back() : 0;
        const GripperIndex prevGrip = k > 0 ? plan_.grips.back() : GripperIndex{0};

        for (std::size_t p = 0; p < n_; ++p) {
            if (used_[p]) {
                continue;
            }
            const auto part = static_cast<PartId>(p);
            const auto allowed = model_.allowed_grippers(part);
            std::size_t gripStart = 0;
            for (std::size_t i = 0; i < allowed.size(); ++i) {
                if (allowed[i] == prevGrip) {
                    gripStart = i;
                }
            }
            for (std::size_t dd = 0; dd < dirCount; ++dd) {
                const auto dir = static_cast<DirIndex>((prevDir + dd) % dirCount);
                const bool canRemove = feasible && removable(model_, part, dir, removed_);
                for (std::size_t gg = 0; gg < allowed.size(); ++gg) {
                    const GripperIndex grip = allowed[(gripStart + gg) % allowed.size()];
                    ++result_.statesExplored;
                    push(part, dir, grip);
                    if (canRemove) {
                        const std::size_t o2 = o + (k > 0 && dir != plan_.dirs[k - 1] ? 1 : 0);
                        const std::size_t g2 = g + (k > 0 && grip != plan_.grips[k - 1] ? 1 : 0);
                        removed_.insert(part);
                        descend(true, l + 1, o2, g2);
                        removed_.erase(part);
                    } else if (feasible && opt_.pruneInfeasible) {
                        leaf(l, o, g);
                    } else {
                        descend(false, l, o, g);
                    }
                    pop();
                }
            }
        }
    }

    void push(PartId p, DirIndex d, GripperIndex g)
    {
        plan_.sequence.push_back(p);
        plan_.dirs.push_back(d);
        plan_.grips.push_back(g);
        used_[p] = true;
    }

    void pop()
    {
        used_[plan_.sequence.back()] = false;
        plan_.sequence.pop_back();
        plan_.dirs.pop_back();
        plan_.grips.pop_back();
    }

    const ProductModel& model_;
    Weights w_;
    OracleOptions opt_;
    std::size_t n_;
    RemovedSet removed_;
    std::vector<bool> used_;
    PlanChromosome plan_;
    OracleResult result_;
};

} // namespace

OracleResult brute_force_optimal(const ProductModel& model, const Weights& w, const OracleOptions& options)
{
    validate(w);
    if (model.size() > options.cap) {
        throw ValidationError("oracle: product has " + std::to_string(model.size())
                              + " components, exhaustive search is capped at " + std::to_string(options.cap));
    }
    return Search(model, w, options).run();
}

} // namespace fuzzyplan
