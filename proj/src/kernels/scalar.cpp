#include "fuzzyplan/kernels.hpp"

namespace fuzzyplan::kernels::scalar {

CentroidSums centroid_sums(double lo, double step, std::size_t count, const ClippedSets& sets)
{
    double moment[4] = {0.0, 0.0, 0.0, 0.0};
    double mass[4] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t k = sets.level.size();
    for (std::size_t i = 0; i < count; ++i) {
        const double x = lo + step * static_cast<double>(i);
        double agg = 0.0;
        for (std::size_t s = 0; s < k; ++s) {
            const double mu = triangle(x, sets.a[s], sets.b[s], sets.c[s]);
            const double clipped = mu < sets.level[s] ? mu : sets.level[s];
            agg = clipped > agg ? clipped : agg;
        }
        moment[i % 4] += x * agg;
        mass[i % 4] += agg;
    }
    return {(moment[0] + moment[1]) + (moment[2] + moment[3]), (mass[0] + mass[1]) + (mass[2] + mass[3])};
}

std::size_t count_mismatches(std::span<const std::int32_t> a, std::span<const std::int32_t> b)
{
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        n += a[i] != b[i] ? 1 : 0;
    }
    return n;
}

} // namespace fuzzyplan::kernels::scalar
