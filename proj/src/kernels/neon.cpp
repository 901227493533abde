#include "fuzzyplan/kernels.hpp"

#include <arm_neon.h>

namespace fuzzyplan::kernels::neon {

namespace {

// Two float64x2 halves stand in for the four scalar accumulator lanes.
inline float64x2_t triangle2(float64x2_t x, double a, double b, double c)
{
    const float64x2_t one = vdupq_n_f64(1.0);
    const float64x2_t zero = vdupq_n_f64(0.0);
    float64x2_t left;
    if (b > a) {
        left = vdivq_f64(vsubq_f64(x, vdupq_n_f64(a)), vdupq_n_f64(b - a));
    } else {
        left = vbslq_f64(vcgeq_f64(x, vdupq_n_f64(a)), one, zero);
    }
    float64x2_t right;
    if (c > b) {
        right = vdivq_f64(vsubq_f64(vdupq_n_f64(c), x), vdupq_n_f64(c - b));
    } else {
        right = vbslq_f64(vcleq_f64(x, vdupq_n_f64(c)), one, zero);
    }
    const float64x2_t m = vbslq_f64(vcltq_f64(left, right), left, right);
    return vbslq_f64(vcgtq_f64(m, zero), m, zero);
}

inline float64x2_t aggregate(float64x2_t x, const ClippedSets& sets)
{
    float64x2_t agg = vdupq_n_f64(0.0);
    for (std::size_t s = 0; s < sets.level.size(); ++s) {
        const float64x2_t mu = triangle2(x, sets.a[s], sets.b[s], sets.c[s]);
        const float64x2_t lvl = vdupq_n_f64(sets.level[s]);
        const float64x2_t clipped = vbslq_f64(vcltq_f64(mu, lvl), mu, lvl);
        agg = vbslq_f64(vcgtq_f64(clipped, agg), clipped, agg);
    }
    return agg;
}

} // namespace

CentroidSums centroid_sums(double lo, double step, std::size_t count, const ClippedSets& sets)
{
    const float64x2_t vlo = vdupq_n_f64(lo);
    const float64x2_t vstep = vdupq_n_f64(step);
    const float64x2_t four = vdupq_n_f64(4.0);
    const float64x2_t limit = vdupq_n_f64(static_cast<double>(count));
    const double init_lo[2] = {0.0, 1.0};
    const double init_hi[2] = {2.0, 3.0};
    float64x2_t idx_lo = vld1q_f64(init_lo);
    float64x2_t idx_hi = vld1q_f64(init_hi);
    float64x2_t moment_lo = vdupq_n_f64(0.0), moment_hi = vdupq_n_f64(0.0);
    float64x2_t mass_lo = vdupq_n_f64(0.0), mass_hi = vdupq_n_f64(0.0);
    const float64x2_t zero = vdupq_n_f64(0.0);

    for (std::size_t i = 0; i < count; i += 4) {
        const float64x2_t x_lo = vaddq_f64(vlo, vmulq_f64(vstep, idx_lo));
        const float64x2_t x_hi = vaddq_f64(vlo, vmulq_f64(vstep, idx_hi));
        float64x2_t agg_lo = aggregate(x_lo, sets);
        float64x2_t agg_hi = aggregate(x_hi, sets);
        if (i + 4 > count) {
            agg_lo = vbslq_f64(vcltq_f64(idx_lo, limit), agg_lo, zero);
            agg_hi = vbslq_f64(vcltq_f64(idx_hi, limit), agg_hi, zero);
        }
        moment_lo = vaddq_f64(moment_lo, vmulq_f64(x_lo, agg_lo));
        moment_hi = vaddq_f64(moment_hi, vmulq_f64(x_hi, agg_hi));
        mass_lo = vaddq_f64(mass_lo, agg_lo);
        mass_hi = vaddq_f64(mass_hi, agg_hi);
        idx_lo = vaddq_f64(idx_lo, four);
        idx_hi = vaddq_f64(idx_hi, four);
    }
    const double m0 = vgetq_lane_f64(moment_lo, 0), m1 = vgetq_lane_f64(moment_lo, 1);
    const double m2 = vgetq_lane_f64(moment_hi, 0), m3 = vgetq_lane_f64(moment_hi, 1);
    const double w0 = vgetq_lane_f64(mass_lo, 0), w1 = vgetq_lane_f64(mass_lo, 1);
    const double w2 = vgetq_lane_f64(mass_hi, 0), w3 = vgetq_lane_f64(mass_hi, 1);
    return {(m0 + m1) + (m2 + m3), (w0 + w1) + (w2 + w3)};
}

std::size_t count_mismatches(std::span<const std::int32_t> a, std::span<const std::int32_t> b)
{
    const std::size_t n = a.size();
    std::size_t diff = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const uint32x4_t eq = vceqq_s32(vld1q_s32(a.data() + i), vld1q_s32(b.data() + i));
        // Each equal lane is all-ones; shift to 1 and sum.
        diff += 4 - vaddvq_u32(vshrq_n_u32(eq, 31));
    }
    for (; i < n; ++i) {
        diff += a[i] != b[i] ? 1 : 0;
    }
    return diff;
}

} // namespace fuzzyplan::kernels::neon
