#pragma once

// Data-parallel inner loops with a scalar reference and vector variants.
//
// Every variant produces bit-identical results to the scalar reference:
// sums use four interleaved partial accumulators combined as
// (s0 + s1) + (s2 + s3) in all implementations, and no FMA contraction is
// allowed. The active variant is picked once at first use from CPU
// features; FUZZYPLAN_ISA=scalar|avx2|neon overrides the choice.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace fuzzyplan::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);
std::optional<Isa> parse_isa(std::string_view name);

/// True when `isa` is compiled in and supported by this CPU.
bool available(Isa isa);

Isa active_isa();

/// Forces a variant (must be available); nullopt restores auto-detection.
void set_isa(std::optional<Isa> isa);

/// Clipped triangular output sets, structure-of-arrays. Set k has feet
/// a[k] <= c[k], peak b[k] and clipping level level[k].
struct ClippedSets {
    std::span<const double> a;
    std::span<const double> b;
    std::span<const double> c;
    std::span<const double> level;
};

struct CentroidSums {
    double moment = 0.0; // sum of x * mu(x)
    double mass = 0.0;   // sum of mu(x)
};

/// Max-aggregates the clipped sets over the grid x_i = lo + step * i,
/// i in [0, count), and returns the centroid numerator and denominator.
CentroidSums centroid_sums(double lo, double step, std::size_t count, const ClippedSets& sets);

/// Number of positions where the two sequences differ; sizes must match.
std::size_t count_mismatches(std::span<const std::int32_t> a, std::span<const std::int32_t> b);

/// Triangular membership shared by every variant; defined here so the
/// scalar path and the fuzzy engine evaluate the same expression.
inline double triangle(double x, double a, double b, double c)
{
    const double left = b > a ? (x - a) / (b - a) : (x >= a ? 1.0 : 0.0);
    const double right = c > b ? (c - x) / (c - b) : (x <= c ? 1.0 : 0.0);
    const double m = left < right ? left : right;
    return m > 0.0 ? m : 0.0;
}

namespace scalar {
CentroidSums centroid_sums(double lo, double step, std::size_t count, const ClippedSets& sets);
std::size_t count_mismatches(std::span<const std::int32_t> a, std::span<const std::int32_t> b);
} // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define FUZZYPLAN_HAVE_AVX2_KERNELS 1
namespace avx2 {
CentroidSums centroid_sums(double lo, double step, std::size_t count, const ClippedSets& sets);
std::size_t count_mismatches(std::span<const std::int32_t> a, std::span<const std::int32_t> b);
} // namespace avx2
#endif

#if defined(__aarch64__) || defined(__ARM_NEON)
#define FUZZYPLAN_HAVE_NEON_KERNELS 1
namespace neon {
CentroidSums centroid_sums(double lo, double step, std::size_t count, const ClippedSets& sets);
std::size_t count_mismatches(std::span<const std::int32_t> a, std::span<const std::int32_t> b);
} // namespace neon
#endif

} // namespace fuzzyplan::kernels
