#include "fuzzyplan/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace fuzzyplan::kernels {

std::string_view isa_name(Isa isa)
{
    switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
    }
    return "unknown";
}

std::optional<Isa> parse_isa(std::string_view name)
{
    for (auto isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
        if (isa_name(isa) == name) {
            return isa;
        }
    }
    return std::nullopt;
}

bool available(Isa isa)
{
    switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(FUZZYPLAN_HAVE_AVX2_KERNELS)
        return __builtin_cpu_supports("avx2");
#else
        return false;
#endif
    case Isa::Neon:
#if defined(FUZZYPLAN_HAVE_NEON_KERNELS)
        return true;
#else
        return false;
#endif
    }
    return false;
}

namespace {

Isa detect()
{
    if (const char* env = std::getenv("FUZZYPLAN_ISA")) {
        if (auto isa = parse_isa(env); isa && available(*isa)) {
            return *isa;
        }
    }
    if (available(Isa::Avx2)) {
        return Isa::Avx2;
    }
    if (available(Isa::Neon)) {
        return Isa::Neon;
    }
    return Isa::Scalar;
}

std::atomic<int>& selected()
{
    static std::atomic<int> isa{static_cast<int>(detect())};
    return isa;
}

} // namespace

Isa active_isa()
{
    return static_cast<Isa>(selected().load(std::memory_order_relaxed));
}

void set_isa(std::optional<Isa> isa)
{
    if (isa && !available(*isa)) {
        throw std::invalid_argument("kernel variant " + std::string(isa_name(*isa)) + " is not available");
    }
    selected().store(static_cast<int>(isa ? *isa : detect()), std::memory_order_relaxed);
}

CentroidSums centroid_sums(double lo, double step, std::size_t count, const ClippedSets& sets)
{
    switch (active_isa()) {
#if defined(FUZZYPLAN_HAVE_AVX2_KERNELS)
    case Isa::Avx2: return avx2::centroid_sums(lo, step, count, sets);
#endif
#if defined(FUZZYPLAN_HAVE_NEON_KERNELS)
    case Isa::Neon: return neon::centroid_sums(lo, step, count, sets);
#endif
    default: return scalar::centroid_sums(lo, step, count, sets);
    }
}

std::size_t count_mismatches(std::span<const std::int32_t> a, std::span<const std::int32_t> b)
{
    switch (active_isa()) {
#if defined(FUZZYPLAN_HAVE_AVX2_KERNELS)
    case Isa::Avx2: return avx2::count_mismatches(a, b);
#endif
#if defined(FUZZYPLAN_HAVE_NEON_KERNELS)
    case Isa::Neon: return neon::count_mismatches(a, b);
#endif
    default: return scalar::count_mismatches(a, b);
    }
}

} // namespace fuzzyplan::kernels
