#include "fuzzyplan/kernels.hpp"

#include <bit>
#include <immintrin.h>

#define FUZZYPLAN_AVX2 __attribute__((target("avx2")))

namespace fuzzyplan::kernels::avx2 {

namespace {

FUZZYPLAN_AVX2 inline __m256d triangle4(__m256d x, double a, double b, double c)
{
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d zero = _mm256_setzero_pd();
    __m256d left;
    if (b > a) {
        left = _mm256_div_pd(_mm256_sub_pd(x, _mm256_set1_pd(a)), _mm256_set1_pd(b - a));
    } else {
        left = _mm256_and_pd(_mm256_cmp_pd(x, _mm256_set1_pd(a), _CMP_GE_OQ), one);
    }
    __m256d right;
    if (c > b) {
        right = _mm256_div_pd(_mm256_sub_pd(_mm256_set1_pd(c), x), _mm256_set1_pd(c - b));
    } else {
        right = _mm256_and_pd(_mm256_cmp_pd(x, _mm256_set1_pd(c), _CMP_LE_OQ), one);
    }
    return _mm256_max_pd(_mm256_min_pd(left, right), zero);
}

} // namespace

FUZZYPLAN_AVX2 CentroidSums centroid_sums(double lo, double step, std::size_t count, const ClippedSets& sets)
{
    const std::size_t k = sets.level.size();
    const __m256d vlo = _mm256_set1_pd(lo);
    const __m256d vstep = _mm256_set1_pd(step);
    const __m256d four = _mm256_set1_pd(4.0);
    __m256d idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
    __m256d moment = _mm256_setzero_pd();
    __m256d mass = _mm256_setzero_pd();

    for (std::size_t i = 0; i < count; i += 4) {
        const __m256d x = _mm256_add_pd(vlo, _mm256_mul_pd(vstep, idx));
        __m256d agg = _mm256_setzero_pd();
        for (std::size_t s = 0; s < k; ++s) {
            const __m256d mu = triangle4(x, sets.a[s], sets.b[s], sets.c[s]);
            agg = _mm256_max_pd(_mm256_min_pd(mu, _mm256_set1_pd(sets.level[s])), agg);
        }
        if (i + 4 > count) {
            // Lanes past the grid end contribute nothing.
            const __m256d limit = _mm256_set1_pd(static_cast<double>(count));
            agg = _mm256_and_pd(agg, _mm256_cmp_pd(idx, limit, _CMP_LT_OQ));
        }
        moment = _mm256_add_pd(moment, _mm256_mul_pd(x, agg));
        mass = _mm256_add_pd(mass, agg);
        idx = _mm256_add_pd(idx, four);
    }

    alignas(32) double m[4];
    alignas(32) double w[4];
    _mm256_store_pd(m, moment);
    _mm256_store_pd(w, mass);
    return {(m[0] + m[1]) + (m[2] + m[3]), (w[0] + w[1]) + (w[2] + w[3])};
}

FUZZYPLAN_AVX2 std::size_t count_mismatches(std::span<const std::int32_t> a, std::span<const std::int32_t> b)
{
    const std::size_t n = a.size();
    std::size_t equal = 0;
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + i));
        const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b.data() + i));
        const int mask = _mm256_movemask_ps(_mm256_castsi256_ps(_mm256_cmpeq_epi32(va, vb)));
        equal += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(mask)));
    }
    std::size_t diff = (i - equal);
    for (; i < n; ++i) {
        diff += a[i] != b[i] ? 1 : 0;
    }
    return diff;
}

} // namespace fuzzyplan::kernels::avx2
