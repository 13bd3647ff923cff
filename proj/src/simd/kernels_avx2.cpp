// Compiled with -mavx2 -mfma. Only reached after a runtime CPU check.
#include "tfs/simd/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <limits>

namespace tfs::simd {
namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    if (i + 4 <= n) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        i += 4;
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double squared_distance_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
        acc0 = _mm256_fmadd_pd(d0, d0, acc0);
        acc1 = _mm256_fmadd_pd(d1, d1, acc1);
    }
    if (i + 4 <= n) {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc0 = _mm256_fmadd_pd(d0, d0, acc0);
        i += 4;
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

// Two passes: vector max, then the first lane that equals it. The sums use
// the same association as the scalar kernel and no FMA, so values match
// bit for bit.
ArgMax sum3_argmax_avx2(const double* r0, const double* r1, const double* r2,
                        const double* penalty, std::size_t n) {
    auto gain = [&](std::size_t i) {
        return _mm256_add_pd(
            _mm256_add_pd(_mm256_add_pd(_mm256_loadu_pd(r0 + i), _mm256_loadu_pd(r1 + i)),
                          _mm256_loadu_pd(r2 + i)),
            _mm256_loadu_pd(penalty + i));
    };
    auto gain1 = [&](std::size_t i) { return ((r0[i] + r1[i]) + r2[i]) + penalty[i]; };

    double best = -std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    if (n >= 4) {
        __m256d vmax = gain(0);
        for (i = 4; i + 4 <= n; i += 4) vmax = _mm256_max_pd(vmax, gain(i));
        const __m128d m2 = _mm_max_pd(_mm256_castpd256_pd128(vmax), _mm256_extractf128_pd(vmax, 1));
        best = _mm_cvtsd_f64(_mm_max_sd(m2, _mm_unpackhi_pd(m2, m2)));
    }
    for (; i < n; ++i) best = std::max(best, gain1(i));

    const __m256d vbest = _mm256_set1_pd(best);
    for (i = 0; i + 4 <= n; i += 4) {
        const int mask = _mm256_movemask_pd(_mm256_cmp_pd(gain(i), vbest, _CMP_EQ_OQ));
        if (mask != 0) return {best, i + static_cast<std::size_t>(__builtin_ctz(mask))};
    }
    for (; i < n; ++i)
        if (gain1(i) == best) return {best, i};
    // Only reachable when every gain is NaN.
    return {gain1(0), 0};
}

}  // namespace

const KernelTable* avx2_kernels() {
    static const KernelTable table{"avx2", dot_avx2, squared_distance_avx2, axpy_avx2,
                                   sum3_argmax_avx2};
    if (!(__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))) return nullptr;
    return &table;
}

}  // namespace tfs::simd
