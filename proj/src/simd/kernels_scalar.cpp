#include "tfs/simd/kernels.hpp"

namespace tfs::simd {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double squared_distance_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

ArgMax sum3_argmax_scalar(const double* r0, const double* r1, const double* r2,
                          const double* penalty, std::size_t n) {
    ArgMax best{((r0[0] + r1[0]) + r2[0]) + penalty[0], 0};
    for (std::size_t i = 1; i < n; ++i) {
        const double g = ((r0[i] + r1[i]) + r2[i]) + penalty[i];
        if (g > best.value) best = {g, i};
    }
    return best;
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{"scalar", dot_scalar, squared_distance_scalar, axpy_scalar,
                                   sum3_argmax_scalar};
    return table;
}

}  // namespace tfs::simd
