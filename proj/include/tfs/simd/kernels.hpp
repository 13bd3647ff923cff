#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace tfs::simd {

struct ArgMax {
    double value;
    std::size_t index;
};

// Function table for the data-parallel inner loops. Every backend must agree
// with the scalar reference: sum3_argmax bit-exactly (it drives the greedy
// tie-breaks of the graph builder), the floating reductions within rounding.
struct KernelTable {
    std::string_view name;

    // sum_i a[i] * b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);

    // sum_i (a[i] - b[i])^2
    double (*squared_distance)(const double* a, const double* b, std::size_t n);

    // y[i] += alpha * x[i]
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);

    // argmax_i ((r0[i] + r1[i]) + r2[i]) + penalty[i], first index on ties.
    // Requires n >= 1.
    ArgMax (*sum3_argmax)(const double* r0, const double* r1, const double* r2,
                          const double* penalty, std::size_t n);
};

const KernelTable& scalar_kernels();

// nullptr when the AVX2 backend was not compiled in or the CPU lacks it.
const KernelTable* avx2_kernels();

// The table used by the library. Picked once from the CPU features; the
// TFS_SIMD environment variable ("scalar" or "avx2") overrides the choice.
const KernelTable& active();

// Test hook. Returns false if the named backend is unavailable.
bool set_backend(std::string_view name);

inline double dot(std::span<const double> a, std::span<const double> b) {
    return active().dot(a.data(), b.data(), a.size());
}

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    return active().squared_distance(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    active().axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace tfs::simd
