#include <atomic>
#include <cstdlib>
#include <string_view>

#include "tfs/simd/kernels.hpp"

namespace tfs::simd {

#ifndef TFS_HAVE_AVX2
const KernelTable* avx2_kernels() { return nullptr; }
#endif

namespace {

const KernelTable* pick_default() {
    if (const char* env = std::getenv("TFS_SIMD")) {
        const std::string_view choice(env);
        if (choice == "scalar") return &scalar_kernels();
        if (choice == "avx2" && avx2_kernels() != nullptr) return avx2_kernels();
    }
    if (const KernelTable* k = avx2_kernels()) return k;
    return &scalar_kernels();
}

std::atomic<const KernelTable*>& current() {
    static std::atomic<const KernelTable*> table{pick_default()};
    return table;
}

}  // namespace

const KernelTable& active() { return *current().load(std::memory_order_relaxed); }

bool set_backend(std::string_view name) {
    if (name == "scalar") {
        current().store(&scalar_kernels());
        return true;
    }
    if (name == "avx2") {
        if (const KernelTable* k = avx2_kernels()) {
            current().store(k);
            return true;
        }
    }
    return false;
}

}  // namespace tfs::simd
