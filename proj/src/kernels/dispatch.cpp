#include "macrovar/kernels.hpp"

#include "kernels_impl.hpp"

#include <cstdlib>
#include <cstring>

namespace macrovar::kernels {

namespace {

constexpr KernelTable kScalar{Isa::scalar, detail::dot_scalar, detail::axpy_scalar,
                              detail::sum_sq_dev_scalar, detail::lagged_dot_scalar};

#if defined(MACROVAR_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::avx2, detail::dot_avx2, detail::axpy_avx2,
                            detail::sum_sq_dev_avx2, detail::lagged_dot_avx2};

bool cpu_has_avx2() noexcept {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

const KernelTable& resolve() noexcept {
    if (const char* env = std::getenv("MACROVAR_KERNELS"); env && std::strcmp(env, "scalar") == 0)
        return kScalar;
    if (const KernelTable* t = avx2_table()) return *t;
    return kScalar;
}

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

const KernelTable* avx2_table() noexcept {
#if defined(MACROVAR_HAVE_AVX2)
    static const bool ok = cpu_has_avx2();
    return ok ? &kAvx2 : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active() noexcept {
    static const KernelTable& table = resolve();
    return table;
}

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "unknown";
}

}  // namespace macrovar::kernels
