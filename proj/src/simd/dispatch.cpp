#include <cstdlib>
#include <string>

#include "adsbauth/simd/cpu_features.hpp"
#include "kernels_impl.hpp"

namespace adsbauth::simd {

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
    }
    return "unknown";
}

bool isa_supported(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return true;
        case Isa::Avx2:
#if defined(ADSBAUTH_HAVE_AVX2)
            return cpu_features().avx2;
#else
            return false;
#endif
    }
    return false;
}

const KernelTable& kernels_for(Isa isa) {
    if (!isa_supported(isa)) {
        throw ConfigError(std::string("kernel set '") + std::string(isa_name(isa)) + "' is not available");
    }
    switch (isa) {
        case Isa::Scalar: return detail::kScalarKernels;
        case Isa::Avx2:
#if defined(ADSBAUTH_HAVE_AVX2)
            return detail::kAvx2Kernels;
#else
            break;
#endif
    }
    return detail::kScalarKernels;
}

const KernelTable& active_kernels() {
    static const KernelTable& table = [&]() -> const KernelTable& {
        const char* forced = std::getenv("ADSBAUTH_ISA");
        if (forced != nullptr && std::string_view(forced) == "scalar") return detail::kScalarKernels;
        return isa_supported(Isa::Avx2) ? kernels_for(Isa::Avx2) : detail::kScalarKernels;
    }();
    return table;
}

}  // namespace adsbauth::simd
