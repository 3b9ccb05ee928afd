#include "adsbauth/simd/cpu_features.hpp"

namespace adsbauth::simd {

const CpuFeatures& cpu_features() {
    static const CpuFeatures features = [] {
        CpuFeatures f;
#if defined(__x86_64__) || defined(__i386__)
        __builtin_cpu_init();
        f.avx2 = __builtin_cpu_supports("avx2") != 0;
#endif
        return f;
    }();
    return features;
}

}  // namespace adsbauth::simd
