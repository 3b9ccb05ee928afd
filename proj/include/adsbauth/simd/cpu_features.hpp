#pragma once

namespace adsbauth::simd {

struct CpuFeatures {
    bool avx2 = false;
};

/// Probed once on first use.
const CpuFeatures& cpu_features();

}  // namespace adsbauth::simd
