#pragma once

#include "duhamel/simd.hpp"

namespace duhamel::simd {

namespace scalar {
const KernelTable& kernels();
}

#if defined(DUHAMEL_HAVE_AVX2)
namespace avx2 {
const KernelTable& kernels();
}
#endif

#if defined(DUHAMEL_HAVE_NEON)
namespace neon {
const KernelTable& kernels();
}
#endif

}  // namespace duhamel::simd
