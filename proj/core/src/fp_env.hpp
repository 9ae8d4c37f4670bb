#pragma once

#if defined(__SSE__) || defined(_M_X64)
#include <xmmintrin.h>
#define GSEMM_HAVE_FTZ 1
#endif

namespace gsemm::detail {

// A saturated softmax pushes most hidden rates into the subnormal range,
// which is very slow on x86 and numerically irrelevant here. Flushes them
// to zero for the lifetime of the guard.
class FlushDenormals {
 public:
  FlushDenormals() {
#ifdef GSEMM_HAVE_FTZ
    saved_ = _mm_getcsr();
    _mm_setcsr(saved_ | 0x8040);
#endif
  }
  ~FlushDenormals() {
#ifdef GSEMM_HAVE_FTZ
    _mm_setcsr(saved_);
#endif
  }
  FlushDenormals(const FlushDenormals&) = delete;
  FlushDenormals& operator=(const FlushDenormals&) = delete;

 private:
  unsigned saved_ = 0;
};

}  // namespace gsemm::detail
