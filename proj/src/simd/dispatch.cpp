#include <cstdlib>
#include <cstring>

#include "glab/kernels.hpp"

namespace glab::kernels {

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend active_backend() {
  static const Backend chosen = [] {
    const char* env = std::getenv("GLAB_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return Backend::scalar;
    return avx2_available() ? Backend::avx2 : Backend::scalar;
  }();
  return chosen;
}

const char* backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

void mul(const MatBatch& x, const MatBatch& y, MatBatch& out) {
  if (active_backend() == Backend::avx2) return avx2::mul(x, y, out);
  scalar::mul(x, y, out);
}

void trace_sq(const MatBatch& m, std::vector<double>& re, std::vector<double>& im) {
  if (active_backend() == Backend::avx2) return avx2::trace_sq(m, re, im);
  scalar::trace_sq(m, re, im);
}

void classify(const MatBatch& m, double eps, std::vector<std::uint8_t>& out) {
  if (active_backend() == Backend::avx2) return avx2::classify(m, eps, out);
  scalar::classify(m, eps, out);
}

void apply(const MatBatch& m, const PointBatch& z, PointBatch& out) {
  if (active_backend() == Backend::avx2) return avx2::apply(m, z, out);
  scalar::apply(m, z, out);
}

}  // namespace glab::kernels
