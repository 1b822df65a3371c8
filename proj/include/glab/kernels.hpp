#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "glab/mobius.hpp"

namespace glab::kernels {

// Structure-of-arrays batch of 2x2 complex matrices.
struct MatBatch {
  std::vector<double> are, aim, bre, bim, cre, cim, dre, dim;

  explicit MatBatch(std::size_t n = 0) { resize(n); }
  void resize(std::size_t n);
  std::size_t size() const { return are.size(); }
  void set(std::size_t i, const MobiusMap& m);
  MobiusMap get(std::size_t i) const;
};

struct PointBatch {
  std::vector<double> re, im;
  explicit PointBatch(std::size_t n = 0) : re(n), im(n) {}
  std::size_t size() const { return re.size(); }
};

enum class Backend { scalar, avx2 };

// Chosen once from CPU features; GLAB_SIMD=scalar forces the reference path.
Backend active_backend();
const char* backend_name(Backend b);
bool avx2_available();

// out[i] = x[i] * y[i]
void mul(const MatBatch& x, const MatBatch& y, MatBatch& out);
// out[i] = (a+d)^2
void trace_sq(const MatBatch& m, std::vector<double>& re, std::vector<double>& im);
// Type codes follow MobiusType ordering. Identity means b, c, a-d all within eps
// componentwise.
void classify(const MatBatch& m, double eps, std::vector<std::uint8_t>& out);
// out[i] = m[i](z[i]) for finite z; poles give non-finite output.
void apply(const MatBatch& m, const PointBatch& z, PointBatch& out);

namespace scalar {
void mul(const MatBatch& x, const MatBatch& y, MatBatch& out);
void trace_sq(const MatBatch& m, std::vector<double>& re, std::vector<double>& im);
void classify(const MatBatch& m, double eps, std::vector<std::uint8_t>& out);
void apply(const MatBatch& m, const PointBatch& z, PointBatch& out);
}  // namespace scalar

namespace avx2 {
void mul(const MatBatch& x, const MatBatch& y, MatBatch& out);
void trace_sq(const MatBatch& m, std::vector<double>& re, std::vector<double>& im);
void classify(const MatBatch& m, double eps, std::vector<std::uint8_t>& out);
void apply(const MatBatch& m, const PointBatch& z, PointBatch& out);
}  // namespace avx2

}  // namespace glab::kernels
