#include <random>

#include "doctest.h"
#include "glab/kernels.hpp"

using namespace glab;
using namespace glab::kernels;

namespace {

MatBatch random_batch(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2, 2);
  MatBatch b(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (;;) {
      cplx a(u(rng), u(rng)), bb(u(rng), u(rng)), c(u(rng), u(rng)), d(u(rng), u(rng));
      if (std::abs(a * d - bb * c) < 0.2) continue;
      b.set(i, MobiusMap(a, bb, c, d));
      break;
    }
  }
  return b;
}

}  // namespace

TEST_CASE("batched product matches MobiusMap") {
  std::mt19937_64 rng(1);
  auto x = random_batch(37, rng), y = random_batch(37, rng);
  MatBatch out;
  mul(x, y, out);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK((x.get(i) * y.get(i)).distance(out.get(i)) < 1e-14);
}

TEST_CASE("avx2 equals scalar reference") {
  if (!avx2_available()) return;
  std::mt19937_64 rng(2);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 64u, 1001u}) {
    auto x = random_batch(n, rng), y = random_batch(n, rng);
    MatBatch s, v;
    scalar::mul(x, y, s);
    avx2::mul(x, y, v);
    CHECK(s.are == v.are);
    CHECK(s.dim == v.dim);
    CHECK(s.bre == v.bre);
    CHECK(s.cim == v.cim);
    std::vector<double> sr, si, vr, vi;
    scalar::trace_sq(x, sr, si);
    avx2::trace_sq(x, vr, vi);
    CHECK(sr == vr);
    CHECK(si == vi);
    PointBatch z(n), zs, zv;
    std::uniform_real_distribution<double> u(-3, 3);
    for (std::size_t i = 0; i < n; ++i) z.re[i] = u(rng), z.im[i] = u(rng);
    scalar::apply(x, z, zs);
    avx2::apply(x, z, zv);
    CHECK(zs.re == zv.re);
    CHECK(zs.im == zv.im);
  }
}

TEST_CASE("batched classification agrees with scalar classify") {
  std::mt19937_64 rng(4);
  std::vector<MobiusMap> seeds = {MobiusMap(2, 0, 0, 0.5), MobiusMap(1, 1, 0, 1),
                                  MobiusMap(std::polar(1.0, 0.5), 0, 0, std::polar(1.0, -0.5)),
                                  MobiusMap::identity()};
  auto g = random_batch(400, rng);
  MatBatch m(400);
  for (std::size_t i = 0; i < 400; ++i) m.set(i, g.get(i) * seeds[i % 4] * g.get(i).inverse());
  std::vector<std::uint8_t> s, v;
  scalar::classify(m, 1e-9, s);
  classify(m, 1e-9, v);
  CHECK(s == v);
  for (std::size_t i = 0; i < 400; ++i) {
    CHECK(static_cast<int>(s[i]) == static_cast<int>(classify(m.get(i)).type));
    if (i % 4 != 3) CHECK(static_cast<int>(s[i]) == static_cast<int>(i % 4 == 0 ? 3 : i % 4));
  }
}

TEST_CASE("batched point action") {
  std::mt19937_64 rng(9);
  auto m = random_batch(10, rng);
  PointBatch z(10), out;
  for (int i = 0; i < 10; ++i) z.re[i] = 0.1 * i, z.im[i] = 1.0 - 0.05 * i;
  apply(m, z, out);
  for (int i = 0; i < 10; ++i) {
    cplx w = m.get(i).apply(ExtPoint(cplx(z.re[i], z.im[i]))).value();
    CHECK(std::abs(w - cplx(out.re[i], out.im[i])) < 1e-12);
  }
}
