#include <cmath>

#include "glab/kernels.hpp"

namespace glab::kernels {

void MatBatch::resize(std::size_t n) {
  for (auto* v : {&are, &aim, &bre, &bim, &cre, &cim, &dre, &dim}) v->resize(n);
}

void MatBatch::set(std::size_t i, const MobiusMap& m) {
  are[i] = m.a().real(), aim[i] = m.a().imag();
  bre[i] = m.b().real(), bim[i] = m.b().imag();
  cre[i] = m.c().real(), cim[i] = m.c().imag();
  dre[i] = m.d().real(), dim[i] = m.d().imag();
}

MobiusMap MatBatch::get(std::size_t i) const {
  return MobiusMap::from_sl2({are[i], aim[i]}, {bre[i], bim[i]}, {cre[i], cim[i]}, {dre[i], dim[i]});
}

namespace scalar {

namespace {

inline void cmul(double ar, double ai, double br, double bi, double& r, double& i) {
  r = ar * br - ai * bi;
  i = ar * bi + ai * br;
}

// Shared decision rule; the vector path reproduces it lane by lane.
inline std::uint8_t decide(double tr, double ti, bool ident, double eps) {
  if (ident) return 0;
  double dr = tr - 4.0;
  if (std::sqrt(dr * dr + ti * ti) <= eps) return 1;
  if (std::fabs(ti) <= eps && tr >= -eps && tr < 4.0 - eps) return 2;
  return 3;
}

}  // namespace

void mul(const MatBatch& x, const MatBatch& y, MatBatch& out) {
  std::size_t n = x.size();
  out.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    double r1, i1, r2, i2;
    cmul(x.are[k], x.aim[k], y.are[k], y.aim[k], r1, i1);
    cmul(x.bre[k], x.bim[k], y.cre[k], y.cim[k], r2, i2);
    double ar = r1 + r2, ai = i1 + i2;
    cmul(x.are[k], x.aim[k], y.bre[k], y.bim[k], r1, i1);
    cmul(x.bre[k], x.bim[k], y.dre[k], y.dim[k], r2, i2);
    double br = r1 + r2, bi = i1 + i2;
    cmul(x.cre[k], x.cim[k], y.are[k], y.aim[k], r1, i1);
    cmul(x.dre[k], x.dim[k], y.cre[k], y.cim[k], r2, i2);
    double cr = r1 + r2, ci = i1 + i2;
    cmul(x.cre[k], x.cim[k], y.bre[k], y.bim[k], r1, i1);
    cmul(x.dre[k], x.dim[k], y.dre[k], y.dim[k], r2, i2);
    double dr = r1 + r2, di = i1 + i2;
    out.are[k] = ar, out.aim[k] = ai, out.bre[k] = br, out.bim[k] = bi;
    out.cre[k] = cr, out.cim[k] = ci, out.dre[k] = dr, out.dim[k] = di;
  }
}

void trace_sq(const MatBatch& m, std::vector<double>& re, std::vector<double>& im) {
  std::size_t n = m.size();
  re.resize(n);
  im.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    double tr = m.are[k] + m.dre[k], ti = m.aim[k] + m.dim[k];
    cmul(tr, ti, tr, ti, re[k], im[k]);
  }
}

void classify(const MatBatch& m, double eps, std::vector<std::uint8_t>& out) {
  std::size_t n = m.size();
  out.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    double tr = m.are[k] + m.dre[k], ti = m.aim[k] + m.dim[k];
    double t2r, t2i;
    cmul(tr, ti, tr, ti, t2r, t2i);
    bool ident = std::fabs(m.bre[k]) <= eps && std::fabs(m.bim[k]) <= eps &&
                 std::fabs(m.cre[k]) <= eps && std::fabs(m.cim[k]) <= eps &&
                 std::fabs(m.are[k] - m.dre[k]) <= eps && std::fabs(m.aim[k] - m.dim[k]) <= eps;
    out[k] = decide(t2r, t2i, ident, eps);
  }
}

void apply(const MatBatch& m, const PointBatch& z, PointBatch& out) {
  std::size_t n = m.size();
  out.re.resize(n);
  out.im.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    double nr, ni, dr, di;
    cmul(m.are[k], m.aim[k], z.re[k], z.im[k], nr, ni);
    nr += m.bre[k], ni += m.bim[k];
    cmul(m.cre[k], m.cim[k], z.re[k], z.im[k], dr, di);
    dr += m.dre[k], di += m.dim[k];
    double den = dr * dr + di * di;
    out.re[k] = (nr * dr + ni * di) / den;
    out.im[k] = (ni * dr - nr * di) / den;
  }
}

}  // namespace scalar
}  // namespace glab::kernels
