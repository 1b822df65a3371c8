#include <immintrin.h>

#include "glab/kernels.hpp"

#define GLAB_AVX2 __attribute__((target("avx2")))

namespace glab::kernels::avx2 {

namespace {

struct C4 {
  __m256d r, i;
};

GLAB_AVX2 inline C4 load(const std::vector<double>& re, const std::vector<double>& im, std::size_t k) {
  return {_mm256_loadu_pd(re.data() + k), _mm256_loadu_pd(im.data() + k)};
}

GLAB_AVX2 inline void store(std::vector<double>& re, std::vector<double>& im, std::size_t k, C4 v) {
  _mm256_storeu_pd(re.data() + k, v.r);
  _mm256_storeu_pd(im.data() + k, v.i);
}

GLAB_AVX2 inline C4 cmul(C4 a, C4 b) {
  return {_mm256_sub_pd(_mm256_mul_pd(a.r, b.r), _mm256_mul_pd(a.i, b.i)),
          _mm256_add_pd(_mm256_mul_pd(a.r, b.i), _mm256_mul_pd(a.i, b.r))};
}

GLAB_AVX2 inline C4 cadd(C4 a, C4 b) { return {_mm256_add_pd(a.r, b.r), _mm256_add_pd(a.i, b.i)}; }

GLAB_AVX2 inline __m256d vabs(__m256d x) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
}

}  // namespace

GLAB_AVX2 void mul(const MatBatch& x, const MatBatch& y, MatBatch& out) {
  std::size_t n = x.size();
  out.resize(n);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    C4 xa = load(x.are, x.aim, k), xb = load(x.bre, x.bim, k);
    C4 xc = load(x.cre, x.cim, k), xd = load(x.dre, x.dim, k);
    C4 ya = load(y.are, y.aim, k), yb = load(y.bre, y.bim, k);
    C4 yc = load(y.cre, y.cim, k), yd = load(y.dre, y.dim, k);
    store(out.are, out.aim, k, cadd(cmul(xa, ya), cmul(xb, yc)));
    store(out.bre, out.bim, k, cadd(cmul(xa, yb), cmul(xb, yd)));
    store(out.cre, out.cim, k, cadd(cmul(xc, ya), cmul(xd, yc)));
    store(out.dre, out.dim, k, cadd(cmul(xc, yb), cmul(xd, yd)));
  }
  if (k < n) {
    MatBatch xt(n - k), yt(n - k), ot;
    for (std::size_t j = k; j < n; ++j) xt.set(j - k, x.get(j)), yt.set(j - k, y.get(j));
    scalar::mul(xt, yt, ot);
    for (std::size_t j = k; j < n; ++j) out.set(j, ot.get(j - k));
  }
}

GLAB_AVX2 void trace_sq(const MatBatch& m, std::vector<double>& re, std::vector<double>& im) {
  std::size_t n = m.size();
  re.resize(n);
  im.resize(n);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    C4 t = cadd(load(m.are, m.aim, k), load(m.dre, m.dim, k));
    store(re, im, k, cmul(t, t));
  }
  for (; k < n; ++k) {
    double tr = m.are[k] + m.dre[k], ti = m.aim[k] + m.dim[k];
    re[k] = tr * tr - ti * ti;
    im[k] = tr * ti + ti * tr;
  }
}

GLAB_AVX2 void classify(const MatBatch& m, double eps, std::vector<std::uint8_t>& out) {
  std::size_t n = m.size();
  out.resize(n);
  std::size_t k = 0;
  const __m256d e = _mm256_set1_pd(eps);
  const __m256d four = _mm256_set1_pd(4.0);
  for (; k + 4 <= n; k += 4) {
    C4 a = load(m.are, m.aim, k), d = load(m.dre, m.dim, k);
    C4 t = cadd(a, d);
    C4 t2 = cmul(t, t);
    __m256d le = _mm256_cmp_pd(vabs(_mm256_loadu_pd(m.bre.data() + k)), e, _CMP_LE_OQ);
    le = _mm256_and_pd(le, _mm256_cmp_pd(vabs(_mm256_loadu_pd(m.bim.data() + k)), e, _CMP_LE_OQ));
    le = _mm256_and_pd(le, _mm256_cmp_pd(vabs(_mm256_loadu_pd(m.cre.data() + k)), e, _CMP_LE_OQ));
    le = _mm256_and_pd(le, _mm256_cmp_pd(vabs(_mm256_loadu_pd(m.cim.data() + k)), e, _CMP_LE_OQ));
    le = _mm256_and_pd(le, _mm256_cmp_pd(vabs(_mm256_sub_pd(a.r, d.r)), e, _CMP_LE_OQ));
    le = _mm256_and_pd(le, _mm256_cmp_pd(vabs(_mm256_sub_pd(a.i, d.i)), e, _CMP_LE_OQ));
    __m256d dr = _mm256_sub_pd(t2.r, four);
    __m256d dist = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(dr, dr), _mm256_mul_pd(t2.i, t2.i)));
    __m256d para = _mm256_cmp_pd(dist, e, _CMP_LE_OQ);
    __m256d ell = _mm256_cmp_pd(vabs(t2.i), e, _CMP_LE_OQ);
    ell = _mm256_and_pd(ell, _mm256_cmp_pd(t2.r, _mm256_sub_pd(_mm256_setzero_pd(), e), _CMP_GE_OQ));
    ell = _mm256_and_pd(ell, _mm256_cmp_pd(t2.r, _mm256_sub_pd(four, e), _CMP_LT_OQ));
    int mi = _mm256_movemask_pd(le), mp = _mm256_movemask_pd(para), me = _mm256_movemask_pd(ell);
    for (int l = 0; l < 4; ++l) {
      std::uint8_t code = 3;
      if (mi >> l & 1) code = 0;
      else if (mp >> l & 1) code = 1;
      else if (me >> l & 1) code = 2;
      out[k + l] = code;
    }
  }
  if (k < n) {
    MatBatch tail(n - k);
    for (std::size_t j = k; j < n; ++j) tail.set(j - k, m.get(j));
    std::vector<std::uint8_t> o;
    scalar::classify(tail, eps, o);
    for (std::size_t j = k; j < n; ++j) out[j] = o[j - k];
  }
}

GLAB_AVX2 void apply(const MatBatch& m, const PointBatch& z, PointBatch& out) {
  std::size_t n = m.size();
  out.re.resize(n);
  out.im.resize(n);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    C4 w = load(z.re, z.im, k);
    C4 num = cadd(cmul(load(m.are, m.aim, k), w), load(m.bre, m.bim, k));
    C4 den = cadd(cmul(load(m.cre, m.cim, k), w), load(m.dre, m.dim, k));
    __m256d dd = _mm256_add_pd(_mm256_mul_pd(den.r, den.r), _mm256_mul_pd(den.i, den.i));
    __m256d rr = _mm256_add_pd(_mm256_mul_pd(num.r, den.r), _mm256_mul_pd(num.i, den.i));
    __m256d ii = _mm256_sub_pd(_mm256_mul_pd(num.i, den.r), _mm256_mul_pd(num.r, den.i));
    _mm256_storeu_pd(out.re.data() + k, _mm256_div_pd(rr, dd));
    _mm256_storeu_pd(out.im.data() + k, _mm256_div_pd(ii, dd));
  }
  if (k < n) {
    MatBatch mt(n - k);
    PointBatch zt(n - k), ot;
    for (std::size_t j = k; j < n; ++j) {
      mt.set(j - k, m.get(j));
      zt.re[j - k] = z.re[j], zt.im[j - k] = z.im[j];
    }
    scalar::apply(mt, zt, ot);
    for (std::size_t j = k; j < n; ++j) out.re[j] = ot.re[j - k], out.im[j] = ot.im[j - k];
  }
}

}  // namespace glab::kernels::avx2
