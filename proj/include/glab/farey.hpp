#pragma once

#include <array>
#include <string>
#include <vector>

#include "glab/lamination.hpp"
#include "glab/topology.hpp"

namespace glab {

// Slope p/q as a primitive integer vector, normalized q > 0 or (p, q) = (1, 0).
// On a handle, (p, q) is the class p*a + q*b: infinity is a, 0 is b.
struct Slope {
  long p = 1, q = 0;
  Slope() = default;
  Slope(long p_, long q_);
  static Slope parse(const std::string& s);
  std::string str() const;
  bool operator==(const Slope& o) const = default;
  auto operator<=>(const Slope& o) const = default;
};

long farey_det(const Slope& x, const Slope& y);
bool farey_adjacent(const Slope& x, const Slope& y);
// n-th power of the left twist along m acting on slopes: v -> v + n det(m, v) m.
Slope twist_slope(const Slope& m, const Slope& v, long n = 1);

enum class FareyCase { torus, sphere };

// Three pairwise Farey-adjacent slopes, sorted. For the four-punctured sphere
// each slope names a pair of opposite edges of the tetrahedron.
struct FareyTriangle {
  std::array<Slope, 3> s;
  FareyTriangle() = default;
  FareyTriangle(const Slope& x, const Slope& y, const Slope& z);
  bool contains(const Slope& m) const;
  bool operator==(const FareyTriangle& o) const = default;
  std::string str() const;
};

// Replace the slope opposite the edge {x, y}.
FareyTriangle diagonal_exchange(const FareyTriangle& t, const Slope& x, const Slope& y);

struct Exchange {
  Slope x, y;  // the edge kept
  FareyTriangle result;
};

// Left twist along m as diagonal exchanges: one per power on the torus,
// two per power on the sphere.
std::vector<Exchange> twist_as_exchanges(const FareyTriangle& t, const Slope& m, int power,
                                         FareyCase kind = FareyCase::torus);

struct LaminationSeqSpec {
  int index = 0;
  FareyCase kind = FareyCase::torus;
  // Subsurface boundary curves on S.
  std::vector<CurveClass> boundary;
  Slope m_from, m_to;
  int handle = 1;
};

// Triangle containing both ends; least non-backtracking third vertex.
FareyTriangle pivot_triangle(const LaminationSeqSpec& spec);
// Exchanges per twist power in the tail.
int twist_steps(FareyCase kind);
// nu_j for j in [jmin, jmax]: j < 0 half-twists toward m_from, j > 0 toward m_to.
std::vector<FareyTriangle> interpolation_path(const LaminationSeqSpec& spec, int jmin, int jmax);

// Mapping class supported on one handle, a product of twists along a_i and
// b_i; it fixes [a_i, b_i] as a word. Acts on slopes by an SL(2, Z) matrix.
struct HandleChart {
  int handle = 1;
  std::vector<Word> images;  // per generator
  std::array<long, 4> matrix = {1, 0, 0, 1};
  Word apply(const Word& w) const;
  Slope apply(const Slope& s) const;
};

// Chart sending the slope infinity (the curve a_i) to s.
HandleChart handle_chart(const SurfacePresentation& surf, int handle, const Slope& s);
// Chart sending the base triangle {infinity, 0, -1} onto t.
HandleChart triangle_chart(const SurfacePresentation& surf, int handle, const FareyTriangle& t);
// Simple closed curve on handle i with the given slope.
CurveClass slope_curve(const SurfacePresentation& surf, int handle, const Slope& s);

struct PantsArcs {
  std::vector<CurveClass> boundary;  // with multiplicity
  long arcs = 0;
};

struct CompanionMultiloop {
  std::vector<Leaf> leaves;
  FareyTriangle inside;
  // Twist curves of the limit lamination (common curves of M_i and M_{i+1}).
  std::vector<CurveClass> core;
  std::vector<PantsArcs> pants;
  int k = 3;
  MeasuredLamination limit() const;
};

// Genus 2: M_i is {a1, a2, [a1,b1]} with F_i the handle `spec.handle` (torus
// case) or the four-holed sphere cut by [a1,b1] (sphere case).
CompanionMultiloop companion_multiloop(const CurveOracle& o, const LaminationSeqSpec& spec, int j);

}  // namespace glab
