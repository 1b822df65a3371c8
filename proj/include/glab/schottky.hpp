#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "glab/fuchsian.hpp"
#include "glab/lamination.hpp"
#include "glab/topology.hpp"

namespace glab {

struct HandleCaps {
  int max_q = 6;
  // Partner and replacement curves are searched among cyclic words this long.
  int word_length = 4;
  int max_partners = 12;
  double margin = 1e-6;
};

// Pair of simple loops meeting once with loxodromic, non-elementary holonomy.
struct Handle {
  CurveClass a, b;
  CurveClass seed;
  bool seed_replaced = false;
  int q = 0;             // a = seed * partner^q, or b = seed * partner^q when swapped
  bool swapped = false;  // the <partner, seed * partner^q> form
  int intersection = 0;
  double loxodromic_margin = 0.0;    // smallest distance of tr^2 to [0, 4]
  double nonelementary_margin = 0.0; // |tr[A, B] - 2|
  double nonswap_margin = 0.0;       // chordal gap between B(fix A) and the other fixed point
};

struct HandleCheck {
  bool ok = false;
  std::vector<std::string> failures;
  Handle measured;
};

// Re-derives every certificate; topology from the oracle, geometry from rho.
HandleCheck verify_handle(const HolonomyRep& rho, const CurveOracle& o, const CurveClass& a, const CurveClass& b,
                          double margin = 1e-6);
// Throws CapExhausted carrying the last failing certificate.
Handle find_handle(const HolonomyRep& rho, const CurveOracle& o, const CurveClass& seed, const HandleCaps& caps = {});

struct LoopCaps {
  int max_k = 4;
  int max_n = 4;
  double length_floor = 0.1;
};

struct DecompositionLoop {
  CurveClass loop;
  Word d;
  int k = 0, n = 1;
  // Orientation signs of the y, b and a blocks of d.
  int sign_y = 1, sign_b = 1, sign_a = 1;
  CurveClass ba_k;
  double translation_length = 0.0;
  double trace_margin = 0.0;
};

// d^n x with d = y b a^k: smallest (k, n), n >= 1, then block orientation,
// giving a simple non-separating loop disjoint from b a^k with loxodromic
// holonomy of translation length above the floor.
DecompositionLoop build_decomposition_loop(const HolonomyRep& rho, const CurveOracle& o, const Handle& h,
                                           const CurveClass& x, const CurveClass& y, const LoopCaps& caps = {});

// Generalized round disk: the inside of the circle, or its outside together
// with infinity.
struct Disk {
  cplx center;
  double radius = 0.0;
  bool exterior = false;
  bool contains(const ExtPoint& p) const;
  Disk complement() const { return {center, radius, !exterior}; }
};

// Image of a generalized disk; throws when the image circle is a line.
Disk image(const MobiusMap& g, const Disk& d);
// Largest t such that the t-neighbourhood of inner stays in outer (negative
// when it does not fit).
double containment_margin(const Disk& inner, const Disk& outer);
double disjointness_margin(const Disk& x, const Disk& y);

struct PingPongPair {
  Disk minus, plus;  // g maps the outside of minus into plus
};

struct SchottkyCertificate {
  std::vector<MobiusMap> gens;
  std::vector<PingPongPair> disks;
  double disjointness_margin = 0.0;
  double mapping_margin = 0.0;
  bool certified = false;
  std::string failure;
};

struct PingPongCaps {
  int max_power = 3;  // isometric circles of g^m seed the search
  int grid = 48;
  int sweeps = 12;
  double floor = 1e-9;
};

// Failure is data: certified = false with the best margins found.
SchottkyCertificate ping_pong_certify(const std::vector<MobiusMap>& gens, const PingPongCaps& caps = {});

struct SchottkyCheck {
  bool ok = false;
  double disjointness_margin = 0.0;
  double mapping_margin = 0.0;
};
// Recomputes g(boundary) pointwise from samples of each circle.
SchottkyCheck verify_schottky(const SchottkyCertificate& c, int samples = 720);

// a1, a2, [a1, b1], then b1, b2, a1 b1, a2 b2, a1 a2, b1 b2.
std::vector<CurveClass> density_battery();
std::vector<double> intersection_vector(const CurveOracle& o, const std::vector<Leaf>& m);
// Scaled to sup norm 1.
std::vector<double> projectivize(const std::vector<double>& v);
double pml_distance(const std::vector<double>& u, const std::vector<double>& v);
// Projective limit of the twist iterates of the target, or its own vector.
std::vector<double> target_vector(const CurveOracle& o, const MeasuredLamination& target);

struct DensityCaps {
  int max_denominator = 256;
  int max_twist = 64;
};

struct DensityResult {
  // Integer-weighted multiloop; the Fuchsian fiber member carries 2*pi times
  // these weights.
  std::vector<Leaf> multiloop;
  int denominator = 0;
  int twist = 0;
  double distance = 0.0;
  bool certified = false;
  std::vector<double> target, result;
};

DensityResult density_experiment(const CurveOracle& o, const MeasuredLamination& target, double eps,
                                 const DensityCaps& caps = {});
std::vector<Leaf> fiber_weights(const std::vector<Leaf>& multiloop);

// Weighted multiloops on pants decompositions obtained from the standard one
// by short products of twists; seeded std::mt19937_64.
std::vector<MeasuredLamination> random_multiloop_targets(int count, std::uint64_t seed);
std::vector<DensityResult> density_batch(const CurveOracle& o, const std::vector<MeasuredLamination>& targets,
                                         double eps, const DensityCaps& caps = {});

}  // namespace glab
