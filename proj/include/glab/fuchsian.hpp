#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "glab/hyperbolic.hpp"
#include "glab/mobius.hpp"
#include "glab/words.hpp"

namespace glab {

// Genus-2 coordinates relative to the reference decomposition {a1, a2, c},
// c = [a1, b1]. Twists are hyperbolic translations in length units; a
// nonzero bend makes the twist complex (t + i*bend), bending along that curve.
struct FNCoordinates {
  std::string decomposition = "standard";
  std::vector<double> lengths = {2.0, 2.0, 2.0};
  std::vector<double> twists = {0.0, 0.0, 0.0};
  std::vector<double> bends = {0.0, 0.0, 0.0};
  bool operator==(const FNCoordinates& o) const = default;
};

// Reference curves in FN order: a1, a2, [a1, b1].
std::vector<CurveClass> reference_curves();

class HolonomyRep {
public:
  HolonomyRep() = default;
  HolonomyRep(int genus, std::vector<MobiusMap> gens);

  int genus() const { return genus_; }
  const std::vector<MobiusMap>& generators() const { return gens_; }
  const MobiusMap& generator(int k) const { return gens_[static_cast<std::size_t>(k)]; }
  bool fuchsian() const { return fuchsian_; }
  bool lifts_to_sl2() const { return lifts_; }
  double relator_residual() const { return residual_; }

  MobiusMap evaluate(const Word& w) const;
  HolonomyRep conjugate(const MobiusMap& g) const;
  // Conjugator taking the invariant circle to the real line (identity when
  // the generators are already real); empty when none exists within tol.
  const std::optional<MobiusMap>& real_frame() const { return frame_; }
  // Exactly real representative, conjugated by real_frame().
  HolonomyRep realified() const;

private:
  int genus_ = 2;
  std::vector<MobiusMap> gens_, inv_;
  bool fuchsian_ = false;
  bool lifts_ = true;
  double residual_ = 0.0;
  std::optional<MobiusMap> frame_;
};

HolonomyRep build_from_fn(const FNCoordinates& fn);

double geodesic_length(const HolonomyRep& rho, const CurveClass& c);

// Repelling -> attracting endpoints of a Fuchsian loxodromic, on the real line.
GeodesicH2 axis_h2(const MobiusMap& m);

struct WordClassification {
  Word word;
  MobiusType type;
};

struct EndpointViolation {
  Word first, second;
  double gap = 0.0;
  cplx commutator_trace;
  double cross_ratio = 0.0;
};

struct LoxodromicityReport {
  int radius = 0;
  std::size_t words_checked = 0;
  std::size_t counts[4] = {0, 0, 0, 0};
  std::vector<WordClassification> violations;
  std::vector<EndpointViolation> endpoint_violations;
  // Pairs closer than endpoint_gap on the sphere, each adjudicated by the
  // conjugation-invariant ratio |tr[A,B] - 2| / |(tr^2 A - 4)(tr^2 B - 4)|,
  // recomputed in quad precision when double rounding could hide it.
  std::size_t close_pairs = 0;
  std::size_t close_pairs_distinct = 0;
  double min_cross_ratio = 1.0;
  bool certified = false;
};

struct ScanOptions {
  double margin = kClassifyMargin;
  double endpoint_gap = 1e-6;
  bool check_endpoints = true;
};

LoxodromicityReport purely_loxodromic_scan(const HolonomyRep& rho, int radius, const ScanOptions& opt = {});

struct PairEvidence {
  bool shares_endpoint = false;
  double gap = 0.0;
  cplx commutator_trace;
  double cross_ratio = 0.0;
};
// Scale-free endpoint coincidence measure; zero iff a fixed point is shared.
double endpoint_cross_ratio(const MobiusMap& a, const MobiusMap& b);
// Direct check of two loxodromics for a common fixed point.
PairEvidence endpoint_evidence(const MobiusMap& a, const MobiusMap& b);

struct Crossing {
  double position = 0.0;  // along the first axis, modulo its length
  double angle = 0.0;
};

struct IntersectionResult {
  int count = 0;
  bool parallel = false;
  bool stable = true;
  int ball = 0;
  std::vector<Crossing> crossings;
};

// Geometric intersection oracle on a Fuchsian representation. Word balls
// and matrix images are cached per radius.
class CurveOracle {
public:
  explicit CurveOracle(const HolonomyRep& rho, int ball = 3);
  CurveOracle(const CurveOracle&) = delete;
  CurveOracle& operator=(const CurveOracle&) = delete;
  const HolonomyRep& rep() const { return rho_; }
  const SurfacePresentation& surface() const { return surface_; }
  int ball() const { return ball_; }

  // Crossings of c2 lifts with a fundamental segment of axis(c1) at radius r.
  IntersectionResult crossings(const CurveClass& c1, const CurveClass& c2, int r) const;
  // Count at the default ball, flagged stable when radius+1 agrees.
  IntersectionResult intersection(const CurveClass& c1, const CurveClass& c2, bool check_stable = true) const;
  int count(const CurveClass& c1, const CurveClass& c2) const;
  bool parallel(const CurveClass& c1, const CurveClass& c2) const;

private:
  const std::vector<MobiusMap>& ball_maps(int r) const;

  HolonomyRep rho_;
  SurfacePresentation surface_;
  int ball_;
  mutable std::mutex mu_;
  mutable std::map<int, std::vector<MobiusMap>> balls_;
  mutable std::map<std::pair<Word, Word>, IntersectionResult> cache_;
};

IntersectionResult intersection_count(const HolonomyRep& rho, const CurveClass& c1, const CurveClass& c2, int ball = 3);

}  // namespace glab
