#pragma once

#include <string>
#include <variant>
#include <vector>

#include "glab/farey.hpp"
#include "glab/lamination.hpp"
#include "glab/topology.hpp"

namespace glab {

// Grafting leaf with weight 2*pi*multiple, or the heavy weight +infinity.
struct GraftLeaf {
  CurveClass curve;
  long multiple = 0;
  bool heavy = false;
  double weight() const;
  bool operator==(const GraftLeaf& o) const = default;
};

// Projective structure with Fuchsian holonomy: base hyperbolic structure plus
// a multiloop with 2*pi-multiple weights, leaves kept in canonical order.
struct GraftedStructure {
  FNCoordinates tau;
  HolonomyRep rho;
  std::vector<GraftLeaf> leaves;
  static GraftedStructure fuchsian(const FNCoordinates& tau);
  bool operator==(const GraftedStructure& o) const { return tau == o.tau && leaves == o.leaves; }
};

struct ThurstonCoordinates {
  FNCoordinates tau;
  MeasuredLamination lamination;
};
ThurstonCoordinates thurston_coordinates(const GraftedStructure& c);

struct GraftingCylinder {
  CurveClass core;
  double circumference = 0.0;
  long multiple = 0;
  bool heavy = false;
  double height() const;
};
std::vector<GraftingCylinder> cylinders(const GraftedStructure& c);

GraftedStructure graft(const CurveOracle& o, const GraftedStructure& c, const CurveClass& l, long k);

struct GraftStep {
  long i = 0;
  FNCoordinates tau;
  std::vector<GraftLeaf> leaves;
};

struct GraftLimit {
  std::vector<GraftStep> steps;
  std::vector<GraftLeaf> limit;
  // Length of the boundary of the surface cut along the loop, measured as the
  // displacement of a point on the lifted axis, against the trace length.
  double boundary_length = 0.0;
  double translation_length = 0.0;
  double residual = 0.0;
};
GraftLimit iterate_graft_limit(const CurveOracle& o, const GraftedStructure& c, const CurveClass& l, long imax);

struct HyperbolicSegment {
  H2Point from, to;
};
struct CylinderCrossing {
  CurveClass curve;
  double height_fraction = 1.0;  // signed
  double drift = 0.0;
};
using PathPiece = std::variant<HyperbolicSegment, CylinderCrossing>;
double thurston_path_length(const GraftedStructure& c, const std::vector<PathPiece>& path);

struct RegionPoint {
  H2Point p;
};
struct CylinderPoint {
  CurveClass curve;
  double height_fraction = 0.0;
  double position = 0.0;  // arclength along the core from its base point
};
using SurfacePoint = std::variant<RegionPoint, CylinderPoint>;
// Points in the upper half-plane chart of the realified holonomy.
H2Point collapse_point(const GraftedStructure& c, const SurfacePoint& p);
// Point at signed arclength s along the axis of a Fuchsian loxodromic, measured
// from the top of the axis toward the attracting end.
H2Point axis_point(const MobiusMap& m, double s);

enum class Admissibility { certified, rejected, undecided };
struct AdmissibilityResult {
  Admissibility status = Admissibility::rejected;
  std::string reason;
};
AdmissibilityResult admissible_check(const CurveOracle& o, const GraftedStructure& c, const CurveClass& l);

enum class SpiralKind { spirals, roughly_circular };
SpiralKind spiral_classify(const MobiusMap& lambda, double winding);

struct PlanCaps {
  PathCaps path;
  int max_twist = 12;
  AngleOptions angle;
};

struct PlanStep {
  CurveClass loop;
  long count = 1;
  int twist = 0;        // power of the twist along the added curve
  CurveClass target;    // added curve of the move
  double angle = 0.0;
  double delta = 0.0;
  int ball = 0;
  bool certified = false;
  std::string note;
};

struct GraftPlan {
  PantsDecomposition m_sharp, m_flat;
  std::vector<ElementaryMove> path;
  std::vector<LaminationSeqSpec> specs;
  std::vector<PlanStep> steps;
  std::vector<GraftLeaf> terminal;
  bool cap_exhausted = false;
  std::string provenance;
  bool empty() const { return steps.empty() && terminal.empty(); }
  bool certified() const;
};

// Completes a multiloop to a pants decomposition, preferring twist-basis curves.
PantsDecomposition complete_multiloop(const CurveOracle& o, const std::vector<CurveClass>& curves);
GraftPlan graft_plan(const CurveOracle& o, const GraftedStructure& sharp, const GraftedStructure& flat,
                     const std::vector<double>& delta, const PlanCaps& caps = {});

}  // namespace glab
