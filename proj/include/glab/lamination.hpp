#pragma once

#include <optional>
#include <string>
#include <vector>

#include "glab/fuchsian.hpp"
#include "glab/topology.hpp"

namespace glab {

// Closed leaf with a finite positive weight or the heavy weight +infinity.
struct Leaf {
  CurveClass curve;
  double weight = 1.0;
  bool heavy = false;
  bool operator==(const Leaf& o) const = default;
};

// lim_n Tw^n_core(base) for pairwise disjoint core curves in the twist basis.
struct TwistLimit {
  std::vector<CurveClass> core;
  std::vector<Leaf> base;
  bool operator==(const TwistLimit& o) const = default;
};

struct MeasuredLamination {
  std::vector<Leaf> leaves;
  std::optional<TwistLimit> limit;
  bool operator==(const MeasuredLamination& o) const = default;

  static MeasuredLamination multiloop(const std::vector<std::pair<std::string, double>>& words);
  std::vector<CurveClass> heavy_leaves() const;
  bool empty() const { return leaves.empty() && !limit; }
};

// Leaves of the n-th twist iterate; plain leaves are returned unchanged.
std::vector<Leaf> twist_iterate(const SurfacePresentation& s, const MeasuredLamination& x, int n);

struct AngleOptions {
  double tol = 1e-3;
  int first_iterate = 1;
  int max_iterate = 24;
};

struct AngleReport {
  double angle = 0.0;
  bool converged = true;
  bool stable = true;
  int iterate = 0;
  int ball = 0;
  std::vector<double> estimates;
};

// Largest crossing angle between leaves of x and leaves of y.
double multiloop_angle(const CurveOracle& o, const std::vector<Leaf>& x, const std::vector<Leaf>& y, bool* stable);
// Twist limits are replaced by iterates until two successive estimates agree to tol.
AngleReport lamination_angle(const CurveOracle& o, const MeasuredLamination& x, const MeasuredLamination& y,
                             const AngleOptions& opt = {});

}  // namespace glab
