#pragma once

#include <string>
#include <vector>

#include "glab/error.hpp"
#include "glab/fuchsian.hpp"
#include "glab/words.hpp"

namespace glab {

struct CapExhausted : Error {
  using Error::Error;
};

// Algebraic intersection of homology classes, <a_i, b_i> = 1.
int algebraic_intersection(const SurfacePresentation& s, const Word& u, const Word& v);

// Supported twisting curves: a_i, b_i and the handle boundaries [a_i, b_i],
// in either orientation and any rotation.
bool twist_supported(const SurfacePresentation& s, const CurveClass& c);
// Image of an arbitrary word under the n-th power of the left twist along c.
Word twist_word(const SurfacePresentation& s, const CurveClass& c, const Word& w, int n);
CurveClass dehn_twist(const SurfacePresentation& s, const CurveClass& c, const CurveClass& target, int n);

// Curve predicates decided by the intersection oracle.
bool is_simple(const CurveOracle& o, const CurveClass& c);
bool is_separating(const CurveOracle& o, const CurveClass& c);
bool disjoint(const CurveOracle& o, const CurveClass& x, const CurveClass& y);
bool isotopic(const CurveOracle& o, const CurveClass& x, const CurveClass& y);

struct DualGraph {
  int pants = 0;
  // Edge k joins the pants on the two sides of curve k.
  std::vector<std::pair<int, int>> edges;
  bool trivalent() const;
};

struct PantsDecomposition {
  int genus = 2;
  std::vector<CurveClass> curves;
  bool operator==(const PantsDecomposition& o) const = default;
};

struct PantsValidation {
  bool valid = false;
  std::vector<std::string> violations;
  DualGraph graph;
};

PantsValidation validate_pants_decomposition(const CurveOracle& o, const PantsDecomposition& p);
// Same decomposition up to isotopy and ordering.
bool same_decomposition(const CurveOracle& o, const PantsDecomposition& x, const PantsDecomposition& y);

enum class MoveKind { torus, sphere };

struct Subsurface {
  MoveKind kind = MoveKind::torus;
  // Boundary curves, each listed once per side it bounds.
  std::vector<CurveClass> boundary;
};

struct ElementaryMove {
  CurveClass removed, added;
  MoveKind kind = MoveKind::torus;
  Subsurface region;
};

// Region swept by removing curve index k from a valid genus-2 decomposition.
Subsurface move_region(const CurveOracle& o, const PantsDecomposition& p, std::size_t k);
PantsDecomposition apply_move(const CurveOracle& o, const PantsDecomposition& p, const ElementaryMove& m);
ElementaryMove reverse_move(const ElementaryMove& m);

std::vector<ElementaryMove> enumerate_elementary_moves(const CurveOracle& o, const PantsDecomposition& p,
                                                       const CurveClass& l, int word_cap);

struct PathCaps {
  int depth = 4;
  int word_cap = 2;
};
// Breadth-first search; minimal within caps. Throws CapExhausted.
std::vector<ElementaryMove> pants_graph_path(const CurveOracle& o, const PantsDecomposition& from,
                                             const PantsDecomposition& to, const PathCaps& caps);

// Combinatorial train track. Each branch end sits on one of the two sides of
// a switch; a train path crosses a switch from one side to the other.
struct TrainTrack {
  struct Branch {
    int from = 0, to = 0;
    int from_side = 0, to_side = 0;
    Word label;
  };
  int switches = 0;
  std::vector<Branch> branches;
  // Nearly-straight parameters, stored unverified.
  double epsilon = 0.0, bilipschitz = 0.0;
  // Largest number of branch ends at a switch.
  int max_valence() const;
  bool valid() const;
};

struct WeightedCurve {
  CurveClass curve;
  long weight = 1;
};

struct Carrying {
  bool carried = false;
  std::vector<long> weights;
  std::string failure;
};

// One switch-pair track per handle; branch labels a_i, b_i.
TrainTrack standard_track(int genus);
Carrying traintrack_carries(const TrainTrack& t, const std::vector<WeightedCurve>& m);
bool switch_conditions_hold(const TrainTrack& t, const std::vector<long>& weights);

}  // namespace glab
