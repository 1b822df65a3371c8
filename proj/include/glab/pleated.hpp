#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "glab/farey.hpp"
#include "glab/fuchsian.hpp"
#include "glab/hyperbolic.hpp"
#include "glab/topology.hpp"

namespace glab {

enum class Selector { attracting, repelling };

// Vertex of an ideal triangle: fixed point of conj * core * conj^-1.
struct VertexSpec {
  Word conj;
  Word core;
};

// Across edge e (opposite vertex e) of a triangle lies deck * triangle `tri`,
// meeting it along its edge `edge`.
struct GalleryAdjacency {
  Word deck;
  int tri = 0;
  int edge = 0;
};

// Two ideal triangles of the complement of a spiraling lamination inside one
// complementary piece of its closed leaves, with their edge pairings (triangle
// indices local to the piece).
struct LaminationPiece {
  std::string kind;  // "pants", "handle" or "handle-limit"
  std::vector<CurveClass> boundary;
  std::array<Word, 2> gens;
  std::vector<std::array<VertexSpec, 3>> triangles;
  std::vector<std::array<GalleryAdjacency, 3>> pairing;
};

// Maximal lamination: closed leaves plus isolated leaves spiraling left onto
// them, given by the complementary triangles of each piece.
struct SpiralLamination {
  std::vector<CurveClass> closed;
  std::vector<LaminationPiece> pieces;
  std::size_t triangle_count() const;
};

// Pants with boundary x, y, z, xyz = 1; leaves join distinct boundaries.
LaminationPiece pants_piece(const Word& x, const Word& y);
// Handle with boundary [a, b] and the ideal triangulation of slopes
// {infinity, 0, -1} transported by the chart.
LaminationPiece handle_piece(const SurfacePresentation& s, int handle, const HandleChart& chart);
// Hausdorff limit of the handle triangulations under twisting along the
// chart image of 0 (end = +1) or of infinity (end = -1).
LaminationPiece handle_limit_piece(const SurfacePresentation& s, int handle, const HandleChart& chart, int end);

// Genus 2 over {a1, a2, [a1, b1]}: two pants pieces, four triangles.
SpiralLamination standard_spiral_lamination();
// Chart sending infinity to spec.m_from and 0 to spec.m_to on spec.handle.
HandleChart sequence_chart(const SurfacePresentation& s, const LaminationSeqSpec& spec);
// nu_{i,j}: handle triangulation of the j-th Farey triangle, the other handle
// cut into pants along its a-curve.
SpiralLamination sequence_lamination(const LaminationSeqSpec& spec, int j);
// Limit of nu_{i,j} as j -> +infinity (end = +1) or -infinity (end = -1).
SpiralLamination sequence_limit(const LaminationSeqSpec& spec, int end);

struct GalleryVertex {
  VertexSpec spec;
  Selector selector = Selector::attracting;
  double domain = 0.0;  // point of the real line under the realified domain
  ExtPoint target;
};

struct GalleryTriangle {
  std::array<GalleryVertex, 3> v;
  int piece = 0;
};

struct PleatedSurface {
  // Both conjugated by one fixed real map so no vertex sits at infinity.
  HolonomyRep domain;  // realified Fuchsian structure
  HolonomyRep rho;
  SpiralLamination lamination;
  std::vector<GalleryTriangle> gallery;
  std::vector<std::array<GalleryAdjacency, 3>> adjacency;
  int longest_core = 0;
};

// Rule for translated triangles; also fixes the stored selectors.
Selector spiral_selector(const HolonomyRep& domain, const Word& vertex, const Word& other);

PleatedSurface realize(const HolonomyRep& domain, const HolonomyRep& rho, const SpiralLamination& nu,
                       const LoxodromicityReport* certificate = nullptr);

struct PleatedSample {
  int tri = 0;
  H2Point x;
};

// n points at fixed depths in the model ideal triangle, cycling through the
// gallery (or only through `tris` when given).
std::vector<PleatedSample> sample_battery(const PleatedSurface& b, int n, const std::vector<int>& tris = {});
// Image of a point of the triangle deck * gallery[tri]; the translated
// triangle's vertices are recomputed from conjugated words by the rule.
H3Point evaluate(const PleatedSurface& b, int tri, const H2Point& x, const Word& deck = {});
bool in_triangle(const PleatedSurface& b, int tri, const H2Point& x, const Word& deck = {});

double equivariance_residual(const PleatedSurface& b, const std::vector<PleatedSample>& samples,
                             const std::vector<Word>& gens);

struct EdgeBend {
  int tri = 0, edge = 0;
  int other = 0, other_edge = 0;
  Word deck;
  double angle = 0.0;
};
std::vector<EdgeBend> bending_angles(const PleatedSurface& b);

// Largest change of pairwise distances among three interior markers per
// triangle between the domain and the image.
double stratum_isometry_defect(const PleatedSurface& b);
// Largest |y| among images of the samples, the distance scale from the plane
// over the real line.
double plane_deviation(const PleatedSurface& b, const std::vector<PleatedSample>& samples);

struct Location {
  Word deck;
  int tri = 0;
  int steps = 0;
};
// Straight walk from the center of gallery[start] to x.
Location locate(const PleatedSurface& b, const H2Point& x, int start = 0, int max_steps = 20000);
H3Point pleated_map(const PleatedSurface& b, const H2Point& x, int start = 0);

struct ConvergenceRow {
  int j = 0;
  double distance = 0.0;
  bool ok = true;
  std::string failure;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  // Non-increasing toward each end, over |j| >= tail_from.
  int tail_from = 0;
  bool forward_nonincreasing = true;
  bool backward_nonincreasing = true;
  double forward_final = 0.0;
  double backward_final = 0.0;
};

// D(j) = sup over samples of the distance between the pleated maps of
// nu_{i,j} and of the limit toward the end of the range j lies on (j >= 0
// measures against the +infinity limit).
ConvergenceTable convergence_experiment(const FNCoordinates& fn, const LaminationSeqSpec& spec, int jmin, int jmax,
                                        int samples = 24, int tail_from = 0);

}  // namespace glab
