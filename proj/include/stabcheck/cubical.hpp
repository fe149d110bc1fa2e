#ifndef STABCHECK_CUBICAL_HPP
#define STABCHECK_CUBICAL_HPP

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "stabcheck/system.hpp"

namespace stabcheck {

/// Hard limits of the packed cell encoding below.
inline constexpr int kMaxDim = 6;
inline constexpr int kMaxResolution = 500;
inline constexpr int kBitsPerAxis = 10;

/// A cell of the doubled grid, packed 10 bits per axis. Axis a of a grid with
/// resolution R carries a doubled coordinate in 0..2R: even values are vertex
/// hyperplanes, odd values are open cell intervals. The cell's dimension is
/// the number of odd coordinates. Top cubes reuse the same packing with plain
/// cube coordinates in 0..R-1.
using CellKey = std::uint64_t;

inline CellKey pack_cell(std::span<const int> coords) {
  CellKey key = 0;
  for (std::size_t a = 0; a < coords.size(); ++a) {
    key |= static_cast<CellKey>(coords[a]) << (kBitsPerAxis * a);
  }
  return key;
}

inline void unpack_cell(CellKey key, int dim, int* coords) {
  for (int a = 0; a < dim; ++a) {
    coords[a] = static_cast<int>((key >> (kBitsPerAxis * a)) & 0x3ffu);
  }
}

inline int cell_coord(CellKey key, int axis) {
  return static_cast<int>((key >> (kBitsPerAxis * axis)) & 0x3ffu);
}

inline CellKey with_coord(CellKey key, int axis, int value) {
  const CellKey mask = static_cast<CellKey>(0x3ffu) << (kBitsPerAxis * axis);
  return (key & ~mask) | (static_cast<CellKey>(value) << (kBitsPerAxis * axis));
}

/// Number of odd (interval) axes = the cell's dimension.
inline int cell_dim(CellKey key, int dim) {
  int d = 0;
  for (int a = 0; a < dim; ++a) d += cell_coord(key, a) & 1;
  return d;
}

/// Uniform grid over the box [-epsilon, epsilon]^dim with `resolution` cubes
/// per axis. Vertices are computed as epsilon*(2k - R)/R so the origin is an
/// exact grid vertex for even R.
struct GridGeometry {
  int dim = 0;
  int resolution = 0;
  double epsilon = 0.0;

  double vertex(int k) const {
    return epsilon * (2.0 * k - resolution) / resolution;
  }
  double cell_width() const { return 2.0 * epsilon / resolution; }
  int doubled_extent() const { return 2 * resolution + 1; }

  /// Geometric coordinate of a doubled grid coordinate: even -> vertex, odd
  /// -> midpoint of the cell interval (used for realizations).
  double doubled_to_coord(int c) const {
    return c % 2 == 0 ? vertex(c / 2)
                      : 0.5 * (vertex(c / 2) + vertex(c / 2 + 1));
  }
};

/// Interval-certified witness that f != 0 on a top cube: component
/// `component` satisfies |f_component| >= bound > 0 over the whole cube, with
/// the stated sign.
struct CubeCertificate {
  int component = -1;
  double bound = 0.0;
  int sign = 0;  // +1 or -1
};

/// Certified inner approximation of Sigma-bar at one resolution: the set of
/// closed grid cubes on which interval arithmetic certifies f != 0, together
/// with all of their faces (faces are generated on demand).
struct CubicalComplex {
  GridGeometry grid;
  std::vector<CellKey> top_cubes;               // sorted packed cube indices
  std::vector<CubeCertificate> certificates;    // parallel to top_cubes

  bool contains_cube(CellKey cube_index) const;
  /// True iff some certified closed cube contains the point (boundary points
  /// may belong to several cubes; any certified one counts).
  bool contains_point(const Eigen::VectorXd& xu) const;
  const CubeCertificate* certificate_for(CellKey cube_index) const;
};

/// Interval certificate for one cube: the first component whose enclosure
/// excludes 0, or nullopt if every component straddles 0.
std::optional<CubeCertificate> certify_cube(const VectorFieldSystem& sys,
                                            std::span<const Interval> box);

/// Builds the certified complex at one resolution. Deterministic: cubes are
/// scanned and stored in lexicographic order. Throws DomainError annotated
/// with the offending cube if an expression leaves its domain inside the box,
/// CapacityError if the grid exceeds max_cells.
CubicalComplex build_sigma_complex(const VectorFieldSystem& sys,
                                   const AnalysisParams& params, int resolution);

/// One complex per resolution, ascending. Certificates only improve under
/// refinement, so coarser certified regions are geometrically contained in
/// finer ones.
std::vector<CubicalComplex> neighborhood_filtration(const VectorFieldSystem& sys,
                                                    const AnalysisParams& params);

/// Deterministic low-discrepancy (Halton) sample of f over the box:
/// samples_per_cube points in every grid cube, concatenated in cube order.
/// Returns an n x N matrix of image points.
Eigen::MatrixXd sample_image(const VectorFieldSystem& sys,
                             const AnalysisParams& params, int resolution,
                             int samples_per_cube);

}  // namespace stabcheck

#endif  // STABCHECK_CUBICAL_HPP
