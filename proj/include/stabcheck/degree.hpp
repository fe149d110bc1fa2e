#ifndef STABCHECK_DEGREE_HPP
#define STABCHECK_DEGREE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "stabcheck/cubical.hpp"
#include "stabcheck/homology.hpp"
#include "stabcheck/system.hpp"

namespace stabcheck {

/// Closed loop in state x input space given componentwise as expressions of
/// the parameter t over [0, 2pi], plus a projection to a plane for winding
/// evidence.
struct ProbeLoop {
  std::string name;
  std::vector<Expression> components;   // n+m expressions of t
  std::pair<int, int> projection{0, 1};  // 0-based indices into (x1..xn,u1..um)
  int samples = 256;
};

/// Samples the loop at t_k = 2*pi*k/samples, k = 0..samples; validates
/// closure (first == last within 1e-9) and snaps the last column onto the
/// first. Returns an (n+m) x (samples+1) matrix.
Eigen::MatrixXd sample_loop(const ProbeLoop& loop, int n, int m);

/// Winding number of a closed planar loop about the origin via branch-tracked
/// angle increments. Throws OriginTooCloseError if any sample is closer than
/// delta to the origin, TooCoarseError if consecutive samples subtend an
/// angle >= pi/2.
int winding_number(const Eigen::Matrix2Xd& samples, double delta);

/// Winding of the loop's own projection (no field applied).
int loop_self_winding(const ProbeLoop& loop, int n, int m, double delta);

/// Winding of the projected image f(loop): composes f with the loop, projects
/// onto the given pair of image coordinates, and winds. Throws
/// ZeroCrossingError if |f| < delta at a sample.
int loop_image_winding(const VectorFieldSystem& sys, const ProbeLoop& loop,
                       std::pair<int, int> target_projection, double delta);

struct TopDegreeResult {
  int degree = 0;
  Eigen::VectorXd regular_value;  // direction in R^n actually used
  long long simplices = 0;
};

/// Mapping degree of f/|f| restricted to an (n-1)-cycle of the grid complex,
/// computed by signed regular-value preimage counting over Kuhn-triangulated
/// (and adaptively subdivided) facets. The regular value is drawn from a
/// seeded RNG and retried (up to max_retries) whenever a facet image passes
/// within tolerance of the chosen ray.
///
/// Throws NotACycleError if the chain has nonzero boundary, ZeroCrossingError
/// if |f| < delta at an evaluation point, TooCoarseError if a facet image
/// cannot be resolved by subdivision, DegenerateRegularValueError when every
/// candidate direction fails.
TopDegreeResult top_degree(const VectorFieldSystem& sys, const Chain& cycle,
                           const GridGeometry& grid, double delta,
                           std::uint64_t seed, int max_retries = 32);

/// Coordinate-pair probe loops of radius rho about the origin in every
/// (state_i, state_j) and (state_i, input_j) plane.
std::vector<ProbeLoop> auto_probes(const VectorFieldSystem& sys,
                                   const AnalysisParams& params);

/// True iff every sample of the loop lies inside some certified cube.
bool probe_inside_complex(const ProbeLoop& loop, const CubicalComplex& complex,
                          int n, int m);

}  // namespace stabcheck

#endif  // STABCHECK_DEGREE_HPP
