#ifndef STABCHECK_SYSTEM_HPP
#define STABCHECK_SYSTEM_HPP

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "stabcheck/expression.hpp"

namespace stabcheck {

/// A control system xdot = f(x, u) with f given componentwise in closed form.
struct VectorFieldSystem {
  int n = 0;  // state dimension
  int m = 0;  // input dimension
  std::vector<Expression> components;
  std::string name;

  /// Throws InvalidSystemError unless dimensions are coherent and f(0,0) = 0
  /// exactly in floating point.
  void validate() const {
    if (n < 1) throw InvalidSystemError("state dimension n must be >= 1");
    if (m < 0) throw InvalidSystemError("input dimension m must be >= 0");
    if (static_cast<int>(components.size()) != n) {
      throw InvalidSystemError("expected " + std::to_string(n) +
                               " component expressions, got " +
                               std::to_string(components.size()));
    }
    for (int i = 0; i < n; ++i) {
      const auto& e = components[i];
      if (!e.valid()) throw InvalidSystemError("component f" + std::to_string(i + 1) + " is empty");
      if (e.max_state_index() > n || e.max_input_index() > m || e.uses_time()) {
        throw InvalidSystemError("component f" + std::to_string(i + 1) +
                                 " references variables outside x1..x" +
                                 std::to_string(n) + ", u1..u" + std::to_string(m));
      }
    }
    const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
    const Eigen::VectorXd u0 = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < n; ++i) {
      if (eval_point(components[i], x0, u0) != 0.0) {
        throw InvalidSystemError("f(0,0) != 0: component f" + std::to_string(i + 1) +
                                 " is nonzero at the origin");
      }
    }
  }
};

inline Eigen::VectorXd eval_field(const VectorFieldSystem& sys,
                                  const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& u) {
  Eigen::VectorXd f(sys.n);
  for (int i = 0; i < sys.n; ++i) f[i] = eval_point(sys.components[i], x, u);
  return f;
}

/// Evaluates f at a stacked point (x, u) in R^{n+m}.
inline Eigen::VectorXd eval_field(const VectorFieldSystem& sys,
                                  const Eigen::VectorXd& xu) {
  return eval_field(sys, xu.head(sys.n), xu.tail(sys.m));
}

/// Knobs for one analysis run. The box is [-epsilon, epsilon]^{n+m}; each
/// resolution is the cube count per axis.
struct AnalysisParams {
  double epsilon = 0.5;
  std::vector<int> resolutions{8, 16};
  double probe_radius = 0.0;  // 0 means "default to epsilon/4"
  int samples_per_cube = 8;
  int probe_samples = 256;
  int image_grid_cells = 8;  // per axis, over [-rho_img, rho_img]^n
  std::uint64_t seed = 1;
  long long max_cells = 50'000'000;

  double effective_probe_radius() const {
    return probe_radius > 0.0 ? probe_radius : epsilon / 4.0;
  }
  /// Zero-exclusion margin for degree computations.
  double delta() const { return 1e-6 * epsilon; }

  void validate() const {
    if (!(epsilon > 0.0)) throw ValidationError("epsilon must be > 0");
    if (resolutions.empty()) throw ValidationError("resolutions must be non-empty");
    for (std::size_t i = 0; i < resolutions.size(); ++i) {
      const int r = resolutions[i];
      if (r < 4 || r % 2 != 0) {
        throw ValidationError("resolutions must be even and >= 4 (got " +
                              std::to_string(r) + ")");
      }
      if (i > 0 && resolutions[i] <= resolutions[i - 1]) {
        throw ValidationError("resolutions must ascend");
      }
    }
    if (!(effective_probe_radius() < epsilon / 2.0)) {
      throw ValidationError("probe_radius must be < epsilon/2");
    }
    if (samples_per_cube < 1) throw ValidationError("samples_per_cube must be >= 1");
    if (probe_samples < 64) throw ValidationError("probe_samples must be >= 64");
    if (image_grid_cells < 2) throw ValidationError("image_grid_cells must be >= 2");
    if (max_cells < 1) throw ValidationError("max_cells must be >= 1");
  }
};

}  // namespace stabcheck

#endif  // STABCHECK_SYSTEM_HPP
