#include "stabcheck/degree.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

namespace stabcheck {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Eigen::MatrixXd sample_loop(const ProbeLoop& loop, int n, int m) {
  if (static_cast<int>(loop.components.size()) != n + m) {
    throw ValidationError("probe '" + loop.name + "' needs " +
                          std::to_string(n + m) + " component expressions");
  }
  for (const auto& c : loop.components) {
    if (c.max_state_index() > 0 || c.max_input_index() > 0) {
      throw ValidationError("probe '" + loop.name +
                            "' components may reference only t");
    }
  }
  if (loop.samples < 64) throw ValidationError("probe sample count must be >= 64");
  const Eigen::VectorXd none_x(0), none_u(0);
  Eigen::MatrixXd pts(n + m, loop.samples + 1);
  for (int k = 0; k <= loop.samples; ++k) {
    const double t = 2.0 * kPi * k / loop.samples;
    for (int a = 0; a < n + m; ++a) {
      pts(a, k) = eval_point(loop.components[a], none_x, none_u, t);
    }
  }
  const double scale = std::max(1.0, pts.cwiseAbs().maxCoeff());
  if ((pts.col(0) - pts.col(loop.samples)).norm() > 1e-9 * scale) {
    throw ValidationError("probe '" + loop.name + "' is not closed");
  }
  pts.col(loop.samples) = pts.col(0);
  return pts;
}

int winding_number(const Eigen::Matrix2Xd& samples, double delta) {
  const Eigen::Index count = samples.cols();
  if (count < 65) throw ValidationError("winding needs at least 64 samples");
  const double scale = std::max(1.0, samples.cwiseAbs().maxCoeff());
  if ((samples.col(0) - samples.col(count - 1)).norm() > 1e-9 * scale) {
    throw ValidationError("loop is not closed");
  }
  double total = 0.0;
  double prev = std::atan2(samples(1, 0), samples(0, 0));
  for (Eigen::Index k = 0; k < count; ++k) {
    if (samples.col(k).norm() < delta) {
      throw OriginTooCloseError("loop sample " + std::to_string(k) +
                                " within delta of the origin");
    }
    if (k == 0) continue;
    const double theta = std::atan2(samples(1, k), samples(0, k));
    double step = theta - prev;
    while (step > kPi) step -= 2.0 * kPi;
    while (step <= -kPi) step += 2.0 * kPi;
    if (std::abs(step) >= kPi / 2.0) {
      throw TooCoarseError("angular step " + std::to_string(step) +
                           " at sample " + std::to_string(k) +
                           " exceeds pi/2; refine the loop");
    }
    total += step;
    prev = theta;
  }
  const double turns = total / (2.0 * kPi);
  const int w = static_cast<int>(std::lround(turns));
  if (std::abs(turns - w) > 0.25) {
    throw Error("internal: winding sum " + std::to_string(turns) +
                " is not close to an integer");
  }
  return w;
}

int loop_self_winding(const ProbeLoop& loop, int n, int m, double delta) {
  const Eigen::MatrixXd pts = sample_loop(loop, n, m);
  Eigen::Matrix2Xd proj(2, pts.cols());
  proj.row(0) = pts.row(loop.projection.first);
  proj.row(1) = pts.row(loop.projection.second);
  return winding_number(proj, delta);
}

int loop_image_winding(const VectorFieldSystem& sys, const ProbeLoop& loop,
                       std::pair<int, int> target_projection, double delta) {
  const Eigen::MatrixXd pts = sample_loop(loop, sys.n, sys.m);
  Eigen::Matrix2Xd proj(2, pts.cols());
  for (Eigen::Index k = 0; k < pts.cols(); ++k) {
    const Eigen::VectorXd f = eval_field(sys, pts.col(k));
    if (f.norm() < delta) {
      throw ZeroCrossingError("|f| < delta at loop sample " + std::to_string(k));
    }
    proj(0, k) = f[target_projection.first];
    proj(1, k) = f[target_projection.second];
  }
  return winding_number(proj, delta);
}

// ---------------------------------------------------------------------------
// top_degree
// ---------------------------------------------------------------------------

namespace {

// Kuhn decomposition of the k-cube: one simplex per permutation of the k
// spanning axes, vertices walking from the low corner one axis at a time,
// signed by the permutation parity. Their signed sum is the standard
// (ascending-axes) orientation class of the cube, matching the boundary
// convention of cell_faces.
struct KuhnSimplex {
  std::array<int, 8> order;  // axis positions, length k
  int sign;
};

std::vector<KuhnSimplex> kuhn_simplices(int k) {
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<KuhnSimplex> out;
  do {
    KuhnSimplex s{};
    int inversions = 0;
    for (int i = 0; i < k; ++i) {
      s.order[i] = perm[i];
      for (int j = 0; j < i; ++j) {
        if (perm[j] > perm[i]) ++inversions;
      }
    }
    s.sign = (inversions % 2 == 0) ? 1 : -1;
    out.push_back(s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

struct MappedSimplex {
  Eigen::MatrixXd vertices;  // n x n, columns are unit vectors
  long long weight = 0;      // facet coefficient times Kuhn sign
};

}  // namespace

TopDegreeResult top_degree(const VectorFieldSystem& sys, const Chain& cycle,
                           const GridGeometry& grid, double delta,
                           std::uint64_t seed, int max_retries) {
  const int n = sys.n;
  const int d = grid.dim;
  if (n < 2) throw ValidationError("top_degree requires n >= 2");
  if (cycle.empty()) throw NotACycleError("empty chain");
  const int k = n - 1;
  for (const auto& [key, coeff] : cycle.terms) {
    if (cell_dim(key, d) != k) {
      throw NotACycleError("chain has a cell of dimension != n-1");
    }
    (void)coeff;
  }

  // d(cycle) must vanish identically.
  {
    std::map<CellKey, long long> bd;
    for (const auto& [key, coeff] : cycle.terms) {
      for (const auto& [face, fc] : cell_faces(key, d)) bd[face] += coeff * fc;
    }
    for (const auto& [key, v] : bd) {
      if (v != 0) throw NotACycleError("chain boundary is nonzero");
    }
  }

  const auto simplex_patterns = kuhn_simplices(k);

  auto normalized_field = [&](const Eigen::VectorXd& p) {
    const Eigen::VectorXd f = eval_field(sys, p);
    const double norm = f.norm();
    if (norm < delta) {
      throw ZeroCrossingError("|f| < delta on a facet of the cycle");
    }
    return Eigen::VectorXd(f / norm);
  };

  // Triangulate each facet, subdividing until every simplex image is
  // angularly small.
  std::vector<MappedSimplex> simplices;
  for (const auto& [key, coeff] : cycle.terms) {
    std::array<int, kMaxDim> axes{};
    int na = 0;
    Eigen::VectorXd base(d);
    for (int a = 0; a < d; ++a) {
      const int c = cell_coord(key, a);
      if (c % 2 == 1) {
        axes[na++] = a;
        base[a] = grid.vertex((c - 1) / 2);
      } else {
        base[a] = grid.vertex(c / 2);
      }
    }
    const double w = grid.cell_width();

    for (int g = 1;; g *= 2) {
      if (g > 64) {
        throw TooCoarseError("facet image cannot be resolved by subdivision");
      }
      std::vector<MappedSimplex> local;
      const double sub = w / g;
      bool ok = true;
      // enumerate subcells of the k-dim facet
      std::array<int, 8> cellpos{};
      long long subcells = 1;
      for (int i = 0; i < k; ++i) subcells *= g;
      std::map<long long, Eigen::VectorXd> cache;
      auto corner_value = [&](const std::array<int, 8>& steps) {
        long long id = 0;
        for (int i = 0; i < k; ++i) id = id * (64 * 2 + 1) + steps[i];
        const auto it = cache.find(id);
        if (it != cache.end()) return it->second;
        Eigen::VectorXd p = base;
        for (int i = 0; i < k; ++i) p[axes[i]] += sub * steps[i];
        Eigen::VectorXd y = normalized_field(p);
        cache.emplace(id, y);
        return y;
      };
      for (long long c = 0; c < subcells && ok; ++c) {
        for (const auto& pattern : simplex_patterns) {
          MappedSimplex ms;
          ms.vertices.resize(n, k + 1);
          std::array<int, 8> steps{};
          for (int i = 0; i < k; ++i) steps[i] = cellpos[i];
          ms.vertices.col(0) = corner_value(steps);
          for (int i = 0; i < k; ++i) {
            steps[pattern.order[i]] += 1;
            ms.vertices.col(i + 1) = corner_value(steps);
          }
          ms.weight = coeff * pattern.sign;
          // angular spread: all vertices must stay within 0.7 rad of c0
          for (int i = 1; i <= k && ok; ++i) {
            const double dot = std::clamp(
                ms.vertices.col(0).dot(ms.vertices.col(i)), -1.0, 1.0);
            if (std::acos(dot) > 0.7) ok = false;
          }
          if (!ok) break;
          local.push_back(std::move(ms));
        }
        for (int i = 0; i < k; ++i) {
          if (++cellpos[i] < g) break;
          cellpos[i] = 0;
        }
      }
      if (ok) {
        simplices.insert(simplices.end(), local.begin(), local.end());
        break;
      }
      cellpos.fill(0);
    }
  }

  // Regular-value counting with retry on near-degenerate configurations.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  constexpr double kMargin = 1e-9;   // cone tolerance around simplex boundaries
  constexpr double kDetTol = 1e-12;  // simplex counted only if solidly spanned
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = gauss(rng);
    const double vn = v.norm();
    if (vn < 1e-6) continue;
    v /= vn;

    long long degree = 0;
    bool retry = false;
    for (const auto& ms : simplices) {
      Eigen::FullPivLU<Eigen::MatrixXd> lu(ms.vertices);
      const double det = lu.determinant();
      if (std::abs(det) < kDetTol) {
        // Degenerate image: can only matter if v lies in its span.
        const Eigen::VectorXd alpha = ms.vertices.colPivHouseholderQr().solve(v);
        if ((ms.vertices * alpha - v).norm() < 1e-6) {
          retry = true;
          break;
        }
        continue;
      }
      const Eigen::VectorXd alpha = lu.solve(v);
      double min_alpha = alpha.minCoeff();
      if (min_alpha > kMargin) {
        degree += (det > 0 ? 1 : -1) * ms.weight;
      } else if (min_alpha >= -kMargin) {
        retry = true;  // v grazes this simplex's boundary
        break;
      }
    }
    if (!retry) {
      TopDegreeResult result;
      if (degree > std::numeric_limits<int>::max() ||
          degree < std::numeric_limits<int>::min()) {
        throw Error("internal: degree out of int range");
      }
      result.degree = static_cast<int>(degree);
      result.regular_value = v;
      result.simplices = static_cast<long long>(simplices.size());
      return result;
    }
  }
  throw DegenerateRegularValueError(
      "no admissible regular value after " + std::to_string(max_retries) +
      " attempts");
}

std::vector<ProbeLoop> auto_probes(const VectorFieldSystem& sys,
                                   const AnalysisParams& params) {
  const double rho = params.effective_probe_radius();
  std::vector<ProbeLoop> probes;
  const Expression t = Expression::variable(Expression::VarKind::Time);
  const Expression zero = Expression::number(0.0);
  const Expression r = Expression::number(rho);
  const int total = sys.n + sys.m;
  auto coord_name = [&](int idx) {
    return idx < sys.n ? "x" + std::to_string(idx + 1)
                       : "u" + std::to_string(idx - sys.n + 1);
  };
  for (int i = 0; i < sys.n; ++i) {
    for (int j = i + 1; j < total; ++j) {
      ProbeLoop p;
      p.name = "auto(" + coord_name(i) + "," + coord_name(j) + ")";
      p.components.assign(total, zero);
      p.components[i] = r * Expression::unary(Expression::Kind::Cos, t);
      p.components[j] = r * Expression::unary(Expression::Kind::Sin, t);
      p.projection = {i, j};
      p.samples = params.probe_samples;
      probes.push_back(std::move(p));
    }
  }
  return probes;
}

bool probe_inside_complex(const ProbeLoop& loop, const CubicalComplex& complex,
                          int n, int m) {
  const Eigen::MatrixXd pts = sample_loop(loop, n, m);
  for (Eigen::Index k = 0; k < pts.cols(); ++k) {
    if (!complex.contains_point(pts.col(k))) return false;
  }
  return true;
}

}  // namespace stabcheck
