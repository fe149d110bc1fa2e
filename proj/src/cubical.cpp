#include "stabcheck/cubical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace stabcheck {

bool CubicalComplex::contains_cube(CellKey cube_index) const {
  return std::binary_search(top_cubes.begin(), top_cubes.end(), cube_index);
}

const CubeCertificate* CubicalComplex::certificate_for(CellKey cube_index) const {
  const auto it = std::lower_bound(top_cubes.begin(), top_cubes.end(), cube_index);
  if (it == top_cubes.end() || *it != cube_index) return nullptr;
  return &certificates[static_cast<std::size_t>(it - top_cubes.begin())];
}

bool CubicalComplex::contains_point(const Eigen::VectorXd& xu) const {
  const int d = grid.dim;
  if (xu.size() != d) throw ValidationError("point dimension mismatch");
  // Candidate cube indices per axis: every k with vertex(k) <= p <= vertex(k+1).
  std::array<std::vector<int>, kMaxDim> candidates;
  for (int a = 0; a < d; ++a) {
    const double p = xu[a];
    const double w = grid.cell_width();
    const int guess = static_cast<int>(std::floor((p + grid.epsilon) / w));
    for (int k = guess - 1; k <= guess + 1; ++k) {
      if (k < 0 || k >= grid.resolution) continue;
      if (grid.vertex(k) <= p && p <= grid.vertex(k + 1)) candidates[a].push_back(k);
    }
    if (candidates[a].empty()) return false;  // outside the box
  }
  std::array<std::size_t, kMaxDim> pick{};
  while (true) {
    std::array<int, kMaxDim> coords{};
    for (int a = 0; a < d; ++a) coords[a] = candidates[a][pick[a]];
    if (contains_cube(pack_cell({coords.data(), static_cast<std::size_t>(d)}))) {
      return true;
    }
    int a = 0;
    for (; a < d; ++a) {
      if (++pick[a] < candidates[a].size()) break;
      pick[a] = 0;
    }
    if (a == d) return false;
  }
}

std::optional<CubeCertificate> certify_cube(const VectorFieldSystem& sys,
                                            std::span<const Interval> box) {
  for (int i = 0; i < sys.n; ++i) {
    const Interval fi = eval_interval(sys.components[i], box, sys.n, sys.m);
    if (!fi.contains_zero()) {
      return CubeCertificate{i, fi.mig(), fi.lo > 0.0 ? 1 : -1};
    }
  }
  return std::nullopt;
}

CubicalComplex build_sigma_complex(const VectorFieldSystem& sys,
                                   const AnalysisParams& params, int resolution) {
  const int d = sys.n + sys.m;
  if (d > kMaxDim) {
    throw CapacityError("state+input dimension exceeds supported maximum " +
                        std::to_string(kMaxDim));
  }
  if (resolution > kMaxResolution) {
    throw CapacityError("resolution exceeds supported maximum " +
                        std::to_string(kMaxResolution));
  }
  CubicalComplex complex;
  complex.grid = GridGeometry{d, resolution, params.epsilon};

  long long total = 1;
  for (int a = 0; a < d; ++a) {
    total *= resolution;
    if (total > params.max_cells) {
      throw CapacityError("grid of " + std::to_string(resolution) + "^" +
                          std::to_string(d) + " cubes exceeds max_cells");
    }
  }

  std::array<int, kMaxDim> idx{};
  std::array<Interval, kMaxDim> box;
  for (long long c = 0; c < total; ++c) {
    for (int a = 0; a < d; ++a) {
      box[a] = Interval{complex.grid.vertex(idx[a]), complex.grid.vertex(idx[a] + 1)};
    }
    std::optional<CubeCertificate> cert;
    try {
      cert = certify_cube(sys, {box.data(), static_cast<std::size_t>(d)});
    } catch (const DomainError& err) {
      std::string where = "cube (";
      for (int a = 0; a < d; ++a) {
        where += (a ? "," : "") + std::to_string(idx[a]);
      }
      throw DomainError(std::string(err.what()) + " in " + where + ")");
    }
    if (cert) {
      complex.top_cubes.push_back(pack_cell({idx.data(), static_cast<std::size_t>(d)}));
      complex.certificates.push_back(*cert);
    }
    for (int a = 0; a < d; ++a) {
      if (++idx[a] < resolution) break;
      idx[a] = 0;
    }
  }
  // Lexicographic scan with axis 0 fastest produces keys in increasing packed
  // order already; keep the sort as a cheap invariant guard.
  if (!std::is_sorted(complex.top_cubes.begin(), complex.top_cubes.end())) {
    throw Error("internal: cube scan order not sorted");
  }
  return complex;
}

std::vector<CubicalComplex> neighborhood_filtration(const VectorFieldSystem& sys,
                                                    const AnalysisParams& params) {
  params.validate();
  std::vector<CubicalComplex> out;
  out.reserve(params.resolutions.size());
  for (const int r : params.resolutions) {
    out.push_back(build_sigma_complex(sys, params, r));
  }
  return out;
}

namespace {

constexpr int kHaltonPrimes[kMaxDim] = {2, 3, 5, 7, 11, 13};

double radical_inverse(std::uint64_t i, int base) {
  double inv = 1.0 / base;
  double scale = inv;
  double value = 0.0;
  while (i > 0) {
    value += static_cast<double>(i % static_cast<std::uint64_t>(base)) * scale;
    i /= static_cast<std::uint64_t>(base);
    scale *= inv;
  }
  return value;
}

}  // namespace

Eigen::MatrixXd sample_image(const VectorFieldSystem& sys,
                             const AnalysisParams& params, int resolution,
                             int samples_per_cube) {
  if (samples_per_cube < 1) throw ValidationError("samples_per_cube must be >= 1");
  const int d = sys.n + sys.m;
  const GridGeometry grid{d, resolution, params.epsilon};

  long long cubes = 1;
  for (int a = 0; a < d; ++a) cubes *= resolution;
  const long long total = cubes * samples_per_cube;
  if (total > params.max_cells) {
    throw CapacityError("image sampling would exceed max_cells points");
  }

  Eigen::MatrixXd image(sys.n, total);
  Eigen::VectorXd point(d);
  std::array<int, kMaxDim> idx{};
  const double w = grid.cell_width();
  long long col = 0;
  for (long long c = 0; c < cubes; ++c) {
    for (int j = 0; j < samples_per_cube; ++j) {
      const std::uint64_t h = params.seed +
                              static_cast<std::uint64_t>(c) * samples_per_cube + j;
      for (int a = 0; a < d; ++a) {
        point[a] = grid.vertex(idx[a]) + w * radical_inverse(h + 1, kHaltonPrimes[a]);
      }
      image.col(col++) = eval_field(sys, point);
    }
    for (int a = 0; a < d; ++a) {
      if (++idx[a] < resolution) break;
      idx[a] = 0;
    }
  }
  return image;
}

}  // namespace stabcheck
