#include "stabcheck/chain_complex.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <ostream>
#include <string>

namespace stabcheck {

long long SparseIntMatrix::coeff(int row, int col) const {
  const auto& c = columns[col];
  const auto it = std::lower_bound(
      c.begin(), c.end(), row,
      [](const std::pair<int, long long>& e, int r) { return e.first < r; });
  return (it != c.end() && it->first == row) ? it->second : 0;
}

long long SparseIntMatrix::nonzeros() const {
  long long n = 0;
  for (const auto& c : columns) n += static_cast<long long>(c.size());
  return n;
}

long long ChainComplex::total_cells() const {
  long long n = 0;
  for (const auto& c : cells) n += static_cast<long long>(c.size());
  return n;
}

std::vector<std::pair<CellKey, int>> cell_faces(CellKey key, int dim) {
  std::vector<std::pair<CellKey, int>> faces;
  int sign = 1;
  for (int a = 0; a < dim; ++a) {
    const int c = cell_coord(key, a);
    if (c % 2 == 1) {
      faces.emplace_back(with_coord(key, a, c + 1), sign);
      faces.emplace_back(with_coord(key, a, c - 1), -sign);
      sign = -sign;
    }
  }
  return faces;
}

ChainComplex assemble_chain_complex(const CubicalComplex& complex,
                                    long long max_cells) {
  const int d = complex.grid.dim;
  ChainComplex cc;
  cc.grid = complex.grid;
  cc.dim = d;
  cc.cells.assign(d + 1, {});
  cc.boundary.assign(d + 1, {});

  // Every face of a top cube: per axis pick the interval (2k+1) or one of its
  // endpoint hyperplanes (2k, 2k+2).
  std::vector<CellKey> all;
  all.reserve(complex.top_cubes.size() * 4);
  std::array<int, kMaxDim> cube{};
  std::array<int, kMaxDim> pick{};
  for (const CellKey top : complex.top_cubes) {
    unpack_cell(top, d, cube.data());
    pick.fill(0);
    while (true) {
      CellKey cell = 0;
      for (int a = 0; a < d; ++a) {
        const int doubled = 2 * cube[a] + pick[a];  // pick in {0,1,2}
        cell |= static_cast<CellKey>(doubled) << (kBitsPerAxis * a);
      }
      all.push_back(cell);
      int a = 0;
      for (; a < d; ++a) {
        if (++pick[a] <= 2) break;
        pick[a] = 0;
      }
      if (a == d) break;
    }
    if (static_cast<long long>(all.size()) > 4 * max_cells) {
      throw CapacityError("chain complex exceeds max_cells during assembly");
    }
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  if (static_cast<long long>(all.size()) > max_cells) {
    throw CapacityError("chain complex has " + std::to_string(all.size()) +
                        " cells, exceeding max_cells");
  }
  for (const CellKey cell : all) {
    cc.cells[cell_dim(cell, d)].push_back(cell);
  }
  // per-degree lists inherit sortedness from the global sort
  for (int k = 0; k <= d; ++k) {
    cc.boundary[k].rows = k > 0 ? static_cast<int>(cc.cells[k - 1].size()) : 0;
    cc.boundary[k].cols = static_cast<int>(cc.cells[k].size());
    cc.boundary[k].columns.resize(cc.cells[k].size());
    if (k == 0) continue;
    const auto& below = cc.cells[k - 1];
    for (std::size_t j = 0; j < cc.cells[k].size(); ++j) {
      auto faces = cell_faces(cc.cells[k][j], d);
      std::vector<std::pair<int, long long>> col;
      col.reserve(faces.size());
      for (const auto& [face, coeff] : faces) {
        const auto it = std::lower_bound(below.begin(), below.end(), face);
        if (it == below.end() || *it != face) {
          throw Error("internal: face missing from closed complex");
        }
        col.emplace_back(static_cast<int>(it - below.begin()), coeff);
      }
      std::sort(col.begin(), col.end());
      cc.boundary[k].columns[j] = std::move(col);
    }
  }
  return cc;
}

ChainComplex chain_complex_from_matrices(std::vector<SparseIntMatrix> matrices) {
  ChainComplex cc;
  cc.dim = static_cast<int>(matrices.size()) - 1;
  if (cc.dim < 0) throw ValidationError("empty matrix list");
  if (matrices[0].rows != 0) {
    throw ValidationError("boundary[0] must have zero rows");
  }
  cc.cells.resize(cc.dim + 1);
  for (int k = 0; k <= cc.dim; ++k) {
    if (k > 0 && matrices[k].rows != matrices[k - 1].cols) {
      throw ValidationError("boundary matrix shapes do not chain");
    }
    cc.cells[k].resize(matrices[k].cols);
    for (int i = 0; i < matrices[k].cols; ++i) {
      cc.cells[k][i] = static_cast<CellKey>(i);
    }
  }
  cc.boundary = std::move(matrices);
  if (!boundary_squares_to_zero(cc)) {
    throw ValidationError("boundary matrices do not satisfy dd = 0");
  }
  return cc;
}

bool boundary_squares_to_zero(const ChainComplex& cc) {
  for (int k = 1; k < cc.dim; ++k) {
    const auto& bk = cc.boundary[k];
    const auto& bk1 = cc.boundary[k + 1];
    for (int j = 0; j < bk1.cols; ++j) {
      std::map<int, long long> acc;
      for (const auto& [mid, c1] : bk1.columns[j]) {
        for (const auto& [row, c0] : bk.columns[mid]) {
          acc[row] += c0 * c1;
        }
      }
      for (const auto& [row, v] : acc) {
        if (v != 0) return false;
      }
    }
  }
  return true;
}

void dump_boundary(const ChainComplex& cc, std::ostream& os) {
  for (int k = 1; k <= cc.dim; ++k) {
    os << "# boundary " << k << " (" << cc.boundary[k].rows << " x "
       << cc.boundary[k].cols << ")\n";
    for (int j = 0; j < cc.boundary[k].cols; ++j) {
      for (const auto& [row, v] : cc.boundary[k].columns[j]) {
        os << row << ' ' << j << ' ' << v << '\n';
      }
    }
  }
}

}  // namespace stabcheck
