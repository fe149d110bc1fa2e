#ifndef STABCHECK_CHAIN_COMPLEX_HPP
#define STABCHECK_CHAIN_COMPLEX_HPP

#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "stabcheck/cubical.hpp"

namespace stabcheck {

/// Integer matrix in compressed column form; cubical boundary operators have
/// at most 2*dim entries per column.
struct SparseIntMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::vector<std::pair<int, long long>>> columns;  // sorted by row

  long long coeff(int row, int col) const;
  long long nonzeros() const;
};

/// Free chain complex with per-degree ordered cell lists and sparse integer
/// boundary matrices satisfying d(k-1) . d(k) = 0.
///
/// Grid-realized complexes carry packed doubled-grid CellKeys; abstract
/// complexes (built from explicit matrices) use 0..count-1 as keys.
struct ChainComplex {
  int dim = -1;
  std::vector<std::vector<CellKey>> cells;  // per degree 0..dim, sorted
  std::vector<SparseIntMatrix> boundary;    // boundary[k] : C_k -> C_{k-1}
  std::optional<GridGeometry> grid;

  long long total_cells() const;
  int cell_count(int degree) const {
    return degree >= 0 && degree <= dim ? static_cast<int>(cells[degree].size()) : 0;
  }
};

/// Oriented faces of a doubled-grid cell: for the j-th interval axis in
/// ascending axis order, the face at the upper endpoint carries (-1)^j and
/// the lower endpoint -(-1)^j. With this convention d(edge) = head - tail.
std::vector<std::pair<CellKey, int>> cell_faces(CellKey key, int dim);

/// Materializes every face of the certified top cubes exactly once and
/// assembles the boundary matrices. Throws CapacityError past max_cells.
ChainComplex assemble_chain_complex(const CubicalComplex& complex,
                                    long long max_cells = 50'000'000);

/// Abstract complex from explicit boundary matrices (matrices[k] maps degree
/// k to k-1; matrices[0] must have 0 rows). Validates shape compatibility and
/// dd = 0.
ChainComplex chain_complex_from_matrices(std::vector<SparseIntMatrix> matrices);

/// True iff composing consecutive boundary matrices gives 0 in every degree.
bool boundary_squares_to_zero(const ChainComplex& cc);

/// Debug dump: one `degree row col value` line per nonzero entry.
void dump_boundary(const ChainComplex& cc, std::ostream& os);

}  // namespace stabcheck

#endif  // STABCHECK_CHAIN_COMPLEX_HPP
