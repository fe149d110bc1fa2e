#ifndef STABCHECK_HOMOLOGY_HPP
#define STABCHECK_HOMOLOGY_HPP

#include <vector>

#include "stabcheck/chain_complex.hpp"

namespace stabcheck {

/// Integer chain, sorted by cell key.
struct Chain {
  std::vector<std::pair<CellKey, long long>> terms;

  bool empty() const { return terms.empty(); }
  long long coeff(CellKey key) const;
};

/// Per-degree Betti numbers, torsion coefficients (invariant factors > 1,
/// forming a divisibility chain) and generators of the free part. All groups
/// are unreduced.
struct HomologyProfile {
  int dim = -1;
  std::vector<int> betti;                        // degrees 0..dim
  std::vector<std::vector<long long>> torsion;   // degrees 0..dim
  std::vector<std::vector<Chain>> representatives;  // degrees 0..dim

  int betti_at(int k) const {
    return (k >= 0 && k <= dim) ? betti[k] : 0;
  }
  bool torsion_free() const;
  bool same_groups(const HomologyProfile& other) const;  // betti + torsion
};

/// The (co)homology pattern of the d-sphere: one class in degree 0 and one in
/// degree d, nothing else, no torsion. S^0 is two points (betti_0 = 2).
struct SphereProfile {
  int dimension = 0;
};

/// Materializes the sphere pattern as group data over degrees 0..dim.
HomologyProfile expected_groups(SphereProfile target, int dim);

/// Integer homology of an arbitrary chain complex via elimination with unit
/// pivots followed by Smith normal form on the remaining core. Falls back to
/// arbitrary-precision integers if 64-bit entries would overflow.
HomologyProfile homology(const ChainComplex& cc, bool want_representatives = true);

/// Cohomology with integer coefficients via universal coefficients: the free
/// part matches homology degree-for-degree and the degree-k torsion equals
/// the homology torsion in degree k-1.
HomologyProfile cohomology(const HomologyProfile& h);

/// True iff the cohomology of h equals SphereProfile(d) exactly, including
/// zero torsion everywhere.
bool matches_sphere(const HomologyProfile& h, int d);

/// Homology of a certified cubical complex at pipeline scale: fill-free
/// elementary reductions (free-face collapses and coreductions) shrink the
/// complex on a dense bitmap first, the surviving core goes through
/// homology(), and representatives are transported back through the
/// reduction events so they are chains of the original complex.
HomologyProfile cubical_homology(const CubicalComplex& complex,
                                 bool want_representatives = true,
                                 long long max_cells = 50'000'000);

/// Number of cells of all dimensions in the closed complex (top cubes plus
/// every face, counted once).
long long cubical_cell_count(const CubicalComplex& complex,
                             long long max_cells = 50'000'000);

}  // namespace stabcheck

#endif  // STABCHECK_HOMOLOGY_HPP
