#include "stabcheck/homology.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <utility>

#include "stabcheck/bigint.hpp"
#include "stabcheck/snf.hpp"

namespace stabcheck {

long long Chain::coeff(CellKey key) const {
  const auto it = std::lower_bound(
      terms.begin(), terms.end(), key,
      [](const std::pair<CellKey, long long>& t, CellKey k) { return t.first < k; });
  return (it != terms.end() && it->first == key) ? it->second : 0;
}

bool HomologyProfile::torsion_free() const {
  for (const auto& t : torsion) {
    if (!t.empty()) return false;
  }
  return true;
}

bool HomologyProfile::same_groups(const HomologyProfile& other) const {
  const int top = std::max(dim, other.dim);
  for (int k = 0; k <= top; ++k) {
    if (betti_at(k) != other.betti_at(k)) return false;
    const auto* ta = (k <= dim) ? &torsion[k] : nullptr;
    const auto* tb = (k <= other.dim) ? &other.torsion[k] : nullptr;
    const bool ea = !ta || ta->empty();
    const bool eb = !tb || tb->empty();
    if (ea != eb) return false;
    if (!ea && *ta != *tb) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Scalar helpers
// ---------------------------------------------------------------------------

namespace {

template <typename S>
S checked_mul(const S& a, const S& b) {
  if constexpr (std::is_same_v<S, long long>) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("multiply overflow");
    return r;
  } else {
    return a * b;
  }
}

template <typename S>
S checked_add(const S& a, const S& b) {
  if constexpr (std::is_same_v<S, long long>) {
    long long r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("add overflow");
    return r;
  } else {
    return a + b;
  }
}

template <typename S>
long long to_int64(const S& v) {
  if constexpr (std::is_same_v<S, long long>) {
    return v;
  } else {
    if (v > BigInt(std::numeric_limits<long long>::max()) ||
        v < BigInt(std::numeric_limits<long long>::min())) {
      throw OverflowError("coefficient does not fit in 64 bits");
    }
    return static_cast<long long>(v);
  }
}

template <typename S>
S snf_guard() {
  if constexpr (std::is_same_v<S, long long>) {
    return kDefaultSnfGuard;
  } else {
    return S(0);
  }
}

template <typename S>
using DenseMat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

template <typename S>
DenseMat<S> checked_product(const DenseMat<S>& A, const DenseMat<S>& B) {
  DenseMat<S> C = DenseMat<S>::Zero(A.rows(), B.cols());
  for (Eigen::Index j = 0; j < B.cols(); ++j) {
    for (Eigen::Index k = 0; k < A.cols(); ++k) {
      const S& b = B(k, j);
      if (b == S(0)) continue;
      for (Eigen::Index i = 0; i < A.rows(); ++i) {
        if (A(i, k) == S(0)) continue;
        C(i, j) = checked_add(C(i, j), checked_mul(A(i, k), b));
      }
    }
  }
  return C;
}

// ---------------------------------------------------------------------------
// Quotient groups of one degree from dense boundary matrices
// ---------------------------------------------------------------------------

struct DegreeGroups {
  int betti = 0;
  std::vector<long long> torsion;
  std::vector<std::vector<std::pair<int, long long>>> reps;  // (local index, coeff)
};

// H_k = ker(Bk) / im(Bk1) for Bk : C_k -> C_{k-1}, Bk1 : C_{k+1} -> C_k.
template <typename S>
DegreeGroups degree_groups(const DenseMat<S>& Bk, const DenseMat<S>& Bk1,
                           bool want_reps) {
  const Eigen::Index nk = Bk.cols();
  DegreeGroups out;
  if (nk == 0) return out;

  const auto snf_k = smith_normal_form<S>(Bk, snf_guard<S>());
  const int rank_k = snf_k.rank;
  const Eigen::Index kappa = nk - rank_k;

  // Coordinates of im(Bk1) in the kernel basis (the trailing kappa columns of
  // V). dd = 0 forces the leading rank_k coordinate rows to vanish.
  DenseMat<S> W = checked_product<S>(snf_k.V_inv, Bk1);
  for (Eigen::Index i = 0; i < rank_k; ++i) {
    for (Eigen::Index j = 0; j < W.cols(); ++j) {
      if (W(i, j) != S(0)) throw Error("internal: image not contained in kernel");
    }
  }
  DenseMat<S> M = W.bottomRows(kappa);
  const auto snf_m = smith_normal_form<S>(M, snf_guard<S>());
  const int s = snf_m.rank;

  out.betti = static_cast<int>(kappa) - s;
  for (const S& f : snf_m.invariant_factors) {
    if (f > S(1)) out.torsion.push_back(to_int64(f));
  }

  if (want_reps && out.betti > 0) {
    const DenseMat<S> kernel_basis = snf_k.V.rightCols(kappa);
    for (Eigen::Index i = s; i < kappa; ++i) {
      // Generator i of the quotient in kernel coordinates is column i of
      // U_inv (quotient basis change y = U x).
      DenseMat<S> coords = snf_m.U_inv.col(i);
      DenseMat<S> gen = checked_product<S>(kernel_basis, coords);
      std::vector<std::pair<int, long long>> rep;
      for (Eigen::Index r = 0; r < gen.rows(); ++r) {
        if (gen(r, 0) != S(0)) {
          rep.emplace_back(static_cast<int>(r), to_int64(gen(r, 0)));
        }
      }
      out.reps.push_back(std::move(rep));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sparse elimination with unit pivots (the complex-reduction workhorse)
// ---------------------------------------------------------------------------

// Removing the pair (a, b) with lambda = <d(b), a> = +-1 is an elementary
// reduction: it preserves homology, and a cycle z of the reduced complex
// lifts to z + beta*b with beta = -lambda * <d(z), a> evaluated against the
// boundary at removal time. Free faces and free cofaces are fill-free; other
// unit pivots update the columns sharing row a.
template <typename S>
struct EliminationEvent {
  int degree = 0;  // degree of b
  int a = 0;       // (degree-1)-cell index
  int b = 0;       // degree-cell index
  S lambda{};
  std::vector<std::pair<int, S>> row_a;  // row a over surviving columns != b
};

template <typename S>
class SparseReducer {
 public:
  explicit SparseReducer(const ChainComplex& cc) : dim_(cc.dim) {
    cols_.resize(dim_ + 1);
    row_cols_.resize(dim_ + 1);
    alive_.resize(dim_ + 1);
    for (int k = 0; k <= dim_; ++k) {
      const int nk = cc.cell_count(k);
      cols_[k].resize(nk);
      alive_[k].assign(nk, 1);
      row_cols_[k].resize(k > 0 ? cc.cell_count(k - 1) : 0);
      if (k == 0) continue;
      for (int j = 0; j < nk; ++j) {
        for (const auto& [r, v] : cc.boundary[k].columns[j]) {
          cols_[k][j][r] = S(v);
          row_cols_[k][r].insert(j);
        }
      }
    }
  }

  void run() {
    seed_singletons();
    while (true) {
      drain_singletons();
      if (!apply_best_general_pivot()) break;
    }
  }

  const std::vector<EliminationEvent<S>>& events() const { return events_; }
  const std::vector<std::vector<char>>& alive() const { return alive_; }
  const std::map<int, S>& column(int k, int j) const { return cols_[k][j]; }

 private:
  void seed_singletons() {
    for (int k = 1; k <= dim_; ++k) {
      for (std::size_t j = 0; j < cols_[k].size(); ++j) {
        if (cols_[k][j].size() == 1) queue_.emplace_back(k, 'c', static_cast<int>(j));
      }
      for (std::size_t r = 0; r < row_cols_[k].size(); ++r) {
        if (row_cols_[k][r].size() == 1) queue_.emplace_back(k, 'r', static_cast<int>(r));
      }
    }
  }

  void drain_singletons() {
    while (!queue_.empty()) {
      const auto [k, kind, idx] = queue_.front();
      queue_.pop_front();
      if (kind == 'c') {
        if (!alive_[k][idx] || cols_[k][idx].size() != 1) continue;
        const auto& [a, v] = *cols_[k][idx].begin();
        if (v != S(1) && v != S(-1)) continue;
        apply_pivot(k, a, idx, v);
      } else {
        if (k == 0 || !alive_[k - 1][idx] || row_cols_[k][idx].size() != 1) continue;
        const int b = *row_cols_[k][idx].begin();
        const S v = cols_[k][b].at(idx);
        if (v != S(1) && v != S(-1)) continue;
        apply_pivot(k, idx, b, v);
      }
    }
  }

  bool apply_best_general_pivot() {
    long long best_cost = -1;
    int bk = -1, ba = -1, bb = -1;
    S blambda{};
    for (int k = 1; k <= dim_; ++k) {
      for (std::size_t j = 0; j < cols_[k].size(); ++j) {
        if (!alive_[k][j]) continue;
        for (const auto& [r, v] : cols_[k][j]) {
          if (v != S(1) && v != S(-1)) continue;
          const long long cost =
              static_cast<long long>(cols_[k][j].size() - 1) *
              static_cast<long long>(row_cols_[k][r].size() - 1);
          if (best_cost < 0 || cost < best_cost) {
            best_cost = cost;
            bk = k;
            ba = r;
            bb = static_cast<int>(j);
            blambda = v;
            if (best_cost == 0) break;
          }
        }
        if (best_cost == 0) break;
      }
      if (best_cost == 0) break;
    }
    if (bk < 0) return false;
    apply_pivot(bk, ba, bb, blambda);
    return true;
  }

  void apply_pivot(int k, int a, int b, const S& lambda) {
    EliminationEvent<S> ev;
    ev.degree = k;
    ev.a = a;
    ev.b = b;
    ev.lambda = lambda;
    for (const int c : row_cols_[k][a]) {
      if (c == b) continue;
      ev.row_a.emplace_back(c, cols_[k][c].at(a));
    }

    // Column updates: d(c) <- d(c) - lambda*mu_c*d(b) clears row a everywhere.
    const std::map<int, S> col_b = cols_[k][b];
    for (const auto& [c, mu] : ev.row_a) {
      const S factor = checked_mul(lambda, mu);
      auto& col_c = cols_[k][c];
      for (const auto& [r, v] : col_b) {
        auto it = col_c.find(r);
        const S cur = (it == col_c.end()) ? S(0) : it->second;
        const S upd = checked_add(cur, S(-checked_mul(factor, v)));
        if (upd == S(0)) {
          if (it != col_c.end()) {
            col_c.erase(it);
            row_cols_[k][r].erase(c);
          }
        } else {
          if (it == col_c.end()) {
            col_c[r] = upd;
            row_cols_[k][r].insert(c);
          } else {
            it->second = upd;
          }
        }
        if (cols_[k][c].size() == 1) queue_.emplace_back(k, 'c', c);
        if (row_cols_[k][r].size() == 1) queue_.emplace_back(k, 'r', r);
      }
    }

    // Row a now lives only in column b; drop the pair.
    for (const auto& [r, v] : col_b) row_cols_[k][r].erase(b);
    cols_[k][b].clear();
    row_cols_[k][a].clear();
    alive_[k][b] = 0;
    alive_[k - 1][a] = 0;

    // Column a of the (k-1)-boundary is exactly zero after the implicit basis
    // change; drop it.
    if (k >= 1) {
      for (const auto& [r, v] : cols_[k - 1][a]) row_cols_[k - 1][r].erase(a);
      cols_[k - 1][a].clear();
    }
    // Row b of the (k+1)-boundary is dropped.
    if (k + 1 <= dim_) {
      for (const int c : std::set<int>(row_cols_[k + 1][b])) {
        cols_[k + 1][c].erase(b);
        if (cols_[k + 1][c].size() == 1) queue_.emplace_back(k + 1, 'c', c);
      }
      row_cols_[k + 1][b].clear();
    }
    events_.push_back(std::move(ev));
  }

  int dim_;
  std::vector<std::vector<std::map<int, S>>> cols_;
  std::vector<std::vector<std::set<int>>> row_cols_;
  std::vector<std::vector<char>> alive_;
  std::vector<EliminationEvent<S>> events_;
  std::deque<std::tuple<int, char, int>> queue_;
};

// ---------------------------------------------------------------------------
// homology(): reduce, SNF the core, transport representatives
// ---------------------------------------------------------------------------

template <typename S>
HomologyProfile homology_impl(const ChainComplex& cc, bool want_reps) {
  SparseReducer<S> reducer(cc);
  reducer.run();
  const auto& alive = reducer.alive();

  // Survivors per degree, with local dense indexing.
  std::vector<std::vector<int>> survivors(cc.dim + 1);
  std::vector<std::vector<int>> local_of(cc.dim + 1);
  for (int k = 0; k <= cc.dim; ++k) {
    local_of[k].assign(cc.cell_count(k), -1);
    for (int i = 0; i < cc.cell_count(k); ++i) {
      if (alive[k][i]) {
        local_of[k][i] = static_cast<int>(survivors[k].size());
        survivors[k].push_back(i);
      }
    }
  }

  auto dense_boundary = [&](int k) -> DenseMat<S> {
    DenseMat<S> B = DenseMat<S>::Zero(survivors[k - 1].size(), survivors[k].size());
    for (std::size_t j = 0; j < survivors[k].size(); ++j) {
      for (const auto& [r, v] : reducer.column(k, survivors[k][j])) {
        B(local_of[k - 1][r], static_cast<Eigen::Index>(j)) = v;
      }
    }
    return B;
  };

  HomologyProfile profile;
  profile.dim = cc.dim;
  profile.betti.assign(cc.dim + 1, 0);
  profile.torsion.assign(cc.dim + 1, {});
  profile.representatives.assign(cc.dim + 1, {});

  for (int k = 0; k <= cc.dim; ++k) {
    DenseMat<S> Bk = k == 0
                         ? DenseMat<S>::Zero(0, survivors[0].size())
                         : dense_boundary(k);
    DenseMat<S> Bk1 = k + 1 <= cc.dim
                          ? dense_boundary(k + 1)
                          : DenseMat<S>::Zero(survivors[k].size(), 0);
    DegreeGroups g = degree_groups<S>(Bk, Bk1, want_reps);
    profile.betti[k] = g.betti;
    profile.torsion[k] = std::move(g.torsion);
    if (!want_reps) continue;

    for (const auto& rep_local : g.reps) {
      // Lift to global indices, then transport back through the elimination.
      std::map<int, S> z;
      for (const auto& [local, coeff] : rep_local) {
        z[survivors[k][local]] = S(coeff);
      }
      const auto& events = reducer.events();
      for (auto it = events.rbegin(); it != events.rend(); ++it) {
        if (it->degree != k) continue;
        S pairing = S(0);
        for (const auto& [c, mu] : it->row_a) {
          const auto zc = z.find(c);
          if (zc != z.end()) {
            pairing = checked_add(pairing, checked_mul(zc->second, mu));
          }
        }
        if (pairing != S(0)) {
          const S beta = S(-checked_mul(it->lambda, pairing));
          z[it->b] = checked_add(z.count(it->b) ? z[it->b] : S(0), beta);
          if (z[it->b] == S(0)) z.erase(it->b);
        }
      }
      Chain chain;
      for (const auto& [idx, coeff] : z) {
        if (coeff != S(0)) chain.terms.emplace_back(cc.cells[k][idx], to_int64(coeff));
      }
      profile.representatives[k].push_back(std::move(chain));
    }
  }
  return profile;
}

}  // namespace

HomologyProfile homology(const ChainComplex& cc, bool want_representatives) {
  if (cc.dim < 0) return HomologyProfile{};
  try {
    return homology_impl<long long>(cc, want_representatives);
  } catch (const OverflowError&) {
    return homology_impl<BigInt>(cc, want_representatives);
  }
}

HomologyProfile cohomology(const HomologyProfile& h) {
  HomologyProfile coh;
  coh.dim = h.dim;
  coh.betti = h.betti;
  coh.torsion.assign(h.dim + 1, {});
  coh.representatives.assign(h.dim + 1, {});
  for (int k = 1; k <= h.dim; ++k) coh.torsion[k] = h.torsion[k - 1];
  return coh;
}

HomologyProfile expected_groups(SphereProfile target, int dim) {
  HomologyProfile p;
  p.dim = dim;
  p.betti.assign(dim + 1, 0);
  p.torsion.assign(dim + 1, {});
  p.representatives.assign(dim + 1, {});
  if (target.dimension == 0) {
    p.betti[0] = 2;
  } else {
    p.betti[0] = 1;
    if (target.dimension <= dim) p.betti[target.dimension] = 1;
  }
  return p;
}

bool matches_sphere(const HomologyProfile& h, int d) {
  if (d < 0) return false;
  const int top = std::max(h.dim, d);
  return cohomology(h).same_groups(expected_groups(SphereProfile{d}, top));
}

// ---------------------------------------------------------------------------
// Pipeline-scale cubical homology: bitmap reduction + transport
// ---------------------------------------------------------------------------

namespace {

struct BitmapComplex {
  GridGeometry grid;
  int dim = 0;
  int extent = 0;          // doubled coordinates per axis: 0..2R
  long long total = 0;
  std::array<long long, kMaxDim> stride{};
  std::vector<std::uint8_t> present;
  std::vector<std::uint8_t> bc;  // surviving faces
  std::vector<std::uint8_t> cc;  // surviving cofaces

  int coord(long long idx, int axis) const {
    return static_cast<int>((idx / stride[axis]) % extent);
  }
  int dim_of(long long idx) const {
    int d = 0;
    for (int a = 0; a < dim; ++a) d += coord(idx, a) & 1;
    return d;
  }
  CellKey key_of(long long idx) const {
    CellKey key = 0;
    for (int a = 0; a < dim; ++a) {
      key |= static_cast<CellKey>(coord(idx, a)) << (kBitsPerAxis * a);
    }
    return key;
  }
  long long index_of(CellKey key) const {
    long long idx = 0;
    for (int a = 0; a < dim; ++a) idx += stride[a] * cell_coord(key, a);
    return idx;
  }
};

// Fill-free reduction pass: repeatedly removes free-face pairs (a has the
// unique coface b) and coreduction pairs (b has the unique face a). Both keep
// the surviving boundary equal to the original boundary restricted to
// survivors, so no matrix bookkeeping is needed at this scale.
void bitmap_reduce(BitmapComplex& bm,
                   std::vector<std::pair<long long, long long>>& events) {
  std::deque<long long> queue;

  auto for_each_face = [&](long long idx, auto&& fn) {
    for (int a = 0; a < bm.dim; ++a) {
      const int c = bm.coord(idx, a);
      if (c % 2 == 1) {
        fn(idx - bm.stride[a]);
        fn(idx + bm.stride[a]);
      }
    }
  };
  auto for_each_coface = [&](long long idx, auto&& fn) {
    for (int a = 0; a < bm.dim; ++a) {
      const int c = bm.coord(idx, a);
      if (c % 2 == 0) {
        if (c > 0) fn(idx - bm.stride[a]);
        if (c < bm.extent - 1) fn(idx + bm.stride[a]);
      }
    }
  };

  auto remove_cell = [&](long long idx) {
    bm.present[idx] = 0;
    for_each_face(idx, [&](long long f) {
      if (bm.present[f]) {
        if (--bm.cc[f] == 1) queue.push_back(f);
      }
    });
    for_each_coface(idx, [&](long long c) {
      if (bm.present[c]) {
        if (--bm.bc[c] == 1) queue.push_back(c);
      }
    });
  };

  for (long long i = 0; i < bm.total; ++i) {
    if (bm.present[i] && (bm.cc[i] == 1 || bm.bc[i] == 1)) queue.push_back(i);
  }

  while (!queue.empty()) {
    const long long y = queue.front();
    queue.pop_front();
    if (!bm.present[y]) continue;
    if (bm.cc[y] == 1) {
      long long partner = -1;
      for_each_coface(y, [&](long long c) {
        if (bm.present[c]) partner = c;
      });
      if (partner < 0) continue;  // stale counter; cannot happen
      events.emplace_back(y, partner);
      remove_cell(y);
      remove_cell(partner);
    } else if (bm.bc[y] == 1 && bm.dim_of(y) >= 1) {
      long long partner = -1;
      for_each_face(y, [&](long long f) {
        if (bm.present[f]) partner = f;
      });
      if (partner < 0) continue;
      events.emplace_back(partner, y);
      remove_cell(partner);
      remove_cell(y);
    }
  }
}

}  // namespace

namespace {

// Marks every face of every top cube on the doubled-grid bitmap.
void mark_faces(const CubicalComplex& complex, BitmapComplex& bm) {
  const int d = complex.grid.dim;
  std::array<int, kMaxDim> cube{};
  std::array<int, kMaxDim> pick{};
  for (const CellKey top : complex.top_cubes) {
    unpack_cell(top, d, cube.data());
    pick.fill(0);
    while (true) {
      long long idx = 0;
      for (int a = 0; a < d; ++a) idx += bm.stride[a] * (2 * cube[a] + pick[a]);
      bm.present[idx] = 1;
      int a = 0;
      for (; a < d; ++a) {
        if (++pick[a] <= 2) break;
        pick[a] = 0;
      }
      if (a == d) break;
    }
  }
}

BitmapComplex make_bitmap(const CubicalComplex& complex, long long max_cells) {
  BitmapComplex bm;
  bm.grid = complex.grid;
  bm.dim = complex.grid.dim;
  bm.extent = complex.grid.doubled_extent();
  bm.total = 1;
  for (int a = 0; a < bm.dim; ++a) {
    bm.stride[a] = bm.total;
    bm.total *= bm.extent;
  }
  if (bm.total > max_cells) {
    throw CapacityError("doubled grid exceeds max_cells (" +
                        std::to_string(bm.total) + " sites)");
  }
  bm.present.assign(bm.total, 0);
  mark_faces(complex, bm);
  return bm;
}

}  // namespace

long long cubical_cell_count(const CubicalComplex& complex, long long max_cells) {
  if (complex.top_cubes.empty()) return 0;
  const BitmapComplex bm = make_bitmap(complex, max_cells);
  long long count = 0;
  for (long long i = 0; i < bm.total; ++i) count += bm.present[i];
  return count;
}

HomologyProfile cubical_homology(const CubicalComplex& complex,
                                 bool want_representatives, long long max_cells) {
  const int d = complex.grid.dim;
  HomologyProfile empty_profile;
  empty_profile.dim = d;
  empty_profile.betti.assign(d + 1, 0);
  empty_profile.torsion.assign(d + 1, {});
  empty_profile.representatives.assign(d + 1, {});
  if (complex.top_cubes.empty()) return empty_profile;

  BitmapComplex bm = make_bitmap(complex, max_cells);

  bm.bc.assign(bm.total, 0);
  bm.cc.assign(bm.total, 0);
  for (long long i = 0; i < bm.total; ++i) {
    if (!bm.present[i]) continue;
    bm.bc[i] = static_cast<std::uint8_t>(2 * bm.dim_of(i));  // complex is closed
    int cof = 0;
    for (int a = 0; a < d; ++a) {
      const int c = bm.coord(i, a);
      if (c % 2 == 0) {
        if (c > 0 && bm.present[i - bm.stride[a]]) ++cof;
        if (c < bm.extent - 1 && bm.present[i + bm.stride[a]]) ++cof;
      }
    }
    bm.cc[i] = static_cast<std::uint8_t>(cof);
  }

  std::vector<std::pair<long long, long long>> events;
  bitmap_reduce(bm, events);

  // Assemble the surviving core with the original boundary restricted to
  // survivors.
  ChainComplex core;
  core.grid = complex.grid;
  core.dim = d;
  core.cells.assign(d + 1, {});
  core.boundary.assign(d + 1, {});
  for (long long i = 0; i < bm.total; ++i) {
    if (bm.present[i]) core.cells[bm.dim_of(i)].push_back(bm.key_of(i));
  }
  for (int k = 0; k <= d; ++k) std::sort(core.cells[k].begin(), core.cells[k].end());
  for (int k = 0; k <= d; ++k) {
    core.boundary[k].rows = k > 0 ? static_cast<int>(core.cells[k - 1].size()) : 0;
    core.boundary[k].cols = static_cast<int>(core.cells[k].size());
    core.boundary[k].columns.resize(core.cells[k].size());
    if (k == 0) continue;
    const auto& below = core.cells[k - 1];
    for (std::size_t j = 0; j < core.cells[k].size(); ++j) {
      std::vector<std::pair<int, long long>> col;
      for (const auto& [face, coeff] : cell_faces(core.cells[k][j], d)) {
        if (!bm.present[bm.index_of(face)]) continue;
        const auto it = std::lower_bound(below.begin(), below.end(), face);
        col.emplace_back(static_cast<int>(it - below.begin()), coeff);
      }
      std::sort(col.begin(), col.end());
      core.boundary[k].columns[j] = std::move(col);
    }
  }

  HomologyProfile profile = homology(core, want_representatives);
  profile.dim = d;
  if (!want_representatives) return profile;

  // Transport core representatives back through the bitmap events: for each
  // removed pair (a, b) of the representative's degree, the lift gains
  // beta*b with beta = -lambda * <d(z), a>, maintained incrementally via
  // w = d(z).
  for (int k = 0; k <= d; ++k) {
    for (Chain& rep : profile.representatives[k]) {
      std::map<long long, long long> z;
      std::map<long long, long long> w;
      for (const auto& [key, coeff] : rep.terms) {
        const long long idx = bm.index_of(key);
        z[idx] = checked_add(z[idx], coeff);
        for (const auto& [face, fc] : cell_faces(key, d)) {
          auto& entry = w[bm.index_of(face)];
          entry = checked_add(entry, fc > 0 ? coeff : -coeff);
        }
      }
      for (auto it = events.rbegin(); it != events.rend(); ++it) {
        const auto [a_idx, b_idx] = *it;
        if (bm.dim_of(b_idx) != k) continue;
        const auto wa = w.find(a_idx);
        if (wa == w.end() || wa->second == 0) continue;
        const CellKey b_key = bm.key_of(b_idx);
        long long lambda = 0;
        for (const auto& [face, fc] : cell_faces(b_key, d)) {
          if (bm.index_of(face) == a_idx) {
            lambda = fc;
            break;
          }
        }
        if (lambda == 0) throw Error("internal: event pair is not incident");
        const long long beta = lambda > 0 ? -wa->second : wa->second;
        z[b_idx] = checked_add(z[b_idx], beta);
        for (const auto& [face, fc] : cell_faces(b_key, d)) {
          auto& entry = w[bm.index_of(face)];
          entry = checked_add(entry, fc > 0 ? beta : -beta);
        }
      }
      Chain lifted;
      for (const auto& [idx, coeff] : z) {
        if (coeff != 0) lifted.terms.emplace_back(bm.key_of(idx), coeff);
      }
      std::sort(lifted.terms.begin(), lifted.terms.end());
      rep = std::move(lifted);
    }
  }
  return profile;
}

}  // namespace stabcheck
