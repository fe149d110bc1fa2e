#ifndef STABCHECK_SNF_HPP
#define STABCHECK_SNF_HPP

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "stabcheck/errors.hpp"

namespace stabcheck {

/// Smith decomposition U*A*V = D with U, V unimodular and D diagonal with
/// d1 | d2 | ... >= 0. U_inv and V_inv are maintained alongside so that
/// kernel/cokernel coordinates come out of the same computation.
template <typename Scalar>
struct SmithNormalForm {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix D, U, V, U_inv, V_inv;
  int rank = 0;
  std::vector<Scalar> invariant_factors;  // the positive diagonal entries
};

namespace detail {

/// Entry-magnitude guard: elimination aborts with OverflowError once any
/// matrix entry leaves [-guard, guard], so products in subsequent updates
/// stay representable. A guard of 0 disables the check (arbitrary-precision
/// scalars).
template <typename Scalar>
class SmithReducer {
  using Matrix = typename SmithNormalForm<Scalar>::Matrix;

 public:
  SmithReducer(const Matrix& A, const Scalar& guard) : guard_(guard) {
    const Eigen::Index rows = A.rows(), cols = A.cols();
    r_.D = A;
    r_.U = Matrix::Identity(rows, rows);
    r_.U_inv = Matrix::Identity(rows, rows);
    r_.V = Matrix::Identity(cols, cols);
    r_.V_inv = Matrix::Identity(cols, cols);
  }

  SmithNormalForm<Scalar> run() {
    const Eigen::Index nmin = std::min(r_.D.rows(), r_.D.cols());
    for (Eigen::Index t = 0; t < nmin; ++t) {
      if (!reduce_pivot(t)) break;  // remaining block is all zero
    }
    for (Eigen::Index t = 0; t < nmin; ++t) {
      if (r_.D(t, t) != Scalar(0)) {
        r_.rank = static_cast<int>(t) + 1;
        r_.invariant_factors.push_back(r_.D(t, t));
      }
    }
    return std::move(r_);
  }

 private:
  static Scalar abs_of(const Scalar& v) { return v < Scalar(0) ? Scalar(-v) : v; }

  void check(const Scalar& v) const {
    if (guard_ != Scalar(0) && abs_of(v) > guard_) {
      throw OverflowError("Smith normal form entry exceeded the scalar guard");
    }
  }

  void swap_rows(Eigen::Index i, Eigen::Index j) {
    if (i == j) return;
    r_.D.row(i).swap(r_.D.row(j));
    r_.U.row(i).swap(r_.U.row(j));
    r_.U_inv.col(i).swap(r_.U_inv.col(j));
  }
  void swap_cols(Eigen::Index i, Eigen::Index j) {
    if (i == j) return;
    r_.D.col(i).swap(r_.D.col(j));
    r_.V.col(i).swap(r_.V.col(j));
    r_.V_inv.row(i).swap(r_.V_inv.row(j));
  }
  void negate_row(Eigen::Index i) {
    r_.D.row(i) = -r_.D.row(i);
    r_.U.row(i) = -r_.U.row(i);
    r_.U_inv.col(i) = -r_.U_inv.col(i);
  }
  // row_i += q * row_j (and the matching inverse update col_j -= q * col_i)
  void add_row(Eigen::Index i, Eigen::Index j, const Scalar& q) {
    r_.D.row(i) += q * r_.D.row(j);
    r_.U.row(i) += q * r_.U.row(j);
    r_.U_inv.col(j) -= q * r_.U_inv.col(i);
    for (Eigen::Index c = 0; c < r_.D.cols(); ++c) check(r_.D(i, c));
    for (Eigen::Index c = 0; c < r_.U.cols(); ++c) {
      check(r_.U(i, c));
      check(r_.U_inv(c, j));
    }
  }
  void add_col(Eigen::Index i, Eigen::Index j, const Scalar& q) {
    r_.D.col(i) += q * r_.D.col(j);
    r_.V.col(i) += q * r_.V.col(j);
    r_.V_inv.row(j) -= q * r_.V_inv.row(i);
    for (Eigen::Index c = 0; c < r_.D.rows(); ++c) check(r_.D(c, i));
    for (Eigen::Index c = 0; c < r_.V.rows(); ++c) {
      check(r_.V(c, i));
      check(r_.V_inv(j, c));
    }
  }

  bool find_min_pivot(Eigen::Index t, Eigen::Index& pi, Eigen::Index& pj) const {
    bool found = false;
    Scalar best(0);
    for (Eigen::Index i = t; i < r_.D.rows(); ++i) {
      for (Eigen::Index j = t; j < r_.D.cols(); ++j) {
        const Scalar a = abs_of(r_.D(i, j));
        if (a != Scalar(0) && (!found || a < best)) {
          best = a;
          pi = i;
          pj = j;
          found = true;
        }
      }
    }
    return found;
  }

  bool cleared(Eigen::Index t) const {
    for (Eigen::Index i = t + 1; i < r_.D.rows(); ++i) {
      if (r_.D(i, t) != Scalar(0)) return false;
    }
    for (Eigen::Index j = t + 1; j < r_.D.cols(); ++j) {
      if (r_.D(t, j) != Scalar(0)) return false;
    }
    return true;
  }

  bool reduce_pivot(Eigen::Index t) {
    while (true) {
      Eigen::Index pi = t, pj = t;
      if (!find_min_pivot(t, pi, pj)) return false;
      swap_rows(t, pi);
      swap_cols(t, pj);
      for (Eigen::Index i = t + 1; i < r_.D.rows(); ++i) {
        if (r_.D(i, t) != Scalar(0)) add_row(i, t, Scalar(-(r_.D(i, t) / r_.D(t, t))));
      }
      for (Eigen::Index j = t + 1; j < r_.D.cols(); ++j) {
        if (r_.D(t, j) != Scalar(0)) add_col(j, t, Scalar(-(r_.D(t, j) / r_.D(t, t))));
      }
      if (!cleared(t)) continue;  // remainders became new, smaller pivots
      // Divisibility fixup: fold in any later entry the pivot does not divide
      // and re-reduce; the gcd strictly decreases, so this terminates.
      bool divides_all = true;
      for (Eigen::Index i = t + 1; i < r_.D.rows() && divides_all; ++i) {
        for (Eigen::Index j = t + 1; j < r_.D.cols() && divides_all; ++j) {
          if (r_.D(i, j) % r_.D(t, t) != Scalar(0)) {
            add_row(t, i, Scalar(1));
            divides_all = false;
          }
        }
      }
      if (!divides_all) continue;
      if (r_.D(t, t) < Scalar(0)) negate_row(t);
      return true;
    }
  }

  SmithNormalForm<Scalar> r_;
  Scalar guard_;
};

}  // namespace detail

inline constexpr std::int64_t kDefaultSnfGuard = std::int64_t{1} << 31;

/// Computes the Smith normal form by minimum-pivot elimination. For bounded
/// scalars pass a positive guard (kDefaultSnfGuard for int64): the reduction
/// throws OverflowError before any intermediate could wrap, and the caller
/// retries with an arbitrary-precision scalar.
template <typename Scalar>
SmithNormalForm<Scalar> smith_normal_form(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A,
    const Scalar& guard = Scalar(0)) {
  detail::SmithReducer<Scalar> reducer(A, guard);
  return reducer.run();
}

}  // namespace stabcheck

#endif  // STABCHECK_SNF_HPP
