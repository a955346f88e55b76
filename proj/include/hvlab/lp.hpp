#pragma once

// Exact two-phase simplex over an ordered field.
//
//   maximize c.q  subject to  A q <= b,  q >= 0
//
// Field is any exact ordered field type with the usual arithmetic operators
// and an overload of hvlab::sign (Scalar and Rational both qualify). Pivoting
// follows Bland's rule, so the method terminates on degenerate problems.

#include <cstddef>
#include <vector>

#include "hvlab/scalar.hpp"

namespace hvlab {

template <typename Field>
struct LpProblem {
  Matrix<Field> A;
  Vector<Field> b;
  Vector<Field> c;
};

enum class LpStatus { optimal, infeasible, unbounded };

inline const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "unknown";
}

/// On optimal termination `dual` is y >= 0 with A^T y >= c and b.y == c.q.
template <typename Field>
struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Vector<Field> q;
  Field value{0};
  Vector<Field> dual;
  std::size_t pivots = 0;
};

namespace detail {

template <typename Field>
class Tableau {
 public:
  Tableau(const LpProblem<Field>& p) : m_(p.A.rows()), n_(p.A.cols()) {
    Eigen::Index artificials = 0;
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (sign(p.b(i)) < 0) ++artificials;
    }
    cols_ = n_ + m_ + artificials;
    t_ = Matrix<Field>::Constant(m_, cols_, Field(0));
    rhs_ = Vector<Field>::Constant(m_, Field(0));
    basis_.resize(static_cast<std::size_t>(m_));

    Eigen::Index next_artificial = n_ + m_;
    for (Eigen::Index i = 0; i < m_; ++i) {
      const bool negate = sign(p.b(i)) < 0;
      for (Eigen::Index j = 0; j < n_; ++j) t_(i, j) = negate ? Field(-p.A(i, j)) : p.A(i, j);
      t_(i, n_ + i) = Field(negate ? -1 : 1);
      rhs_(i) = negate ? Field(-p.b(i)) : p.b(i);
      if (negate) {
        t_(i, next_artificial) = Field(1);
        basis_[static_cast<std::size_t>(i)] = next_artificial++;
      } else {
        basis_[static_cast<std::size_t>(i)] = n_ + i;
      }
    }
  }

  bool has_artificials() const { return cols_ > n_ + m_; }
  bool is_artificial(Eigen::Index j) const { return j >= n_ + m_; }

  /// Loads the reduced-cost row for maximizing `cost` (indexed by column).
  void set_objective(const Vector<Field>& cost) {
    cost_ = cost;
    z_ = -cost_.transpose();
    z0_ = Field(0);
    for (Eigen::Index i = 0; i < m_; ++i) {
      const Field& cb = cost_(basis_[static_cast<std::size_t>(i)]);
      if (sign(cb) == 0) continue;
      for (Eigen::Index j = 0; j < cols_; ++j) z_(j) += cb * t_(i, j);
      z0_ += cb * rhs_(i);
    }
  }

  /// Runs Bland-rule pivots over columns [0, allowed). Returns false when
  /// the objective is unbounded.
  bool optimize(Eigen::Index allowed) {
    for (;;) {
      Eigen::Index entering = -1;
      for (Eigen::Index j = 0; j < allowed; ++j) {
        if (sign(z_(j)) < 0) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return true;

      Eigen::Index leaving = -1;
      Field best_ratio(0);
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (sign(t_(i, entering)) <= 0) continue;
        Field ratio = rhs_(i) / t_(i, entering);
        if (leaving < 0) {
          leaving = i;
          best_ratio = ratio;
          continue;
        }
        const int c = sign(Field(ratio - best_ratio));
        if (c < 0 || (c == 0 && basis_[static_cast<std::size_t>(i)] <
                                    basis_[static_cast<std::size_t>(leaving)])) {
          leaving = i;
          best_ratio = ratio;
        }
      }
      if (leaving < 0) return false;
      pivot(leaving, entering);
    }
  }

  /// Degenerate pivots that move zero-valued artificials out of the basis.
  void evict_artificials() {
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (!is_artificial(basis_[static_cast<std::size_t>(i)])) continue;
      for (Eigen::Index j = 0; j < n_ + m_; ++j) {
        if (sign(t_(i, j)) != 0) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  void pivot(Eigen::Index r, Eigen::Index j) {
    ++pivots_;
    const Field inv = Field(1) / t_(r, j);
    t_.row(r) *= inv;
    rhs_(r) *= inv;
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (i == r || sign(t_(i, j)) == 0) continue;
      const Field f = t_(i, j);
      t_.row(i) -= t_.row(r) * f;
      rhs_(i) -= rhs_(r) * f;
    }
    if (sign(z_(j)) != 0) {
      const Field f = z_(j);
      z_ -= t_.row(r) * f;
      z0_ -= rhs_(r) * f;
    }
    basis_[static_cast<std::size_t>(r)] = j;
  }

  Eigen::Index rows() const { return m_; }
  Eigen::Index structural() const { return n_; }
  Eigen::Index columns() const { return cols_; }
  const Field& objective_value() const { return z0_; }
  const Eigen::Matrix<Field, 1, Eigen::Dynamic>& reduced_costs() const { return z_; }
  const std::vector<Eigen::Index>& basis() const { return basis_; }
  const Vector<Field>& rhs() const { return rhs_; }
  std::size_t pivots() const { return pivots_; }

 private:
  Eigen::Index m_, n_, cols_ = 0;
  Matrix<Field> t_;
  Vector<Field> rhs_;
  Vector<Field> cost_;
  Eigen::Matrix<Field, 1, Eigen::Dynamic> z_;
  Field z0_{0};
  std::vector<Eigen::Index> basis_;
  std::size_t pivots_ = 0;
};

}  // namespace detail

/// Throws DimensionMismatch when A, b and c disagree in size.
template <typename Field>
LpSolution<Field> solve_lp(const LpProblem<Field>& problem) {
  const Eigen::Index m = problem.A.rows();
  const Eigen::Index n = problem.A.cols();
  if (problem.b.size() != m || problem.c.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "LP dimensions are inconsistent");
  }

  detail::Tableau<Field> tab(problem);
  LpSolution<Field> out;

  if (tab.has_artificials()) {
    Vector<Field> phase1 = Vector<Field>::Constant(tab.columns(), Field(0));
    for (Eigen::Index j = n + m; j < tab.columns(); ++j) phase1(j) = Field(-1);
    tab.set_objective(phase1);
    tab.optimize(tab.columns());
    if (sign(tab.objective_value()) < 0) {
      out.status = LpStatus::infeasible;
      out.pivots = tab.pivots();
      return out;
    }
    tab.evict_artificials();
  }

  Vector<Field> phase2 = Vector<Field>::Constant(tab.columns(), Field(0));
  phase2.head(n) = problem.c;
  tab.set_objective(phase2);
  if (!tab.optimize(n + m)) {
    out.status = LpStatus::unbounded;
    out.pivots = tab.pivots();
    return out;
  }

  out.status = LpStatus::optimal;
  out.q = Vector<Field>::Constant(n, Field(0));
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index j = tab.basis()[static_cast<std::size_t>(i)];
    if (j < n) out.q(j) = tab.rhs()(i);
  }
  out.value = Field(0);
  for (Eigen::Index j = 0; j < n; ++j) out.value += problem.c(j) * out.q(j);
  // y_i is the reduced cost of slack i in either row orientation.
  out.dual = tab.reduced_costs().segment(n, m).transpose();
  out.pivots = tab.pivots();
  return out;
}

struct CertificateReport {
  bool primal_feasible = false;
  bool dual_feasible = false;
  bool objectives_match = false;

  bool ok() const { return primal_feasible && dual_feasible && objectives_match; }
};

/// Re-checks an optimal solution from scratch: A q <= b, q >= 0, y >= 0,
/// A^T y >= c and b.y == c.q == value. Shares no state with the solver.
template <typename Field>
CertificateReport verify_certificate(const LpProblem<Field>& p, const LpSolution<Field>& s) {
  CertificateReport r;
  if (s.status != LpStatus::optimal) return r;
  const Eigen::Index m = p.A.rows();
  const Eigen::Index n = p.A.cols();
  if (s.q.size() != n || s.dual.size() != m) return r;

  r.primal_feasible = true;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (sign(s.q(j)) < 0) r.primal_feasible = false;
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    Field lhs(0);
    for (Eigen::Index j = 0; j < n; ++j) lhs += p.A(i, j) * s.q(j);
    if (sign(Field(lhs - p.b(i))) > 0) r.primal_feasible = false;
  }

  r.dual_feasible = true;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (sign(s.dual(i)) < 0) r.dual_feasible = false;
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    Field lhs(0);
    for (Eigen::Index i = 0; i < m; ++i) lhs += p.A(i, j) * s.dual(i);
    if (sign(Field(lhs - p.c(j))) < 0) r.dual_feasible = false;
  }

  Field primal(0), dual(0);
  for (Eigen::Index j = 0; j < n; ++j) primal += p.c(j) * s.q(j);
  for (Eigen::Index i = 0; i < m; ++i) dual += p.b(i) * s.dual(i);
  r.objectives_match = primal == dual && primal == s.value;
  return r;
}

}  // namespace hvlab
