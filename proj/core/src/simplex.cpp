#include "mrr/simplex.hpp"

#include <cassert>
#include <cmath>
#include <limits>

namespace mrr::lp {
namespace {

// Tableau layout (KACTL-style): rows 0..m-1 are constraints, row m is the
// phase-two objective, row m+1 the phase-one objective. Column n is the
// auxiliary variable, column n+1 the right-hand side. basis_[i] names the
// variable in row i, nonbasis_[j] the variable in column j; slack i is
// variable n+i and the auxiliary variable is -1.
class Tableau {
 public:
  Tableau(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
          const std::vector<double>& c, double eps)
      : m_(static_cast<int>(b.size())),
        n_(static_cast<int>(c.size())),
        eps_(eps),
        basis_(m_),
        nonbasis_(n_ + 1),
        d_(m_ + 2, std::vector<double>(n_ + 2, 0.0)) {
    for (int i = 0; i < m_; ++i) {
      assert(static_cast<int>(A[i].size()) == n_);
      for (int j = 0; j < n_; ++j) d_[i][j] = A[i][j];
      basis_[i] = n_ + i;
      d_[i][n_] = -1.0;
      d_[i][n_ + 1] = b[i];
    }
    for (int j = 0; j < n_; ++j) {
      nonbasis_[j] = j;
      d_[m_][j] = -c[j];
    }
    nonbasis_[n_] = -1;
    d_[m_ + 1][n_] = 1.0;
  }

  Solution solve() {
    Solution out;
    int r = 0;
    for (int i = 1; i < m_; ++i) {
      if (d_[i][n_ + 1] < d_[r][n_ + 1]) r = i;
    }
    if (m_ > 0 && d_[r][n_ + 1] < -eps_) {
      pivot(r, n_);
      if (!run(/*phase=*/1) || d_[m_ + 1][n_ + 1] < -1e-9) {
        out.status = Status::kInfeasible;
        return out;
      }
      // Drive the auxiliary variable out of the basis if it is still there.
      for (int i = 0; i < m_; ++i) {
        if (basis_[i] != -1) continue;
        int s = -1;
        for (int j = 0; j <= n_; ++j) {
          if (std::abs(d_[i][j]) > eps_ &&
              (s == -1 || nonbasis_[j] < nonbasis_[s])) {
            s = j;
          }
        }
        if (s != -1) pivot(i, s);
      }
    }
    if (!run(/*phase=*/2)) {
      out.status = Status::kUnbounded;
      out.objective = std::numeric_limits<double>::infinity();
      return out;
    }
    out.status = Status::kOptimal;
    out.x.assign(n_, 0.0);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] >= 0 && basis_[i] < n_) out.x[basis_[i]] = d_[i][n_ + 1];
    }
    out.objective = d_[m_][n_ + 1];
    return out;
  }

 private:
  void pivot(int r, int s) {
    const double inv = 1.0 / d_[r][s];
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r) continue;
      const double f = d_[i][s] * inv;
      if (std::abs(d_[i][s]) > eps_) {
        for (int j = 0; j < n_ + 2; ++j) d_[i][j] -= d_[r][j] * f;
      }
      d_[i][s] = -f;
    }
    for (int j = 0; j < n_ + 2; ++j) {
      if (j != s) d_[r][j] *= inv;
    }
    d_[r][s] = inv;
    std::swap(basis_[r], nonbasis_[s]);
  }

  // Bland's rule on both the entering and leaving choice, so no cycling.
  bool run(int phase) {
    const int obj = phase == 1 ? m_ + 1 : m_;
    for (;;) {
      int s = -1;
      for (int j = 0; j <= n_; ++j) {
        if (nonbasis_[j] == -1 && phase == 2) continue;  // aux stays at zero
        if (d_[obj][j] < -eps_ && (s == -1 || nonbasis_[j] < nonbasis_[s])) s = j;
      }
      if (s == -1) return true;
      int r = -1;
      for (int i = 0; i < m_; ++i) {
        if (d_[i][s] <= eps_) continue;
        if (r == -1) {
          r = i;
          continue;
        }
        const double lhs = d_[i][n_ + 1] * d_[r][s];
        const double rhs = d_[r][n_ + 1] * d_[i][s];
        if (lhs < rhs - eps_ || (std::abs(lhs - rhs) <= eps_ && basis_[i] < basis_[r])) {
          r = i;
        }
      }
      if (r == -1) return false;
      pivot(r, s);
    }
  }

  int m_;
  int n_;
  double eps_;
  std::vector<int> basis_;
  std::vector<int> nonbasis_;
  std::vector<std::vector<double>> d_;
};

}  // namespace

Solution maximize(const std::vector<std::vector<double>>& A,
                  const std::vector<double>& b, const std::vector<double>& c,
                  double eps) {
  assert(A.size() == b.size());
  return Tableau(A, b, c, eps).solve();
}

}  // namespace mrr::lp
