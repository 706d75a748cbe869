#pragma once

#include <vector>

namespace mrr::lp {

enum class Status { kOptimal, kInfeasible, kUnbounded };

struct Solution {
  Status status = Status::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;
};

/// Dense two-phase tableau simplex with Bland's rule.
///   maximize c'x  subject to  A x <= b,  x >= 0
/// `b` may have negative entries; phase one handles them with a single
/// auxiliary column. Intended for the small LPs built by the schedulers
/// (tens of rows), not for general use.
Solution maximize(const std::vector<std::vector<double>>& A,
                  const std::vector<double>& b, const std::vector<double>& c,
                  double eps = 1e-12);

}  // namespace mrr::lp
