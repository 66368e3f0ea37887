#pragma once

#include <cmath>

#include "slrel/core/opinion.hpp"

namespace slrel {

/// Probability sensitive trust discounting: b_i <- p_i b_i, u <- 1 - sum p_i b_i.
inline Opinion trust_discount(const Opinion& op, const DiscountVector& p) {
  if (p.probs.size() != op.cardinality()) {
    throw DomainMismatchError("discount vector cardinality differs from opinion");
  }
  std::vector<double> b(op.cardinality());
  double kept = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    b[i] = p.probs[i] * op.belief(i);
    kept += b[i];
  }
  return Opinion(std::move(b), 1.0 - kept, op.base_rates(), op.prior_weight());
}

/// Probability sensitive trust revision of a binary reliability opinion.
///
/// The reliable belief and the uncertainty are both scaled by (1 - dc); the
/// freed mass moves to the unreliable belief so additivity is preserved.
inline Opinion trust_revise(const Opinion& op, double dc) {
  if (op.cardinality() != 2) {
    throw DomainMismatchError("trust revision is defined on the binary reliability domain");
  }
  if (!(dc >= 0.0 && dc <= 1.0)) {
    throw PreconditionError("degree of conflict must lie in [0,1]");
  }
  const double keep = 1.0 - dc;
  const double reliable = keep * op.belief(kReliable);
  const double u = keep * op.uncertainty();
  std::vector<double> b(2);
  b[kReliable] = reliable;
  b[kUnreliable] = std::max(0.0, 1.0 - reliable - u);
  return Opinion(std::move(b), u, op.base_rates(), op.prior_weight());
}

/// DC = 1/2 sum |p_a - p_b| (1 - u_a)(1 - u_b), in [0,1].
inline double degree_of_conflict(const Opinion& a, const Opinion& b) {
  if (a.cardinality() != b.cardinality()) {
    throw DomainMismatchError("opinions have different cardinality");
  }
  const ProjectedProbability pa = project(a);
  const ProjectedProbability pb = project(b);
  double distance = 0.0;
  for (std::size_t i = 0; i < pa.probs.size(); ++i) {
    distance += std::abs(pa.probs[i] - pb.probs[i]);
  }
  const double dc = 0.5 * distance * ((1.0 - a.uncertainty()) * (1.0 - b.uncertainty()));
  return std::clamp(dc, 0.0, 1.0);
}

}  // namespace slrel
