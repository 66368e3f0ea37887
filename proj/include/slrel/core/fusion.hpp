#pragma once

#include <span>
#include <vector>

#include "slrel/core/opinion.hpp"

namespace slrel {

/// Aleatory cumulative belief fusion (evidence addition).
///
/// Both operands must be non-dogmatic. A vacuous operand contributes no
/// evidence; when both are vacuous the base rates are averaged.
inline Opinion cumulative_fuse(const Opinion& a, const Opinion& b) {
  require_same_domain(a, b);
  const double ua = a.uncertainty();
  const double ub = b.uncertainty();
  if (ua <= 0.0 || ub <= 0.0) {
    throw DogmaticOpinionError("cumulative fusion needs non-dogmatic operands");
  }
  const std::size_t n = a.cardinality();
  const double denom = ua + ub - ua * ub;
  std::vector<double> beliefs(n);
  for (std::size_t i = 0; i < n; ++i) {
    beliefs[i] = (a.belief(i) * ub + b.belief(i) * ua) / denom;
  }
  const double u = ua * ub / denom;

  std::vector<double> base(n);
  const double base_denom = ua + ub - 2.0 * ua * ub;
  if (base_denom <= 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      base[i] = 0.5 * (a.base_rate(i) + b.base_rate(i));
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const double aa = a.base_rate(i);
      const double ab = b.base_rate(i);
      base[i] = (aa * ub + ab * ua - (aa + ab) * ua * ub) / base_denom;
    }
  }
  return Opinion(std::move(beliefs), u, std::move(base), a.prior_weight());
}

/// Aleatory average belief fusion of two non-dogmatic opinions.
inline Opinion averaging_fuse(const Opinion& a, const Opinion& b) {
  require_same_domain(a, b);
  const double ua = a.uncertainty();
  const double ub = b.uncertainty();
  if (ua <= 0.0 || ub <= 0.0) {
    throw DogmaticOpinionError("averaging fusion needs non-dogmatic operands");
  }
  const std::size_t n = a.cardinality();
  std::vector<double> beliefs(n);
  std::vector<double> base(n);
  for (std::size_t i = 0; i < n; ++i) {
    beliefs[i] = (a.belief(i) * ub + b.belief(i) * ua) / (ua + ub);
    base[i] = 0.5 * (a.base_rate(i) + b.base_rate(i));
  }
  return Opinion(std::move(beliefs), 2.0 * ua * ub / (ua + ub), std::move(base), a.prior_weight());
}

/// N-ary averaging fusion as the mean of the operands' evidence vectors.
///
/// Order-free; for two operands with equal base rates it coincides with
/// averaging_fuse.
inline Opinion averaging_fuse_many(std::span<const Opinion> ops) {
  if (ops.empty()) {
    throw PreconditionError("averaging fusion of an empty list");
  }
  const Opinion& first = ops.front();
  const std::size_t n = first.cardinality();
  std::vector<double> r(n, 0.0);
  std::vector<double> base(n, 0.0);
  for (const Opinion& op : ops) {
    require_same_domain(first, op);
    const EvidenceVector ev = evidence_from_opinion(op);
    for (std::size_t i = 0; i < n; ++i) {
      r[i] += ev.counts[i];
      base[i] += op.base_rate(i);
    }
  }
  const double count = static_cast<double>(ops.size());
  for (std::size_t i = 0; i < n; ++i) {
    r[i] /= count;
    base[i] /= count;
  }
  return opinion_from_evidence(EvidenceVector(std::move(r), std::move(base), first.prior_weight()));
}

inline Opinion averaging_fuse_many(const std::vector<Opinion>& ops) {
  return averaging_fuse_many(std::span<const Opinion>(ops));
}

/// Uncertainty weighted average belief fusion; the result leans toward the
/// more certain operand.
///
/// Requires (u_a != 0 or u_b != 0) and (u_a != 1 or u_b != 1). The
/// uncertainty numerator is (2 - u_a - u_b) u_a u_b, which keeps
/// sum(b) + u = 1.
inline Opinion uncertainty_weighted_fuse(const Opinion& a, const Opinion& b) {
  require_same_domain(a, b);
  const double ua = a.uncertainty();
  const double ub = b.uncertainty();
  if ((ua == 0.0 && ub == 0.0) || (ua == 1.0 && ub == 1.0)) {
    throw PreconditionError(
        "uncertainty weighted fusion undefined for two dogmatic or two vacuous operands");
  }
  const std::size_t n = a.cardinality();
  const double denom = ua + ub - 2.0 * ua * ub;
  std::vector<double> beliefs(n);
  std::vector<double> base(n);
  for (std::size_t i = 0; i < n; ++i) {
    beliefs[i] = (a.belief(i) * (1.0 - ua) * ub + b.belief(i) * (1.0 - ub) * ua) / denom;
    base[i] = (a.base_rate(i) * (1.0 - ua) + b.base_rate(i) * (1.0 - ub)) / (2.0 - ua - ub);
  }
  const double u = (2.0 - ua - ub) * ua * ub / denom;
  return Opinion(std::move(beliefs), u, std::move(base), a.prior_weight());
}

/// Belief and importance weighted average fusion: weighted mean in evidence
/// space, each weight paired with its own operand's evidence and base rate.
inline Opinion importance_weighted_fuse(const Opinion& a, double weight_a, const Opinion& b,
                                        double weight_b) {
  require_same_domain(a, b);
  if (!(weight_a > 0.0) || !(weight_b > 0.0)) {
    throw PreconditionError("importance weights must be positive");
  }
  const EvidenceVector ra = evidence_from_opinion(a);
  const EvidenceVector rb = evidence_from_opinion(b);
  const double total_weight = weight_a + weight_b;
  const std::size_t n = a.cardinality();
  std::vector<double> r(n);
  std::vector<double> base(n);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = (weight_a * ra.counts[i] + weight_b * rb.counts[i]) / total_weight;
    base[i] = (weight_a * a.base_rate(i) + weight_b * b.base_rate(i)) / total_weight;
  }
  return opinion_from_evidence(EvidenceVector(std::move(r), std::move(base), a.prior_weight()));
}

}  // namespace slrel
