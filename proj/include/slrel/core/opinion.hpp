#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "slrel/core/error.hpp"

namespace slrel {

/// Non-informative prior weight for binary domains.
inline constexpr double kDefaultPriorWeight = 2.0;

/// Tolerance used when validating additivity of masses and base rates.
inline constexpr double kMassTolerance = 1e-9;

/// Outcome indices of the binary reliability domain {reliable, unreliable}.
inline constexpr std::size_t kReliable = 0;
inline constexpr std::size_t kUnreliable = 1;

namespace detail {

inline double sum(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

// Accepts values within kMassTolerance of [0,1] and clamps them into range.
inline double checked_unit(double x, const char* what) {
  if (!std::isfinite(x) || x < -kMassTolerance || x > 1.0 + kMassTolerance) {
    throw PreconditionError(std::string(what) + " must lie in [0,1], got " + std::to_string(x));
  }
  return std::clamp(x, 0.0, 1.0);
}

inline void check_base_rates(std::vector<double>& a) {
  if (a.size() < 2) {
    throw PreconditionError("domain cardinality must be at least 2");
  }
  for (double& x : a) {
    x = checked_unit(x, "base rate");
  }
  if (std::abs(sum(a) - 1.0) > kMassTolerance) {
    throw PreconditionError("base rates must sum to 1");
  }
}

inline void check_prior_weight(double w) {
  if (!(w > 0.0) || !std::isfinite(w)) {
    throw PreconditionError("prior weight must be positive and finite");
  }
}

}  // namespace detail

inline std::vector<double> uniform_base_rates(std::size_t cardinality) {
  return std::vector<double>(cardinality, 1.0 / static_cast<double>(cardinality));
}

/// Multinomial subjective opinion (b, u, a) with prior weight W.
///
/// Invariants, enforced on construction: cardinality >= 2, every mass and
/// base rate in [0,1], sum(b) + u = 1 and sum(a) = 1 within kMassTolerance.
/// Instances are immutable.
class Opinion {
 public:
  Opinion(std::vector<double> beliefs, double uncertainty, std::vector<double> base_rates,
          double prior_weight = kDefaultPriorWeight)
      : beliefs_(std::move(beliefs)),
        uncertainty_(detail::checked_unit(uncertainty, "uncertainty")),
        base_rates_(std::move(base_rates)),
        prior_weight_(prior_weight) {
    detail::check_prior_weight(prior_weight_);
    detail::check_base_rates(base_rates_);
    if (beliefs_.size() != base_rates_.size()) {
      throw DomainMismatchError("beliefs and base rates differ in cardinality");
    }
    for (double& b : beliefs_) {
      b = detail::checked_unit(b, "belief mass");
    }
    if (std::abs(detail::sum(beliefs_) + uncertainty_ - 1.0) > kMassTolerance) {
      throw PreconditionError("belief masses and uncertainty must sum to 1");
    }
  }

  /// Opinion with all mass on uncertainty.
  static Opinion vacuous(std::vector<double> base_rates, double prior_weight = kDefaultPriorWeight) {
    std::vector<double> b(base_rates.size(), 0.0);
    return Opinion(std::move(b), 1.0, std::move(base_rates), prior_weight);
  }

  static Opinion vacuous(std::size_t cardinality, double prior_weight = kDefaultPriorWeight) {
    return vacuous(uniform_base_rates(cardinality), prior_weight);
  }

  const std::vector<double>& beliefs() const noexcept { return beliefs_; }
  double belief(std::size_t i) const { return beliefs_.at(i); }
  double uncertainty() const noexcept { return uncertainty_; }
  const std::vector<double>& base_rates() const noexcept { return base_rates_; }
  double base_rate(std::size_t i) const { return base_rates_.at(i); }
  double prior_weight() const noexcept { return prior_weight_; }
  std::size_t cardinality() const noexcept { return beliefs_.size(); }

  bool is_dogmatic() const noexcept { return uncertainty_ == 0.0; }
  bool is_vacuous() const noexcept { return uncertainty_ == 1.0; }

 private:
  std::vector<double> beliefs_;
  double uncertainty_;
  std::vector<double> base_rates_;
  double prior_weight_;
};

/// Dirichlet-space twin of an opinion: evidence counts r, base rates a, weight W.
struct EvidenceVector {
  std::vector<double> counts;
  std::vector<double> base_rates;
  double prior_weight = kDefaultPriorWeight;

  EvidenceVector(std::vector<double> r, std::vector<double> a, double w = kDefaultPriorWeight)
      : counts(std::move(r)), base_rates(std::move(a)), prior_weight(w) {
    detail::check_prior_weight(prior_weight);
    detail::check_base_rates(base_rates);
    if (counts.size() != base_rates.size()) {
      throw DomainMismatchError("evidence and base rates differ in cardinality");
    }
    for (double c : counts) {
      if (!(c >= 0.0) || !std::isfinite(c)) {
        throw PreconditionError("evidence counts must be finite and nonnegative");
      }
    }
  }

  double total() const { return detail::sum(counts); }
};

/// Projected probability distribution p = b + u a.
struct ProjectedProbability {
  std::vector<double> probs;

  double operator[](std::size_t i) const { return probs.at(i); }
};

/// Per-outcome probability that a new piece of evidence is independent/meaningful.
struct DiscountVector {
  std::vector<double> probs;

  explicit DiscountVector(std::vector<double> p) : probs(std::move(p)) {
    for (double& x : probs) {
      x = detail::checked_unit(x, "discount probability");
    }
  }

  static DiscountVector uniform(std::size_t cardinality, double p) {
    return DiscountVector(std::vector<double>(cardinality, p));
  }
};

/// b_i = r_i / (W + sum r), u = W / (W + sum r).
inline Opinion opinion_from_evidence(const EvidenceVector& ev) {
  const double denom = ev.prior_weight + ev.total();
  std::vector<double> b(ev.counts.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    b[i] = ev.counts[i] / denom;
  }
  const double u = ev.prior_weight / denom;
  return Opinion(std::move(b), u, ev.base_rates, ev.prior_weight);
}

/// r_i = W b_i / u. Throws DogmaticOpinionError when u = 0.
inline EvidenceVector evidence_from_opinion(const Opinion& op) {
  if (op.is_dogmatic()) {
    throw DogmaticOpinionError("dogmatic opinion has infinite evidence");
  }
  std::vector<double> r(op.cardinality());
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = op.prior_weight() * op.belief(i) / op.uncertainty();
  }
  return EvidenceVector(std::move(r), op.base_rates(), op.prior_weight());
}

/// Binary {reliable, unreliable} opinion from evidence with a = [0.5, 0.5].
inline Opinion binary_from_evidence(double positive, double negative,
                                    double prior_weight = kDefaultPriorWeight) {
  return opinion_from_evidence(EvidenceVector({positive, negative}, {0.5, 0.5}, prior_weight));
}

inline ProjectedProbability project(const Opinion& op) {
  ProjectedProbability p{std::vector<double>(op.cardinality())};
  for (std::size_t i = 0; i < p.probs.size(); ++i) {
    p.probs[i] = op.belief(i) + op.uncertainty() * op.base_rate(i);
  }
  return p;
}

/// Projected probability of the "reliable" outcome of a binary opinion.
inline double projected_reliability(const Opinion& op) { return project(op)[kReliable]; }

inline void require_same_domain(const Opinion& a, const Opinion& b) {
  if (a.cardinality() != b.cardinality()) {
    throw DomainMismatchError("opinions have different cardinality");
  }
  if (a.prior_weight() != b.prior_weight()) {
    throw DomainMismatchError("opinions have different prior weight");
  }
}

}  // namespace slrel
