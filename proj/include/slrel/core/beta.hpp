#pragma once

#include <cmath>
#include <limits>

#include <boost/math/special_functions/beta.hpp>

#include "slrel/core/opinion.hpp"

namespace slrel {

/// Shape parameters of the beta PDF equivalent to a binary opinion.
struct BetaParams {
  double alpha;
  double beta;
};

inline BetaParams beta_params(const Opinion& op) {
  if (op.cardinality() != 2) {
    throw DomainMismatchError("beta distribution needs a binary opinion");
  }
  const EvidenceVector ev = evidence_from_opinion(op);
  return {ev.counts[0] + op.base_rate(0) * op.prior_weight(),
          ev.counts[1] + op.base_rate(1) * op.prior_weight()};
}

/// Beta(alpha, beta) density on the closed interval [0,1]; endpoint values are
/// the one-sided limits.
inline double beta_pdf(const BetaParams& p, double x) {
  if (x < 0.0 || x > 1.0) {
    return 0.0;
  }
  if (x == 0.0 || x == 1.0) {
    const double shape = x == 0.0 ? p.alpha : p.beta;
    const double other = x == 0.0 ? p.beta : p.alpha;
    if (shape < 1.0) {
      return std::numeric_limits<double>::infinity();
    }
    if (shape > 1.0) {
      return 0.0;
    }
    return 1.0 / boost::math::beta(1.0, other);
  }
  return boost::math::ibeta_derivative(p.alpha, p.beta, x);
}

/// Density of the opinion's beta PDF at x in (0,1).
inline double beta_density(const Opinion& op, double x) {
  if (!(x > 0.0 && x < 1.0)) {
    throw PreconditionError("beta density is evaluated on the open interval (0,1)");
  }
  return beta_pdf(beta_params(op), x);
}

/// Probability mass of the opinion's beta PDF over [lo, hi].
inline double beta_tail_mass(const Opinion& op, double lo, double hi) {
  if (!(lo >= 0.0 && hi <= 1.0 && lo <= hi)) {
    throw PreconditionError("tail mass bounds must satisfy 0 <= lo <= hi <= 1");
  }
  const BetaParams p = beta_params(op);
  // Subtract in whichever tail keeps the two terms small.
  const double mean = p.alpha / (p.alpha + p.beta);
  double mass = 0.0;
  if (lo >= mean) {
    const double upper = hi >= 1.0 ? 0.0 : boost::math::ibetac(p.alpha, p.beta, hi);
    mass = boost::math::ibetac(p.alpha, p.beta, lo) - upper;
  } else {
    const double lower = lo <= 0.0 ? 0.0 : boost::math::ibeta(p.alpha, p.beta, lo);
    mass = (hi >= 1.0 ? 1.0 : boost::math::ibeta(p.alpha, p.beta, hi)) - lower;
  }
  return std::clamp(mass, 0.0, 1.0);
}

}  // namespace slrel
