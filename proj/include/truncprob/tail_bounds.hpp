#pragma once

#include <cstdint>

#include "truncprob/distributions.hpp"

namespace truncprob {

enum class TailSide { lower, upper };

enum class BoundMethod { hoeffding, poisson_chernoff, generic_cgf, massart };

// A computed tail bound: Pr{X >= z} <= value (upper) or Pr{X <= z} <= value
// (lower) on the average scale.
struct TailBound {
    double value = 1.0;
    TailSide side = TailSide::upper;
    double z = 0.0;
    BoundMethod method = BoundMethod::generic_cgf;
};

// Hoeffding's closed form for averages of n Bernoulli(p) terms:
//   C(z) = [(p/z)^z ((1-p)/(1-z))^(1-z)]^n,  z in [0, 1],
// with the 0 ln 0 -> 0 endpoint conventions, so C(0) = (1-p)^n, C(1) = p^n.
double log_hoeffding_c(double p, std::int64_t n, double z);
double hoeffding_c(double p, std::int64_t n, double z);

// Chernoff closed form for averages of n Poisson(lambda) terms:
//   C(z) = [e^{-lambda} (lambda e / z)^z]^n,  z >= 0,  C(0) = e^{-n lambda}.
double log_poisson_c(double lambda, std::int64_t n, double z);
double poisson_c(double lambda, std::int64_t n, double z);

// Generic Chernoff bound C(z) = inf_t E[e^{t(X - z)}], computed as
// exp(n * inf_t [K_Y(t) - t z]) by bracket expansion plus golden-section
// search on the convex per-term objective. The search is restricted to
// t > 0 for z above the mean and t < 0 below it; the minimizing t is
// plugged back in, so the result is always a valid bound. z equal to the
// mean is rejected.
double log_generic_c(const DiscreteDist& dist, double z);
double generic_c(const DiscreteDist& dist, double z);

// Closed-form log C(z) for the family, extended by the exact zero-tail
// shortcut outside the support hull (log 0 = -inf).
double chernoff_log_bound(const DiscreteDist& dist, double z);

// Massart's exponent M(z, mu) = -9 (mu - z)^2 / [2 (2 mu + z)(3 - 2 mu - z)]
// for 0 < mu < 1 and z in (-2 mu, 3 - 2 mu). Zero at z = mu, negative
// elsewhere, diverging to -inf at both range endpoints.
double massart_exponent(double z, double mu);

// exp(n M(z, mu)): a strict upper bound on Pr{X >= z} for z in (mu, 3 - 2 mu)
// and on Pr{X <= z} for z in (-2 mu, mu), for averages of [0,1]-valued terms.
double massart_tail(std::int64_t n, double mu, double z, TailSide side);

// Evaluate one tail bound with side/range validation and method dispatch.
TailBound bound_tail(const DiscreteDist& dist, double z, TailSide side, BoundMethod method);

}  // namespace truncprob
