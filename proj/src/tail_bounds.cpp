#include "truncprob/tail_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace truncprob {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_bernoulli_params(double p, std::int64_t n) {
    if (n < 1) throw DomainError("tail bound: n must be >= 1");
    if (!(std::isfinite(p) && p > 0.0 && p < 1.0)) {
        throw DomainError("tail bound: p must lie strictly in (0, 1)");
    }
}

void check_poisson_params(double lambda, std::int64_t n) {
    if (n < 1) throw DomainError("tail bound: n must be >= 1");
    if (!(std::isfinite(lambda) && lambda > 0.0)) {
        throw DomainError("tail bound: lambda must be > 0");
    }
}

}  // namespace

double log_hoeffding_c(double p, std::int64_t n, double z) {
    check_bernoulli_params(p, n);
    if (!(z >= 0.0 && z <= 1.0)) throw DomainError("hoeffding_c: z must lie in [0, 1]");
    const double lo = z == 0.0 ? 0.0 : z * std::log(p / z);
    const double hi = z == 1.0 ? 0.0 : (1.0 - z) * std::log((1.0 - p) / (1.0 - z));
    return static_cast<double>(n) * (lo + hi);
}

double hoeffding_c(double p, std::int64_t n, double z) {
    return std::exp(log_hoeffding_c(p, n, z));
}

double log_poisson_c(double lambda, std::int64_t n, double z) {
    check_poisson_params(lambda, n);
    if (!(z >= 0.0)) throw DomainError("poisson_c: z must be non-negative");
    const double t = z == 0.0 ? 0.0 : z * (std::log(lambda) + 1.0 - std::log(z));
    return static_cast<double>(n) * (-lambda + t);
}

double poisson_c(double lambda, std::int64_t n, double z) {
    return std::exp(log_poisson_c(lambda, n, z));
}

double chernoff_log_bound(const DiscreteDist& dist, double z) {
    if (!std::isfinite(z)) throw DomainError("chernoff bound: z must be finite");
    if (dist.family() == DistFamily::binomial_count) {
        // Outside the support hull the tail is empty.
        if (z < 0.0 || z > 1.0) return -kInf;
        return log_hoeffding_c(dist.success_prob(), dist.term_count(), z);
    }
    if (z < 0.0) return -kInf;
    return log_poisson_c(dist.term_rate(), dist.term_count(), z);
}

double log_generic_c(const DiscreteDist& dist, double z) {
    if (!std::isfinite(z)) throw DomainError("generic_c: z must be finite");
    const double mu = dist.mean_avg_scale();
    if (z == mu) throw DomainError("generic_c: z equals the mean");
    if (z < 0.0) return -kInf;
    if (dist.family() == DistFamily::binomial_count && z > 1.0) return -kInf;

    // Per-term objective h(s) = K_Y(sign * s) - sign * s * z, convex in s >= 0
    // with sign chosen so the Chernoff side matches z vs the mean.
    const double sign = z > mu ? 1.0 : -1.0;
    const auto h = [&](double s) { return dist.per_term_cgf(sign * s) - sign * s * z; };

    constexpr double kCap = 700.0;
    double before = 0.0;  // sample preceding prev; the bracket's left edge
    double prev = 0.0;
    double cur = 1.0;
    double h_prev = 0.0;  // h(0) = 0
    double h_cur = h(cur);
    while (h_cur < h_prev && cur < kCap) {
        before = prev;
        prev = cur;
        h_prev = h_cur;
        cur = std::min(cur * 2.0, kCap);
        h_cur = h(cur);
    }
    const double n = static_cast<double>(dist.term_count());
    if (h_cur < h_prev) {
        // Still descending at the cap: the endpoint value is a valid bound.
        return n * h_cur;
    }

    // h decreases through `prev` and turns up by `cur`, so the minimum lies
    // in [before, cur]; golden-section that bracket.
    constexpr double kGolden = 0.6180339887498949;
    double a = before;
    double b = cur;
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    double f1 = h(x1);
    double f2 = h(x2);
    while (b - a > 1e-12 * std::max(1.0, b)) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGolden * (b - a);
            f1 = h(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGolden * (b - a);
            f2 = h(x2);
        }
    }
    return n * std::min(f1, f2);
}

double generic_c(const DiscreteDist& dist, double z) {
    return std::exp(log_generic_c(dist, z));
}

double massart_exponent(double z, double mu) {
    if (!(std::isfinite(mu) && mu > 0.0 && mu < 1.0)) {
        throw DomainError("massart_exponent: mu must lie strictly in (0, 1)");
    }
    if (!(std::isfinite(z) && z > -2.0 * mu && z < 3.0 - 2.0 * mu)) {
        throw DomainError("massart_exponent: z must lie in (-2 mu, 3 - 2 mu)");
    }
    const double d = mu - z;
    return -9.0 * d * d / (2.0 * (2.0 * mu + z) * (3.0 - 2.0 * mu - z));
}

double massart_tail(std::int64_t n, double mu, double z, TailSide side) {
    if (n < 1) throw DomainError("massart_tail: n must be >= 1");
    if (!(std::isfinite(mu) && mu > 0.0 && mu < 1.0)) {
        throw DomainError("massart_tail: mu must lie strictly in (0, 1)");
    }
    if (side == TailSide::upper && !(z > mu && z < 3.0 - 2.0 * mu)) {
        throw DomainError("massart_tail: upper side needs z in (mu, 3 - 2 mu)");
    }
    if (side == TailSide::lower && !(z > -2.0 * mu && z < mu)) {
        throw DomainError("massart_tail: lower side needs z in (-2 mu, mu)");
    }
    return std::exp(static_cast<double>(n) * massart_exponent(z, mu));
}

TailBound bound_tail(const DiscreteDist& dist, double z, TailSide side, BoundMethod method) {
    const double mu = dist.mean_avg_scale();
    if (side == TailSide::upper && !(z > mu)) {
        throw DomainError("bound_tail: upper side needs z > mean");
    }
    if (side == TailSide::lower && !(z < mu)) {
        throw DomainError("bound_tail: lower side needs z < mean");
    }

    double value = 1.0;
    switch (method) {
        case BoundMethod::hoeffding:
            if (dist.family() != DistFamily::binomial_count) {
                throw UnsupportedMethodError("bound_tail: hoeffding applies to binomial counts");
            }
            value = std::exp(chernoff_log_bound(dist, z));
            break;
        case BoundMethod::poisson_chernoff:
            if (dist.family() != DistFamily::poisson_sum) {
                throw UnsupportedMethodError("bound_tail: poisson_chernoff applies to poisson sums");
            }
            value = std::exp(chernoff_log_bound(dist, z));
            break;
        case BoundMethod::generic_cgf:
            value = generic_c(dist, z);
            break;
        case BoundMethod::massart:
            if (dist.family() != DistFamily::binomial_count) {
                throw UnsupportedMethodError("bound_tail: massart needs [0,1]-bounded terms");
            }
            value = massart_tail(dist.term_count(), mu, z, side);
            break;
    }
    return TailBound{std::min(value, 1.0), side, z, method};
}

}  // namespace truncprob
