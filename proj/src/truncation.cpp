#include "truncprob/truncation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace truncprob {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::int64_t floor_count(double x) {
    return static_cast<std::int64_t>(std::floor(std::clamp(x, -4.0e18, 4.0e18)));
}

std::int64_t ceil_count(double x) {
    return static_cast<std::int64_t>(std::ceil(std::clamp(x, -4.0e18, 4.0e18)));
}

}  // namespace

TailBudget::TailBudget(double alpha_allow, double beta_allow)
    : alpha(alpha_allow), beta(beta_allow) {
    if (!(std::isfinite(alpha) && alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("tail budget: alpha must lie in (0, 1)");
    }
    if (!(std::isfinite(beta) && beta > 0.0 && beta < 1.0)) {
        throw DomainError("tail budget: beta must lie in (0, 1)");
    }
}

std::vector<TailBudget> allocate_budget(double eta, std::int64_t m) {
    if (!(std::isfinite(eta) && eta > 0.0 && eta < 1.0)) {
        throw DomainError("allocate_budget: eta must lie in (0, 1)");
    }
    if (m < 1) throw DomainError("allocate_budget: m must be >= 1");
    const double side = eta / (2.0 * static_cast<double>(m));
    return std::vector<TailBudget>(static_cast<std::size_t>(m), TailBudget(side, side));
}

double bisect_truncation_delta(const std::function<double(double)>& log_bound_at_delta,
                               double budget, double delta_seed) {
    if (!(std::isfinite(budget) && budget > 0.0 && budget < 1.0)) {
        throw DomainError("truncation bisection: budget must lie in (0, 1)");
    }
    if (!(delta_seed > 0.0)) throw DomainError("truncation bisection: seed must be > 0");
    const double log_budget = std::log(budget);

    // Doubling phase: the bound falls to zero for large delta, so this ends.
    double lo = 0.0;
    double hi = delta_seed;
    int doublings = 0;
    while (log_bound_at_delta(hi) > log_budget) {
        lo = hi;
        hi *= 2.0;
        if (++doublings > 200) {
            throw InternalError("truncation bisection: bound never cleared the budget");
        }
    }

    // Invariant: bound(lo) > budget >= bound(hi). Returning hi keeps the
    // rounding outward, so the certificate holds unconditionally.
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (log_bound_at_delta(mid) > log_budget) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

double find_truncation_point(const DiscreteDist& dist, double budget, TailSide side) {
    const double mu = dist.mean_avg_scale();
    const double sign = side == TailSide::upper ? 1.0 : -1.0;
    const auto log_bound = [&](double delta) {
        return chernoff_log_bound(dist, mu + sign * delta);
    };
    const double delta = bisect_truncation_delta(log_bound, budget);
    return mu + sign * delta;
}

double massart_quantile(std::int64_t n, double p, double eta_half, TailSide side) {
    if (n < 1) throw DomainError("massart_quantile: n must be >= 1");
    if (!(std::isfinite(p) && p > 0.0 && p < 1.0)) {
        throw DomainError("massart_quantile: p must lie strictly in (0, 1)");
    }
    if (!(std::isfinite(eta_half) && eta_half > 0.0 && eta_half < 1.0)) {
        throw DomainError("massart_quantile: eta_half must lie in (0, 1)");
    }
    const double big_l = std::log(1.0 / eta_half);
    const double root = std::sqrt(1.0 + 18.0 * static_cast<double>(n) * p * (1.0 - p) / big_l);
    const double denom = 2.0 / 3.0 + 3.0 * static_cast<double>(n) / big_l;
    const double z = side == TailSide::lower ? p + (1.0 - 2.0 * p - root) / denom
                                             : p + (1.0 - 2.0 * p + root) / denom;
    if (side == TailSide::lower && !(z > -2.0 * p && z < p)) {
        throw InternalError("massart_quantile: lower root left (-2p, p)");
    }
    if (side == TailSide::upper && !(z > p && z < 3.0 - 2.0 * p)) {
        throw InternalError("massart_quantile: upper root left (p, 3 - 2p)");
    }
    return z;
}

CountInterval binomial_truncation_closed_form(std::int64_t n, double p, double eta,
                                              std::int64_t a, std::int64_t b) {
    if (!(std::isfinite(eta) && eta > 0.0 && eta < 1.0)) {
        throw DomainError("binomial truncation: eta must lie in (0, 1)");
    }
    if (a > b) throw DomainError("binomial truncation: need a <= b");
    const double z1 = massart_quantile(n, p, eta / 2.0, TailSide::lower);
    const double z2 = massart_quantile(n, p, eta / 2.0, TailSide::upper);
    const double nn = static_cast<double>(n);
    std::int64_t t_lo = std::max(a, ceil_count(nn * z1));
    std::int64_t t_hi = std::min(b, floor_count(nn * z2));
    t_lo = std::max<std::int64_t>(t_lo, 0);
    t_hi = std::min(t_hi, n);
    if (t_lo > t_hi) return CountInterval::empty();
    return CountInterval::closed(t_lo, t_hi);
}

namespace {

TruncationResult chernoff_truncate_dim(const Dimension& dim, const TailBudget& budget) {
    const DiscreteDist& dist = dim.dist;
    TruncationResult out;
    out.method = TruncationMethod::bisection_chernoff;
    out.u = find_truncation_point(dist, budget.alpha, TailSide::lower);
    out.v = find_truncation_point(dist, budget.beta, TailSide::upper);
    out.lower_certificate = std::exp(chernoff_log_bound(dist, out.u));
    out.upper_certificate = std::exp(chernoff_log_bound(dist, out.v));

    // Strict real cuts map to counts: smallest k > n u, largest k < n v.
    const double nn = static_cast<double>(dist.term_count());
    const std::int64_t k_lo = floor_count(nn * out.u) + 1;
    const std::int64_t k_hi = ceil_count(nn * out.v) - 1;
    const CountInterval base = dim.support_clipped_bounds();
    if (base.is_empty() || k_lo > k_hi) {
        out.count_interval = CountInterval::empty();
        return out;
    }
    const std::int64_t lo = std::max(k_lo, base.lower());
    const std::int64_t hi = base.is_unbounded() ? k_hi : std::min(k_hi, base.upper());
    out.count_interval = lo > hi ? CountInterval::empty() : CountInterval::closed(lo, hi);
    return out;
}

TruncationResult massart_truncate_dim(const Dimension& dim, const TailBudget& budget) {
    const DiscreteDist& dist = dim.dist;
    if (dist.family() != DistFamily::binomial_count) {
        throw UnsupportedMethodError(
            "unsupported method: massart needs [0,1]-bounded terms; "
            "use chernoff for poisson sums");
    }
    const std::int64_t n = dist.term_count();
    const double p = dist.success_prob();
    const double eta_dim = budget.alpha + budget.beta;

    TruncationResult out;
    out.method = TruncationMethod::massart_closed_form;
    out.u = massart_quantile(n, p, eta_dim / 2.0, TailSide::lower);
    out.v = massart_quantile(n, p, eta_dim / 2.0, TailSide::upper);
    // The roots satisfy exp(n M(z, p)) = eta_dim / 2 by construction; clamp
    // the evaluated certificate at the budget it proves.
    out.lower_certificate =
        std::min(std::exp(static_cast<double>(n) * massart_exponent(out.u, p)), budget.alpha);
    out.upper_certificate =
        std::min(std::exp(static_cast<double>(n) * massart_exponent(out.v, p)), budget.beta);

    const std::int64_t query_lo = std::max<std::int64_t>(dim.a, 0);
    const std::int64_t query_hi = dim.b_unbounded ? n : std::min(dim.b, n);
    if (query_lo > query_hi) {
        out.count_interval = CountInterval::empty();
        return out;
    }
    const double nn = static_cast<double>(n);
    const std::int64_t t_lo = std::max(query_lo, ceil_count(nn * out.u));
    const std::int64_t t_hi = std::min(query_hi, floor_count(nn * out.v));
    out.count_interval = t_lo > t_hi
                             ? CountInterval::empty()
                             : CountInterval::closed(std::max<std::int64_t>(t_lo, 0), t_hi);
    return out;
}

std::int64_t interval_terms(const CountInterval& iv) {
    return iv.is_empty() ? 0 : iv.width();
}

}  // namespace

std::vector<TruncationResult> truncate_box(const BoxQuery& query, TruncationMethod method) {
    const std::vector<TailBudget> budgets =
        allocate_budget(query.eta, static_cast<std::int64_t>(query.dims.size()));

    std::vector<TruncationResult> results;
    results.reserve(query.dims.size());
    for (std::size_t i = 0; i < query.dims.size(); ++i) {
        const Dimension& dim = query.dims[i];
        const TailBudget& budget = budgets[i];
        switch (method) {
            case TruncationMethod::bisection_chernoff:
                results.push_back(chernoff_truncate_dim(dim, budget));
                break;
            case TruncationMethod::massart_closed_form:
                results.push_back(massart_truncate_dim(dim, budget));
                break;
            case TruncationMethod::best: {
                if (dim.dist.family() != DistFamily::binomial_count) {
                    results.push_back(chernoff_truncate_dim(dim, budget));
                    break;
                }
                TruncationResult massart = massart_truncate_dim(dim, budget);
                TruncationResult chernoff = chernoff_truncate_dim(dim, budget);
                // Ties go to the closed form: no iteration needed.
                results.push_back(interval_terms(chernoff.count_interval) <
                                          interval_terms(massart.count_interval)
                                      ? std::move(chernoff)
                                      : std::move(massart));
                break;
            }
        }
    }
    return results;
}

}  // namespace truncprob
