#include "truncprob/engine.hpp"

#include <algorithm>
#include <cmath>

namespace truncprob {

namespace {

// Full-domain term count of one dimension. An unbounded Poisson query is
// counted up to the certified cutoff, so the reference stays finite.
std::int64_t full_domain_terms(const Dimension& dim) {
    const CountInterval base = dim.support_clipped_bounds();
    if (base.is_empty()) return 0;
    if (!base.is_unbounded()) return base.width();
    const PoissonCutoff cut = poisson_certified_cutoff(dim.dist);
    return cut.k < base.lower() ? 0 : cut.k - base.lower() + 1;
}

}  // namespace

ProbBracket box_probability(const BoxQuery& query, TruncationMethod method) {
    ProbBracket out;
    out.eta = query.eta;
    out.per_dim = truncate_box(query, method);

    double product = 1.0;
    for (std::size_t i = 0; i < query.dims.size(); ++i) {
        const CountInterval& iv = out.per_dim[i].count_interval;
        // Marginal factors are clamped at one exactly as in the oracle, so a
        // truncated sum and the oracle restricted to the same interval stay
        // bit-identical.
        const double factor =
            iv.is_empty()
                ? 0.0
                : std::min(1.0, sum_pmf_range(query.dims[i].dist, iv.lower(), iv.upper()));
        product *= factor;
        out.terms_summed += iv.is_empty() ? 0 : iv.width();
        out.terms_full += full_domain_terms(query.dims[i]);
    }
    out.p_lower = product;
    out.p_upper = std::min(1.0, product + query.eta);
    return out;
}

WorkEstimate work_estimate(const BoxQuery& query, TruncationMethod method) {
    const std::vector<TruncationResult> per_dim = truncate_box(query, method);
    WorkEstimate out;
    for (std::size_t i = 0; i < query.dims.size(); ++i) {
        const CountInterval& iv = per_dim[i].count_interval;
        out.terms_summed += iv.is_empty() ? 0 : iv.width();
        out.terms_full += full_domain_terms(query.dims[i]);
    }
    return out;
}

VerifyReport verify_against_oracle(const BoxQuery& query, TruncationMethod method,
                                   std::int64_t term_cap) {
    VerifyReport report;
    report.bracket = box_probability(query, method);
    const OracleResult oracle = full_sum_oracle(query, term_cap);
    report.p_oracle = oracle.probability;
    report.oracle_neglected_tail = oracle.neglected_tail_bound;
    report.contained =
        report.bracket.p_lower <= oracle.probability && oracle.probability <= report.bracket.p_upper;
    report.slack = oracle.probability - report.bracket.p_lower;
    report.work_ratio = report.bracket.terms_full > 0
                            ? static_cast<double>(report.bracket.terms_summed) /
                                  static_cast<double>(report.bracket.terms_full)
                            : 0.0;
    return report;
}

}  // namespace truncprob
