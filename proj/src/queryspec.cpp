#include "truncprob/queryspec.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace truncprob {

namespace {

using nlohmann::json;

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
    throw DomainError("\"" + field + "\" " + why);
}

double require_number(const json& j, const std::string& field) {
    if (!j.contains(field)) bad_field(field, "is missing");
    if (!j[field].is_number()) bad_field(field, "must be a number");
    return j[field].get<double>();
}

std::int64_t require_integer(const json& j, const std::string& field) {
    if (!j.contains(field)) bad_field(field, "is missing");
    if (!j[field].is_number_integer()) bad_field(field, "must be an integer");
    return j[field].get<std::int64_t>();
}

DiscreteDist dist_from_json(const json& d) {
    if (!d.contains("family") || !d["family"].is_string()) {
        bad_field("family", "must be \"binomial\" or \"poisson_sum\"");
    }
    const std::string family = d["family"].get<std::string>();
    const std::int64_t n = require_integer(d, "n");
    if (n < 1) bad_field("n", "must be >= 1");
    if (family == "binomial") {
        const double p = require_number(d, "p");
        if (!(p > 0.0 && p < 1.0)) bad_field("p", "must lie strictly in (0, 1)");
        return DiscreteDist::binomial(n, p);
    }
    if (family == "poisson_sum") {
        const double lambda = require_number(d, "lambda");
        if (!(lambda > 0.0)) bad_field("lambda", "must be > 0");
        return DiscreteDist::poisson_sum(n, lambda);
    }
    bad_field("family", "must be \"binomial\" or \"poisson_sum\"");
}

Dimension dimension_from_json(const json& d) {
    DiscreteDist dist = dist_from_json(d);
    const std::int64_t a = require_integer(d, "a");
    if (!d.contains("b")) bad_field("b", "is missing");
    if (d["b"].is_string()) {
        if (d["b"].get<std::string>() != "inf") bad_field("b", "must be an integer or \"inf\"");
        return Dimension::upper_unbounded(std::move(dist), a);
    }
    if (!d["b"].is_number_integer()) bad_field("b", "must be an integer or \"inf\"");
    const std::int64_t b = d["b"].get<std::int64_t>();
    if (a > b) bad_field("a", "must not exceed \"b\"");
    return Dimension::bounded(std::move(dist), a, b);
}

}  // namespace

TruncationMethod method_from_name(const std::string& name) {
    if (name == "chernoff") return TruncationMethod::bisection_chernoff;
    if (name == "massart") return TruncationMethod::massart_closed_form;
    if (name == "best") return TruncationMethod::best;
    bad_field("method", "must be \"chernoff\", \"massart\" or \"best\"");
}

std::string method_name(TruncationMethod method) {
    switch (method) {
        case TruncationMethod::bisection_chernoff: return "chernoff";
        case TruncationMethod::massart_closed_form: return "massart";
        case TruncationMethod::best: return "best";
    }
    throw InternalError("method_name: unknown method");
}

QuerySpec query_spec_from_json(const json& doc) {
    if (!doc.is_object()) throw DomainError("query spec must be a JSON object");
    if (!doc.contains("dimensions") || !doc["dimensions"].is_array() ||
        doc["dimensions"].empty()) {
        bad_field("dimensions", "must be a non-empty array");
    }
    std::vector<Dimension> dims;
    dims.reserve(doc["dimensions"].size());
    for (const auto& d : doc["dimensions"]) {
        if (!d.is_object()) bad_field("dimensions", "entries must be objects");
        dims.push_back(dimension_from_json(d));
    }
    const double eta = require_number(doc, "eta");
    if (!(eta > 0.0 && eta < 1.0)) bad_field("eta", "must lie in (0, 1)");

    QuerySpec spec{BoxQuery(std::move(dims), eta), TruncationMethod::best, "best", ""};
    if (doc.contains("method")) {
        if (!doc["method"].is_string()) bad_field("method", "must be a string");
        spec.method_label = doc["method"].get<std::string>();
        spec.method = method_from_name(spec.method_label);
    }
    if (doc.contains("id")) {
        if (!doc["id"].is_string()) bad_field("id", "must be a string");
        spec.id = doc["id"].get<std::string>();
    }
    return spec;
}

QuerySpec query_spec_from_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DomainError(std::string("query spec is not valid JSON: ") + e.what());
    }
    return query_spec_from_json(doc);
}

namespace {

// key=value pairs after the "family:" prefix, e.g. "binomial:n=100,p=0.5".
double parse_flag_number(const std::string& text, const std::string& field) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        bad_field(field, "has a malformed value \"" + text + "\"");
    }
}

std::int64_t parse_flag_integer(const std::string& text, const std::string& field) {
    try {
        std::size_t used = 0;
        const std::int64_t v = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        bad_field(field, "has a malformed value \"" + text + "\"");
    }
}

}  // namespace

DiscreteDist dist_from_flag(const std::string& text) {
    const std::size_t colon = text.find(':');
    if (colon == std::string::npos) {
        bad_field("dist", "must look like family:key=value,... e.g. binomial:n=100,p=0.5");
    }
    const std::string family = text.substr(0, colon);
    std::int64_t n = -1;
    double p = -1.0;
    double lambda = -1.0;

    std::size_t pos = colon + 1;
    while (pos < text.size()) {
        std::size_t next = text.find(',', pos);
        if (next == std::string::npos) next = text.size();
        const std::string pair = text.substr(pos, next - pos);
        const std::size_t eq = pair.find('=');
        if (eq == std::string::npos) bad_field("dist", "has a malformed pair \"" + pair + "\"");
        const std::string key = pair.substr(0, eq);
        const std::string value = pair.substr(eq + 1);
        if (key == "n") {
            n = parse_flag_integer(value, "n");
        } else if (key == "p") {
            p = parse_flag_number(value, "p");
        } else if (key == "lambda") {
            lambda = parse_flag_number(value, "lambda");
        } else {
            bad_field("dist", "has an unknown key \"" + key + "\"");
        }
        pos = next + 1;
    }

    if (n < 1) bad_field("n", "must be >= 1");
    if (family == "binomial") {
        if (!(p > 0.0 && p < 1.0)) bad_field("p", "must lie strictly in (0, 1)");
        return DiscreteDist::binomial(n, p);
    }
    if (family == "poisson_sum") {
        if (!(lambda > 0.0)) bad_field("lambda", "must be > 0");
        return DiscreteDist::poisson_sum(n, lambda);
    }
    bad_field("family", "must be \"binomial\" or \"poisson_sum\"");
}

RangeFlag range_from_flag(const std::string& text) {
    const std::size_t colon = text.find(':');
    if (colon == std::string::npos) bad_field("range", "must look like a:b, e.g. 0:100 or 0:inf");
    RangeFlag out;
    out.a = parse_flag_integer(text.substr(0, colon), "a");
    const std::string upper = text.substr(colon + 1);
    if (upper != "inf") {
        out.b = parse_flag_integer(upper, "b");
        if (out.a > *out.b) bad_field("a", "must not exceed \"b\"");
    }
    return out;
}

BoxQuery query_from_flags(const std::vector<std::string>& dists,
                          const std::vector<std::string>& ranges, double eta) {
    if (dists.empty()) bad_field("dist", "is missing");
    if (dists.size() != ranges.size()) {
        bad_field("range", "count must match the number of --dist flags");
    }
    if (!(eta > 0.0 && eta < 1.0)) bad_field("eta", "must lie in (0, 1)");
    std::vector<Dimension> dims;
    dims.reserve(dists.size());
    for (std::size_t i = 0; i < dists.size(); ++i) {
        DiscreteDist dist = dist_from_flag(dists[i]);
        const RangeFlag range = range_from_flag(ranges[i]);
        dims.push_back(range.b ? Dimension::bounded(std::move(dist), range.a, *range.b)
                               : Dimension::upper_unbounded(std::move(dist), range.a));
    }
    return BoxQuery(std::move(dims), eta);
}

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

namespace {

std::string render_per_dim(const std::vector<TruncationResult>& per_dim) {
    std::string s = "[";
    for (std::size_t i = 0; i < per_dim.size(); ++i) {
        const TruncationResult& r = per_dim[i];
        if (i != 0) s += ",";
        s += "{\"u\":" + format_double(r.u) + ",\"v\":" + format_double(r.v);
        if (r.count_interval.is_empty()) {
            s += ",\"k_lo\":null,\"k_hi\":null";
        } else {
            s += ",\"k_lo\":" + std::to_string(r.count_interval.lower()) +
                 ",\"k_hi\":" + std::to_string(r.count_interval.upper());
        }
        s += ",\"lower_certificate\":" + format_double(r.lower_certificate) +
             ",\"upper_certificate\":" + format_double(r.upper_certificate) + "}";
    }
    return s + "]";
}

}  // namespace

std::string render_prob_json(const ProbBracket& bracket, const std::string& method_label) {
    std::string s = "{\"p_lower\":" + format_double(bracket.p_lower) +
                    ",\"p_upper\":" + format_double(bracket.p_upper) +
                    ",\"eta\":" + format_double(bracket.eta) + ",\"method\":\"" + method_label +
                    "\",\"per_dim\":" + render_per_dim(bracket.per_dim) +
                    ",\"terms_summed\":" + std::to_string(bracket.terms_summed) +
                    ",\"terms_full\":" + std::to_string(bracket.terms_full) + "}";
    return s;
}

std::string render_truncation_json(const std::vector<TruncationResult>& per_dim, double eta,
                                   const std::string& method_label, const WorkEstimate& work) {
    return "{\"eta\":" + format_double(eta) + ",\"method\":\"" + method_label +
           "\",\"per_dim\":" + render_per_dim(per_dim) +
           ",\"terms_summed\":" + std::to_string(work.terms_summed) +
           ",\"terms_full\":" + std::to_string(work.terms_full) + "}";
}

std::string render_verify_json(const VerifyReport& report, const std::string& method_label) {
    std::string s = render_prob_json(report.bracket, method_label);
    s.pop_back();  // reopen the object to append the verification fields
    s += ",\"p_oracle\":" + format_double(report.p_oracle);
    s += std::string(",\"contained\":") + (report.contained ? "true" : "false");
    s += ",\"slack\":" + format_double(report.slack) + "}";
    return s;
}

}  // namespace truncprob
