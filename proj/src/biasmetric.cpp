#include "pmibias/biasmetric.hpp"

#include "pmibias/error.hpp"
#include "pmibias/stats.hpp"

#include <cmath>
#include <limits>

namespace pmibias::biasmetric {

namespace {

struct Cells {
    double ac, anc, bc, bnc;
};

void check_smoothing(double smoothing) {
    if (!(smoothing >= 0.0) || !std::isfinite(smoothing)) {
        throw ArgumentError("smoothing must be a finite non-negative number");
    }
}

void check_rows(const cooccur::ContingencyTable& t) {
    if (t.total_a() == 0) {
        throw NoTargetEventsError("target set " + t.label_a + " has no co-occurrence events");
    }
    if (t.total_b() == 0) {
        throw NoTargetEventsError("target set " + t.label_b + " has no co-occurrence events");
    }
}

Cells smoothed(const cooccur::ContingencyTable& t, double smoothing) {
    check_smoothing(smoothing);
    check_rows(t);
    return {static_cast<double>(t.f_ac) + smoothing, static_cast<double>(t.f_anc) + smoothing,
            static_cast<double>(t.f_bc) + smoothing, static_cast<double>(t.f_bnc) + smoothing};
}

void require_positive(double v, const char* cell, const cooccur::ContingencyTable& t) {
    if (!(v > 0.0)) {
        throw DegenerateCellError(cell, std::string("cell ") + cell + " of context '" + t.label_c +
                                            "' is zero; enable smoothing to estimate it");
    }
}

}  // namespace

Method parse_method(std::string_view name) {
    if (name == "exact" || name == "exact-ml") {
        return Method::ExactMl;
    }
    if (name == "log-odds" || name == "log-odds-ratio") {
        return Method::LogOddsRatio;
    }
    throw ConfigError("unknown bias method: " + std::string(name));
}

SeMode parse_se_mode(std::string_view name) {
    if (name == "full") {
        return SeMode::Full;
    }
    if (name == "approx") {
        return SeMode::Approx;
    }
    throw ConfigError("unknown SE mode: " + std::string(name));
}

std::string_view to_string(Method m) {
    return m == Method::ExactMl ? "exact-ml" : "log-odds-ratio";
}

std::string_view to_string(SeMode m) {
    return m == SeMode::Full ? "full" : "approx";
}

PmiValue pmi(std::uint64_t joint, std::uint64_t marginal_x, std::uint64_t marginal_y,
             std::uint64_t total_events) {
    if (joint == 0) {
        return {-std::numeric_limits<double>::infinity(), true};
    }
    if (marginal_x == 0 || marginal_y == 0 || total_events == 0) {
        throw ArgumentError("pmi: non-zero joint count with an empty marginal");
    }
    const double n = static_cast<double>(total_events);
    const double p_xy = static_cast<double>(joint) / n;
    const double p_x = static_cast<double>(marginal_x) / n;
    const double p_y = static_cast<double>(marginal_y) / n;
    return {std::log(p_xy / (p_x * p_y)), false};
}

PmiValue list_pmi(const cooccur::TargetCounts& counts, std::string_view target_set,
                  const cooccur::TargetSet& context) {
    const auto& set = counts.target_set(target_set);
    const auto row = counts.pooled(target_set);
    std::uint64_t joint = 0;
    std::uint64_t marginal_y = 0;
    for (const auto& word : context.words) {
        joint += row.count(word);
        if (auto it = counts.marginals.find(word); it != counts.marginals.end()) {
            marginal_y += it->second;
        }
    }
    std::uint64_t marginal_x = 0;
    for (const auto& word : set.words) {
        if (auto it = counts.marginals.find(word); it != counts.marginals.end()) {
            marginal_x += it->second;
        }
    }
    return pmi(joint, marginal_x, marginal_y, counts.total_events);
}

double bias_from_pmi(const cooccur::TargetCounts& counts, std::string_view set_a,
                     std::string_view set_b, const cooccur::TargetSet& context) {
    const auto a = list_pmi(counts, set_a, context);
    const auto b = list_pmi(counts, set_b, context);
    if (a.unobserved) {
        throw DegenerateCellError("f_AC", "context '" + context.name + "' never co-occurs with " +
                                              std::string(set_a));
    }
    if (b.unobserved) {
        throw DegenerateCellError("f_BC", "context '" + context.name + "' never co-occurs with " +
                                              std::string(set_b));
    }
    return a.value - b.value;
}

double bias_exact(const cooccur::ContingencyTable& table, double smoothing) {
    const auto c = smoothed(table, smoothing);
    require_positive(c.ac, "f_AC", table);
    require_positive(c.bc, "f_BC", table);
    const double p_c_given_a = c.ac / (c.ac + c.anc);
    const double p_c_given_b = c.bc / (c.bc + c.bnc);
    return std::log(p_c_given_a / p_c_given_b);
}

double bias_log_odds(const cooccur::ContingencyTable& table, double smoothing) {
    const auto c = smoothed(table, smoothing);
    require_positive(c.ac, "f_AC", table);
    require_positive(c.anc, "f_AnC", table);
    require_positive(c.bc, "f_BC", table);
    require_positive(c.bnc, "f_BnC", table);
    return std::log((c.ac * c.bnc) / (c.anc * c.bc));
}

double standard_error(const cooccur::ContingencyTable& table, SeMode mode, double smoothing) {
    const auto c = smoothed(table, smoothing);
    require_positive(c.ac, "f_AC", table);
    require_positive(c.bc, "f_BC", table);
    if (mode == SeMode::Approx) {
        return std::sqrt(1.0 / c.ac + 1.0 / c.bc);
    }
    require_positive(c.anc, "f_AnC", table);
    require_positive(c.bnc, "f_BnC", table);
    return std::sqrt(1.0 / c.ac + 1.0 / c.bc + 1.0 / c.anc + 1.0 / c.bnc);
}

Interval confidence_interval(double bias, double se, double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw ArgumentError("confidence level must lie in (0, 1)");
    }
    if (!(se >= 0.0)) {
        throw ArgumentError("standard error must be non-negative");
    }
    const double z = stats::normal_quantile(0.5 + level / 2.0);
    return {bias - z * se, bias + z * se};
}

Significance significance(double bias, double se) {
    if (!(se > 0.0)) {
        throw ArgumentError("significance needs a positive standard error");
    }
    const double z = bias / se;
    return {z, stats::normal_two_sided_p(z)};
}

ApproximationDiagnostics check_approximation(const cooccur::ContingencyTable& table) {
    check_rows(table);
    ApproximationDiagnostics d;
    d.ratio_a = static_cast<double>(table.f_ac) / static_cast<double>(table.f_anc);
    d.ratio_b = static_cast<double>(table.f_bc) / static_cast<double>(table.f_bnc);
    d.gap = std::log1p(d.ratio_a) - std::log1p(d.ratio_b);
    return d;
}

InterpretedBias interpret(double bias) {
    const double ratio = std::exp(bias);
    return {ratio, 100.0 * std::expm1(bias)};
}

BiasEstimate estimate(const cooccur::ContingencyTable& table, const EstimateOptions& options) {
    BiasEstimate e;
    e.context_label = table.label_c;
    e.method = options.method;
    e.smoothing = options.smoothing;
    e.bias = options.method == Method::ExactMl ? bias_exact(table, options.smoothing)
                                               : bias_log_odds(table, options.smoothing);
    e.se = standard_error(table, options.se_mode, options.smoothing);
    const auto ci = confidence_interval(e.bias, e.se, options.level);
    e.ci_low = ci.low;
    e.ci_high = ci.high;
    const auto sig = significance(e.bias, e.se);
    e.z = sig.z;
    e.p_value = sig.p_value;
    e.diagnostics = check_approximation(table);
    return e;
}

}  // namespace pmibias::biasmetric
