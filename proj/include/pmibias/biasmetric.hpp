#pragma once

#include "pmibias/cooccur.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace pmibias::biasmetric {

enum class Method {
    ExactMl,       // log of the ratio of conditional probabilities
    LogOddsRatio,  // log of the 2x2 odds ratio
};

enum class SeMode {
    Full,    // all four reciprocal cells
    Approx,  // 1/f_AC + 1/f_BC only
};

Method parse_method(std::string_view name);
SeMode parse_se_mode(std::string_view name);
std::string_view to_string(Method m);
std::string_view to_string(SeMode m);

/// Haldane-Anscombe correction.
inline constexpr double kHaldaneSmoothing = 0.5;
inline constexpr double kDefaultLevel = 0.95;

/// PMI over the event space of windowed co-occurrence pairs. `unobserved`
/// is set, and `value` is -inf, when the joint count is zero.
struct PmiValue {
    double value = 0.0;
    bool unobserved = false;
};

PmiValue pmi(std::uint64_t joint, std::uint64_t marginal_x, std::uint64_t marginal_y,
             std::uint64_t total_events);

/// PMI between a target set and a context word list, with marginals taken
/// from the per-word event totals of the counts.
PmiValue list_pmi(const cooccur::TargetCounts& counts, std::string_view target_set,
                  const cooccur::TargetSet& context);

/// PMI(A, C) - PMI(B, C). Throws DegenerateCellError if either joint is zero.
double bias_from_pmi(const cooccur::TargetCounts& counts, std::string_view set_a,
                     std::string_view set_b, const cooccur::TargetSet& context);

/// log( p(C|A) / p(C|B) ) from maximum-likelihood estimates.
double bias_exact(const cooccur::ContingencyTable& table, double smoothing = 0.0);

/// log( f_AC f_BnC / (f_AnC f_BC) ).
double bias_log_odds(const cooccur::ContingencyTable& table, double smoothing = 0.0);

double standard_error(const cooccur::ContingencyTable& table, SeMode mode = SeMode::Full,
                      double smoothing = 0.0);

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

/// bias +/- z((1 + level) / 2) * se.
Interval confidence_interval(double bias, double se, double level = kDefaultLevel);

struct Significance {
    double z = 0.0;
    double p_value = 1.0;
};

/// Two-sided z-test against zero bias. Throws ArgumentError for se <= 0.
Significance significance(double bias, double se);

struct ApproximationDiagnostics {
    double ratio_a = 0.0;  // f_AC / f_AnC
    double ratio_b = 0.0;  // f_BC / f_BnC
    double gap = 0.0;      // bias_log_odds - bias_exact = log((1 + ratio_a) / (1 + ratio_b))
};

ApproximationDiagnostics check_approximation(const cooccur::ContingencyTable& table);

struct InterpretedBias {
    double ratio = 1.0;                // p(C|A) / p(C|B)
    double percent_more_likely = 0.0;  // 100 (ratio - 1)
};

InterpretedBias interpret(double bias);

struct EstimateOptions {
    Method method = Method::LogOddsRatio;
    SeMode se_mode = SeMode::Full;
    double smoothing = 0.0;
    double level = kDefaultLevel;
};

struct BiasEstimate {
    std::string context_label;
    double bias = 0.0;
    double se = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double z = 0.0;
    double p_value = 1.0;
    std::optional<double> q_value;
    Method method = Method::LogOddsRatio;
    double smoothing = 0.0;
    ApproximationDiagnostics diagnostics;
};

/// Full estimate for one table; q_value is left empty (it needs the whole run).
BiasEstimate estimate(const cooccur::ContingencyTable& table, const EstimateOptions& options = {});

}  // namespace pmibias::biasmetric
