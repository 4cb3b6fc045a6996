#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace pmibias::stats {

/// Standard normal CDF.
double normal_cdf(double x);

/// Two-sided tail probability P(|Z| >= |z|).
double normal_two_sided_p(double z);

/// Inverse of normal_cdf. Throws ArgumentError unless 0 < p < 1.
double normal_quantile(double p);

/// Benjamini-Hochberg step-up adjustment; output is in input order.
/// Throws ArgumentError for p outside [0, 1].
std::vector<double> bh_adjust(std::span<const double> pvalues);

/// Product-moment correlation. Throws ArgumentError for mismatched lengths or
/// fewer than 3 points, UndefinedCorrelationError for a constant variable.
double pearson(std::span<const double> x, std::span<const double> y);

/// Correlation under weighted means and covariances. The result is invariant
/// under uniform rescaling of `w`. Throws ArgumentError for a non-positive or
/// non-finite weight.
double weighted_pearson(std::span<const double> x, std::span<const double> y,
                        std::span<const double> w);

struct CorrelationResult {
    double r = 0.0;
    std::optional<double> weighted_r;
    std::size_t n = 0;
};

/// SplitMix64, used both as a small URBG and as a seed mixer.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// Uniform integer in [0, bound) without modulo bias; identical on every platform.
std::uint64_t uniform_below(SplitMix64& rng, std::uint64_t bound);

/// n choose k, saturating at UINT64_MAX.
std::uint64_t binomial_coefficient(std::uint64_t n, std::uint64_t k);

/// Bias functional over a split of a pool of target words. Words are pool
/// indices; both spans are sorted ascending. The observed split assigns
/// indices [0, size_a) to the first side.
using SplitBias =
    std::function<double(std::span<const std::size_t> side_a, std::span<const std::size_t> side_b)>;

struct PermutationResult {
    double observed = 0.0;
    double p_value = 1.0;
    std::uint64_t extreme = 0;    // splits with |bias| >= |observed|
    std::uint64_t evaluated = 0;  // splits evaluated
    bool exact = false;           // all splits enumerated
};

/// Re-partitions the pool into sides of the original sizes and compares the
/// absolute bias of each split against the observed one. When the number of
/// distinct splits is at most `n_perm` all of them are enumerated and
/// p = extreme / splits. Otherwise `n_perm` uniformly random splits are
/// drawn and p = (extreme + 1) / (n_perm + 1). A split whose bias is NaN
/// counts as extreme. The result depends only on (seed, n_perm), not on
/// `threads`. `bias_fn` may be called concurrently when threads > 1.
PermutationResult permutation_test(const SplitBias& bias_fn, std::size_t size_a,
                                   std::size_t size_b, std::size_t n_perm, std::uint64_t seed,
                                   std::size_t threads = 1);

}  // namespace pmibias::stats
