#include "pmibias/stats.hpp"

#include "pmibias/error.hpp"
#include "pmibias/parallel.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace pmibias::stats {

namespace {

__extension__ using uint128 = unsigned __int128;

void check_pair(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw ArgumentError("correlation inputs differ in length");
    }
    if (x.size() < 3) {
        throw ArgumentError("correlation needs at least 3 points");
    }
}

void check_variance(std::span<const double> v, const char* name) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    if (*lo == *hi) {
        throw UndefinedCorrelationError(std::string("correlation undefined: ") + name +
                                        " has zero variance");
    }
}

// Relative slack on the |bias| >= |observed| comparison so that splits that
// reproduce the observed value up to rounding are counted as extreme.
constexpr double kTieTolerance = 1e-12;

bool is_extreme(double value, double observed_abs) {
    const double slack = kTieTolerance * std::max(1.0, observed_abs);
    return !(std::abs(value) < observed_abs - slack);
}

// k-combination of {0..n-1} with lexicographic rank `rank`.
std::vector<std::size_t> unrank_combination(std::size_t n, std::size_t k, std::uint64_t rank) {
    std::vector<std::size_t> out;
    out.reserve(k);
    std::size_t c = 0;
    for (std::size_t pos = 0; pos < k; ++pos) {
        while (true) {
            const std::uint64_t below = binomial_coefficient(n - c - 1, k - pos - 1);
            if (rank < below) {
                break;
            }
            rank -= below;
            ++c;
        }
        out.push_back(c++);
    }
    return out;
}

bool next_combination(std::vector<std::size_t>& comb, std::size_t n) {
    const std::size_t k = comb.size();
    std::size_t i = k;
    while (i > 0) {
        --i;
        if (comb[i] < n - k + i) {
            ++comb[i];
            for (std::size_t j = i + 1; j < k; ++j) {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    return false;
}

void complement(const std::vector<std::size_t>& side_a, std::size_t n, std::vector<std::size_t>& side_b) {
    side_b.clear();
    std::size_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (next < side_a.size() && side_a[next] == i) {
            ++next;
        } else {
            side_b.push_back(i);
        }
    }
}

}  // namespace

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_two_sided_p(double z) {
    return std::erfc(std::abs(z) / std::numbers::sqrt2);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw ArgumentError("normal quantile needs 0 < p < 1");
    }
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

std::vector<double> bh_adjust(std::span<const double> pvalues) {
    for (const double p : pvalues) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ArgumentError("p-values must lie in [0, 1]");
        }
    }
    const std::size_t m = pvalues.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pvalues[a] < pvalues[b]; });

    std::vector<double> q(m);
    double running = 1.0;
    for (std::size_t rank = m; rank > 0; --rank) {
        const std::size_t idx = order[rank - 1];
        // m / rank >= 1 survives rounding, so the product never drops below p.
        const double candidate = pvalues[idx] * (static_cast<double>(m) / static_cast<double>(rank));
        running = std::min(running, candidate);
        q[idx] = running;
    }
    return q;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    check_pair(x, y);
    check_variance(x, "x");
    check_variance(y, "y");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double weighted_pearson(std::span<const double> x, std::span<const double> y,
                        std::span<const double> w) {
    check_pair(x, y);
    if (w.size() != x.size()) {
        throw ArgumentError("weights differ in length from the data");
    }
    for (const double wi : w) {
        if (!(wi > 0.0) || !std::isfinite(wi)) {
            throw ArgumentError("weights must be positive and finite");
        }
    }
    check_variance(x, "x");
    check_variance(y, "y");
    double sw = 0.0;
    double swx = 0.0;
    double swy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sw += w[i];
        swx += w[i] * x[i];
        swy += w[i] * y[i];
    }
    const double mx = swx / sw;
    const double my = swy / sw;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += w[i] * dx * dy;
        sxx += w[i] * dx * dx;
        syy += w[i] * dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw UndefinedCorrelationError("weighted correlation undefined: zero weighted variance");
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::uint64_t uniform_below(SplitMix64& rng, std::uint64_t bound) {
    if (bound == 0) {
        throw ArgumentError("uniform_below needs a positive bound");
    }
    // Lemire's multiply-shift with rejection.
    uint128 m = static_cast<uint128>(rng()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            m = static_cast<uint128>(rng()) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

std::uint64_t binomial_coefficient(std::uint64_t n, std::uint64_t k) {
    if (k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    uint128 result = 1;
    constexpr auto cap = static_cast<uint128>(std::numeric_limits<std::uint64_t>::max());
    for (std::uint64_t i = 1; i <= k; ++i) {
        // result * (n - k + i) / i stays integral at every step.
        result = result * (n - k + i) / i;
        if (result > cap) {
            return std::numeric_limits<std::uint64_t>::max();
        }
    }
    return static_cast<std::uint64_t>(result);
}

PermutationResult permutation_test(const SplitBias& bias_fn, std::size_t size_a,
                                   std::size_t size_b, std::size_t n_perm, std::uint64_t seed,
                                   std::size_t threads) {
    if (n_perm < 1) {
        throw ArgumentError("n_perm must be at least 1");
    }
    if (size_a < 1 || size_b < 1) {
        throw ArgumentError("both target sets need at least one word");
    }
    const std::size_t n = size_a + size_b;

    PermutationResult result;
    {
        std::vector<std::size_t> a(size_a);
        std::vector<std::size_t> b(size_b);
        std::iota(a.begin(), a.end(), 0);
        std::iota(b.begin(), b.end(), size_a);
        result.observed = bias_fn(a, b);
    }
    if (std::isnan(result.observed)) {
        throw ArgumentError("observed bias is not a number");
    }
    const double observed_abs = std::abs(result.observed);

    const std::uint64_t splits = binomial_coefficient(n, size_a);
    result.exact = splits <= n_perm;
    const std::uint64_t work = result.exact ? splits : n_perm;
    threads = std::clamp<std::size_t>(threads, 1, static_cast<std::size_t>(std::min<std::uint64_t>(work, 1024)));
    std::vector<std::uint64_t> extreme(threads, 0);

    if (result.exact) {
        parallel_for_chunks(work, threads, [&](std::size_t t, std::size_t begin, std::size_t end) {
            if (begin == end) {
                return;
            }
            auto side_a = unrank_combination(n, size_a, begin);
            std::vector<std::size_t> side_b;
            for (std::size_t rank = begin; rank < end; ++rank) {
                complement(side_a, n, side_b);
                if (is_extreme(bias_fn(side_a, side_b), observed_abs)) {
                    ++extreme[t];
                }
                next_combination(side_a, n);
            }
        });
    } else {
        const std::uint64_t base = SplitMix64(seed)();
        parallel_for_chunks(work, threads, [&](std::size_t t, std::size_t begin, std::size_t end) {
            std::vector<std::size_t> pool(n);
            std::vector<std::size_t> side_a;
            std::vector<std::size_t> side_b;
            for (std::size_t iter = begin; iter < end; ++iter) {
                SplitMix64 rng(base ^ SplitMix64(iter)());
                std::iota(pool.begin(), pool.end(), 0);
                for (std::size_t i = 0; i < size_a; ++i) {
                    const auto j = i + static_cast<std::size_t>(uniform_below(rng, n - i));
                    std::swap(pool[i], pool[j]);
                }
                side_a.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(size_a));
                std::sort(side_a.begin(), side_a.end());
                complement(side_a, n, side_b);
                if (is_extreme(bias_fn(side_a, side_b), observed_abs)) {
                    ++extreme[t];
                }
            }
        });
    }

    result.extreme = std::accumulate(extreme.begin(), extreme.end(), std::uint64_t{0});
    result.evaluated = work;
    result.p_value = result.exact
                         ? static_cast<double>(result.extreme) / static_cast<double>(splits)
                         : static_cast<double>(result.extreme + 1) / static_cast<double>(n_perm + 1);
    return result;
}

}  // namespace pmibias::stats
