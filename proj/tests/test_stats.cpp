#include "pmibias/error.hpp"
#include "pmibias/stats.hpp"

#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

using namespace pmibias;
using namespace pmibias::stats;

namespace {

// Direct reading of the step-up rule: q_i = min over ranks j >= rank(i) of p_(j) m / j.
std::vector<double> bh_oracle(const std::vector<double>& p) {
    const std::size_t m = p.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return p[a] < p[b]; });
    std::vector<double> q(m);
    for (std::size_t r = 0; r < m; ++r) {
        double best = 1.0;
        for (std::size_t j = r; j < m; ++j) {
            best = std::min(best, p[order[j]] * double(m) / double(j + 1));
        }
        q[order[r]] = best;
    }
    return q;
}

// Per-word scores; the split bias is the difference of side means.
SplitBias mean_difference(std::vector<double> scores) {
    return [scores = std::move(scores)](std::span<const std::size_t> a, std::span<const std::size_t> b) {
        double sa = 0.0;
        double sb = 0.0;
        for (auto i : a) {
            sa += scores[i];
        }
        for (auto i : b) {
            sb += scores[i];
        }
        return sa / double(a.size()) - sb / double(b.size());
    };
}

}  // namespace

TEST_SUITE("normal distribution") {
    TEST_CASE("cdf anchors") {
        CHECK(normal_cdf(0.0) == 0.5);
        CHECK(std::abs(normal_cdf(1.959964) - 0.975) <= 1e-6);
        CHECK(normal_cdf(-1.0) == doctest::Approx(0.15865525393145705).epsilon(1e-14));
        CHECK(normal_cdf(-10.0) == doctest::Approx(7.619853024160527e-24).epsilon(1e-12));
    }

    TEST_CASE("cdf symmetry and monotonicity") {
        std::mt19937_64 rng(8);
        std::uniform_real_distribution<double> x(-8.0, 8.0);
        for (int i = 0; i < 2000; ++i) {
            const double v = x(rng);
            CHECK(std::abs(normal_cdf(v) + normal_cdf(-v) - 1.0) <= 1e-12);
        }
        double prev = 0.0;
        for (double v = -6.0; v <= 6.0; v += 0.01) {
            const double c = normal_cdf(v);
            CHECK(c > prev);
            prev = c;
        }
    }

    TEST_CASE("quantile") {
        CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-15));
        CHECK(normal_quantile(0.5) == 0.0);
        for (double p = 0.001; p < 1.0; p += 0.037) {
            CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-13));
        }
        CHECK_THROWS_AS(normal_quantile(0.0), ArgumentError);
        CHECK_THROWS_AS(normal_quantile(1.0), ArgumentError);
        CHECK_THROWS_AS(normal_quantile(std::nan("")), ArgumentError);
    }

    TEST_CASE("two-sided p") {
        CHECK(normal_two_sided_p(0.0) == 1.0);
        CHECK(normal_two_sided_p(-2.5) == normal_two_sided_p(2.5));
        CHECK(normal_two_sided_p(2.5) == doctest::Approx(2.0 * normal_cdf(-2.5)).epsilon(1e-14));
    }
}

TEST_SUITE("bh_adjust") {
    TEST_CASE("worked example") {
        const std::vector<double> p{0.01, 0.02, 0.04};
        CHECK(bh_adjust(p) == std::vector<double>{0.03, 0.03, 0.04});
    }

    TEST_CASE("single test") {
        const std::vector<double> p{0.2};
        CHECK(bh_adjust(p) == p);
        CHECK(bh_adjust(std::vector<double>{}).empty());
    }

    TEST_CASE("matches the direct step-up rule, order-equivariant") {
        std::mt19937_64 rng(12);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int trial = 0; trial < 300; ++trial) {
            std::vector<double> p(1 + rng() % 40);
            for (auto& v : p) {
                v = trial % 3 == 0 ? std::round(u(rng) * 10) / 10 : std::pow(u(rng), 3);
            }
            const auto q = bh_adjust(p);
            const auto oracle = bh_oracle(p);
            for (std::size_t i = 0; i < p.size(); ++i) {
                CHECK(q[i] == doctest::Approx(oracle[i]).epsilon(1e-15));
                CHECK(q[i] >= p[i]);
                CHECK(q[i] <= 1.0);
            }
            std::vector<std::size_t> perm(p.size());
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            std::vector<double> shuffled(p.size());
            for (std::size_t i = 0; i < p.size(); ++i) {
                shuffled[i] = p[perm[i]];
            }
            const auto qs = bh_adjust(shuffled);
            for (std::size_t i = 0; i < p.size(); ++i) {
                CHECK(qs[i] == q[perm[i]]);
            }
        }
    }

    TEST_CASE("out of range") {
        CHECK_THROWS_AS(bh_adjust(std::vector<double>{0.5, 1.5}), ArgumentError);
        CHECK_THROWS_AS(bh_adjust(std::vector<double>{-0.1}), ArgumentError);
        CHECK_THROWS_AS(bh_adjust(std::vector<double>{std::nan("")}), ArgumentError);
    }
}

TEST_SUITE("correlation") {
    const std::vector<double> x{1, 2, 3, 4, 5};

    TEST_CASE("perfect and hand-computed cases") {
        std::vector<double> y;
        for (double v : x) {
            y.push_back(2 * v + 1);
        }
        CHECK(pearson(x, y) == doctest::Approx(1.0).epsilon(1e-15));
        std::vector<double> neg;
        for (double v : x) {
            neg.push_back(-v);
        }
        CHECK(pearson(x, neg) == doctest::Approx(-1.0).epsilon(1e-15));
        CHECK(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{1, 3, 2}) ==
              doctest::Approx(0.5).epsilon(1e-15));
    }

    TEST_CASE("errors") {
        const std::vector<double> c{3, 3, 3, 3, 3};
        CHECK_THROWS_AS(pearson(x, c), UndefinedCorrelationError);
        CHECK_THROWS_AS(pearson(c, x), UndefinedCorrelationError);
        CHECK_THROWS_AS(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2}), ArgumentError);
        CHECK_THROWS_AS(pearson(x, std::vector<double>{1, 2, 3}), ArgumentError);
        const std::vector<double> w{1, 1, 0, 1, 1};
        CHECK_THROWS_AS(weighted_pearson(x, x, w), ArgumentError);
        const std::vector<double> wneg{1, 1, -1, 1, 1};
        CHECK_THROWS_AS(weighted_pearson(x, x, wneg), ArgumentError);
    }

    TEST_CASE("weighted reduces to unweighted and is scale invariant") {
        std::mt19937_64 rng(4);
        std::normal_distribution<double> n01;
        std::uniform_real_distribution<double> uw(0.1, 5.0);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> a(3 + rng() % 30);
            std::vector<double> b(a.size());
            std::vector<double> w(a.size());
            for (std::size_t i = 0; i < a.size(); ++i) {
                a[i] = n01(rng);
                b[i] = 0.5 * a[i] + n01(rng);
                w[i] = uw(rng);
            }
            const std::vector<double> equal(a.size(), 2.5);
            CHECK(std::abs(weighted_pearson(a, b, equal) - pearson(a, b)) <= 1e-12);
            std::vector<double> w7 = w;
            for (auto& v : w7) {
                v *= 7.0;
            }
            CHECK(weighted_pearson(a, b, w7) == doctest::Approx(weighted_pearson(a, b, w)).epsilon(1e-13));
            CHECK(std::abs(weighted_pearson(a, b, w)) <= 1.0);
        }
    }

    TEST_CASE("down-weighted outlier approaches the three-point correlation") {
        const std::vector<double> a{0.1, 0.5, 0.9, 0.3};
        const std::vector<double> b{-1.0, 0.2, 1.1, 4.0};
        const double three = pearson(std::span(a).first(3), std::span(b).first(3));
        const double full = pearson(a, b);
        double prev_gap = std::abs(full - three);
        for (double eps : {1e-2, 1e-4, 1e-6, 1e-9}) {
            const std::vector<double> w{1, 1, 1, eps};
            const double gap = std::abs(weighted_pearson(a, b, w) - three);
            CHECK(gap < prev_gap);
            prev_gap = gap;
        }
        CHECK(prev_gap < 1e-6);
    }
}

TEST_SUITE("permutation test") {
    TEST_CASE("binomial coefficients") {
        CHECK(binomial_coefficient(16, 8) == 12870);
        CHECK(binomial_coefficient(5, 0) == 1);
        CHECK(binomial_coefficient(5, 6) == 0);
        CHECK(binomial_coefficient(60, 30) == 118264581564861424ULL);
        CHECK(binomial_coefficient(200, 100) == UINT64_MAX);
    }

    TEST_CASE("uniform_below is in range and roughly uniform") {
        SplitMix64 rng(42);
        std::vector<int> hist(7, 0);
        for (int i = 0; i < 70000; ++i) {
            const auto v = uniform_below(rng, 7);
            REQUIRE(v < 7);
            ++hist[v];
        }
        for (int h : hist) {
            CHECK(h > 9500);
            CHECK(h < 10500);
        }
    }

    TEST_CASE("constant bias gives p = 1") {
        const SplitBias zero = [](auto, auto) { return 0.0; };
        const auto exact = permutation_test(zero, 8, 8, 20000, 1);
        CHECK(exact.exact);
        CHECK(exact.p_value == 1.0);
        CHECK(exact.evaluated == 12870);
        const auto sampled = permutation_test(zero, 8, 8, 99, 1);
        CHECK_FALSE(sampled.exact);
        CHECK(sampled.p_value == 1.0);
    }

    TEST_CASE("exact enumeration matches a bitmask oracle") {
        std::mt19937_64 rng(77);
        std::normal_distribution<double> n01;
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t na = 1 + rng() % 6;
            const std::size_t nb = 1 + rng() % 6;
            std::vector<double> scores(na + nb);
            for (std::size_t i = 0; i < scores.size(); ++i) {
                scores[i] = n01(rng) + (i < na ? 0.8 : 0.0);
            }
            const auto fn = mean_difference(scores);
            const auto result = permutation_test(fn, na, nb, 1u << 20, 5, 1 + trial % 3);
            REQUIRE(result.exact);

            std::vector<std::size_t> a0(na);
            std::vector<std::size_t> b0(nb);
            std::iota(a0.begin(), a0.end(), 0);
            std::iota(b0.begin(), b0.end(), na);
            const double observed = std::abs(fn(a0, b0));
            std::uint64_t extreme = 0;
            std::uint64_t splits = 0;
            for (unsigned mask = 0; mask < (1u << (na + nb)); ++mask) {
                if (std::size_t(std::popcount(mask)) != na) {
                    continue;
                }
                std::vector<std::size_t> a;
                std::vector<std::size_t> b;
                for (std::size_t i = 0; i < na + nb; ++i) {
                    ((mask >> i) & 1u ? a : b).push_back(i);
                }
                ++splits;
                extreme += std::abs(fn(a, b)) >= observed - 1e-12 * std::max(1.0, observed) ? 1 : 0;
            }
            CHECK(result.evaluated == splits);
            CHECK(result.extreme == extreme);
            CHECK(result.p_value == doctest::Approx(double(extreme) / double(splits)).epsilon(1e-15));
        }
    }

    TEST_CASE("minimum p with 8 + 8 words") {
        // Scores separate the sides perfectly; only the observed split and its mirror are as extreme.
        std::vector<double> scores(16);
        for (std::size_t i = 0; i < 16; ++i) {
            scores[i] = i < 8 ? 10.0 + double(i) : double(i) - 16.0;
        }
        const auto r = permutation_test(mean_difference(scores), 8, 8, 20000, 1);
        CHECK(r.exact);
        CHECK(r.extreme == 2);
        CHECK(r.p_value == doctest::Approx(2.0 / 12870.0));
        CHECK(r.p_value >= 1.0 / 12871.0);
        const auto sampled = permutation_test(mean_difference(scores), 8, 8, 999, 1);
        CHECK(sampled.p_value >= 1.0 / 1000.0);
    }

    TEST_CASE("sampling is reproducible and independent of threads") {
        std::vector<double> scores(30);
        std::mt19937_64 rng(6);
        std::normal_distribution<double> n01;
        for (std::size_t i = 0; i < scores.size(); ++i) {
            scores[i] = n01(rng) + (i < 15 ? 0.4 : 0.0);
        }
        const auto fn = mean_difference(scores);
        const auto base = permutation_test(fn, 15, 15, 5000, 123, 1);
        CHECK_FALSE(base.exact);
        for (const std::size_t threads : {2u, 4u, 7u}) {
            const auto r = permutation_test(fn, 15, 15, 5000, 123, threads);
            CHECK(r.extreme == base.extreme);
            CHECK(r.p_value == base.p_value);
        }
        CHECK(permutation_test(fn, 15, 15, 5000, 123, 1).p_value == base.p_value);
        std::set<std::uint64_t> other_seeds;
        for (std::uint64_t seed = 124; seed < 130; ++seed) {
            other_seeds.insert(permutation_test(fn, 15, 15, 5000, seed, 1).extreme);
        }
        CHECK(other_seeds.size() > 1);
        CHECK(base.p_value == doctest::Approx(double(base.extreme + 1) / 5001.0));
    }

    TEST_CASE("degenerate splits count as extreme") {
        const SplitBias fn = [](std::span<const std::size_t> a, auto) {
            return a[0] == 0 ? 1.0 : std::nan("");
        };
        const auto r = permutation_test(fn, 1, 3, 100, 1);
        CHECK(r.exact);
        CHECK(r.p_value == 1.0);
        const SplitBias nan_observed = [](auto, auto) { return std::nan(""); };
        CHECK_THROWS_AS(permutation_test(nan_observed, 2, 2, 100, 1), ArgumentError);
    }

    TEST_CASE("argument errors") {
        const SplitBias zero = [](auto, auto) { return 0.0; };
        CHECK_THROWS_AS(permutation_test(zero, 2, 2, 0, 1), ArgumentError);
        CHECK_THROWS_AS(permutation_test(zero, 0, 2, 10, 1), ArgumentError);
    }
}
