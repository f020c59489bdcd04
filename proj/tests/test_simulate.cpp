#include <cmath>

#include "doctest.h"
#include "errorfloor/simulate.hpp"
#include "test_utils.hpp"

using namespace ef;
using namespace ef::testing;

namespace {

ISDensity density_from_supports(int n, double sigma2, std::vector<std::vector<int>> supports,
                                double shift = 1.0) {
    ISDensity d;
    d.n = n;
    d.sigma2 = sigma2;
    d.shift = shift;
    d.psi = n / 2.0;
    d.center_supports = std::move(supports);
    d.validate();
    return d;
}

// direct likelihood ratio in extended precision, no stabilization tricks
long double naive_weight(const std::vector<double>& y, const ISDensity& d) {
    long double inv2s2 = 1.0L / (2.0L * d.sigma2);
    long double d0 = 0.0L;
    for (double v : y) d0 += (static_cast<long double>(v) - 1.0L) * (v - 1.0L);
    long double denom = 0.0L;
    for (const auto& s : d.center_supports) {
        long double dm = 0.0L;
        for (size_t i = 0; i < y.size(); ++i) {
            long double mu = 1.0L;
            if (std::find(s.begin(), s.end(), static_cast<int>(i)) != s.end()) mu -= d.shift;
            dm += (y[i] - mu) * (y[i] - mu);
        }
        denom += std::exp(-dm * inv2s2);
    }
    denom /= d.center_supports.size();
    return std::exp(-d0 * inv2s2) / denom;
}

}  // namespace

TEST_CASE("noise substreams are reproducible and order independent") {
    NoiseSource noise(1234);
    std::vector<double> a(16), b(16), c(16);
    noise.fill_standard_normal(7, a);
    noise.fill_standard_normal(8, c);
    noise.fill_standard_normal(7, b);
    CHECK(a == b);
    CHECK(a != c);

    NoiseSource other(1235);
    other.fill_standard_normal(7, b);
    CHECK(a != b);
}

TEST_CASE("noise draws have standard normal moments") {
    NoiseSource noise(9);
    const int n = 64;
    const long trials = 2000;
    double sum = 0.0, sum2 = 0.0;
    std::vector<double> g(n);
    for (long t = 0; t < trials; ++t) {
        noise.fill_standard_normal(t, g);
        for (double x : g) {
            sum += x;
            sum2 += x * x;
        }
    }
    double count = static_cast<double>(trials) * n;
    CHECK(sum / count == doctest::Approx(0.0).epsilon(0.02));
    CHECK(sum2 / count == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("nominal samples sit at one plus scaled noise") {
    NoiseSource noise(4);
    ChannelModel ch(3.0, 0.5);
    auto y = sample_nominal(noise, 5, ch, 8);
    std::vector<double> g(8);
    noise.fill_standard_normal(5, g);
    for (int i = 0; i < 8; ++i)
        CHECK(y[i] == doctest::Approx(1.0 + std::sqrt(ch.sigma2) * g[i]));
}

TEST_CASE("biased samples subtract the shift on the trial's own center") {
    auto d = density_from_supports(8, 0.5, {{0, 1}, {5}});
    NoiseSource noise(4);
    auto [y0, m0] = sample_biased(noise, 0, d);
    auto [y1, m1] = sample_biased(noise, 1, d);
    CHECK(m0 == 0);
    CHECK(m1 == 1);
    std::vector<double> g(8);
    noise.fill_standard_normal(0, g);
    CHECK(y0[0] == doctest::Approx(std::sqrt(0.5) * g[0]));  // 1 - shift = 0
    CHECK(y0[5] == doctest::Approx(1.0 + std::sqrt(0.5) * g[5]));
    noise.fill_standard_normal(1, g);
    CHECK(y1[5] == doctest::Approx(std::sqrt(0.5) * g[5]));
}

TEST_CASE("a density matching the channel gives unit weights") {
    auto d = density_from_supports(12, 0.7, {{}});
    NoiseSource noise(2);
    for (std::uint64_t t = 0; t < 20; ++t) {
        std::vector<double> y(12);
        noise.fill_standard_normal(t, y);
        for (double& v : y) v = 1.0 + 0.3 * v;
        auto wv = weight(y, d);
        CHECK(wv.w == 1.0);
        CHECK(!wv.overflow);
    }
}

TEST_CASE("the stabilizer exponent cancels out of the weight") {
    NoiseSource noise(6);
    auto d = density_from_supports(64, 0.4, {{0, 1, 2}, {10, 20}, {63}});
    auto d0 = d;
    d0.psi = 0.0;
    for (std::uint64_t t = 0; t < 50; ++t) {
        auto [y, m] = sample_biased(noise, t, d);
        (void)m;
        double w1 = weight(y, d).w;
        double w2 = weight(y, d0).w;
        REQUIRE(w1 == doctest::Approx(w2).epsilon(1e-12));
    }
}

TEST_CASE("weights agree with a naive extended-precision evaluation") {
    NoiseSource noise(8);
    auto d = density_from_supports(10, 0.5, {{0, 3}, {7}}, 1.5);
    for (std::uint64_t t = 0; t < 200; ++t) {
        auto [y, m] = sample_biased(noise, t, d);
        (void)m;
        double got = weight(y, d).w;
        long double want = naive_weight(y, d);
        REQUIRE(got == doctest::Approx(static_cast<double>(want)).epsilon(1e-10));
    }
}

TEST_CASE("mean weight over biased draws converges to one") {
    NoiseSource noise(11);
    auto d = density_from_supports(16, 0.5, {{0, 1, 2}, {8, 9}});
    auto [mean, se] = mean_weight(noise, d, 20000);
    CHECK(std::abs(mean - 1.0) <= 5.0 * se);
}

TEST_CASE("density construction validates its inputs") {
    CHECK_THROWS_AS(density_from_supports(8, 0.5, {}), std::invalid_argument);
    CHECK_THROWS_AS(density_from_supports(8, -1.0, {{0}}), std::invalid_argument);
    CHECK_THROWS_AS(density_from_supports(8, 0.5, {{9}}), std::invalid_argument);
}

TEST_CASE("half-space tail estimates match the analytic value") {
    // error region: first coordinate pushed below zero
    const int n = 4;
    ChannelModel ch(0.0, 0.5);  // sigma2 = 1
    TrialClassifier classify = [](const std::vector<double>& y) {
        TrialOutcome out;
        if (y[0] < 0.0) {
            out.error = true;
            out.event_support = {0};
            out.cls.a = 1;
            out.bit_errors = 1;
        }
        return out;
    };
    const double truth = 0.5 * std::erfc(1.0 / std::sqrt(2.0 * ch.sigma2));

    NoiseSource noise(21);
    auto mc = run_mc(noise, ch, n, 20000, classify, 1);
    CHECK(mc.ci_low <= truth);
    CHECK(mc.ci_high >= truth);

    auto d = density_from_supports(n, ch.sigma2, {{0}});
    auto is = run_is(noise, d, 20000, classify, 1);
    CHECK(is.p_f_hat == doctest::Approx(truth).epsilon(0.05));
    CHECK(is.intended_hits == is.hits);
    CHECK(is.new_events.empty());
    CHECK(is.v_hat >= is.p_f_hat * is.p_f_hat);
}

TEST_CASE("estimates are identical across thread counts") {
    const int n = 8;
    ChannelModel ch(2.0, 0.5);
    TrialClassifier classify = [](const std::vector<double>& y) {
        TrialOutcome out;
        double s = 0.0;
        for (double v : y) s += v;
        if (s < 4.0) {
            out.error = true;
            out.event_support = {0, 1};
            out.cls.a = 2;
            out.bit_errors = 2;
        }
        return out;
    };
    NoiseSource noise(31);
    auto mc1 = run_mc(noise, ch, n, 5000, classify, 1);
    auto mc4 = run_mc(noise, ch, n, 5000, classify, 4);
    CHECK(mc1.p_f_hat == mc4.p_f_hat);
    CHECK(mc1.errors == mc4.errors);

    auto d = density_from_supports(n, ch.sigma2, {{0, 1}, {2, 3}});
    auto is1 = run_is(noise, d, 2500, classify, 1);
    auto is4 = run_is(noise, d, 2500, classify, 4);
    CHECK(is1.p_f_hat == is4.p_f_hat);
    CHECK(is1.v_hat == is4.v_hat);
    CHECK(is1.hits == is4.hits);
    CHECK(is1.new_events.size() == is4.new_events.size());
}

TEST_CASE("a degenerate density reproduces plain sampling exactly") {
    auto code = generate_girth6(28, 3, 6, 17);
    REQUIRE(code.has_value());
    ChannelModel ch(1.0, 0.5);
    DecoderConfig cfg;
    cfg.max_iters = 15;
    NoiseSource noise(55);

    auto mc = mc_estimate(*code, ch, 4096, cfg, noise, 1);
    auto d = density_from_supports(28, ch.sigma2, {{}});
    auto is = is_estimate(*code, ch, d, 4096, cfg, noise, 1);
    CHECK(is.trials == mc.trials);
    CHECK(is.hits == mc.errors);
    CHECK(is.p_f_hat == mc.p_f_hat);
    CHECK(is.p_b_hat == mc.p_b_hat);
}

TEST_CASE("the density variance must match the channel") {
    auto code = generate_girth6(28, 3, 6, 17);
    REQUIRE(code.has_value());
    ChannelModel ch(1.0, 0.5);
    DecoderConfig cfg;
    NoiseSource noise(55);
    auto d = density_from_supports(28, ch.sigma2 * 2.0, {{}});
    CHECK_THROWS_AS(is_estimate(*code, ch, d, 16, cfg, noise, 1), std::invalid_argument);
}

TEST_CASE("new events are tallied and can widen the density") {
    auto code = generate_girth6(48, 3, 6, 5);
    REQUIRE(code.has_value());
    DecoderConfig cfg;
    cfg.max_iters = 20;
    ChannelModel channel(4.0, 0.5);
    BoundaryProbe probe;

    // find two real event sets and their boundary distances
    SearchParams sp;
    sp.epsilon1 = 3.0;
    sp.gamma = 0.6;
    sp.eb_no_db = 6.0;
    TsCatalog catalog = run_search(*code, sp, cfg, 1);
    rank_catalog(*code, catalog, probe, cfg, channel, 1);
    std::vector<const TsRecord*> bracketed;
    for (const auto& [key, rec] : catalog.entries)
        if (rec.bracketed) bracketed.push_back(&rec);
    REQUIRE(bracketed.size() >= 2);

    auto d = density_from_supports(48, channel.sigma2, {bracketed[0]->support.support});
    ISEstimate fake;
    fake.new_events[bracketed[1]->support.support].count = 3;

    auto widened = adapt_density(*code, fake, d, probe, cfg, channel,
                                 bracketed[1]->d_e2 + 1.0);
    CHECK(widened.centers() == 2);
    auto unchanged = adapt_density(*code, fake, d, probe, cfg, channel,
                                   bracketed[1]->d_e2 - 1.0);
    CHECK(unchanged.centers() == 1);
}

TEST_CASE("exact binomial bounds match their closed forms at the extremes") {
    const long n = 100;
    auto [lo0, hi0] = binomial_ci(0, n);
    CHECK(lo0 == doctest::Approx(0.0));
    CHECK(hi0 == doctest::Approx(1.0 - std::pow(0.025, 1.0 / n)).epsilon(1e-6));
    auto [lon, hin] = binomial_ci(n, n);
    CHECK(hin == doctest::Approx(1.0));
    CHECK(lon == doctest::Approx(std::pow(0.025, 1.0 / n)).epsilon(1e-6));

    auto [lo, hi] = binomial_ci(5, n);
    CHECK(lo < 0.05);
    CHECK(hi > 0.05);
    auto [lo2, hi2] = binomial_ci(10, n);
    CHECK(lo2 > lo);
    CHECK(hi2 > hi);
    CHECK_THROWS_AS(binomial_ci(-1, 10), std::invalid_argument);
    CHECK_THROWS_AS(binomial_ci(11, 10), std::invalid_argument);
}
