#include "errorfloor/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace ef {

namespace {

constexpr long kBlock = 1024;  // trials per work unit; fixed so results do not
                               // depend on the thread count
constexpr double kLogDblMin = -708.396418532264;

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

struct SplitMix {
    std::uint64_t state;
    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        return mix64(state);
    }
    double uniform() {  // in (0, 1]
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }
};

}  // namespace

void NoiseSource::fill_standard_normal(std::uint64_t trial, std::span<double> out) const {
    SplitMix rng{mix64(master_seed_ + 0x9E3779B97F4A7C15ULL * (trial + 1))};
    size_t i = 0;
    while (i < out.size()) {
        double u1 = rng.uniform();
        double u2 = rng.uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double t = 2.0 * M_PI * u2;
        out[i++] = r * std::cos(t);
        if (i < out.size()) out[i++] = r * std::sin(t);
    }
}

std::vector<double> sample_nominal(const NoiseSource& noise, std::uint64_t trial,
                                   const ChannelModel& channel, int n) {
    std::vector<double> y(n);
    noise.fill_standard_normal(trial, y);
    const double sigma = std::sqrt(channel.sigma2);
    for (double& v : y) v = 1.0 + sigma * v;
    return y;
}

ISDensity ISDensity::make(int n, double sigma2, std::span<const TsRecord* const> shift_points,
                          double shift) {
    ISDensity d;
    d.n = n;
    d.sigma2 = sigma2;
    d.shift = shift;
    d.psi = n / 2.0;
    for (const TsRecord* rec : shift_points) d.center_supports.push_back(rec->support.support);
    d.validate();
    return d;
}

void ISDensity::validate() const {
    if (n <= 0) throw std::invalid_argument("density dimension must be positive");
    if (sigma2 <= 0.0) throw std::invalid_argument("density variance must be positive");
    if (center_supports.empty()) throw std::invalid_argument("density needs >= 1 center");
    for (const auto& s : center_supports)
        for (int v : s)
            if (v < 0 || v >= n) throw std::invalid_argument("center support index out of range");
}

std::pair<std::vector<double>, int> sample_biased(const NoiseSource& noise, std::uint64_t trial,
                                                  const ISDensity& density) {
    const int m = static_cast<int>(trial % density.centers());
    std::vector<double> y(density.n);
    noise.fill_standard_normal(trial, y);
    const double sigma = std::sqrt(density.sigma2);
    for (double& v : y) v = 1.0 + sigma * v;
    for (int v : density.center_supports[m]) y[v] -= density.shift;
    return {std::move(y), m};
}

WeightValue weight(std::span<const double> y, const ISDensity& density) {
    const double inv2s2 = 1.0 / (2.0 * density.sigma2);
    double d0 = 0.0;
    for (size_t i = 0; i < y.size(); ++i) {
        double e = y[i] - 1.0;
        d0 += e * e;
    }
    const double a0 = density.psi - d0 * inv2s2;

    const int M = density.centers();
    std::vector<double> am(M);
    double amax = -HUGE_VAL;
    for (int m = 0; m < M; ++m) {
        double delta = 0.0;
        for (int v : density.center_supports[m]) {
            double e = y[v] - 1.0;
            delta += density.shift * (2.0 * e + density.shift);
        }
        am[m] = density.psi - (d0 + delta) * inv2s2;
        amax = std::max(amax, am[m]);
    }

    WeightValue res;
    res.overflow = amax < kLogDblMin;  // the psi-only form would divide by zero
    double denom = 0.0;
    for (int m = 0; m < M; ++m) denom += std::exp(am[m] - amax);
    denom /= M;
    res.w = std::exp(a0 - amax) / denom;
    return res;
}

namespace {

struct MCBlock {
    long errors = 0;
    double bit_error_sum = 0.0;
    std::map<std::pair<int, int>, long> classes;
};

struct ISBlock {
    double wf = 0.0, wb = 0.0, w2 = 0.0;
    long hits = 0, intended = 0, overflows = 0;
    std::map<std::vector<int>, NewEvent> new_events;
};

template <typename Fn>
void run_blocks(long total, int threads, Fn&& block_fn) {
    const long num_blocks = (total + kBlock - 1) / kBlock;
    std::atomic<long> next{0};
    auto worker = [&] {
        for (;;) {
            long b = next.fetch_add(1);
            if (b >= num_blocks) return;
            block_fn(b, b * kBlock, std::min(total, (b + 1) * kBlock));
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
}

}  // namespace

MCEstimate run_mc(const NoiseSource& noise, const ChannelModel& channel, int n, long trials,
                  const TrialClassifier& classify, int threads) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    const long num_blocks = (trials + kBlock - 1) / kBlock;
    std::vector<MCBlock> blocks(num_blocks);

    run_blocks(trials, threads, [&](long b, long lo, long hi) {
        MCBlock& acc = blocks[b];
        for (long t = lo; t < hi; ++t) {
            auto y = sample_nominal(noise, static_cast<std::uint64_t>(t), channel, n);
            auto outcome = classify(y);
            if (!outcome.error) continue;
            acc.errors++;
            acc.bit_error_sum += static_cast<double>(outcome.bit_errors) / n;
            acc.classes[{outcome.cls.a, outcome.cls.b}]++;
        }
    });

    MCEstimate est;
    est.trials = trials;
    double bit_sum = 0.0;
    for (const auto& acc : blocks) {
        est.errors += acc.errors;
        bit_sum += acc.bit_error_sum;
        for (auto& [key, cnt] : acc.classes) est.class_tallies[key] += cnt;
    }
    est.p_f_hat = static_cast<double>(est.errors) / trials;
    est.p_b_hat = bit_sum / trials;
    std::tie(est.ci_low, est.ci_high) = binomial_ci(est.errors, trials);
    return est;
}

ISEstimate run_is(const NoiseSource& noise, const ISDensity& density, long per_center,
                  const TrialClassifier& classify, int threads) {
    density.validate();
    if (per_center < 1) throw std::invalid_argument("per-center trial count must be >= 1");
    const long total = per_center * density.centers();
    const long num_blocks = (total + kBlock - 1) / kBlock;
    std::vector<ISBlock> blocks(num_blocks);

    std::map<std::vector<int>, int> center_index;
    for (int m = 0; m < density.centers(); ++m) center_index[density.center_supports[m]] = m;

    run_blocks(total, threads, [&](long b, long lo, long hi) {
        ISBlock& acc = blocks[b];
        for (long t = lo; t < hi; ++t) {
            auto [y, m] = sample_biased(noise, static_cast<std::uint64_t>(t), density);
            auto outcome = classify(y);
            if (!outcome.error) continue;
            auto wv = weight(y, density);
            if (wv.overflow) acc.overflows++;
            acc.hits++;
            acc.wf += wv.w;
            acc.wb += wv.w * static_cast<double>(outcome.bit_errors) / density.n;
            acc.w2 += wv.w * wv.w;
            if (outcome.event_support == density.center_supports[m]) {
                acc.intended++;
            } else if (!center_index.count(outcome.event_support)) {
                auto& ev = acc.new_events[outcome.event_support];
                ev.cls = outcome.cls;
                ev.count++;
                ev.weight_sum += wv.w;
            }
        }
    });

    ISEstimate est;
    est.trials = total;
    double wf = 0.0, wb = 0.0, w2 = 0.0;
    for (auto& acc : blocks) {
        est.hits += acc.hits;
        est.intended_hits += acc.intended;
        est.weight_overflows += acc.overflows;
        wf += acc.wf;
        wb += acc.wb;
        w2 += acc.w2;
        for (auto& [key, ev] : acc.new_events) {
            auto& dst = est.new_events[key];
            dst.cls = ev.cls;
            dst.count += ev.count;
            dst.weight_sum += ev.weight_sum;
        }
    }
    est.p_f_hat = wf / total;
    est.p_b_hat = wb / total;
    est.v_hat = w2 / total;
    return est;
}

std::pair<double, double> mean_weight(const NoiseSource& noise, const ISDensity& density,
                                      long draws) {
    double sum = 0.0, sum2 = 0.0;
    for (long t = 0; t < draws; ++t) {
        auto [y, m] = sample_biased(noise, static_cast<std::uint64_t>(t), density);
        (void)m;
        double w = weight(y, density).w;
        sum += w;
        sum2 += w * w;
    }
    double mean = sum / draws;
    double var = std::max(0.0, sum2 / draws - mean * mean);
    return {mean, std::sqrt(var / draws)};
}

TrialClassifier decoder_classifier(const TannerCode& code, const ChannelModel& channel,
                                   const DecoderConfig& cfg) {
    return [&code, channel, cfg](const std::vector<double>& y) {
        auto outcome = decode(code, y, channel, cfg);
        TrialOutcome res;
        if (outcome.converged && outcome.final_hard_decision.empty()) return res;
        res.error = true;
        auto [support, cls] = extract_trapping_set(code, outcome);
        res.event_support = support.support;
        res.cls = cls;
        res.bit_errors = outcome.final_hard_decision.weight();
        return res;
    };
}

MCEstimate mc_estimate(const TannerCode& code, const ChannelModel& channel, long trials,
                       const DecoderConfig& cfg, const NoiseSource& noise, int threads) {
    return run_mc(noise, channel, code.n(), trials, decoder_classifier(code, channel, cfg),
                  threads);
}

ISEstimate is_estimate(const TannerCode& code, const ChannelModel& channel,
                       const ISDensity& density, long per_center, const DecoderConfig& cfg,
                       const NoiseSource& noise, int threads) {
    if (std::abs(density.sigma2 - channel.sigma2) > 1e-12 * channel.sigma2)
        throw std::invalid_argument("biasing density variance must match the channel");
    return run_is(noise, density, per_center, decoder_classifier(code, channel, cfg), threads);
}

ISDensity adapt_density(const TannerCode& code, const ISEstimate& estimate,
                        const ISDensity& density, const BoundaryProbe& probe,
                        const DecoderConfig& cfg, const ChannelModel& channel,
                        double d_e2_threshold) {
    ISDensity out = density;
    std::map<std::vector<int>, int> existing;
    for (int m = 0; m < density.centers(); ++m) existing[density.center_supports[m]] = m;
    for (const auto& [support, ev] : estimate.new_events) {
        if (existing.count(support)) continue;
        BitPattern pattern(support, code.n());
        auto res = probe_boundary(code, pattern, probe, cfg, channel);
        if (res.bracketed && res.d_e2 < d_e2_threshold) out.center_supports.push_back(support);
    }
    return out;
}

std::pair<double, double> binomial_ci(long k, long n, double confidence) {
    if (n < 1 || k < 0 || k > n) throw std::invalid_argument("bad binomial counts");
    const double alpha = 1.0 - confidence;

    // log P(X <= k; n, p) summed directly; k is small in practice
    auto log_cdf = [&](long kk, double p) {
        if (p <= 0.0) return 0.0;
        if (p >= 1.0) return kk >= n ? 0.0 : -HUGE_VAL;
        double lp = std::log(p), lq = std::log1p(-p);
        double maxterm = -HUGE_VAL;
        std::vector<double> terms;
        for (long i = 0; i <= kk; ++i) {
            double lt = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) +
                        i * lp + (n - i) * lq;
            terms.push_back(lt);
            maxterm = std::max(maxterm, lt);
        }
        double s = 0.0;
        for (double lt : terms) s += std::exp(lt - maxterm);
        return maxterm + std::log(s);
    };
    auto solve = [&](auto f) {  // f increasing in p, find root of f(p) = 0
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            (f(mid) < 0.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };

    double low = 0.0, high = 1.0;
    if (k > 0) {
        // largest p with P(X >= k) <= alpha/2  <=>  P(X <= k-1) >= 1 - alpha/2
        low = solve([&](double p) { return (1.0 - alpha / 2) - std::exp(log_cdf(k - 1, p)); });
    }
    if (k < n) {
        // smallest p with P(X <= k) <= alpha/2
        high = solve([&](double p) { return (alpha / 2) - std::exp(log_cdf(k, p)); });
    }
    return {low, high};
}

}  // namespace ef
