#ifndef ERRORFLOOR_SIMULATE_HPP
#define ERRORFLOOR_SIMULATE_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <span>

#include "errorfloor/boundary.hpp"

namespace ef {

// Deterministic per-trial Gaussian substreams: the vector produced for a
// (master_seed, trial) pair does not depend on execution order or thread
// count.
class NoiseSource {
public:
    explicit NoiseSource(std::uint64_t master_seed) : master_seed_(master_seed) {}
    std::uint64_t master_seed() const { return master_seed_; }
    void fill_standard_normal(std::uint64_t trial, std::span<double> out) const;

private:
    std::uint64_t master_seed_;
};

// y = 1 + sigma * g for the all-zeros reference codeword.
std::vector<double> sample_nominal(const NoiseSource& noise, std::uint64_t trial,
                                   const ChannelModel& channel, int n);

// Mixture of mean-shifted Gaussians, uniform weights 1/M.  Center m is
// 1 - shift * mu_m with mu_m the indicator of center_supports[m].
struct ISDensity {
    int n = 0;
    double sigma2 = 0.0;
    double shift = 1.0;
    double psi = 0.0;  // stabilizer exponent; n/2 by default via make()
    std::vector<std::vector<int>> center_supports;

    static ISDensity make(int n, double sigma2, std::span<const TsRecord* const> shift_points,
                          double shift = 1.0);
    int centers() const { return static_cast<int>(center_supports.size()); }
    void validate() const;
};

// Likelihood-ratio weight f(y)/f*(y).  The psi offset and the max-exponent
// factoring are both applied; they cancel in exact arithmetic.  overflow is
// set when the psi-only denominator would underflow to zero.
struct WeightValue {
    double w = 0.0;
    bool overflow = false;
};
WeightValue weight(std::span<const double> y, const ISDensity& density);

// y drawn from the trial's center (trial mod M under equal allocation).
std::pair<std::vector<double>, int> sample_biased(const NoiseSource& noise, std::uint64_t trial,
                                                  const ISDensity& density);

// Outcome of pushing one received vector through a decoder (or any error
// classifier): error flag, the Definition-of-record event support, and the
// final-state bit error count.
struct TrialOutcome {
    bool error = false;
    std::vector<int> event_support;
    TsClass cls;
    int bit_errors = 0;
};
using TrialClassifier = std::function<TrialOutcome(const std::vector<double>& y)>;

struct NewEvent {
    TsClass cls;
    long count = 0;
    double weight_sum = 0.0;
};

struct ISEstimate {
    double p_f_hat = 0.0;
    double p_b_hat = 0.0;
    double v_hat = 0.0;  // (1/L) sum of w^2 over errors, Monte Carlo second moment
    long trials = 0;
    long hits = 0;
    long intended_hits = 0;
    long weight_overflows = 0;
    std::map<std::vector<int>, NewEvent> new_events;
};

struct MCEstimate {
    double p_f_hat = 0.0;
    double p_b_hat = 0.0;
    long trials = 0;
    long errors = 0;
    double ci_low = 0.0;   // exact binomial (Clopper-Pearson) 95% bounds
    double ci_high = 0.0;
    std::map<std::pair<int, int>, long> class_tallies;
};

// Generic engines: the classifier sees the raw received vector.  Results are
// reproducible for a fixed (noise, density/trial count) regardless of the
// thread count (fixed-size trial blocks merged in order).
MCEstimate run_mc(const NoiseSource& noise, const ChannelModel& channel, int n, long trials,
                  const TrialClassifier& classify, int threads = 1);
ISEstimate run_is(const NoiseSource& noise, const ISDensity& density, long per_center,
                  const TrialClassifier& classify, int threads = 1);

// Mean of the likelihood weight over biased draws with no decoding; converges
// to 1.  Returns (mean, standard error).
std::pair<double, double> mean_weight(const NoiseSource& noise, const ISDensity& density,
                                      long draws);

// Decoder-backed classifier: error = final outcome is not the all-zeros
// codeword; event per the minimum-syndrome definition; bit errors from the
// final hard decision.
TrialClassifier decoder_classifier(const TannerCode& code, const ChannelModel& channel,
                                   const DecoderConfig& cfg);

MCEstimate mc_estimate(const TannerCode& code, const ChannelModel& channel, long trials,
                       const DecoderConfig& cfg, const NoiseSource& noise, int threads = 1);
ISEstimate is_estimate(const TannerCode& code, const ChannelModel& channel,
                       const ISDensity& density, long per_center, const DecoderConfig& cfg,
                       const NoiseSource& noise, int threads = 1);

// Probes every new event and appends those under the d_e2 threshold as
// centers; estimation must then be restarted with the returned density.
ISDensity adapt_density(const TannerCode& code, const ISEstimate& estimate,
                        const ISDensity& density, const BoundaryProbe& probe,
                        const DecoderConfig& cfg, const ChannelModel& channel,
                        double d_e2_threshold);

// Exact binomial (Clopper-Pearson) confidence bounds for k successes in n.
std::pair<double, double> binomial_ci(long k, long n, double confidence = 0.95);

}  // namespace ef

#endif
