#ifndef ERRORFLOOR_DECODER_HPP
#define ERRORFLOOR_DECODER_HPP

#include <span>
#include <vector>

#include "errorfloor/code.hpp"

namespace ef {

// BPSK/AWGN channel bookkeeping.  Es is fixed to 1, so Lc = (2/sigma2) * y.
struct ChannelModel {
    double eb_no_db = 0.0;
    double rate = 0.5;
    double sigma2 = 0.0;
    double llr_scale = 0.0;

    ChannelModel() = default;
    ChannelModel(double eb_no_db_, double rate_);
    double es_no() const { return 1.0 / (2.0 * sigma2); }
};

enum class Algorithm { belief_propagation, min_sum };

struct DecoderConfig {
    Algorithm algorithm = Algorithm::belief_propagation;
    int max_iters = 50;
    double llr_clamp = 30.0;
    bool early_exit = true;
    bool capture_history = false;  // keep every per-iteration hard decision
};

struct DecodeOutcome {
    bool converged = false;
    int iterations_used = 0;
    BitPattern final_hard_decision;
    std::vector<int> syndrome_weight_history;
    BitPattern min_syndrome_state;
    int min_syndrome_weight = 0;
    int min_syndrome_iteration = 0;  // 1-based, earliest iteration achieving the min
    std::vector<BitPattern> hard_decision_history;  // only when capture_history
};

std::vector<double> channel_llr(std::span<const double> y, const ChannelModel& channel);

// Check-node rule applied to the incoming messages excluding the target edge.
double check_update(std::span<const double> incoming, Algorithm algorithm);

double variable_update(std::span<const double> incoming, double lc, double llr_clamp);

// Full marginal; the hard decision is 0 iff the result is >= 0.
double marginal(std::span<const double> incoming, double lc);

DecodeOutcome decode(const TannerCode& code, std::span<const double> y,
                     const ChannelModel& channel, const DecoderConfig& cfg);

// Definition-of-record error event for a failed decoding: the minimum
// syndrome weight hard decision over the iteration history (earliest tie).
// A decoding that converged to a wrong codeword yields that codeword, class
// (w_H, 0).  Throws if the outcome is the correct (all-zeros) decoding.
std::pair<BitPattern, TsClass> extract_trapping_set(const TannerCode& code,
                                                    const DecodeOutcome& outcome);

}  // namespace ef

#endif
