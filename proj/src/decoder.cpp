#include "errorfloor/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ef {

namespace {
constexpr double kTanhCap = 1.0 - 1e-15;  // keeps atanh finite

inline double clamp_llr(double x, double bound) {
    return std::clamp(x, -bound, bound);
}
}  // namespace

ChannelModel::ChannelModel(double eb_no_db_, double rate_) : eb_no_db(eb_no_db_), rate(rate_) {
    if (rate <= 0.0) throw std::invalid_argument("rate must be positive");
    sigma2 = 1.0 / (2.0 * rate * std::pow(10.0, eb_no_db / 10.0));
    llr_scale = 2.0 / sigma2;
}

std::vector<double> channel_llr(std::span<const double> y, const ChannelModel& channel) {
    std::vector<double> lc(y.size());
    for (size_t i = 0; i < y.size(); ++i) lc[i] = channel.llr_scale * y[i];
    return lc;
}

double check_update(std::span<const double> incoming, Algorithm algorithm) {
    if (incoming.empty()) throw std::invalid_argument("check_update needs >= 1 input");
    if (algorithm == Algorithm::min_sum) {
        double sign = 1.0, min_mag = std::abs(incoming[0]);
        for (double x : incoming) {
            if (x < 0.0) sign = -sign;
            min_mag = std::min(min_mag, std::abs(x));
        }
        return sign * min_mag;
    }
    double prod = 1.0;
    for (double x : incoming) prod *= std::tanh(0.5 * x);
    prod = std::clamp(prod, -kTanhCap, kTanhCap);
    return 2.0 * std::atanh(prod);
}

double variable_update(std::span<const double> incoming, double lc, double llr_clamp) {
    double sum = lc;
    for (double x : incoming) sum += x;
    return clamp_llr(sum, llr_clamp);
}

double marginal(std::span<const double> incoming, double lc) {
    double sum = lc;
    for (double x : incoming) sum += x;
    return sum;
}

DecodeOutcome decode(const TannerCode& code, std::span<const double> y,
                     const ChannelModel& channel, const DecoderConfig& cfg) {
    const int n = code.n(), m = code.m();
    if (static_cast<int>(y.size()) != n) throw std::invalid_argument("received length mismatch");
    if (cfg.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");

    const auto lc = channel_llr(y, channel);
    const int E = code.num_edges();
    std::vector<double> lq(E), lr(E);
    for (int v = 0; v < n; ++v)
        for (auto [c, e] : code.var_edges(v)) lq[e] = clamp_llr(lc[v], cfg.llr_clamp);

    std::vector<double> lq_sum(n);
    std::vector<char> hard(n);
    std::vector<double> scratch, pre;

    DecodeOutcome out;
    out.min_syndrome_weight = m + 1;

    for (int iter = 1; iter <= cfg.max_iters; ++iter) {
        // check updates (flooding)
        for (int c = 0; c < m; ++c) {
            const auto& row = code.row_adjacency()[c];
            const int base = code.row_edge_base(c);
            const int deg = static_cast<int>(row.size());
            if (cfg.algorithm == Algorithm::min_sum) {
                double sign = 1.0, min1 = HUGE_VAL, min2 = HUGE_VAL;
                int arg1 = -1;
                for (int k = 0; k < deg; ++k) {
                    double x = lq[base + k];
                    if (x < 0.0) sign = -sign;
                    double a = std::abs(x);
                    if (a < min1) {
                        min2 = min1;
                        min1 = a;
                        arg1 = k;
                    } else if (a < min2) {
                        min2 = a;
                    }
                }
                if (deg == 1) {
                    lr[base] = 0.0;  // no extrinsic information on a degree-1 check
                    continue;
                }
                for (int k = 0; k < deg; ++k) {
                    double x = lq[base + k];
                    double s = (x < 0.0) ? -sign : sign;
                    lr[base + k] = s * (k == arg1 ? min2 : min1);
                }
            } else {
                // prefix/suffix tanh products; robust when some input is 0
                scratch.resize(deg);
                for (int k = 0; k < deg; ++k) scratch[k] = std::tanh(0.5 * lq[base + k]);
                double suffix = 1.0;
                if (deg == 1) {
                    lr[base] = 0.0;
                    continue;
                }
                pre.resize(deg);
                double acc = 1.0;
                for (int k = 0; k < deg; ++k) {
                    pre[k] = acc;
                    acc *= scratch[k];
                }
                for (int k = deg - 1; k >= 0; --k) {
                    double prod = std::clamp(pre[k] * suffix, -kTanhCap, kTanhCap);
                    lr[base + k] = 2.0 * std::atanh(prod);
                    suffix *= scratch[k];
                }
            }
        }

        // variable updates and hard decision
        int b = 0;
        for (int v = 0; v < n; ++v) {
            double sum = lc[v];
            for (auto [c, e] : code.var_edges(v)) sum += lr[e];
            lq_sum[v] = sum;
            hard[v] = sum < 0.0 ? 1 : 0;  // LQ == 0 decides bit 0
        }
        for (int c = 0; c < m; ++c) {
            int parity = 0;
            for (int v : code.row_adjacency()[c]) parity ^= hard[v];
            b += parity;
        }

        out.syndrome_weight_history.push_back(b);
        out.iterations_used = iter;

        auto support_of = [&] {
            std::vector<int> s;
            for (int v = 0; v < n; ++v)
                if (hard[v]) s.push_back(v);
            return BitPattern(std::move(s), n);
        };
        if (b < out.min_syndrome_weight) {
            out.min_syndrome_weight = b;
            out.min_syndrome_iteration = iter;
            out.min_syndrome_state = support_of();
        }
        if (cfg.capture_history) out.hard_decision_history.push_back(support_of());

        if (b == 0 && cfg.early_exit) {
            out.converged = true;
            out.final_hard_decision = out.min_syndrome_state;
            return out;
        }
        if (iter == cfg.max_iters) {
            out.converged = (b == 0);
            out.final_hard_decision = support_of();
            return out;
        }

        // next variable-to-check messages
        for (int v = 0; v < n; ++v)
            for (auto [c, e] : code.var_edges(v))
                lq[e] = clamp_llr(lq_sum[v] - lr[e], cfg.llr_clamp);
    }
    return out;  // unreachable
}

std::pair<BitPattern, TsClass> extract_trapping_set(const TannerCode& code,
                                                    const DecodeOutcome& outcome) {
    if (outcome.converged) {
        if (outcome.final_hard_decision.empty())
            throw std::logic_error("no error event: decoding converged to the reference codeword");
        // wrong codeword: the event is the codeword itself, class (w_H, 0)
        return {outcome.final_hard_decision,
                classify_pattern(code, outcome.final_hard_decision)};
    }
    return {outcome.min_syndrome_state, classify_pattern(code, outcome.min_syndrome_state)};
}

}  // namespace ef
