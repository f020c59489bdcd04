#ifndef ERRORFLOOR_BOUNDARY_HPP
#define ERRORFLOOR_BOUNDARY_HPP

#include <functional>

#include "errorfloor/search.hpp"

namespace ef {

struct BoundaryProbe {
    double l_min = 1.0;
    double l_max = 3.5;
    int p = 10;

    double resolution() const { return (l_max - l_min) / std::pow(2.0, p); }
    void validate() const;
};

struct BoundaryResult {
    double epsilon_star = 0.0;  // threshold magnitude, within resolution
    double d_e2 = 0.0;          // a * epsilon_star^2
    bool bracketed = false;     // endpoints behave (correct at l_min, error at l_max)
    int decodings = 0;          // error-oracle invocations, bracket checks included
};

// Bisection on a monotone error predicate of the impulse magnitude:
// is_error(eps) false -> move the lower bound up, true -> move it down.
// Exactly p predicate calls after the two bracket checks.
BoundaryResult bisect_threshold(const std::function<bool(double)>& is_error,
                                const BoundaryProbe& probe);

// Squared Euclidean impulse distance of a weight-a pattern at threshold
// magnitude eps: a * eps^2.
double squared_distance(int ts_weight, double epsilon_star);

// Deterministic probe toward one trapping set: input 1 - eps on the TS bits,
// exactly 1 elsewhere; error means any outcome other than the all-zeros
// codeword.  d_e2 uses a = |ts|.
BoundaryResult probe_boundary(const TannerCode& code, const BitPattern& ts,
                              const BoundaryProbe& probe, const DecoderConfig& cfg,
                              const ChannelModel& channel);

// Per-class dominance row, ordered by class-minimum d_e2.
struct DominanceRow {
    int a = 0, b = 0;
    long multiplicity = 0;
    double mean_d_e2 = 0.0;   // over bracketed members only
    double min_d_e2 = 0.0;
    long elementary = 0;
    long non_bracketed = 0;
};

// Fills d_e2/epsilon_star for every entry and returns the per-class table.
std::vector<DominanceRow> rank_catalog(const TannerCode& code, TsCatalog& catalog,
                                       const BoundaryProbe& probe, const DecoderConfig& cfg,
                                       const ChannelModel& channel, int threads = 1);

// Q(sqrt(2 * d_e2 * Es/No)); order-of-magnitude proxy for the event's
// probability contribution.
double q_contribution(double d_e2, const ChannelModel& channel);

double q_function(double x);

// Entries with d_e2 below the threshold, or the cap smallest, whichever is
// configured (set the unused criterion negative).  Ties break on canonical
// support order.  Non-bracketed entries are never selected.
std::vector<const TsRecord*> select_shift_points(const TsCatalog& catalog, double d_e2_threshold,
                                                 long cap);

}  // namespace ef

#endif
