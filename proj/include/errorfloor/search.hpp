#ifndef ERRORFLOOR_SEARCH_HPP
#define ERRORFLOOR_SEARCH_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>

#include "errorfloor/decoder.hpp"

namespace ef {

// Step-1 impulse search parameters.  epsilon2 < 0 means "unused" (only the
// tier-0/1 impulse is applied).  v_num = 0 means the full d_v branches of
// each root.  gamma_by_degree, when non-empty, overrides gamma per root
// degree class (irregular codes).
struct SearchParams {
    double epsilon1 = 3.0;
    double epsilon2 = -1.0;
    double gamma = 0.6;
    double eb_no_db = 6.0;
    int v_num = 0;
    int tree_depth = 1;
    int degree_cutoff = 2;  // irregular codes: search the this-many smallest degree classes
    std::map<int, double> gamma_by_degree;

    bool epsilon2_used() const { return epsilon2 >= 0.0; }
    double gamma_for_degree(int dv) const {
        auto it = gamma_by_degree.find(dv);
        return it == gamma_by_degree.end() ? gamma : it->second;
    }
    void validate() const;
};

struct ImpulsePattern {
    int root = 0;
    std::vector<int> tier01_support;  // sorted, de-duplicated, includes root
    std::vector<int> tier2_support;   // sorted, disjoint from tier01
    int n = 0;
};

struct TsRecord {
    BitPattern support;
    TsClass cls;
    long discovery_count = 0;
    int first_root = -1;
    // filled by the boundary module
    double d_e2 = std::numeric_limits<double>::quiet_NaN();
    double epsilon_star = std::numeric_limits<double>::quiet_NaN();
    bool bracketed = false;
    bool probed = false;
};

struct TsCatalog {
    std::map<std::vector<int>, TsRecord> entries;  // keyed by canonical support
    SearchParams params;
    long decodings = 0;
    double mean_iterations = 0.0;
    double wall_seconds = 0.0;
};

// Yields every impulse for one root.  Depth 1: each v_num-subset of the
// root's branches crossed with one variable per chosen branch.  Depth 2
// additionally chooses one variable per non-tree check branch of each chosen
// tier-1 variable.  When epsilon2 is in use (depth 1), tier2_support covers
// the variables below the chosen tier-1 nodes.
void enumerate_impulses(const TannerCode& code, int root, const SearchParams& params,
                        const std::function<void(const ImpulsePattern&)>& sink);

std::vector<ImpulsePattern> collect_impulses(const TannerCode& code, int root,
                                             const SearchParams& params);

std::vector<double> impulse_to_received(const TannerCode& code, const ImpulsePattern& pattern,
                                        const SearchParams& params);

// Number of decodings run_search will perform (exact, per-branch products).
long search_cost(const TannerCode& code, const SearchParams& params);

// Roots actually searched: all of them for regular codes, the smallest
// degree_cutoff degree classes for irregular ones, in search_order.
std::vector<int> searched_roots(const TannerCode& code, const SearchParams& params);

TsCatalog run_search(const TannerCode& code, const SearchParams& params,
                     const DecoderConfig& cfg, int threads = 1);

}  // namespace ef

#endif
