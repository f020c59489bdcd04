#ifndef EF_TEST_UTILS_HPP
#define EF_TEST_UTILS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "errorfloor/code.hpp"

namespace ef::testing {

// Build a code from per-check variable lists (0-based).
TannerCode make_code(int n, int m, const std::vector<std::vector<int>>& rows);

// Progressive edge-growth style construction of a (dv,dc)-regular graph:
// each new edge goes to the check farthest from the variable in the current
// graph (unreachable checks first), capped at degree dc, ties broken by
// smallest degree then a seeded shuffle.  Requires n*dv == m*dc.
TannerCode generate_regular(int n, int dv, int dc, std::uint64_t seed);

// Retry generate_regular over seeds until the girth is at least 6.
std::optional<TannerCode> generate_girth6(int n, int dv, int dc, std::uint64_t seed,
                                          int tries = 50);

// Random sparse code with column weights mostly 2 or 3; empty checks are
// patched with an extra random edge.
TannerCode random_small_code(int n, int m, std::uint64_t seed);

// Classification recomputed from a dense 0/1 matrix, independent of the
// library's adjacency-based path.
TsClass oracle_classify(const TannerCode& code, const std::vector<int>& support);

// Girth via edge removal: min over edges (v,c) of shortest v..c path without
// that edge, plus one.  Returns 0 for forests.
int oracle_girth(const TannerCode& code);

// A nonzero GF(2) nullspace vector of H, empty if the code is trivial.
std::vector<int> find_codeword(const TannerCode& code);

}  // namespace ef::testing

#endif
