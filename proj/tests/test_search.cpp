#include <set>

#include "doctest.h"
#include "errorfloor/search.hpp"
#include "test_utils.hpp"

using namespace ef;
using namespace ef::testing;

namespace {

SearchParams default_params() {
    SearchParams p;
    p.epsilon1 = 3.0;
    p.gamma = 0.6;
    p.eb_no_db = 6.0;
    return p;
}

long count_impulses(const TannerCode& code, int root, const SearchParams& p) {
    long count = 0;
    enumerate_impulses(code, root, p, [&](const ImpulsePattern&) { count++; });
    return count;
}

}  // namespace

TEST_CASE("search parameter validation enforces the magnitude ordering") {
    SearchParams p = default_params();
    CHECK_NOTHROW(p.validate());

    p.gamma = 1.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = default_params();
    p.epsilon1 = 0.2;  // must exceed 1 - gamma = 0.4
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);

    p = default_params();
    p.epsilon2 = 3.5;  // must stay below epsilon1
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.epsilon2 = 0.3;  // must exceed 1 - gamma
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.epsilon2 = 1.0;
    CHECK_NOTHROW(p.validate());
    p.tree_depth = 2;  // the extra magnitude only applies to depth-1 trees
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);

    p = default_params();
    p.v_num = -1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = default_params();
    p.tree_depth = 3;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("depth-1 impulse count per root is the branch product") {
    auto code = generate_girth6(48, 3, 6, 3);
    REQUIRE(code.has_value());
    SearchParams p = default_params();

    for (int root : {0, 5, 30}) {
        auto impulses = collect_impulses(*code, root, p);
        CHECK(impulses.size() == 125);  // (d_c - 1)^{d_v}
        std::set<std::vector<int>> distinct;
        for (const auto& imp : impulses) {
            CHECK(imp.root == root);
            REQUIRE(imp.tier01_support.size() == 4);  // root + one per branch
            CHECK(std::binary_search(imp.tier01_support.begin(), imp.tier01_support.end(), root));
            CHECK(imp.tier2_support.empty());
            // exactly one chosen variable per root check
            for (int c : code->col_adjacency()[root]) {
                int hits = 0;
                for (int v : code->row_adjacency()[c])
                    if (v != root &&
                        std::binary_search(imp.tier01_support.begin(), imp.tier01_support.end(), v))
                        hits++;
                CHECK(hits == 1);
            }
            distinct.insert(imp.tier01_support);
        }
        CHECK(distinct.size() == 125);
    }
}

TEST_CASE("partial branch subsets shrink the enumeration combinatorially") {
    auto code = generate_girth6(48, 3, 6, 3);
    REQUIRE(code.has_value());
    SearchParams p = default_params();
    p.v_num = 2;
    auto impulses = collect_impulses(*code, 0, p);
    CHECK(impulses.size() == 3 * 25);  // C(3,2) * 5^2
    for (const auto& imp : impulses) CHECK(imp.tier01_support.size() == 3);

    p.v_num = 1;
    CHECK(collect_impulses(*code, 0, p).size() == 15);
    p.v_num = 4;  // more branches than the root has
    CHECK(collect_impulses(*code, 0, p).empty());
}

TEST_CASE("depth-2 impulses extend every chosen branch") {
    auto code = generate_girth6(96, 3, 6, 9);
    REQUIRE(code.has_value());
    SearchParams p = default_params();
    p.tree_depth = 2;
    CHECK(count_impulses(*code, 0, p) == 5L * 5 * 5 * 25 * 25 * 25);  // 5^9 for a {3,6} root
    // spot-check the supports: ten bits unless tiers collide
    long seen = 0;
    enumerate_impulses(*code, 0, p, [&](const ImpulsePattern& imp) {
        if (seen++ < 20) CHECK(imp.tier01_support.size() <= 10);
    });
}

TEST_CASE("the secondary magnitude covers the tier below the chosen branches") {
    auto code = generate_girth6(96, 3, 6, 9);
    REQUIRE(code.has_value());
    SearchParams p = default_params();
    p.epsilon2 = 1.0;
    auto impulses = collect_impulses(*code, 0, p);
    CHECK(impulses.size() == 125);  // unchanged by the secondary tier
    for (const auto& imp : impulses) {
        CHECK(!imp.tier2_support.empty());
        CHECK(imp.tier2_support.size() <= 30);  // d_v (d_v - 1) (d_c - 1)
        std::vector<int> overlap;
        std::set_intersection(imp.tier01_support.begin(), imp.tier01_support.end(),
                              imp.tier2_support.begin(), imp.tier2_support.end(),
                              std::back_inserter(overlap));
        CHECK(overlap.empty());
    }
}

TEST_CASE("impulse vectors place the three magnitudes correctly") {
    auto code = generate_girth6(48, 3, 6, 3);
    REQUIRE(code.has_value());
    SearchParams p = default_params();
    p.epsilon2 = 1.2;
    auto impulses = collect_impulses(*code, 7, p);
    REQUIRE(!impulses.empty());
    const auto& imp = impulses[0];
    auto y = impulse_to_received(*code, imp, p);
    for (int v = 0; v < 48; ++v) {
        if (std::binary_search(imp.tier01_support.begin(), imp.tier01_support.end(), v))
            CHECK(y[v] == doctest::Approx(1.0 - 3.0));
        else if (std::binary_search(imp.tier2_support.begin(), imp.tier2_support.end(), v))
            CHECK(y[v] == doctest::Approx(1.0 - 1.2));
        else
            CHECK(y[v] == doctest::Approx(0.6));
    }
}

TEST_CASE("per-degree scaling overrides apply to the untouched bits") {
    TannerCode code = make_code(6, 3, {{0, 1, 2}, {2, 3, 4}, {0, 4, 5}});
    SearchParams p = default_params();
    p.gamma_by_degree[1] = 0.9;
    auto roots = searched_roots(code, p);
    REQUIRE(!roots.empty());
    int deg1_root = -1;
    for (int r : roots)
        if (code.var_degree(r) == 1) deg1_root = r;
    REQUIRE(deg1_root >= 0);
    auto impulses = collect_impulses(code, deg1_root, p);
    REQUIRE(!impulses.empty());
    auto y = impulse_to_received(code, impulses[0], p);
    bool saw_gamma = false;
    for (int v = 0; v < 6; ++v) {
        if (!std::binary_search(impulses[0].tier01_support.begin(),
                                impulses[0].tier01_support.end(), v)) {
            CHECK(y[v] == doctest::Approx(0.9));
            saw_gamma = true;
        }
    }
    CHECK(saw_gamma);
}

TEST_CASE("regular codes search every root, irregular only the light degrees") {
    auto reg = generate_girth6(48, 3, 6, 3);
    REQUIRE(reg.has_value());
    SearchParams p = default_params();
    CHECK(searched_roots(*reg, p).size() == 48);

    // degrees 1, 2 and 3 present; cutoff 2 keeps degrees 1 and 2
    TannerCode irr = make_code(6, 3, {{0, 1, 2, 5}, {2, 3, 4, 5}, {0, 4, 5}});
    auto roots = searched_roots(irr, p);
    for (int r : roots) CHECK(irr.var_degree(r) <= 2);
    p.degree_cutoff = 1;
    for (int r : searched_roots(irr, p)) CHECK(irr.var_degree(r) == 1);
}

TEST_CASE("the predicted decode count matches the enumeration exactly") {
    SearchParams p = default_params();

    auto reg = generate_girth6(48, 3, 6, 3);
    REQUIRE(reg.has_value());
    long enumerated = 0;
    for (int root : searched_roots(*reg, p)) enumerated += count_impulses(*reg, root, p);
    CHECK(search_cost(*reg, p) == enumerated);
    CHECK(search_cost(*reg, p) == 48 * 125);

    p.v_num = 2;
    enumerated = 0;
    for (int root : searched_roots(*reg, p)) enumerated += count_impulses(*reg, root, p);
    CHECK(search_cost(*reg, p) == enumerated);

    // irregular, possibly girth-4 code: the count still matches
    TannerCode irr = random_small_code(12, 6, 123);
    p = default_params();
    enumerated = 0;
    for (int root : searched_roots(irr, p)) enumerated += count_impulses(irr, root, p);
    CHECK(search_cost(irr, p) == enumerated);

    p.tree_depth = 2;
    enumerated = 0;
    for (int root : searched_roots(irr, p)) enumerated += count_impulses(irr, root, p);
    CHECK(search_cost(irr, p) == enumerated);
}

TEST_CASE("search results are identical across thread counts") {
    auto code = generate_girth6(28, 3, 6, 17);
    REQUIRE(code.has_value());
    SearchParams p = default_params();
    DecoderConfig cfg;
    cfg.max_iters = 20;

    TsCatalog one = run_search(*code, p, cfg, 1);
    TsCatalog four = run_search(*code, p, cfg, 4);
    CHECK(one.decodings == four.decodings);
    CHECK(one.decodings == search_cost(*code, p));
    CHECK(one.mean_iterations == four.mean_iterations);
    REQUIRE(one.entries.size() == four.entries.size());
    auto it1 = one.entries.begin();
    auto it4 = four.entries.begin();
    for (; it1 != one.entries.end(); ++it1, ++it4) {
        CHECK(it1->first == it4->first);
        CHECK(it1->second.discovery_count == it4->second.discovery_count);
        CHECK(it1->second.first_root == it4->second.first_root);
    }
}

TEST_CASE("catalog entries carry their recomputed classification") {
    auto code = generate_girth6(28, 3, 6, 17);
    REQUIRE(code.has_value());
    SearchParams p = default_params();
    DecoderConfig cfg;
    cfg.max_iters = 20;
    TsCatalog catalog = run_search(*code, p, cfg, 1);
    for (const auto& [key, rec] : catalog.entries) {
        TsClass want = oracle_classify(*code, key);
        CHECK(rec.cls.a == want.a);
        CHECK(rec.cls.b == want.b);
        CHECK(rec.cls.elementary == want.elementary);
        CHECK(rec.discovery_count > 0);
    }
}
