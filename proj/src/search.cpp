#include "errorfloor/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <numeric>
#include <set>
#include <thread>

namespace ef {

void SearchParams::validate() const {
    if (gamma <= 0.0 || gamma > 1.0) throw std::invalid_argument("gamma must be in (0,1]");
    if (epsilon2_used()) {
        if (!(epsilon1 > epsilon2)) throw std::invalid_argument("epsilon1 must exceed epsilon2");
        if (!(epsilon2 > 1.0 - gamma))
            throw std::invalid_argument("epsilon2 must exceed 1 - gamma");
        if (tree_depth == 2)
            throw std::invalid_argument("epsilon2 applies to depth-1 trees only");
    } else if (!(epsilon1 > 1.0 - gamma)) {
        throw std::invalid_argument("epsilon1 must exceed 1 - gamma");
    }
    for (auto [deg, g] : gamma_by_degree)
        if (g <= 0.0 || g > 1.0) throw std::invalid_argument("gamma_by_degree value out of (0,1]");
    if (tree_depth != 1 && tree_depth != 2) throw std::invalid_argument("tree_depth must be 1 or 2");
    if (v_num < 0) throw std::invalid_argument("v_num must be >= 0");
    if (degree_cutoff < 1) throw std::invalid_argument("degree_cutoff must be >= 1");
}

namespace {

// Offset of each tier-1 branch within tier1_flat.
std::vector<int> branch_offsets(const NeighborTree& tree) {
    std::vector<int> off;
    int acc = 0;
    for (const auto& b : tree.tier1_sets) {
        off.push_back(acc);
        acc += static_cast<int>(b.size());
    }
    return off;
}

void for_each_subset(int total, int pick, std::vector<int>& cur, int start,
                     const std::function<void(const std::vector<int>&)>& fn) {
    if (static_cast<int>(cur.size()) == pick) {
        fn(cur);
        return;
    }
    for (int i = start; i <= total - (pick - static_cast<int>(cur.size())); ++i) {
        cur.push_back(i);
        for_each_subset(total, pick, cur, i + 1, fn);
        cur.pop_back();
    }
}

void cartesian(const std::vector<const std::vector<int>*>& slots, size_t idx,
               std::vector<int>& cur, const std::function<void(const std::vector<int>&)>& fn) {
    if (idx == slots.size()) {
        fn(cur);
        return;
    }
    for (int v : *slots[idx]) {
        cur.push_back(v);
        cartesian(slots, idx + 1, cur, fn);
        cur.pop_back();
    }
}

std::vector<int> sorted_unique(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace

void enumerate_impulses(const TannerCode& code, int root, const SearchParams& params,
                        const std::function<void(const ImpulsePattern&)>& sink) {
    params.validate();
    const bool need_depth2 = params.tree_depth == 2 || params.epsilon2_used();
    const NeighborTree tree = build_neighbor_tree(code, root, need_depth2 ? 2 : 1);
    const auto offsets = branch_offsets(tree);
    const int num_branches = static_cast<int>(tree.tier1_sets.size());
    const int pick = params.v_num == 0 ? num_branches : params.v_num;
    if (pick > num_branches) return;  // C(d_v, v_num) = 0

    std::vector<int> subset;
    for_each_subset(num_branches, pick, subset, 0, [&](const std::vector<int>& branches) {
        std::vector<const std::vector<int>*> slots;
        for (int b : branches) slots.push_back(&tree.tier1_sets[b]);
        std::vector<int> choice;
        cartesian(slots, 0, choice, [&](const std::vector<int>& tier1_choice) {
            // flat positions of the chosen tier-1 variables
            std::vector<int> flat_pos;
            for (size_t s = 0; s < branches.size(); ++s) {
                const auto& branch = tree.tier1_sets[branches[s]];
                int local = static_cast<int>(
                    std::find(branch.begin(), branch.end(), tier1_choice[s]) - branch.begin());
                flat_pos.push_back(offsets[branches[s]] + local);
            }

            ImpulsePattern base;
            base.root = root;
            base.n = code.n();
            std::vector<int> tier01 = tier1_choice;
            tier01.push_back(root);

            if (params.tree_depth == 1) {
                base.tier01_support = sorted_unique(tier01);
                if (params.epsilon2_used()) {
                    std::vector<int> tier2;
                    for (int pos : flat_pos)
                        for (const auto& b2 : tree.tier2_branches[pos])
                            tier2.insert(tier2.end(), b2.begin(), b2.end());
                    tier2 = sorted_unique(tier2);
                    std::vector<int> diff;
                    std::set_difference(tier2.begin(), tier2.end(), base.tier01_support.begin(),
                                        base.tier01_support.end(), std::back_inserter(diff));
                    base.tier2_support = std::move(diff);
                }
                sink(base);
            } else {
                // depth 2: one more variable per non-tree check branch of each
                // chosen tier-1 node; the whole set receives epsilon1
                std::vector<const std::vector<int>*> slots2;
                for (int pos : flat_pos)
                    for (const auto& b2 : tree.tier2_branches[pos]) slots2.push_back(&b2);
                std::vector<int> choice2;
                cartesian(slots2, 0, choice2, [&](const std::vector<int>& tier2_choice) {
                    ImpulsePattern p = base;
                    std::vector<int> all = tier01;
                    all.insert(all.end(), tier2_choice.begin(), tier2_choice.end());
                    p.tier01_support = sorted_unique(all);
                    sink(p);
                });
            }
        });
    });
}

std::vector<ImpulsePattern> collect_impulses(const TannerCode& code, int root,
                                             const SearchParams& params) {
    std::vector<ImpulsePattern> out;
    enumerate_impulses(code, root, params, [&](const ImpulsePattern& p) { out.push_back(p); });
    return out;
}

std::vector<double> impulse_to_received(const TannerCode& code, const ImpulsePattern& pattern,
                                        const SearchParams& params) {
    const double gamma = params.gamma_for_degree(code.var_degree(pattern.root));
    std::vector<double> y(pattern.n, gamma);
    for (int v : pattern.tier2_support) y[v] = 1.0 - params.epsilon2;
    for (int v : pattern.tier01_support) y[v] = 1.0 - params.epsilon1;
    return y;
}

std::vector<int> searched_roots(const TannerCode& code, const SearchParams& params) {
    auto order = search_order(code);
    if (code.dv_profile().size() <= 1) return order;
    std::set<int> kept_degrees;
    for (auto [deg, cnt] : code.dv_profile()) {
        if (static_cast<int>(kept_degrees.size()) >= params.degree_cutoff) break;
        kept_degrees.insert(deg);
    }
    std::vector<int> roots;
    for (int v : order)
        if (kept_degrees.count(code.var_degree(v))) roots.push_back(v);
    return roots;
}

long search_cost(const TannerCode& code, const SearchParams& params) {
    params.validate();
    long total = 0;
    for (int root : searched_roots(code, params)) {
        const NeighborTree tree = build_neighbor_tree(code, root, params.tree_depth);
        const auto offsets = branch_offsets(tree);
        const int num_branches = static_cast<int>(tree.tier1_sets.size());
        const int pick = params.v_num == 0 ? num_branches : params.v_num;
        if (pick > num_branches) continue;

        // weight of choosing variable v in a branch: 1 at depth 1, product of
        // its tier-2 branch sizes at depth 2
        std::vector<long> branch_weight(num_branches, 0);
        for (int b = 0; b < num_branches; ++b) {
            long w = 0;
            for (size_t i = 0; i < tree.tier1_sets[b].size(); ++i) {
                if (params.tree_depth == 1) {
                    w += 1;
                } else {
                    long prod = 1;
                    for (const auto& b2 : tree.tier2_branches[offsets[b] + i])
                        prod *= static_cast<long>(b2.size());
                    w += prod;
                }
            }
            branch_weight[b] = w;
        }
        std::vector<int> cur;
        for_each_subset(num_branches, pick, cur, 0, [&](const std::vector<int>& subset) {
            long prod = 1;
            for (int b : subset) prod *= branch_weight[b];
            total += prod;
        });
    }
    return total;
}

namespace {

struct RootResult {
    std::map<std::vector<int>, TsRecord> entries;
    long decodings = 0;
    long iterations = 0;
};

}  // namespace

TsCatalog run_search(const TannerCode& code, const SearchParams& params,
                     const DecoderConfig& cfg, int threads) {
    params.validate();
    const auto start = std::chrono::steady_clock::now();
    const auto roots = searched_roots(code, params);
    const double rate = static_cast<double>(code.k()) / code.n();
    const ChannelModel channel(params.eb_no_db, rate);

    std::vector<RootResult> results(roots.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= roots.size()) return;
            const int root = roots[i];
            RootResult& res = results[i];
            enumerate_impulses(code, root, params, [&](const ImpulsePattern& p) {
                auto y = impulse_to_received(code, p, params);
                auto outcome = decode(code, y, channel, cfg);
                res.decodings++;
                res.iterations += outcome.iterations_used;
                if (outcome.converged && outcome.final_hard_decision.empty()) return;
                auto [support, cls] = extract_trapping_set(code, outcome);
                auto& rec = res.entries[support.support];
                if (rec.discovery_count == 0) {
                    rec.support = support;
                    rec.cls = cls;
                    rec.first_root = root;
                }
                rec.discovery_count++;
            });
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    TsCatalog catalog;
    catalog.params = params;
    long iterations = 0;
    for (size_t i = 0; i < results.size(); ++i) {
        catalog.decodings += results[i].decodings;
        iterations += results[i].iterations;
        for (auto& [key, rec] : results[i].entries) {
            auto it = catalog.entries.find(key);
            if (it == catalog.entries.end()) {
                catalog.entries.emplace(key, rec);
            } else {
                it->second.discovery_count += rec.discovery_count;
            }
        }
    }
    catalog.mean_iterations =
        catalog.decodings ? static_cast<double>(iterations) / catalog.decodings : 0.0;
    catalog.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return catalog;
}

}  // namespace ef
