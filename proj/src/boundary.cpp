#include "errorfloor/boundary.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace ef {

void BoundaryProbe::validate() const {
    if (!(l_min < l_max)) throw std::invalid_argument("l_min must be below l_max");
    if (p < 1) throw std::invalid_argument("p must be >= 1");
}

BoundaryResult bisect_threshold(const std::function<bool(double)>& is_error,
                                const BoundaryProbe& probe) {
    probe.validate();
    BoundaryResult res;

    if (is_error(probe.l_min)) {
        res.decodings = 1;
        res.epsilon_star = probe.l_min;
        res.bracketed = false;
        return res;
    }
    if (!is_error(probe.l_max)) {
        res.decodings = 2;
        res.epsilon_star = probe.l_max;
        res.bracketed = false;
        return res;
    }
    res.decodings = 2;
    res.bracketed = true;

    const double span = probe.l_max - probe.l_min;
    double eps = probe.l_min + span / 2.0;
    for (int i = 1; i <= probe.p; ++i) {
        bool err = is_error(eps);
        res.decodings++;
        if (i == probe.p) break;
        double step = span / std::pow(2.0, i + 1);
        eps += err ? -step : step;
    }
    res.epsilon_star = eps;
    return res;
}

double squared_distance(int ts_weight, double epsilon_star) {
    if (ts_weight < 1) throw std::invalid_argument("pattern weight must be >= 1");
    return ts_weight * epsilon_star * epsilon_star;
}

BoundaryResult probe_boundary(const TannerCode& code, const BitPattern& ts,
                              const BoundaryProbe& probe, const DecoderConfig& cfg,
                              const ChannelModel& channel) {
    if (ts.empty()) throw std::invalid_argument("cannot probe an empty pattern");
    if (ts.n != code.n()) throw std::invalid_argument("pattern length mismatch");

    std::vector<double> y(code.n(), 1.0);
    auto is_error = [&](double eps) {
        for (int v : ts.support) y[v] = 1.0 - eps;
        auto outcome = decode(code, y, channel, cfg);
        for (int v : ts.support) y[v] = 1.0;
        return !(outcome.converged && outcome.final_hard_decision.empty());
    };
    BoundaryResult res = bisect_threshold(is_error, probe);
    res.d_e2 = squared_distance(ts.weight(), res.epsilon_star);
    return res;
}

std::vector<DominanceRow> rank_catalog(const TannerCode& code, TsCatalog& catalog,
                                       const BoundaryProbe& probe, const DecoderConfig& cfg,
                                       const ChannelModel& channel, int threads) {
    std::vector<TsRecord*> recs;
    for (auto& [key, rec] : catalog.entries) recs.push_back(&rec);

    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= recs.size()) return;
            auto res = probe_boundary(code, recs[i]->support, probe, cfg, channel);
            recs[i]->epsilon_star = res.epsilon_star;
            recs[i]->d_e2 = res.d_e2;
            recs[i]->bracketed = res.bracketed;
            recs[i]->probed = true;
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::map<std::pair<int, int>, DominanceRow> classes;
    for (auto* rec : recs) {
        auto& row = classes[{rec->cls.a, rec->cls.b}];
        if (row.multiplicity == 0) {
            row.a = rec->cls.a;
            row.b = rec->cls.b;
            row.min_d_e2 = std::numeric_limits<double>::infinity();
        }
        row.multiplicity++;
        if (rec->cls.elementary) row.elementary++;
        if (rec->bracketed) {
            row.mean_d_e2 += rec->d_e2;
            row.min_d_e2 = std::min(row.min_d_e2, rec->d_e2);
        } else {
            row.non_bracketed++;
        }
    }
    std::vector<DominanceRow> table;
    for (auto& [key, row] : classes) {
        long bracketed_count = row.multiplicity - row.non_bracketed;
        if (bracketed_count > 0) row.mean_d_e2 /= bracketed_count;
        table.push_back(row);
    }
    std::sort(table.begin(), table.end(), [](const DominanceRow& x, const DominanceRow& y) {
        if (x.min_d_e2 != y.min_d_e2) return x.min_d_e2 < y.min_d_e2;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });
    return table;
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double q_contribution(double d_e2, const ChannelModel& channel) {
    if (d_e2 < 0.0) throw std::invalid_argument("d_e2 must be >= 0");
    return q_function(std::sqrt(2.0 * d_e2 * channel.es_no()));
}

std::vector<const TsRecord*> select_shift_points(const TsCatalog& catalog, double d_e2_threshold,
                                                 long cap) {
    std::vector<const TsRecord*> probed;
    for (const auto& [key, rec] : catalog.entries)
        if (rec.probed && rec.bracketed) probed.push_back(&rec);

    std::vector<const TsRecord*> selected;
    if (d_e2_threshold >= 0.0) {
        for (auto* rec : probed)
            if (rec->d_e2 < d_e2_threshold) selected.push_back(rec);
    } else if (cap > 0) {
        selected = probed;
        std::stable_sort(selected.begin(), selected.end(), [](const TsRecord* x, const TsRecord* y) {
            if (x->d_e2 != y->d_e2) return x->d_e2 < y->d_e2;
            return x->support.support < y->support.support;  // deterministic tie-break
        });
        if (static_cast<long>(selected.size()) > cap) selected.resize(cap);
    } else {
        throw std::invalid_argument("either a d_e2 threshold or a cap must be given");
    }
    if (selected.empty())
        throw std::runtime_error("no shift points selected; the biasing density needs >= 1 center");
    return selected;
}

}  // namespace ef
