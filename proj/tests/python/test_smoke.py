"""Smoke test for the python extension: exercises the main operations on a
small hand-built code and checks a few invariants end to end."""

import math
import sys

import _errorfloor as ef


def build_code():
    # (3,6)-regular toy: 12 variables, 6 checks
    rows = [
        [0, 1, 2, 3, 4, 5],
        [0, 1, 6, 7, 8, 9],
        [2, 3, 6, 7, 10, 11],
        [4, 5, 8, 9, 10, 11],
        [0, 2, 4, 6, 8, 10],
        [1, 3, 5, 7, 9, 11],
    ]
    col = [[] for _ in range(12)]
    for c, vs in enumerate(rows):
        for v in vs:
            col[v].append(c)
    return ef.TannerCode(12, 6, col)


def main():
    code = build_code()
    assert code.n == 12 and code.m == 6 and code.k == 6
    assert code.regular()
    assert code.girth() >= 4

    text = ef.write_alist(code)
    back = ef.parse_alist(text)
    assert back.col_adjacency() == code.col_adjacency()

    cls = ef.classify_pattern(code, ef.BitPattern([0, 1], 12))
    assert cls.a == 2
    checks, weight = ef.syndrome(code, ef.BitPattern([0], 12))
    assert weight == 3

    channel = ef.ChannelModel(3.0, 0.5)
    cfg = ef.DecoderConfig()
    out = ef.decode(code, [1.0] * 12, channel, cfg)
    assert out.converged and out.iterations_used == 1
    assert len(out.final_hard_decision) == 0

    params = ef.SearchParams()
    params.epsilon1 = 3.0
    params.gamma = 0.6
    cost = ef.search_cost(code, params)
    catalog = ef.run_search(code, params, cfg)
    assert catalog.decodings == cost

    probe = ef.BoundaryProbe()
    assert abs(probe.resolution() - 2.5 / 1024.0) < 1e-15
    assert ef.squared_distance(10, 1.5) == 22.5
    table = ef.rank_catalog(code, catalog, probe, cfg, channel)
    assert sum(row.multiplicity for row in table) == len(catalog)

    assert abs(ef.q_function(0.0) - 0.5) < 1e-15

    noise = ef.NoiseSource(7)
    g1 = noise.standard_normal(3, 8)
    g2 = noise.standard_normal(3, 8)
    assert g1 == g2

    mc = ef.mc_estimate(code, channel, 2000, cfg, noise)
    assert 0.0 <= mc.p_f_hat <= 1.0
    assert mc.ci_low <= mc.p_f_hat <= mc.ci_high

    lo, hi = ef.binomial_ci(0, 100)
    assert lo == 0.0 and abs(hi - (1.0 - 0.025 ** 0.01)) < 1e-9

    try:
        density = ef.make_density(code, channel, catalog, cap=3)
    except RuntimeError:
        # no bracketed entries on this toy; fall back to a hand-built density
        density = ef.ISDensity(12, channel.sigma2, [[0, 1]])
    est = ef.is_estimate(code, channel, density, 500, cfg, noise)
    assert est.trials == 500 * density.centers()
    assert est.v_hat >= 0.0
    mean, se = ef.mean_weight(noise, density, 2000)
    assert abs(mean - 1.0) <= 6.0 * max(se, 1e-9)

    print("smoke test passed")


if __name__ == "__main__":
    sys.exit(main())
