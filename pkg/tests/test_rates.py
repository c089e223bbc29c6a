from itertools import product

import numpy as np
import pytest

from chainscan import (
    CapacityError,
    build_transfer_operator,
    estimate_area_rate,
    estimate_run_rate,
    neighborhood,
    perron_root,
    resolve_run_rate,
)


class TestNeighborhood:
    def test_interior(self):
        assert neighborhood({2}, C=1, m=4) == {1, 2, 3}

    def test_boundary_clipping(self):
        assert neighborhood({1}, C=1, m=10) == {1, 2}

    def test_full_set_absorbing(self):
        for C in (1, 2, 5):
            assert neighborhood(set(range(1, 8)), C=C, m=7) == set(range(1, 8))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            neighborhood(set(), C=1, m=4)

    def test_union_of_windows(self):
        assert neighborhood({1, 5}, C=1, m=6) == {1, 2, 4, 5, 6}


class TestTransferOperator:
    def test_single_row_is_p(self):
        op = build_transfer_operator(1, 1, 0.37)
        assert op.entry({1}, {1}) == pytest.approx(0.37)
        assert perron_root(op).value == pytest.approx(0.37, abs=1e-12)

    def test_two_rows_rank_one(self):
        p = 0.3
        op = build_transfer_operator(2, 1, p)
        # all three rows identical: the full neighborhood is reached from any state
        for state in ({1}, {2}, {1, 2}):
            assert op.entry(state, {1, 2}) == pytest.approx(p * p)
            assert op.entry(state, {1}) == pytest.approx(p * (1 - p))
            assert op.entry(state, {2}) == pytest.approx(p * (1 - p))
        assert perron_root(op).value == pytest.approx(1 - (1 - p) ** 2, abs=1e-10)

    def test_entries_outside_neighborhood_vanish(self):
        op = build_transfer_operator(5, 1, 0.2)
        assert op.entry({1}, {4}) == 0.0
        assert op.entry({1}, {1, 2, 3}) == 0.0

    def test_row_sums_strictly_substochastic(self):
        op = build_transfer_operator(4, 1, 0.5)
        dense = op.to_dense()
        sums = dense.sum(axis=1)
        assert (sums > 0).all() and (sums < 1).all()
        # closed form: 1 - (1-p)^{|N(A)|}
        for rows in ({1}, {2, 3}, {1, 2, 3, 4}):
            assert op.row_sum(rows) == pytest.approx(
                sum(op.entry(rows, s) for s in _nonempty_subsets(4)), abs=1e-12
            )

    def test_dense_matches_entry(self):
        op = build_transfer_operator(3, 1, 0.25)
        dense = op.to_dense()
        subsets = _nonempty_subsets(3)
        for a, rows_a in enumerate(subsets):
            for b, rows_b in enumerate(subsets):
                assert dense[a, b] == pytest.approx(op.entry(rows_a, rows_b), abs=1e-15)

    def test_matvec_matches_dense(self, rng):
        op = build_transfer_operator(5, 2, 0.3)
        dense = op.to_dense()
        v = np.zeros(1 << 5)
        v[1:] = rng.random(31)
        out = op.matvec(v)
        assert np.allclose(out[1:], dense @ v[1:], atol=1e-13)

    def test_capacity_guard(self):
        with pytest.raises(CapacityError, match="monte-carlo"):
            build_transfer_operator(21, 1, 0.1)

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            build_transfer_operator(4, 0, 0.1)
        with pytest.raises(ValueError):
            build_transfer_operator(4, 1, 0.0)
        with pytest.raises(ValueError):
            build_transfer_operator(0, 1, 0.1)


def _nonempty_subsets(m):
    out = []
    for mask in range(1, 1 << m):
        out.append({i + 1 for i in range(m) if (mask >> i) & 1})
    return out


def _brute_across_probability(m, n, C, p):
    """Exhaustive enumeration of P(across significant chain) over all 2^(mn)
    significance patterns; the independent oracle for the transfer operator."""
    total = 0.0
    for bits in product((0, 1), repeat=m * n):
        z = np.array(bits, dtype=bool).reshape(m, n)
        reach = z[:, 0].copy()
        for j in range(1, n):
            nxt = np.zeros(m, dtype=bool)
            for i in range(m):
                if z[i, j]:
                    lo, hi = max(0, i - C), min(m - 1, i + C)
                    nxt[i] = reach[lo : hi + 1].any()
            reach = nxt
            if not reach.any():
                break
        if reach.any():
            k = int(z.sum())
            total += p**k * (1 - p) ** (m * n - k)
    return total


class TestAcrossProbabilityOracle:
    @pytest.mark.parametrize("m,n,C,p", [(2, 3, 1, 0.4), (3, 3, 1, 0.3), (3, 4, 1, 0.3),
                                         (2, 4, 2, 0.25)])
    def test_operator_matches_enumeration(self, m, n, C, p):
        op = build_transfer_operator(m, C, p)
        exact = op.across_probability(n)
        brute = _brute_across_probability(m, n, C, p)
        assert exact == pytest.approx(brute, abs=1e-12)


class TestPerronRoot:
    def test_power_iteration_matches_dense_eig(self):
        for m, p in ((3, 0.15), (4, 0.35), (6, 0.5)):
            op = build_transfer_operator(m, 1, p)
            lam = perron_root(op, tol=1e-12).value
            dense = max(abs(np.linalg.eigvals(op.to_dense())))
            assert lam == pytest.approx(dense, abs=1e-9)

    def test_ratio_sequence_converges_to_root(self):
        # P_n / P_{n-1} computed by exact vector iteration approaches the root
        op = build_transfer_operator(4, 1, 0.2)
        lam = perron_root(op).value
        p_prev = op.across_probability(24)
        p_next = op.across_probability(25)
        assert p_next / p_prev == pytest.approx(lam, abs=1e-9)

    def test_method_label_and_provenance(self):
        r = perron_root(build_transfer_operator(3, 2, 0.2))
        assert r.method == "exact-spectral"
        assert (r.m, r.C, r.p) == (3, 2, 0.2)

    def test_bad_tolerance(self):
        with pytest.raises(ValueError):
            perron_root(build_transfer_operator(2, 1, 0.3), tol=0.0)


class TestMonotonicity:
    def test_nondecreasing_in_rows_and_p(self):
        ps = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6)
        ms = (1, 2, 4, 8)
        values = {
            (m, p): perron_root(build_transfer_operator(m, 1, p)).value
            for m in ms
            for p in ps
        }
        for p in ps:
            for lo, hi in zip(ms, ms[1:]):
                assert values[(lo, p)] <= values[(hi, p)]
        for m in ms:
            for lo, hi in zip(ps, ps[1:]):
                assert values[(m, lo)] <= values[(m, hi)]
        # a single row is a sub-lattice: the rate never drops below p
        for (m, p), v in values.items():
            assert v >= p - 1e-12

    def test_permutation_similarity(self, rng):
        op = build_transfer_operator(4, 1, 0.3)
        dense = op.to_dense()
        perm = rng.permutation(dense.shape[0])
        shuffled = dense[np.ix_(perm, perm)]
        lam = max(abs(np.linalg.eigvals(dense)))
        lam_p = max(abs(np.linalg.eigvals(shuffled)))
        assert lam == pytest.approx(lam_p, abs=1e-10)


class TestMonteCarloRate:
    def test_single_row_recovers_p(self):
        est = estimate_run_rate(1, 1, 0.5, n_cols=10**5, trials=50, seed=3)
        assert est.method == "monte-carlo"
        assert abs(est.value - 0.5) <= 0.08

    def test_agrees_with_exact(self):
        for m, p in ((4, 0.2), (4, 0.4), (8, 0.2), (8, 0.4)):
            est = estimate_run_rate(m, 1, p, n_cols=10**5, trials=30, seed=7)
            exact = perron_root(build_transfer_operator(m, 1, p)).value
            assert abs(est.value - exact) <= 0.08, (m, p, est.value, exact)

    def test_reproducible(self):
        a = estimate_run_rate(4, 1, 0.2, n_cols=2000, trials=10, seed=5)
        b = estimate_run_rate(4, 1, 0.2, n_cols=2000, trials=10, seed=5)
        assert a == b

    def test_guards(self):
        with pytest.raises(ValueError):
            estimate_run_rate(4, 1, 0.2, n_cols=500, trials=10, seed=0)
        with pytest.raises(ValueError):
            estimate_run_rate(4, 1, 0.2, n_cols=2000, trials=0, seed=0)

    def test_resolve_switches_method(self):
        exact = resolve_run_rate(4, 1, 0.2)
        assert exact.method == "exact-spectral"
        mc = resolve_run_rate(25, 1, 0.1, n_cols=2000, trials=5, seed=1)
        assert mc.method == "monte-carlo"


class TestAreaRate:
    def test_decreasing_in_p(self):
        hi = estimate_area_rate(0.01, 1, [(120, 120)], trials=12, seed=2)
        lo = estimate_area_rate(0.1, 1, [(120, 120)], trials=12, seed=2)
        assert hi > lo

    def test_size_self_consistency(self):
        a = estimate_area_rate(0.1, 1, [(200, 200)], trials=24, seed=3)
        b = estimate_area_rate(0.1, 1, [(400, 400)], trials=24, seed=3)
        assert abs(a - b) / b < 0.15

    def test_degenerate_single_row_rejected(self):
        with pytest.raises(ValueError, match="m >= 2"):
            estimate_area_rate(0.1, 1, [(1, 500)], trials=4, seed=0)

    def test_supercritical_guard(self):
        with pytest.raises(ValueError, match=r"1/\(2C\+1\)"):
            estimate_area_rate(0.34, 1, [(50, 50)], trials=4, seed=0)

    def test_sizes_must_grow(self):
        with pytest.raises(ValueError, match="increase"):
            estimate_area_rate(0.1, 1, [(100, 100), (50, 50)], trials=4, seed=0)
