import numpy as np
import pytest

from twisted_cheeger import mathcore as mc
from twisted_cheeger import optimize as opt


def kinds(points):
    return [p.kind for p in points]


class TestBracket:
    def test_f_above_one_beyond(self):
        X = opt.bracket_xmax(2, 1.9)
        assert np.isfinite(X)
        xs = np.linspace(X, 10 * X, 1000)
        assert np.all(mc.f(2, 1.9, xs) > 1)

    def test_growth_rate_positive(self):
        for n in range(2, 15):
            for q in np.linspace(1, n / (n - 1), 50, endpoint=False):
                assert mc.growth_rate(n, q) > 0

    def test_bounds_stationary_points_of_dense_scan(self):
        n, q = 3, 13 / 9
        X = opt.bracket_xmax(n, q)
        xs = np.linspace(1e-6, 5 * X, 10**5)
        s = np.sign(mc.A_scaled(n, q, xs))
        changes = xs[1:][s[1:] != s[:-1]]
        assert changes.size >= 1
        assert np.all(changes < X)


class TestStationaryPoints:
    def test_n2_below_threshold(self):
        pts = opt.stationary_points(2, 1.5)
        assert kinds(pts) == ["min"] and pts[0].x == 0.0

    def test_n2_above_threshold(self):
        pts = opt.stationary_points(2, 1.9)
        assert kinds(pts) == ["max", "min"]
        assert pts[1].x > 0

    def test_n3_three_points(self):
        # between the fold and 13/9: origin min, interior max, interior min
        for q in (1.4425, 1.443, 1.444):
            pts = opt.stationary_points(3, q)
            assert kinds(pts) == ["min", "max", "min"]
            assert 0 < pts[1].x < pts[2].x

    def test_n3_q140_single_point(self):
        # dense-scan oracle: A > 0 on (0, 40] for n = 3, q = 1.40
        xs = np.linspace(1e-6, 40, 10**6)
        assert np.all(mc.A(3, 1.40, xs) > 0)
        assert kinds(opt.stationary_points(3, 1.40)) == ["min"]

    def test_roots_are_zeros_of_A(self):
        for n, q in [(2, 1.9), (3, 1.443), (5, 1.239)]:
            for p in opt.stationary_points(n, q)[1:]:
                h = 1e-9
                assert mc.A(n, q, p.x - h) * mc.A(n, q, p.x + h) <= 0
                assert abs(mc.dfdx(n, q, p.x)) < 1e-10

    def test_at_most_two_positive_zeros(self):
        for n in range(2, 9):
            for q in np.linspace(1, n / (n - 1) - 1e-6, 60):
                assert len(opt.stationary_points(n, q)) <= 3

    def test_rejects_bad_tol(self):
        with pytest.raises(mc.DomainError):
            opt.stationary_points(2, 1.5, tol=0)

    def test_bisect_failure_reports_state(self, monkeypatch):
        monkeypatch.setattr(opt, "MAX_BISECT", 3)
        with pytest.raises(opt.SolverError) as exc:
            opt.stationary_points(2, 1.9)
        assert {"lo", "hi"} <= set(exc.value.state)


class TestGlobalMin:
    @pytest.mark.parametrize("n", [2, 3, 4, 7])
    def test_origin_for_small_q(self, n):
        for q in np.linspace(1, 1 + 1 / n, 7):
            r = opt.global_min(n, q)
            assert r.x_star == 0.0 and r.f_star == 1.0

    def test_n2_up_to_seven_quarters(self):
        for q in np.linspace(1, 1.75, 11):
            assert opt.global_min(2, q).x_star == 0.0

    def test_n2_q19(self):
        r = opt.global_min(2, 1.9)
        xg, fg, h = opt.grid_argmin(2, 1.9)
        assert r.x_star > 0 and r.f_star < 1
        assert abs(r.x_star - xg) <= h
        assert r.f_star <= fg

    def test_f_star_at_most_one(self):
        rng = np.random.default_rng(5)
        for _ in range(40):
            n = int(rng.integers(2, 10))
            q = float(rng.uniform(1, n / (n - 1) - 1e-4))
            r = opt.global_min(n, q)
            assert r.f_star <= 1.0
            assert (r.f_star == 1.0) == (r.x_star == 0.0)

    def test_tie_reported_at_threshold(self):
        t = opt.threshold(3)
        r = opt.global_min(3, t.q_tilde)
        assert r.tie is not None
        assert min(r.x_star, r.tie) == 0.0
        assert max(r.x_star, r.tie) == pytest.approx(t.minimizers_at_threshold[1], abs=1e-9)


class TestThreshold:
    def test_n2(self):
        t = opt.threshold(2)
        assert abs(t.q_tilde - 1.75) <= 1e-9
        assert t.bracket[0] <= t.q_tilde < t.bracket[1]
        assert t.minimizers_at_threshold == [0.0]

    @pytest.mark.parametrize("n", range(3, 11))
    def test_remark_bounds(self, n):
        t = opt.threshold(n)
        assert 1 + 1 / n < t.q_tilde < 1 + 1 / n + 1 / n**2
        assert t.bracket[1] - t.bracket[0] <= opt.TOL_Q
        assert len(t.minimizers_at_threshold) == 2 and t.minimizers_at_threshold[1] > 0

    def test_n3_grid_scan_crosscheck(self):
        # dense (q, x) scan: min over x of f on a grid drops below 1 only past q_tilde
        t = opt.threshold(3).q_tilde
        xs = np.linspace(0.05, 10, 20001)
        below = [q for q in np.linspace(1.44, 1.4444, 45) if mc.f(3, q, xs).min() < 1]
        assert below and min(below) > t - 1e-4
        assert mc.f(3, t + 1e-5, xs).min() < 1 <= mc.f(3, t - 1e-5, xs).min()

    def test_n10_window(self):
        assert 1.1 < opt.threshold(10).q_tilde < 1.11

    def test_bad_tol(self):
        with pytest.raises(mc.DomainError):
            opt.threshold(2, tol_q=0)

    def test_orientation_check(self, monkeypatch):
        monkeypatch.setattr(opt, "initial_threshold_bracket", lambda n: (1.8, 1.9))
        with pytest.raises(opt.SolverError):
            opt.threshold(2)


class TestCurve:
    def test_n2_shape(self):
        qs = np.linspace(1, 2 - 1e-6, 201)
        c = opt.minimizer_curve(2, qs)
        xb = np.array([s.x_bar for s in c])
        assert np.all(xb[qs <= 1.75] == 0)
        assert np.all(xb[qs > 1.75] > 0)
        assert np.all(np.diff(xb) >= 0)

    def test_n3_jump(self):
        t = opt.threshold(3)
        qs = np.linspace(1.3, 1.5 - 1e-6, 401)
        xb = np.array([s.x_bar for s in opt.minimizer_curve(3, qs)])
        assert np.all(xb[qs < t.q_tilde] == 0)
        assert xb[qs > t.q_tilde][0] > 1.0

    def test_divergence(self):
        for n in (2, 3, 4):
            qc = n / (n - 1)
            c = opt.minimizer_curve(n, [qc - 1e-2, qc - 1e-3])
            assert c[1].x_bar > c[0].x_bar

    def test_rejects_unsorted(self):
        with pytest.raises(mc.DomainError):
            opt.minimizer_curve(2, [1.5, 1.2])

    def test_parallel_matches_serial(self):
        qs = np.linspace(1.7, 1.99, 24)
        assert opt.minimizer_curve(2, qs, workers=2) == opt.minimizer_curve(2, qs)

    def test_predicate_monotone(self):
        for n in (2, 3, 5):
            qs = np.linspace(1, n / (n - 1) - 1e-4, 120)
            flags = [opt.origin_is_global(n, q) for q in qs]
            first_false = flags.index(False)
            assert not any(flags[first_false:])


def test_fold_precedes_threshold():
    for n in (3, 4, 6):
        fold = opt.fold_exponent(n)
        t = opt.threshold(n).q_tilde
        assert 1 + 1 / n < fold < t
        assert len(opt.stationary_points(n, 0.5 * (fold + t))) == 3
        assert len(opt.stationary_points(n, fold - 1e-6)) == 1
