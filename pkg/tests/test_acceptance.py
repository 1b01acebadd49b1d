"""End-to-end acceptance gate; each test prints one PASS/FAIL line (see conftest)."""

import json
import random
import time
from fractions import Fraction

from betatiling import betamap, lift, offsets, subst1d, tiling2d
from betatiling.field import AlgebraicNumber, PisotKind, conjugate_modulus, field_from_poly, is_pisot

from conftest import DOUBLING, FIB, FIG1, data_path, load_rule


class Clock:
    def __init__(self, limit):
        self.limit = limit
        self.t0 = time.perf_counter()

    def check(self):
        elapsed = time.perf_counter() - self.t0
        assert elapsed < self.limit, f"took {elapsed:.2f}s, limit {self.limit}s"


def V(*c):
    return tuple(Fraction(x) for x in c)


def random_points(t, n, den, seed, box=4):
    rng = random.Random(seed)
    K = t.field
    out = []
    while len(out) < n:
        d = rng.randint(1, den)
        x = AlgebraicNumber(K, [Fraction(rng.randint(-box * d, box * d), d) for _ in range(K.degree)])
        if x.sign() >= 0 and x < t.B:
            out.append(x)
    return out


def test_criterion_1_example_reconstruction():
    clock = Clock(1)
    sub = subst1d.build(["l", "s"], FIG1)
    t = betamap.from_substitution(sub)
    K = sub.field
    b = K.beta
    ib = b.inverse()
    assert K.poly == (-3, -1, 1)
    assert sub.heights == (b, K.one)
    assert (t.breakpoints[0], t.B) == (K.zero, 1 + b)
    assert t.breakpoints == (K.zero, K.one, 1 + ib, 1 + 2 * ib, b, 1 + b)
    assert t.translates == (K.zero, K.zero, K.one, K.rational(2), 3 + b)
    clock.check()


def test_criterion_2_worked_orbit():
    clock = Clock(1)
    sub = subst1d.build(["l", "s"], FIG1)
    m = lift.lift_map(betamap.from_substitution(sub))
    w, pts = V(-1, 1), []
    for _ in range(7):
        w = lift.step(m, w)
        pts.append(w)
    assert pts == [V(3, 0), V(-3, 2), V(5, -1), V(-6, 3), V(9, -3), V(-11, 6), V(15, -6)]
    K = m.field
    scaled = lift.eigen_scaled_threshold(m, 2)
    minimal = lift.escape_threshold(m, 2)
    for th, want in ((scaled, 7.2111025509279782), (minimal, 6.6055512754639891)):
        enc = K.abs_enclosure(th.exact, 2, 64)
        assert enc.hi - enc.lo <= Fraction(1, 2**64)
        assert abs(float(enc.lo) - want) < 1e-12
        out = lift.orbit(m, V(-1, 1), 100, {2: th})
        assert isinstance(out, lift.ProvablyInfinite)
        assert out.escape_iterate == 4 and out.prefix[-1] == V(-6, 3)
    clock.check()


def test_criterion_3_pisot_classification():
    clock = Clock(1)
    K = field_from_poly([-3, -1, 1])
    assert is_pisot(K).kind is PisotKind.NON_PISOT
    mod = conjugate_modulus(K, 2, 64)
    assert Fraction(130, 100) < mod.lo and mod.hi < Fraction(131, 100)
    assert abs(float(mod.lo) - 1.3027756377) < 1e-9
    assert is_pisot(field_from_poly([-1, -1, 1])).kind is PisotKind.PISOT
    assert is_pisot(field_from_poly([-2, 1])).kind is PisotKind.PISOT
    clock.check()


def test_criterion_4_pisot_orbits_are_eventually_periodic():
    clock = Clock(30)
    sub = subst1d.build(["a", "b"], FIB)
    t = betamap.from_substitution(sub)
    m = lift.lift_map(t)
    bounds = lift.trapping_bounds(m)
    seeds = random_points(t, 100, 50, seed=2024)
    periodic = 0
    for x in seeds:
        out = lift.orbit(m, x.coeffs)
        assert isinstance(out, lift.EventuallyPeriodic), x
        assert lift.verify_periodic(m, x.coeffs, out)
        # recompute F^{K+L}(x) = F^K(x) on the map itself
        y = x
        ys = [y]
        for _ in range(out.preperiod + out.period):
            y = t(y)
            ys.append(y)
        assert ys[-1] == ys[out.preperiod]
        assert all(lift.within_trap(m, w, bounds, x.coeffs) for w in out.prefix)
        periodic += 1
    assert periodic == 100
    clock.check()


def test_criterion_5_conjugacy():
    clock = Clock(30)
    for rule, alphabet in ((DOUBLING, ["a"]), (FIB, ["a", "b"]), (FIG1, ["l", "s"])):
        t = betamap.from_substitution(subst1d.build(alphabet, rule))
        m = lift.lift_map(t)
        for x in random_points(t, 1000, 50, seed=5):
            assert m.value(lift.step(m, x.coeffs)) == t(x)
    clock.check()


def test_criterion_6_misfit_orbit_is_infinite():
    clock = Clock(1)
    sub = subst1d.build(["l", "s"], FIG1)
    t = betamap.from_substitution(sub)
    vals = offsets.misfit_orbit(t, sub.beta - 1, 20)
    assert len(vals) == 21 and offsets.all_distinct(vals)
    out = lift.orbit(lift.lift_map(t), (sub.beta - 1).coeffs, 100)
    assert isinstance(out, lift.ProvablyInfinite)
    clock.check()


def test_criterion_7_census_growth_and_tracking():
    clock = Clock(120)
    r = load_rule("fig1.rule.json")
    counts = [tiling2d.adjacency_census(tiling2d.expand(r, "a", n)).count for n in range(1, 7)]
    assert all(a < b for a, b in zip(counts, counts[1:])), counts
    K = r.field
    F = betamap.from_substitution(tiling2d.validate_rule(r).top)
    steps = tiling2d.track_misfit(r, (K.beta, K.rational(3)), "a", 6)
    assert [s.value for s in steps] == offsets.misfit_orbit(F, K.beta - 1, 5)
    clock.check()


def test_criterion_8_pisot_offset_bound():
    clock = Clock(60)
    r = load_rule("fib_product.rule.json")
    rep = tiling2d.validate_rule(r)
    res = offsets.offset_bound(rep.edge_substitution(), tiling2d.initial_segments(r))
    assert isinstance(res, offsets.OffsetBoundResult) and res.candidates
    cands = set(res.candidates)
    root = r.labels[0]
    for n in range(1, 6):
        assert tiling2d.adjacency_census(tiling2d.expand(r, root, n)).offsets() <= cands
    clock.check()


def _raw(name):
    with open(data_path(name), encoding="utf-8") as fh:
        return json.load(fh)


def test_criterion_9_exact_cover_validation():
    clock = Clock(5)
    for name in ("fig1.rule.json", "fib_product.rule.json", "silver_misfit.rule.json"):
        assert tiling2d.validate_rule(load_rule(name)).valid, name

    overlap = _raw("fig1.rule.json")
    overlap["placements"]["a"][3]["at"][0] = ["1", "1"]
    gap = _raw("fig1.rule.json")
    del gap["placements"]["b"][2]
    oob = _raw("fig1.rule.json")
    oob["placements"]["c"][3]["at"][1] = ["4", "0"]

    v = tiling2d.validate_rule(tiling2d.rule_from_json(overlap)).violations
    hit = [x for x in v if x.code == "overlap"]
    assert hit and hit[0].prototile == "a" and set(hit[0].witness[:2]) == {2, 3}
    v = tiling2d.validate_rule(tiling2d.rule_from_json(gap)).violations
    hit = [x for x in v if x.code == "gap"]
    assert len(hit) == 1 and hit[0].prototile == "b" and len(hit[0].witness) == 2
    v = tiling2d.validate_rule(tiling2d.rule_from_json(oob)).violations
    hit = [x for x in v if x.code == "out_of_bounds"]
    assert [(x.prototile, x.witness) for x in hit] == [("c", (3,))]
    clock.check()
