"""Configuration search, tuple counting, and the structure dichotomy.

Counting oracles are literal nested loops over the tuple space; progression
counters are cross-checked against each other and against hand counts.
"""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest

from bohrkit.bohr import BohrSet, BohrSpec
from bohrkit.functions import BoundedFunction
from bohrkit.patterns import (
    Configuration,
    FunctionFamily,
    PreconditionError,
    behrend_set,
    check_counting_bound,
    check_von_neumann,
    count_T_s,
    count_configurations,
    count_patterns_exact,
    count_three_aps_direct,
    count_three_aps_fft,
    dichotomy,
    find_configuration,
    find_configuration_restricted,
    random_set,
    verify_configuration,
)

# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------


def t2_oracle(f11, f12, f22, base, n1, n2) -> complex:
    """Literal triple loop for s = 2."""
    def val(fn, x):
        lookup = {int(n): complex(v) for n, v in zip(fn.support, fn.values)}
        return lookup.get(int(x), 0j)

    total = 0j
    for a in base:
        for i in n1:
            for j in n2:
                total += (
                    val(f11, 2 * i + a) * val(f12, i + j + a) * val(f22, 2 * j + a)
                )
    return total / (len(base) * len(n1) * len(n2))


def config_pairs_oracle(xs: list[int]) -> int:
    """Pairs x < y, same parity, midpoint in the set (s = 2 configurations)."""
    members = set(xs)
    count = 0
    for i, x in enumerate(xs):
        for y in xs[i + 1 :]:
            if (x + y) % 2 == 0 and (x + y) // 2 in members:
                count += 1
    return count


def aps_oracle(xs: list[int]) -> int:
    members = sorted(xs)
    mset = set(xs)
    count = 0
    for i, x in enumerate(members):
        for z in members[i + 1 :]:
            if (x + z) % 2 == 0 and (x + z) // 2 in mset and (x + z) // 2 != x:
                count += 1
    return count


# ---------------------------------------------------------------------------
# configurations and the finder
# ---------------------------------------------------------------------------


def test_configuration_elements_and_validation():
    cfg = Configuration(1, (0, 1))
    assert sorted(cfg.elements()) == [1, 2, 3]
    with pytest.raises(ValueError):
        Configuration(0, (1, 1))


def test_verify_configuration():
    assert verify_configuration(np.array([1, 2, 3]), Configuration(1, (0, 1)), 2)
    assert not verify_configuration(np.array([1, 2, 4]), Configuration(1, (0, 1)), 2)


def test_finder_frozen_examples():
    res = find_configuration(np.array([1, 2, 3]), 2)
    assert res.status == "found"
    assert (res.config.a, res.config.ns) == (1, (0, 1))

    res = find_configuration(np.arange(0, 5), 3)
    assert res.status == "found"
    assert (res.config.a, res.config.ns) == (0, (0, 1, 2))


def test_finder_none_on_progression_free():
    bs = behrend_set(500)
    res = find_configuration(bs, 2)
    assert res.status == "none"


def test_finder_budget_inconclusive():
    # progression-free input: the scan cannot finish inside ten tests
    res = find_configuration(behrend_set(2000), 2, budget=10)
    assert res.status == "inconclusive"


def test_finder_matches_pair_oracle():
    rng = random.Random(31)
    for _ in range(20):
        xs = sorted(rng.sample(range(-40, 41), rng.randint(3, 20)))
        res = find_configuration(np.array(xs), 2)
        expect = config_pairs_oracle(xs)
        assert (res.status == "found") == (expect > 0)
        assert count_configurations(np.array(xs), 2) == expect


def test_restricted_finder_respects_domains():
    base = np.arange(-20, 21)
    inners = [np.array([0, 1]), np.array([0, 1])]
    subset = np.arange(-20, 21)
    res = find_configuration_restricted(subset, base, inners)
    assert res.status == "found"
    cfg = res.config
    assert cfg.ns[0] in (0, 1) and cfg.ns[1] in (0, 1)
    assert verify_configuration(subset, cfg, 2)


def test_restricted_finder_vacuous_on_singletons():
    subset = np.arange(-10, 11)
    res = find_configuration_restricted(subset, subset, [np.array([0]), np.array([0])])
    assert res.status == "none"  # distinct offsets are impossible


# ---------------------------------------------------------------------------
# tuple counts
# ---------------------------------------------------------------------------


def test_count_t2_matches_triple_loop():
    rng = random.Random(32)
    for _ in range(8):
        pts = sorted(rng.sample(range(-25, 26), 18))
        f = BoundedFunction.indicator(np.array(pts))
        fam = FunctionFamily.uniform(f, 2)
        base = list(range(-4, 5))
        n1 = [-1, 0, 1]
        n2 = [-2, 0, 2]
        got = count_T_s(fam, np.array(base), [np.array(n1), np.array(n2)])
        expect = t2_oracle(f, f, f, base, n1, n2)
        assert abs(got - expect) < 1e-12


def test_count_t3_matches_loop():
    rng = random.Random(33)
    pts = sorted(rng.sample(range(-20, 21), 15))
    f = BoundedFunction.indicator(np.array(pts))
    fam = FunctionFamily.uniform(f, 3)
    base = list(range(-2, 3))
    inners = [[-1, 0, 1]] * 3

    lookup = set(pts)
    total = 0
    for a in base:
        for i in inners[0]:
            for j in inners[1]:
                for k in inners[2]:
                    vals = [2 * i + a, i + j + a, i + k + a, 2 * j + a,
                            j + k + a, 2 * k + a]
                    total += all(v in lookup for v in vals)
    expect = total / (len(base) * 27)
    got = count_T_s(fam, np.array(base), [np.array(x) for x in inners])
    assert abs(got - expect) < 1e-12


def test_count_patterns_exact_integrality():
    subset = np.arange(0, 30, 3)
    base = np.arange(-5, 6)
    inners = [np.arange(-2, 3), np.arange(-2, 3)]
    count, t = count_patterns_exact(subset, base, inners)
    assert isinstance(count, int)
    assert t == Fraction(count, base.size * inners[0].size * inners[1].size)


# ---------------------------------------------------------------------------
# inequalities
# ---------------------------------------------------------------------------


def test_von_neumann_random_families():
    rng = random.Random(34)
    base = np.arange(-6, 7)
    inners = [np.arange(-2, 3), np.arange(-2, 3)]
    for _ in range(15):
        pts = np.array(sorted(rng.sample(range(-20, 21), rng.randint(5, 25))))
        rep = check_von_neumann(BoundedFunction.indicator(pts), base, inners)
        assert rep.holds


def test_counting_bound_on_progression_free_set():
    subset = behrend_set(100)
    base = np.arange(-50, 51)
    inners = [np.arange(-3, 4), np.arange(-3, 4)]
    rep = check_counting_bound(subset, base, inners)
    assert rep.freeness.status == "none"
    assert rep.holds is True
    assert rep.t_value <= rep.bound
    assert rep.bound == Fraction(4, 7)


# ---------------------------------------------------------------------------
# progression counters and generators
# ---------------------------------------------------------------------------


def test_ap_counters_agree_with_oracle():
    rng = random.Random(35)
    for _ in range(25):
        xs = sorted(rng.sample(range(0, 300), rng.randint(2, 60)))
        expect = aps_oracle(xs)
        assert count_three_aps_direct(np.array(xs)) == expect
        assert count_three_aps_fft(np.array(xs)) == expect


def test_ap_counters_known_values():
    assert count_three_aps_direct(np.array([1, 2, 3, 4, 5])) == 4
    assert count_three_aps_fft(np.array([1, 2, 3, 4, 5])) == 4
    assert count_three_aps_direct(np.array([1, 2, 4, 8])) == 0


def test_behrend_free_and_deterministic():
    bs = behrend_set(1000)
    assert bs.size == behrend_set(1000).size
    assert np.all((1 <= bs) & (bs <= 1000))
    assert count_three_aps_direct(bs) == 0
    assert bs.size >= 30


def test_random_set_deterministic():
    a = random_set(500, 0.3, 42)
    b = random_set(500, 0.3, 42)
    assert np.array_equal(a, b)
    c = random_set(500, 0.3, 43)
    assert not np.array_equal(a, c)
    assert np.all((1 <= a) & (a <= 500))


# ---------------------------------------------------------------------------
# the dichotomy
# ---------------------------------------------------------------------------


def _interval_base(m: int) -> BohrSet:
    return BohrSet.from_spec(BohrSpec((Fraction(1),), Fraction(1, 2), Fraction(m)))


def test_dichotomy_small_bohr_on_sparse_set():
    base = _interval_base(1000)
    subset = behrend_set(1000)
    out = dichotomy(subset, base, [Fraction(1, 320), Fraction(1, 16)], enforce=False)
    assert out.kind == "small-bohr"
    assert "small" in out.data


def test_dichotomy_enforce_raises_on_unmet():
    base = _interval_base(2500)
    evens = base.elements[base.elements % 2 == 0]
    with pytest.raises(PreconditionError):
        dichotomy(evens, base, [Fraction(1, 4), Fraction(1)], enforce=True)


def test_dichotomy_local_increment_branch():
    # evens in a long interval: every contained doubled translate at even a
    # is all even, so the density jumps from ~1/2 to 1
    base = _interval_base(2500)
    evens = base.elements[base.elements % 2 == 0]
    out = dichotomy(evens, base, [Fraction(1, 4), Fraction(1)], enforce=False)
    assert out.kind == "local-increment"
    info = out.data["increment"]
    assert info["new_density"] == [1, 1]
    # recheck the recorded translate by direct counting
    a = info["a"]
    inner = BohrSet.from_spec(base.spec.dilate(Fraction(1, 4)))
    translate = a + 2 * inner.elements
    assert np.all(np.isin(translate, base.elements))
    inside = np.isin(translate, evens).sum()
    assert Fraction(int(inside), inner.size) == Fraction(1)
    assert len(out.unmet) >= 1  # c1 bound and freeness were honestly recorded


def test_dichotomy_large_u2_branch():
    # remove every multiple of 15: no doubled translate gains enough, but
    # the balanced function carries strong period-15 structure
    base = _interval_base(79)
    arr = base.elements
    subset = arr[np.mod(arr, 15) != 0]
    out = dichotomy(
        subset, base, [Fraction(1), Fraction(1)], enforce=False, budget=10**9
    )
    assert out.kind == "large-u2"
    info = out.data["large_u2"]
    assert info["norm"] >= Fraction(*info["threshold"])


def test_dichotomy_no_case_when_nothing_fires():
    # the full base: density one, zero balanced function, large inner sets
    base = _interval_base(64)
    out = dichotomy(base.elements, base, [Fraction(1), Fraction(1)], enforce=False)
    assert out.kind == "no-case"
    assert out.unmet  # honest: preconditions were not certified
