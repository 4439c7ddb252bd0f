"""The certified density-increment iteration.

One step of the driver does, in order: look for a configuration on the
restricted domain (success exit), run the structure dichotomy, and when the
dichotomy reports a large balanced norm, convert it into a density increment
through the windowed Fourier scan. Every step's claim is re-measured exactly
(set sizes and densities as rationals on actual enumerated sets) before the
step is accepted; printed constant formulas are reproduced bit-exactly in
:class:`ConstantTable` but never trusted as a substitute for measurement.

State bookkeeping: the ambient set is always a genuine Bohr set in *current*
coordinates, and an affine map ``original = mult * x + offset`` links current
coordinates to the input set. Translating by ``t`` adds ``mult * t`` to the
offset; the doubled-translate branch renormalizes ``x -> (x - a) / 2`` so the
new ambient set is the inner Bohr set itself (``mult`` doubles). Configuration
witnesses transport through the same map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .bohr import (
    BohrSet,
    BohrSpec,
    BudgetExceeded,
    DilationSearch,
    exact_density,
    find_regular_dilation,
    infer_dilation,
    membership_mask,
    regularity_certificate,
    spec_from_dict,
)
from .exact import RationalLike, as_rational, floor_frac, rational_pair
from .functions import BoundedFunction
from .gowers import _phase_table, inverse_average, local_fourier_scan
from .patterns import (
    Configuration,
    DichotomyOutcome,
    FinderResult,
    PreconditionError,
    dichotomy,
    find_configuration_restricted,
    verify_configuration,
)

# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------

_PRACTICAL_DEFAULTS = {
    "x1": Fraction(1, 160),
    "x_rest": Fraction(1, 8),
    "c_prime": Fraction(1, 8),
    "eta": Fraction(1, 4),
    "min_increment": Fraction(1, 10**6),
}

_OVERRIDABLE = ("x1", "x_rest", "c_prime", "eta", "min_increment")


@dataclass(frozen=True)
class ConstantTable:
    """Exact step constants, either the printed formulas or fast defaults.

    ``faithful`` evaluates the printed formulas as exact rationals in
    ``(s, d, delta)``. ``practical`` swaps the contraction rates for fixed
    fractions that let desk-size instances move, keeping the scan thresholds
    (smallness, increment factor, norm threshold) on the printed formulas.
    Every override is recorded and surfaces in reports.
    """

    mode: str
    overrides: dict

    @classmethod
    def faithful(cls) -> "ConstantTable":
        return cls("faithful", {})

    @classmethod
    def practical(cls, overrides: Optional[dict] = None) -> "ConstantTable":
        clean: dict = {}
        for name, value in (overrides or {}).items():
            if name not in _OVERRIDABLE:
                raise ValueError(
                    f"unknown constant {name!r}; can override {_OVERRIDABLE}"
                )
            if value is not None:
                clean[name] = as_rational(value)
        return cls("practical", clean)

    def _pick(self, name: str, faithful_value: Fraction) -> Fraction:
        if self.mode == "faithful":
            return faithful_value
        return self.overrides.get(name, _PRACTICAL_DEFAULTS[name])

    def x1(self, s: int, d: int, delta: Fraction) -> Fraction:
        return self._pick(
            "x1",
            Fraction(1, 2**85) * Fraction(1, s**24) * Fraction(1, d)
            * delta ** (6 * s * (s + 1)),
        )

    def x_rest(self, s: int, d: int, delta: Fraction) -> Fraction:
        return self._pick(
            "x_rest",
            Fraction(1, 2**20) * Fraction(1, s**4) * Fraction(1, d)
            * delta ** (s * (s + 1)),
        )

    def c_prime(self, s: int, d: int, delta: Fraction) -> Fraction:
        return self._pick(
            "c_prime",
            Fraction(1, 2**37) * Fraction(1, s**8) * Fraction(1, d)
            * delta ** (2 * s * (s + 1)),
        )

    def eta(self, s: int, delta: Fraction) -> Fraction:
        return self._pick(
            "eta", Fraction(1, 2**23) * Fraction(1, s**8) * delta ** (2 * s * (s + 1))
        )

    def min_increment(self) -> Fraction:
        if self.mode == "faithful":
            return Fraction(0)
        return self.overrides.get("min_increment", _PRACTICAL_DEFAULTS["min_increment"])

    # thresholds shared by both modes (the printed scan formulas)

    @staticmethod
    def smallness(s: int, delta: Fraction) -> Fraction:
        b = s * (s + 1) // 2
        return Fraction(32 * s * s) / delta**b

    @staticmethod
    def case2_factor(s: int) -> Fraction:
        return 1 + Fraction(1, 8 * s * s)

    @staticmethod
    def u2_threshold(s: int, delta: Fraction) -> Fraction:
        b = s * (s + 1) // 2
        return delta**b / (32 * s * s)

    # printed bookkeeping quantities, reproduced for reporting only

    @staticmethod
    def inverse_bound(s: int, delta: Fraction) -> Fraction:
        return Fraction(1, 2**46) * Fraction(1, s**16) * delta ** (4 * s * (s + 1))

    @staticmethod
    def increment_translate(s: int, delta: Fraction) -> Fraction:
        return Fraction(1, 2**54) * Fraction(1, s**16) * delta ** (4 * s * (s + 1))

    @staticmethod
    def increment_refined(s: int, delta: Fraction) -> Fraction:
        return Fraction(1, 2**28) * Fraction(1, s**8) * delta ** (2 * s * (s + 1))

    @staticmethod
    def shrink(s: int, d: int, delta: Fraction) -> Fraction:
        return Fraction(1, s ** (100 * s)) * Fraction(1, d**s) * delta ** (10 * s**3)

    @staticmethod
    def k_max(s: int, delta: Fraction) -> Fraction:
        return Fraction(2**55) * Fraction(s**16) / delta ** (4 * s * (s + 1))

    @staticmethod
    def d_max(s: int, delta: Fraction) -> Fraction:
        return Fraction(2**29) * Fraction(s**8) / delta ** (2 * s * (s + 1))

    def describe(self, s: int, d: int, delta: Fraction) -> dict:
        return {
            "mode": self.mode,
            "overrides": {k: rational_pair(v) for k, v in sorted(self.overrides.items())},
            "x1": rational_pair(self.x1(s, d, delta)),
            "x_rest": rational_pair(self.x_rest(s, d, delta)),
            "c_prime": rational_pair(self.c_prime(s, d, delta)),
            "eta": rational_pair(self.eta(s, delta)),
            "min_increment": rational_pair(self.min_increment()),
            "smallness": rational_pair(self.smallness(s, delta)),
            "case2_factor": rational_pair(self.case2_factor(s)),
            "u2_threshold": rational_pair(self.u2_threshold(s, delta)),
        }


# ---------------------------------------------------------------------------
# the Fourier-witness increment
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IncrementOutcome:
    """Result of hunting a density increment through the windowed scan.

    ``status``: ``translate`` (a plain translate of the inner set already
    carries the increment), ``refined`` (a new frequency was adjoined and a
    translate of the refined set carries it), ``no-witness`` (scan exhausted,
    including grid refinements), or ``hypothesis-not-met`` (enforced
    hypotheses failed; nothing was scanned).
    """

    status: str
    unmet: tuple[str, ...]
    delta_before: Fraction
    grid_used: int
    a_star: Optional[int] = None
    translate: Optional[int] = None
    y: Optional[Fraction] = None
    new_spec: Optional[BohrSpec] = None
    delta_after: Optional[Fraction] = None
    scan_value: Optional[float] = None
    inverse_avg: Optional[float] = None
    guaranteed_bound: Optional[float] = None
    bound_asserted: bool = False

    @property
    def increment(self) -> Optional[Fraction]:
        if self.delta_after is None:
            return None
        return self.delta_after - self.delta_before

    def as_dict(self) -> dict:
        out = {
            "status": self.status,
            "unmet": list(self.unmet),
            "delta_before": rational_pair(self.delta_before),
            "grid_used": self.grid_used,
            "a_star": self.a_star,
            "translate": self.translate,
            "y": rational_pair(self.y) if self.y is not None else None,
            "new_spec": self.new_spec.as_dict() if self.new_spec else None,
            "delta_after": (
                rational_pair(self.delta_after) if self.delta_after is not None else None
            ),
            "scan_value": self.scan_value,
            "inverse_avg": self.inverse_avg,
            "guaranteed_bound": self.guaranteed_bound,
            "bound_asserted": self.bound_asserted,
        }
        return out


def _exact_translate_density(
    subset_sorted: np.ndarray, points: np.ndarray
) -> Fraction:
    if points.size == 0:
        raise ValueError("empty translate")
    idx = np.searchsorted(subset_sorted, points)
    idx = np.clip(idx, 0, max(subset_sorted.size - 1, 0))
    hits = (
        (subset_sorted[idx] == points) if subset_sorted.size else np.zeros(points.shape, bool)
    )
    return Fraction(int(np.count_nonzero(hits)), int(points.size))


def fourier_increment(
    subset: np.ndarray,
    base: BohrSet,
    inner1: BohrSet,
    c_prime: RationalLike,
    eta: RationalLike,
    *,
    grid: int = 512,
    enforce: bool = True,
    budget: int = 5 * 10**8,
    enum_limit: int = 10**7,
    max_grid_retries: int = 2,
) -> IncrementOutcome:
    """Find a translate (possibly of a refined Bohr set) where the subset is denser.

    The balanced function ``f = 1_A - delta`` on the base set is scanned over
    base points ``a`` in the ``(1 - c1)``-dilate (so ``a + inner`` stays in
    the base). If some ``a`` already has ``E_{n in inner} f(a+n) >=
    eta^3/128``, that translate is the witness. Otherwise the first ``a``
    (ascending) with ``E f > -eta/32`` and grid Fourier value at least
    ``eta/2`` nominates a frequency; the refined set adjoins it with widths
    scaled by ``c_prime * c1``, and the best translate ``a + n1`` with the
    refined set inside the base is taken. Acceptance always re-measures the
    density exactly; grid misses retry with an 8x finer grid.

    With ``enforce`` the printed hypotheses (mean zero, real values,
    ``c1 <= eta^3 / (2^15 d)``, ``c_prime <= eta / (2^13 d)``, grid Fourier
    energy at least ``eta^2``) must hold or the scan is not run.
    """
    c_prime = as_rational(c_prime)
    eta = as_rational(eta)
    if not (0 < eta <= 1):
        raise ValueError("eta must be in (0, 1]")
    d = base.spec.dim
    c1 = infer_dilation(inner1.spec, base.spec)
    if c1 is None or not (0 < c1 < 1):
        raise ValueError("inner set must be a proper dilate of the base")

    subset_sorted = np.unique(np.asarray(subset, dtype=np.int64))
    delta = exact_density(subset_sorted, base.elements)
    f, delta_check = BoundedFunction.balanced_indicator(subset_sorted, base.elements)
    assert delta_check == delta

    unmet: list[str] = []
    mean_f = float(np.abs(np.mean(f.gather(base.elements))))
    if mean_f > 1e-9:
        unmet.append(f"balanced mean {mean_f} not zero")
    if c1 > eta**3 / (2**15 * d):
        unmet.append(f"c1 = {c1} exceeds eta^3/(2^15 d) = {eta**3 / (2**15 * d)}")
    if c_prime > eta / (2**13 * d):
        unmet.append(f"c_prime = {c_prime} exceeds eta/(2^13 d) = {eta / (2**13 * d)}")

    n1 = inner1.elements
    maxn = int(np.max(np.abs(n1)))
    grid_eff = max(grid, 4 * (maxn + 1))

    ia = None
    if enforce:
        ia = inverse_average(f, base.elements, n1, grid_eff, budget=budget)
        if ia < float(eta**2):
            unmet.append(f"grid Fourier energy {ia} below eta^2 = {float(eta**2)}")
    if unmet and enforce:
        return IncrementOutcome(
            status="hypothesis-not-met",
            unmet=tuple(unmet),
            delta_before=delta,
            grid_used=grid_eff,
            inverse_avg=ia,
        )

    shrunk = BohrSet.from_spec(base.spec.dilate(1 - c1), enum_limit=enum_limit)
    a_arr = shrunk.elements
    t = f.gather(a_arr[:, None] + n1[None, :])
    df = t.real.mean(axis=1)

    # plain translate: the inner-set average is already large somewhere
    thr_a = float(eta**3 / 128)
    hit = np.nonzero(df >= thr_a)[0]
    if hit.size:
        a_star = int(a_arr[int(hit[0])])
        pts = a_star + n1
        d_after = _exact_translate_density(subset_sorted, pts)
        return IncrementOutcome(
            status="translate",
            unmet=tuple(unmet),
            delta_before=delta,
            grid_used=grid_eff,
            a_star=a_star,
            translate=a_star,
            new_spec=inner1.spec,
            delta_after=d_after,
            scan_value=float(df[int(hit[0])]),
            inverse_avg=ia,
        )

    inner_cert = regularity_certificate(inner1.spec, enum_limit=enum_limit)
    slack = min(
        200.0 * float(c_prime) * d + 100.0 * d * float(inner_cert.max_negative_gap),
        2.0,
    )

    g = grid_eff
    for attempt in range(max_grid_retries + 1):
        outcome = _refined_pass(
            subset_sorted, base, inner1, a_arr, t, df, delta, eta, c_prime, c1,
            g, slack, budget, enum_limit, tuple(unmet), ia,
        )
        if outcome is not None:
            return outcome
        g *= 8
    return IncrementOutcome(
        status="no-witness",
        unmet=tuple(unmet),
        delta_before=delta,
        grid_used=g // 8,
        inverse_avg=ia,
    )


def _refined_pass(
    subset_sorted: np.ndarray,
    base: BohrSet,
    inner1: BohrSet,
    a_arr: np.ndarray,
    t: np.ndarray,
    df: np.ndarray,
    delta: Fraction,
    eta: Fraction,
    c_prime: Fraction,
    c1: Fraction,
    grid: int,
    slack: float,
    budget: int,
    enum_limit: int,
    unmet: tuple,
    ia: Optional[float],
) -> Optional[IncrementOutcome]:
    """One grid pass of the refined-witness search; None means retry finer."""
    n1 = inner1.elements
    d = base.spec.dim
    floor_b = -float(eta) / 32
    cand = np.nonzero(df > floor_b)[0]
    if cand.size == 0:
        return None
    table = _phase_table(grid)
    ks = np.arange(grid, dtype=np.int64)
    ph = table[(n1[:, None] * ks[None, :]) % grid]
    thr_sup = float(eta) / 2
    # the scan stops at the first qualifying base point, so work is metered
    # as it is spent rather than preflighted for the whole candidate list
    step = max(1, 2**16 // max(1, grid))
    spent = 0

    for lo in range(0, cand.size, step):
        rows = cand[lo : lo + step]
        spent += rows.size * n1.size * grid
        if spent > budget:
            raise BudgetExceeded(
                f"refined scan spent {spent} operations, budget {budget}"
            )
        z = np.einsum("ai,ik->ak", t[rows], ph, optimize=False) / n1.size
        mags = np.abs(z)
        vals = mags.max(axis=1)
        good = np.nonzero(vals >= thr_sup)[0]
        if good.size == 0:
            continue
        r = int(good[0])
        a_star = int(a_arr[int(rows[r])])
        k_star = int(mags[r].argmax())
        y = Fraction(k_star, grid) if k_star else Fraction(1)
        new_spec = BohrSpec(
            base.spec.theta + (y,),
            c_prime * c1 * base.spec.eps,
            c_prime * c1 * base.spec.M,
        )
        refined = BohrSet.from_spec(new_spec, enum_limit=enum_limit)
        pts = a_star + n1[:, None] + refined.elements[None, :]
        ok_rows = np.all(
            membership_mask(base.spec, pts.reshape(-1)).reshape(pts.shape), axis=1
        )
        if not np.any(ok_rows):
            return None
        sidx = np.searchsorted(subset_sorted, pts)
        sidx = np.clip(sidx, 0, max(subset_sorted.size - 1, 0))
        hits = (subset_sorted[sidx] == pts) if subset_sorted.size else np.zeros(pts.shape, bool)
        counts = hits.sum(axis=1)
        counts = np.where(ok_rows, counts, -1)
        best = int(np.argmax(counts))
        best_density = Fraction(int(counts[best]), refined.size)
        inc = best_density - delta
        if inc < eta / 32:
            return None
        val = float(vals[r])
        eps_new = float(new_spec.eps)
        guar = ((val - slack - 8 * eps_new) - (float(eta) / 32 + slack)) / 2
        asserted = False
        if guar > 0:
            if float(inc) < guar - 1e-9:
                raise ValueError(
                    f"measured increment {float(inc)} fell below the guaranteed "
                    f"bound {guar}; the derivation is falsified"
                )
            asserted = True
        return IncrementOutcome(
            status="refined",
            unmet=unmet,
            delta_before=delta,
            grid_used=grid,
            a_star=a_star,
            translate=a_star + int(n1[best]),
            y=y,
            new_spec=new_spec,
            delta_after=best_density,
            scan_value=val,
            inverse_avg=ia,
            guaranteed_bound=guar if guar > 0 else None,
            bound_asserted=asserted,
        )
    return None


# ---------------------------------------------------------------------------
# the iteration driver
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EngineLimits:
    max_steps: int = 32
    enum_limit: int = 10**7
    count_budget: int = 5 * 10**8
    finder_budget: int = 10**8
    grid: int = 512
    max_candidates: int = 64


@dataclass(frozen=True)
class StepRecord:
    """One accepted engine step with enough data to recheck it externally."""

    step: int
    case: str
    d: int
    delta: Fraction
    spec: BohrSpec
    mult: int
    offset: int
    payload: dict

    def as_dict(self) -> dict:
        return {
            "step": self.step,
            "case": self.case,
            "d": self.d,
            "delta": rational_pair(self.delta),
            "eps": rational_pair(self.spec.eps),
            "M": rational_pair(self.spec.M),
            "spec": self.spec.as_dict(),
            "mult": self.mult,
            "offset": self.offset,
            "certificate": self.payload,
        }


@dataclass(frozen=True)
class RunResult:
    status: str  # found | exhausted | limit | violation
    exit_code: int
    reason: str
    config: Optional[Configuration]
    steps: tuple[StepRecord, ...]
    final: dict

    def as_dict(self) -> dict:
        return {
            "status": self.status,
            "exit_code": self.exit_code,
            "reason": self.reason,
            "config": self.config.as_dict() if self.config else None,
            "steps": [r.as_dict() for r in self.steps],
            "final": self.final,
        }


def _chain_dilations(
    spec: BohrSpec,
    s: int,
    table: ConstantTable,
    delta: Fraction,
    limits: EngineLimits,
) -> Optional[tuple[list[Fraction], list[BohrSet], list[dict]]]:
    """Regular nested dilates targeting the table rates; None when stuck."""
    cs: list[Fraction] = []
    sets: list[BohrSet] = []
    notes: list[dict] = []
    current = spec
    for i in range(1, s + 1):
        d = current.dim
        target = table.x1(s, d, delta) if i == 1 else table.x_rest(s, d, delta)
        search = find_regular_dilation(
            current,
            target / 2,
            target,
            max_candidates=limits.max_candidates,
            enum_limit=limits.enum_limit,
        )
        if not search.found:
            return None
        cs.append(search.c)
        current = current.dilate(search.c)
        sets.append(BohrSet.from_spec(current, enum_limit=limits.enum_limit))
        notes.append(
            {
                "index": i,
                "c": rational_pair(search.c),
                "target": rational_pair(target),
                "size": sets[-1].size,
                "tried": len(search.tried),
            }
        )
    return cs, sets, notes


def run(
    subset: np.ndarray,
    N: int,
    s: int = 2,
    *,
    mode: str = "faithful",
    overrides: Optional[dict] = None,
    limits: Optional[EngineLimits] = None,
) -> RunResult:
    """Iterate until a configuration is found or the set is certified thin.

    The ambient chain starts at the width-``N`` integer window (frequency 1
    makes the torus constraint vacuous). Each step either exits with a
    verified configuration mapped back to input coordinates, renormalizes
    into a denser sub-Bohr-set, or stops with ``exhausted`` (the certified
    small-set branch fired: a valid negative) or ``limit`` (budgets, caps,
    or a witness the scan could not certify).
    """
    if mode not in ("faithful", "practical"):
        raise ValueError("mode must be faithful or practical")
    if s < 2:
        raise ValueError("s must be at least 2")
    limits = limits or EngineLimits()
    table = (
        ConstantTable.faithful() if mode == "faithful" else ConstantTable.practical(overrides)
    )
    if mode == "faithful" and overrides:
        raise ValueError("faithful mode takes no overrides")

    original = np.unique(np.asarray(subset, dtype=np.int64))
    work = original[(original >= -N) & (original <= N)]
    spec = BohrSpec((Fraction(1),), Fraction(1, 2), Fraction(N))
    mult, offset = 1, 0
    records: list[StepRecord] = []

    def finish(status: str, code: int, reason: str, cfg=None) -> RunResult:
        final = {
            "mult": mult,
            "offset": offset,
            "d": spec.dim,
            "set_size": int(work.size),
        }
        return RunResult(status, code, reason, cfg, tuple(records), final)

    for step in range(limits.max_steps):
        try:
            ambient = BohrSet.from_spec(spec, enum_limit=limits.enum_limit)
        except BudgetExceeded as exc:
            return finish("limit", 3, f"enumeration budget: {exc}")
        delta = exact_density(work, ambient.elements)
        if delta == 0:
            return finish("exhausted", 1, "set is empty on the ambient Bohr set")

        if mode == "faithful":
            if Fraction(step) > table.k_max(s, delta):
                return finish("limit", 3, "printed iteration cap exceeded")
            if Fraction(spec.dim) > table.d_max(s, delta):
                return finish("limit", 3, "printed dimension cap exceeded")

        chain = _chain_dilations(spec, s, table, delta, limits)
        if chain is None:
            return finish("limit", 3, "no regular dilation found for the chain")
        cs, inner_sets, chain_notes = chain

        freeness = find_configuration_restricted(
            work, ambient, inner_sets, budget=limits.finder_budget
        )
        if freeness.status == "found":
            cfg = freeness.config
            cfg_orig = Configuration(
                mult * cfg.a + offset, tuple(mult * n for n in cfg.ns)
            )
            if not verify_configuration(original, cfg_orig, s):
                return finish(
                    "limit", 3, "transported configuration failed verification"
                )
            records.append(
                StepRecord(
                    step, "config", spec.dim, delta, spec, mult, offset,
                    {
                        "config": cfg.as_dict(),
                        "config_original": cfg_orig.as_dict(),
                        "finder": freeness.as_dict(),
                        "chain": chain_notes,
                    },
                )
            )
            return finish("found", 0, "configuration found", cfg_orig)
        if freeness.status == "inconclusive":
            return finish("limit", 3, "freeness search inconclusive within budget")

        try:
            out = dichotomy(
                work,
                ambient,
                cs,
                delta=delta,
                enforce=(mode == "faithful"),
                budget=limits.count_budget,
                finder_budget=limits.finder_budget,
                enum_limit=limits.enum_limit,
                freeness=freeness,
            )
        except PreconditionError as exc:
            return finish("limit", 3, f"dichotomy precondition failed: {exc}")
        except BudgetExceeded as exc:
            return finish("limit", 3, f"dichotomy budget: {exc}")

        if out.kind == "small-bohr":
            records.append(
                StepRecord(
                    step, "small-bohr", spec.dim, delta, spec, mult, offset,
                    {"dichotomy": out.as_dict(), "chain": chain_notes},
                )
            )
            return finish("exhausted", 1, "innermost Bohr set certified small")

        if out.kind == "local-increment":
            info = out.data["increment"]
            i = info["inner_index"]
            a = info["a"]
            target = inner_sets[i - 1]
            translated = a + 2 * target.elements
            members = work[np.isin(work, translated)]
            new_work = (members - a) // 2
            new_delta = Fraction(int(new_work.size), target.size)
            if [new_delta.numerator, new_delta.denominator] != info["new_density"]:
                return finish("limit", 3, "local increment failed recheck")
            if new_delta < delta * table.case2_factor(s):
                return finish("limit", 3, "local increment below the required factor")
            records.append(
                StepRecord(
                    step, "local-increment", spec.dim, delta, spec, mult, offset,
                    {"dichotomy": out.as_dict(), "chain": chain_notes},
                )
            )
            offset = offset + mult * a
            mult = mult * 2
            spec = target.spec
            work = np.unique(new_work)
            continue

        if out.kind == "large-u2":
            pair = out.data["large_u2"]["pair"]
            j = pair[1]
            inner = inner_sets[j - 1]
            try:
                inc = fourier_increment(
                    work,
                    ambient,
                    inner,
                    table.c_prime(s, spec.dim, delta),
                    table.eta(s, delta),
                    grid=limits.grid,
                    enforce=(mode == "faithful"),
                    budget=limits.count_budget,
                    enum_limit=limits.enum_limit,
                )
            except BudgetExceeded as exc:
                return finish("limit", 3, f"fourier scan budget: {exc}")
            if inc.status in ("no-witness", "hypothesis-not-met"):
                return finish(
                    "limit", 3, f"fourier increment: {inc.status}"
                )
            gain = inc.increment
            if gain is None or gain <= 0 or gain < table.min_increment():
                return finish("limit", 3, "fourier witness gain below acceptance")
            t0 = inc.translate
            new_ambient = BohrSet.from_spec(inc.new_spec, enum_limit=limits.enum_limit)
            shifted = work - t0
            new_work = shifted[np.isin(shifted, new_ambient.elements)]
            recheck = Fraction(int(new_work.size), new_ambient.size)
            if recheck != inc.delta_after:
                return finish("limit", 3, "fourier increment failed recheck")
            records.append(
                StepRecord(
                    step, f"fourier-{inc.status}", spec.dim, delta, spec, mult, offset,
                    {
                        "dichotomy": out.as_dict(),
                        "increment": inc.as_dict(),
                        "chain": chain_notes,
                    },
                )
            )
            offset = offset + mult * t0
            spec = inc.new_spec
            work = np.unique(new_work)
            continue

        # violation / no-case
        records.append(
            StepRecord(
                step, out.kind, spec.dim, delta, spec, mult, offset,
                {"dichotomy": out.as_dict(), "chain": chain_notes},
            )
        )
        if out.kind == "violation":
            return finish(
                "violation", 3,
                "all dichotomy branches clean under certified preconditions",
            )
        return finish("limit", 3, "no dichotomy branch fired (preconditions unmet)")

    return finish("limit", 3, f"step cap {limits.max_steps} reached")


# ---------------------------------------------------------------------------
# replaying and rechecking a finished run
# ---------------------------------------------------------------------------


def recheck_run(subset: np.ndarray, N: int, result: RunResult) -> list[str]:
    """Independently re-verify every accepted step of a run from its records.

    Replays the state transforms and re-measures each step's claim on freshly
    enumerated sets. Returns the list of discrepancies (empty means the whole
    trace rechecks).
    """
    problems: list[str] = []
    original = np.unique(np.asarray(subset, dtype=np.int64))
    work = original[(original >= -N) & (original <= N)]
    spec = BohrSpec((Fraction(1),), Fraction(1, 2), Fraction(N))
    mult, offset = 1, 0

    for rec in result.steps:
        if rec.spec != spec:
            problems.append(f"step {rec.step}: ambient spec drifted")
            break
        if (rec.mult, rec.offset) != (mult, offset):
            problems.append(f"step {rec.step}: affine map drifted")
            break
        ambient = BohrSet.from_spec(spec)
        delta = exact_density(work, ambient.elements)
        if delta != rec.delta:
            problems.append(
                f"step {rec.step}: recorded density {rec.delta} remeasures {delta}"
            )
            break
        pay = rec.payload
        if rec.case == "config":
            cfg = Configuration(
                pay["config_original"]["a"], tuple(pay["config_original"]["ns"])
            )
            if not verify_configuration(original, cfg, len(cfg.ns)):
                problems.append(f"step {rec.step}: configuration not in the input set")
            break
        if rec.case == "small-bohr":
            info = pay["dichotomy"]["data"]["small"]
            s_arity = pay["dichotomy"]["s"]
            sizes = pay["dichotomy"]["data"]["inner_sizes"]
            thr = Fraction(*info["threshold"])
            if not Fraction(sizes[-1]) <= thr:
                problems.append(f"step {rec.step}: smallness compare fails recheck")
            if info["size"] != sizes[-1]:
                problems.append(f"step {rec.step}: inconsistent recorded sizes")
            break
        if rec.case == "local-increment":
            info = pay["dichotomy"]["data"]["increment"]
            a = info["a"]
            chain = pay["chain"]
            inner_spec = spec
            for note in chain[: info["inner_index"]]:
                inner_spec = inner_spec.dilate(Fraction(*note["c"]))
            inner = BohrSet.from_spec(inner_spec)
            translated = a + 2 * inner.elements
            if not bool(np.all(membership_mask(spec, translated))):
                problems.append(f"step {rec.step}: doubled translate leaves the base")
            members = work[np.isin(work, translated)]
            got = Fraction(int(members.size), inner.size)
            if got != Fraction(*info["new_density"]):
                problems.append(f"step {rec.step}: increment density fails recheck")
            work = np.unique((members - a) // 2)
            offset = offset + mult * a
            mult = mult * 2
            spec = inner_spec
            continue
        if rec.case.startswith("fourier-"):
            info = pay["increment"]
            t0 = info["translate"]
            new_spec = spec_from_dict(info["new_spec"])
            new_ambient = BohrSet.from_spec(new_spec)
            shifted = work - t0
            new_work = shifted[np.isin(shifted, new_ambient.elements)]
            got = Fraction(int(new_work.size), new_ambient.size)
            if got != Fraction(*info["delta_after"]):
                problems.append(f"step {rec.step}: fourier density fails recheck")
            if got <= delta:
                problems.append(f"step {rec.step}: fourier step did not gain density")
            work = np.unique(new_work)
            offset = offset + mult * t0
            spec = new_spec
            continue
        # violation / no-case are terminal records with nothing to replay
        break
    return problems
