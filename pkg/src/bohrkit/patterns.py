"""Additive configurations: finding, counting, and the structure dichotomy.

An *s-configuration* inside a set ``A`` is the value set
``{n_i + n_j + a : 1 <= i <= j <= s}`` for integers ``a`` and pairwise
distinct ``n_1, ..., n_s``; all ``s(s+1)/2`` sums must land in ``A``.

Two search modes are provided. The *extent* mode uses the midpoint
representation: writing ``x_i = 2 n_i + a``, a configuration in ``A`` is the
same thing as ``s`` distinct same-parity elements of ``A`` whose pairwise
midpoints all lie in ``A``; the search is a lexicographic clique search over
each parity class. The *restricted* mode searches ``a`` ascending over a base
set and ``n_i`` over per-index inner sets, which is what the counting
operator's domain looks like.

The counting operator for a family of bounded functions ``f_ij`` is

    T_s = E_{a in base} E_{n_1 in N_1} ... E_{n_s in N_s}
              prod_{i <= j} f_ij(n_i + n_j + a)

evaluated by a dense ``einsum(..., optimize=False)`` contraction with
explicit work budgets. Counting a 0/1 indicator this way is exact: every
partial sum stays below 2^53.

Finders never report a false "none": exceeding a work budget yields
status "inconclusive" with the work spent.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .bohr import BohrSet, BohrSpec, BudgetExceeded, regularity_certificate
from .exact import RationalLike, as_rational, rational_pair
from .functions import BoundedFunction
from .gowers import ElementsLike, _elements, u2_fourth_correlation, u2_report

_EINSUM_LETTERS = "ijklmn"


class PreconditionError(ValueError):
    """A required hypothesis failed and the caller asked for enforcement."""


# ---------------------------------------------------------------------------
# configurations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Configuration:
    """A witness ``(a, (n_1, ..., n_s))`` with the ``n_i`` pairwise distinct."""

    a: int
    ns: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(set(self.ns)) != len(self.ns):
            raise ValueError("configuration offsets must be pairwise distinct")

    @property
    def s(self) -> int:
        return len(self.ns)

    def elements(self) -> list[int]:
        """Sorted distinct values ``n_i + n_j + a`` over ``i <= j``."""
        vals = {
            self.ns[i] + self.ns[j] + self.a
            for i in range(self.s)
            for j in range(i, self.s)
        }
        return sorted(vals)

    def as_dict(self) -> dict:
        return {"a": self.a, "ns": list(self.ns), "elements": self.elements()}


def verify_configuration(subset: np.ndarray, config: Configuration, s: int) -> bool:
    """All sums in the set, offsets distinct, arity as requested."""
    if config.s != s:
        return False
    members = set(int(x) for x in np.asarray(subset).tolist())
    return all(v in members for v in config.elements())


@dataclass(frozen=True)
class FinderResult:
    """Outcome of a configuration search.

    ``status`` is ``found`` (with a verified witness), ``none`` (the search
    space was exhausted), or ``inconclusive`` (budget ran out; never treated
    as freeness).
    """

    status: str
    config: Optional[Configuration]
    work: int
    budget: int
    mode: str

    def as_dict(self) -> dict:
        out = {
            "status": self.status,
            "work": self.work,
            "budget": self.budget,
            "mode": self.mode,
        }
        if self.config is not None:
            out["config"] = self.config.as_dict()
        return out


def find_configuration(
    subset: ElementsLike, s: int, *, budget: int = 10**8
) -> FinderResult:
    """Lexicographically first s-configuration in ``subset``, extent search.

    Searches distinct same-parity ``x_1 < ... < x_s`` in the set with all
    pairwise midpoints in the set, then maps back through ``a = x_1 mod 2``,
    ``n_i = (x_i - a) / 2``. Work is counted in midpoint membership tests.
    """
    if s < 2:
        raise ValueError("configurations need s >= 2")
    xs = np.unique(np.asarray(_elements(subset), dtype=np.int64))
    members = set(xs.tolist())
    by_parity = {0: [x for x in xs.tolist() if x % 2 == 0],
                 1: [x for x in xs.tolist() if x % 2 == 1]}
    work = 0

    def rec(prefix: list[int], pool: list[int], start: int) -> Optional[list[int]]:
        nonlocal work
        if len(prefix) == s:
            return prefix
        for idx in range(start, len(pool)):
            x = pool[idx]
            ok = True
            for y in prefix:
                work += 1
                if work > budget:
                    raise BudgetExceeded("finder budget exhausted")
                if (x + y) // 2 not in members:
                    ok = False
                    break
            if ok:
                got = rec(prefix + [x], pool, idx + 1)
                if got is not None:
                    return got
        return None

    try:
        found: Optional[list[int]] = None
        for parity in (0, 1):
            got = rec([], by_parity[parity], 0)
            if got is not None and (found is None or got < found):
                found = got
        # parity classes are scanned separately; lexicographic order over the
        # combined set is restored by comparing the two winners above
        if found is None:
            return FinderResult("none", None, work, budget, "extent")
        a = found[0] % 2
        ns = tuple((x - a) // 2 for x in found)
        cfg = Configuration(a, ns)
        assert verify_configuration(xs, cfg, s)
        return FinderResult("found", cfg, work, budget, "extent")
    except BudgetExceeded:
        return FinderResult("inconclusive", None, work, budget, "extent")


def count_configurations(subset: ElementsLike, s: int, *, budget: int = 10**8) -> int:
    """Exhaustive count of distinct s-configurations inside the set.

    Counts extent tuples ``x_1 < ... < x_s`` (same parity, all pairwise
    midpoints in the set); each corresponds to exactly one ``(a, ns)``. The
    search mirrors :func:`find_configuration` but never stops early, so the
    budget guards the whole enumeration (:class:`BudgetExceeded` on
    exhaustion rather than an undercount).
    """
    if s < 2:
        raise ValueError("configurations need s >= 2")
    xs = np.unique(np.asarray(_elements(subset), dtype=np.int64))
    members = set(xs.tolist())
    by_parity = {0: [x for x in xs.tolist() if x % 2 == 0],
                 1: [x for x in xs.tolist() if x % 2 == 1]}
    work = 0

    def rec(prefix: list[int], pool: list[int], start: int) -> int:
        nonlocal work
        if len(prefix) == s:
            return 1
        total = 0
        for idx in range(start, len(pool)):
            x = pool[idx]
            ok = True
            for y in prefix:
                work += 1
                if work > budget:
                    raise BudgetExceeded("counter budget exhausted")
                if (x + y) // 2 not in members:
                    ok = False
                    break
            if ok:
                total += rec(prefix + [x], pool, idx + 1)
        return total

    return sum(rec([], by_parity[parity], 0) for parity in (0, 1))


def find_configuration_restricted(
    subset: ElementsLike,
    base: ElementsLike,
    inners: Sequence[ElementsLike],
    *,
    budget: int = 10**8,
) -> FinderResult:
    """First s-configuration with ``a`` in the base and ``n_i`` in ``inners[i]``.

    ``a`` ascends over the base; offsets are chosen depth first, each level
    ascending over its own inner set, skipping repeats of earlier choices.
    Each membership test of a sum costs one unit of work.
    """
    s = len(inners)
    if s < 2:
        raise ValueError("configurations need s >= 2")
    members = set(np.asarray(_elements(subset), dtype=np.int64).tolist())
    base_arr = np.asarray(_elements(base), dtype=np.int64)
    inner_lists = [np.asarray(_elements(x), dtype=np.int64).tolist() for x in inners]
    work = 0

    def rec(a: int, prefix: list[int]) -> Optional[list[int]]:
        nonlocal work
        level = len(prefix)
        if level == s:
            return prefix
        for n in inner_lists[level]:
            if n in prefix:
                continue
            ok = True
            for m in prefix + [n]:
                work += 1
                if work > budget:
                    raise BudgetExceeded("finder budget exhausted")
                if m + n + a not in members:
                    ok = False
                    break
            if ok:
                got = rec(a, prefix + [n])
                if got is not None:
                    return got
        return None

    try:
        for a in base_arr.tolist():
            got = rec(int(a), [])
            if got is not None:
                cfg = Configuration(int(a), tuple(got))
                assert verify_configuration(
                    np.asarray(sorted(members), dtype=np.int64), cfg, s
                )
                return FinderResult("found", cfg, work, budget, "restricted")
        return FinderResult("none", None, work, budget, "restricted")
    except BudgetExceeded:
        return FinderResult("inconclusive", None, work, budget, "restricted")


# ---------------------------------------------------------------------------
# the counting operator
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FunctionFamily:
    """Bounded functions ``f_ij`` indexed by pairs ``1 <= i <= j <= s``."""

    s: int
    table: dict

    @classmethod
    def uniform(cls, f: BoundedFunction, s: int) -> "FunctionFamily":
        return cls(s, {(i, j): f for i in range(1, s + 1) for j in range(i, s + 1)})

    @classmethod
    def with_overrides(
        cls, f: BoundedFunction, s: int, overrides: dict
    ) -> "FunctionFamily":
        fam = dict(cls.uniform(f, s).table)
        for key, g in overrides.items():
            i, j = key
            if not (1 <= i <= j <= s):
                raise ValueError(f"bad family index {key}")
            fam[(i, j)] = g
        return cls(s, fam)

    def get(self, i: int, j: int) -> BoundedFunction:
        return self.table[(i, j)]


def _tuple_space_cost(base_size: int, inner_sizes: Sequence[int]) -> int:
    c = base_size
    for l in inner_sizes:
        c *= l
    return c


def count_T_s(
    family: Union[FunctionFamily, BoundedFunction],
    base: ElementsLike,
    inners: Sequence[ElementsLike],
    *,
    budget: int = 5 * 10**8,
) -> complex:
    """Average of ``prod_{i<=j} f_ij(n_i + n_j + a)`` over the tuple space.

    Dense contraction, chunked over the base axis; chunking cannot change any
    per-base value, and the final mean runs over the full base-indexed array.
    """
    s = len(inners)
    if s < 2:
        raise ValueError("need at least two inner sets")
    if s > len(_EINSUM_LETTERS):
        raise ValueError(f"s = {s} too large for dense counting")
    if isinstance(family, BoundedFunction):
        family = FunctionFamily.uniform(family, s)
    if family.s != s:
        raise ValueError("family arity does not match the inner sets")
    a = _elements(base)
    ns = [_elements(x) for x in inners]
    sizes = [x.size for x in ns]
    if a.size == 0 or min(sizes) == 0:
        raise ValueError("base and inner sets must be nonempty")
    cost = _tuple_space_cost(a.size, sizes)
    if cost > budget:
        raise BudgetExceeded(f"counting needs {cost} operations, budget {budget}")

    pair_mem = max(
        sizes[i] * sizes[j] for i in range(s) for j in range(i, s)
    )
    step = max(1, 2**21 // pair_mem)
    subs = []
    for i in range(s):
        subs.append("a" + _EINSUM_LETTERS[i])
        for j in range(i + 1, s):
            subs.append("a" + _EINSUM_LETTERS[i] + _EINSUM_LETTERS[j])
    # operand order: for each i, first the diagonal f_ii then f_ij for j > i
    signature = ",".join(subs) + "->a"

    vals = np.empty(a.size, dtype=np.complex128)
    for lo in range(0, a.size, step):
        chunk = a[lo : lo + step]
        ops = []
        for i in range(s):
            diag = family.get(i + 1, i + 1).gather(chunk[:, None] + 2 * ns[i][None, :])
            ops.append(diag)
            for j in range(i + 1, s):
                grid = (
                    chunk[:, None, None] + ns[i][None, :, None] + ns[j][None, None, :]
                )
                ops.append(family.get(i + 1, j + 1).gather(grid))
        vals[lo : lo + step] = np.einsum(signature, *ops, optimize=False)
    denom = 1
    for l in sizes:
        denom *= l
    return complex(np.mean(vals / denom))


def count_patterns_exact(
    subset: ElementsLike,
    base: ElementsLike,
    inners: Sequence[ElementsLike],
    *,
    budget: int = 5 * 10**8,
) -> tuple[int, Fraction]:
    """Exact tuple count and density for the indicator of ``subset``.

    Returns ``(count, count / (|base| * prod |N_i|))``. The contraction runs
    on 0/1 floats, so every partial sum is an integer below 2^53 and the
    count is exact.
    """
    f = BoundedFunction.indicator(_elements(subset))
    a = _elements(base)
    ns = [_elements(x) for x in inners]
    sizes = [x.size for x in ns]
    t = count_T_s(f, base, inners, budget=budget)
    denom = a.size
    for l in sizes:
        denom *= l
    count = int(round(t.real * denom))
    if abs(t.real * denom - count) > 1e-6 or abs(t.imag) > 1e-12:
        raise ValueError("indicator count failed to round exactly")
    return count, Fraction(count, denom)


# ---------------------------------------------------------------------------
# inequality checks built on the counting operator
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VonNeumannReport:
    """``|T_s|`` against the smallest admissible pairwise U2 norm."""

    t_value: complex
    norms: dict
    bound: float
    holds: bool

    def as_dict(self) -> dict:
        return {
            "t_re": self.t_value.real,
            "t_im": self.t_value.imag,
            "norms": {f"{i},{j}": v for (i, j), v in sorted(self.norms.items())},
            "bound": self.bound,
            "holds": self.holds,
            "tolerance": 1e-9,
        }


def check_von_neumann(
    family: Union[FunctionFamily, BoundedFunction],
    base: ElementsLike,
    inners: Sequence[ElementsLike],
    *,
    budget: int = 5 * 10**8,
) -> VonNeumannReport:
    """Check ``|T_s| <= min_{i<j} ||f_ij||_{U2(base, N_i, N_j)}``.

    The inequality is unconditional for finite sets (two Cauchy-Schwarz
    steps, all other factors bounded by one), so it is asserted with only a
    1e-9 roundoff allowance.
    """
    s = len(inners)
    if isinstance(family, BoundedFunction):
        family = FunctionFamily.uniform(family, s)
    t = count_T_s(family, base, inners, budget=budget)
    norms: dict = {}
    for i in range(1, s + 1):
        for j in range(i + 1, s + 1):
            fourth = u2_fourth_correlation(
                family.get(i, j), base, inners[i - 1], inners[j - 1], budget=budget
            )
            norms[(i, j)] = fourth**0.25
    bound = min(norms.values())
    holds = abs(t) <= bound + 1e-9
    return VonNeumannReport(t_value=t, norms=norms, bound=bound, holds=holds)


@dataclass(frozen=True)
class CountingBoundReport:
    """Configuration-freeness forces the indicator count to be tiny."""

    freeness: FinderResult
    count: Optional[int]
    t_value: Optional[Fraction]
    bound: Fraction
    holds: Optional[bool]

    def as_dict(self) -> dict:
        return {
            "freeness": self.freeness.as_dict(),
            "count": self.count,
            "t_value": rational_pair(self.t_value) if self.t_value is not None else None,
            "bound": rational_pair(self.bound),
            "holds": self.holds,
        }


def check_counting_bound(
    subset: ElementsLike,
    base: ElementsLike,
    inners: Sequence[ElementsLike],
    *,
    budget: int = 5 * 10**8,
    finder_budget: int = 10**8,
) -> CountingBoundReport:
    """If no configuration lives on the restricted domain, ``T_s(1_A) <= s^2/|N_s|``.

    Only tuples with a repeated offset can contribute, and with nested inner
    sets each collision event has probability at most ``1/|N_s|``. The
    comparison is exact: both sides are rationals.
    """
    s = len(inners)
    sizes = [np.asarray(_elements(x)).size for x in inners]
    bound = Fraction(s * s, sizes[-1])
    freeness = find_configuration_restricted(
        subset, base, inners, budget=finder_budget
    )
    if freeness.status != "none":
        return CountingBoundReport(freeness, None, None, bound, None)
    count, t = count_patterns_exact(subset, base, inners, budget=budget)
    return CountingBoundReport(freeness, count, t, bound, t <= bound)


# ---------------------------------------------------------------------------
# the structure dichotomy
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DichotomyOutcome:
    """Which branch fired, with enough recorded data to recheck it.

    ``kind`` is one of ``small-bohr``, ``local-increment``, ``large-u2``,
    ``violation`` (every branch scanned clean *and* every precondition was
    certified) or ``no-case`` (branches clean but some precondition was not
    certified, so nothing is claimed).
    """

    kind: str
    s: int
    delta: Fraction
    unmet: tuple[str, ...]
    data: dict

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "s": self.s,
            "delta": rational_pair(self.delta),
            "unmet": list(self.unmet),
            "data": self.data,
        }


def _first_local_increment(
    subset_arr: np.ndarray,
    base_elems: np.ndarray,
    inner_elems: np.ndarray,
    delta: Fraction,
    s: int,
) -> Optional[tuple[int, Fraction]]:
    """Smallest base point whose doubled-inner translate sits inside the base
    and carries density at least ``(1 + 1/(8 s^2)) * delta``; exact compares."""
    doubled = 2 * inner_elems
    li = inner_elems.size
    p, q = delta.numerator, delta.denominator
    factor = 8 * s * s
    step = max(1, 2**22 // max(1, li))
    for lo in range(0, base_elems.size, step):
        chunk = base_elems[lo : lo + step]
        pts = chunk[:, None] + doubled[None, :]
        idx = np.searchsorted(base_elems, pts)
        idx = np.clip(idx, 0, base_elems.size - 1)
        inside = np.all(base_elems[idx] == pts, axis=1)
        if not np.any(inside):
            continue
        sidx = np.searchsorted(subset_arr, pts)
        sidx = np.clip(sidx, 0, max(subset_arr.size - 1, 0))
        hits = (
            (subset_arr[sidx] == pts) if subset_arr.size else np.zeros_like(pts, bool)
        )
        counts = hits.sum(axis=1)
        # count/li >= (1 + 1/factor) * p/q  <=>  count*factor*q >= li*(factor+1)*p
        good = inside & (counts * (factor * q) >= li * (factor + 1) * p)
        where = np.nonzero(good)[0]
        if where.size:
            k = int(where[0])
            return int(chunk[k]), Fraction(int(counts[k]), li)
    return None


def dichotomy(
    subset: ElementsLike,
    base: BohrSet,
    inner_cs: Sequence[RationalLike],
    *,
    delta: Optional[Fraction] = None,
    enforce: bool = True,
    budget: int = 5 * 10**8,
    finder_budget: int = 10**8,
    enum_limit: int = 10**7,
    freeness: Optional[FinderResult] = None,
) -> DichotomyOutcome:
    """Run the four-way case scan for a configuration-free dense subset.

    ``inner_cs`` are the relative dilation factors: ``N_1 = c_1 * base`` and
    ``N_i = c_i * N_{i-1}``. Preconditions (freeness on the restricted
    domain, the smallness bound on ``c_1``, regularity of the base and every
    inner set) are certified first; with ``enforce`` they must all hold,
    otherwise the scan still runs and the unmet list is recorded. Branches
    are scanned in a fixed order: small innermost set, local density
    increment on a doubled translate, large balanced U2 norm. If no branch
    fires the outcome is ``violation`` only when every precondition was
    certified.
    """
    s = len(inner_cs)
    if s < 2:
        raise ValueError("need at least two inner dilations")
    subset_arr = np.unique(np.asarray(_elements(subset), dtype=np.int64))
    d = base.spec.dim
    if delta is None:
        inter = np.intersect1d(subset_arr, base.elements)
        delta = Fraction(int(inter.size), base.size)
    if delta == 0:
        raise ValueError("subset has density zero on the base")
    bexp = s * (s + 1) // 2

    specs = [base.spec]
    for c in inner_cs:
        specs.append(specs[-1].dilate(as_rational(c)))
    inner_sets = [
        BohrSet.from_spec(sp, enum_limit=enum_limit) for sp in specs[1:]
    ]

    unmet: list[str] = []
    c1 = as_rational(inner_cs[0])
    c1_bound = delta**s / (3200 * d * s * s)
    if c1 > c1_bound:
        unmet.append(f"c1 = {c1} exceeds smallness bound {c1_bound}")
    for name, sp in [("base", base.spec)] + [
        (f"inner{i + 1}", inner_sets[i].spec) for i in range(s)
    ]:
        cert = regularity_certificate(sp, enum_limit=enum_limit)
        if not cert.verdict:
            unmet.append(f"{name} not regular (witness c = {cert.witness_c})")
    if freeness is None:
        freeness = find_configuration_restricted(
            subset_arr, base, inner_sets, budget=finder_budget
        )
    if freeness.status == "found":
        unmet.append("subset is not configuration-free on the restricted domain")
    elif freeness.status == "inconclusive":
        unmet.append("freeness search inconclusive within budget")
    if unmet and enforce:
        raise PreconditionError("; ".join(unmet))

    data: dict = {"freeness": freeness.as_dict(), "inner_sizes": [b.size for b in inner_sets]}

    # branch 1: the innermost set is already small
    small_rhs = Fraction(32 * s * s) / delta**bexp
    if Fraction(inner_sets[-1].size) <= small_rhs:
        data["small"] = {
            "size": inner_sets[-1].size,
            "threshold": rational_pair(small_rhs),
        }
        return DichotomyOutcome("small-bohr", s, delta, tuple(unmet), data)

    # branch 2: a doubled translate with a genuine density increment
    for i, bs in enumerate(inner_sets, start=1):
        hit = _first_local_increment(
            subset_arr, base.elements, bs.elements, delta, s
        )
        if hit is not None:
            a, new_density = hit
            data["increment"] = {
                "inner_index": i,
                "a": a,
                "new_density": rational_pair(new_density),
                "required": rational_pair(delta * (1 + Fraction(1, 8 * s * s))),
            }
            return DichotomyOutcome("local-increment", s, delta, tuple(unmet), data)

    # branch 3: some pairwise balanced norm is large
    balanced, _ = BoundedFunction.balanced_indicator(subset_arr, base.elements)
    u2_threshold = delta**bexp / (32 * s * s)
    norms: dict = {}
    for i in range(1, s + 1):
        for j in range(i + 1, s + 1):
            fourth = u2_fourth_correlation(
                balanced, base, inner_sets[i - 1], inner_sets[j - 1], budget=budget
            )
            norm = fourth**0.25
            norms[f"{i},{j}"] = norm
            if norm >= float(u2_threshold):
                data["large_u2"] = {
                    "pair": [i, j],
                    "norm": norm,
                    "threshold": rational_pair(u2_threshold),
                    "norms_scanned": norms,
                }
                return DichotomyOutcome("large-u2", s, delta, tuple(unmet), data)
    data["norms_scanned"] = norms
    data["u2_threshold"] = rational_pair(u2_threshold)

    kind = "violation" if not unmet else "no-case"
    return DichotomyOutcome(kind, s, delta, tuple(unmet), data)


# ---------------------------------------------------------------------------
# generators and 3-term progression counters
# ---------------------------------------------------------------------------


def behrend_set(N: int) -> np.ndarray:
    """A 3-progression-free subset of ``[1, N]`` from sphere shells.

    Digit vectors ``x`` in base ``b`` with digits below ``(b+1)//2`` add
    without carries, so ``u + v = 2w`` forces the digitwise equation; on a
    fixed shell ``sum x_i^2 = r`` the parallelogram law then forces
    ``u = v = w``. The sweep picks the (dimension, base, shell) with the most
    elements fitting in ``[1, N]``.
    """
    if N < 3:
        return np.arange(1, N + 1, dtype=np.int64)
    best: Optional[tuple[int, int, int, list[int]]] = None
    for b in range(3, 13):
        k = (b + 1) // 2
        n_max = 1
        while b**n_max <= N:
            n_max += 1
        for n in range(2, n_max + 1):
            if k**n > 10**6:
                continue
            shells: dict[int, list[int]] = {}
            for digits in _digit_vectors(k, n):
                val = 0
                for x in reversed(digits):
                    val = val * b + x
                val += 1
                if val > N:
                    continue
                r = sum(x * x for x in digits)
                shells.setdefault(r, []).append(val)
            for r, vals in shells.items():
                key = (len(vals), -n, -b, -r)
                if best is None or key > (
                    len(best[3]),
                    -best[0],
                    -best[1],
                    -best[2],
                ):
                    best = (n, b, r, vals)
    assert best is not None
    return np.asarray(sorted(best[3]), dtype=np.int64)


def _digit_vectors(k: int, n: int):
    import itertools

    return itertools.product(range(k), repeat=n)


def random_set(N: int, density: float, seed: int) -> np.ndarray:
    """Each of ``1..N`` kept independently with the given probability."""
    if not (0 < density <= 1):
        raise ValueError("density must be in (0, 1]")
    rng = random.Random(seed)
    kept = [n for n in range(1, N + 1) if rng.random() < density]
    return np.asarray(kept, dtype=np.int64)


def count_three_aps_direct(subset: ElementsLike) -> int:
    """Nontrivial 3-term progressions ``x < y < z`` with ``x + z = 2y``."""
    xs = np.unique(np.asarray(_elements(subset), dtype=np.int64))
    members = set(xs.tolist())
    count = 0
    lst = xs.tolist()
    for ii in range(len(lst)):
        for jj in range(ii + 1, len(lst)):
            sm = lst[ii] + lst[jj]
            if sm % 2 == 0 and sm // 2 in members:
                count += 1
    return count


def count_three_aps_fft(subset: ElementsLike) -> int:
    """Same count through a convolution; rounding is checked, not assumed."""
    xs = np.unique(np.asarray(_elements(subset), dtype=np.int64))
    if xs.size == 0:
        return 0
    lo, hi = int(xs[0]), int(xs[-1])
    width = hi - lo + 1
    vec = np.zeros(width, dtype=np.float64)
    vec[xs - lo] = 1.0
    size = 1
    while size < 2 * width:
        size *= 2
    fv = np.fft.rfft(vec, size)
    conv = np.fft.irfft(fv * fv, size)
    rounded = np.rint(conv)
    if float(np.max(np.abs(conv - rounded))) >= 0.5 - 1e-6:
        raise ValueError("convolution rounding margin exhausted; use the direct count")
    total = 0
    for y in xs.tolist():
        m = 2 * y - 2 * lo
        r = int(rounded[m]) if 0 <= m < size else 0
        total += r - 1
    assert total % 2 == 0
    return total // 2
