"""Exact census of real algebraic integers by exhaustive enumeration.

Every monic polynomial of degree ``n`` and height ``<= Q`` is visited once.
Reducible ones are discarded; an irreducible one is the minimal polynomial of
each of its roots, so its distinct real roots are exactly the algebraic
integers it contributes.  Roots are assigned to half-open bins with Sturm sign
counts at the rational bin edges, so the counts are exact.
"""

from __future__ import annotations

import bisect
import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .density import DensityParams, plateau_density, predicted_count
from .intpoly import hom_eval
from .irreducible import check_budget, find_factor_full
from .poly import MonicIntPoly, RatInterval, enumerate_coeffs, format_rat, parse_rat
from .roots import (
    RootBox,
    SturmChain,
    classify_perron,
    isolate_roots,
    sign_variations,
    sturm_sequence,
    _variations_inf,
)

# relative half-width of the first guess for the box around the largest root
_BOX_REL = Fraction(1, 1 << 30)
# dyadic resolution of the rational brackets around the Perron threshold
_THRESHOLD_BITS = 40
# how far beyond x_range the gap check looks for roots
GAP_SEARCH_MARGIN = Fraction(1, 4)


def whole_line(Q: int) -> RatInterval:
    """``[-Q-1, Q+1)``, which holds every root of every polynomial in the box."""
    return RatInterval(Fraction(-Q - 1), Fraction(Q + 1))


def log_power(n: int) -> int:
    """Power of ``ln Q`` in the error normalisation: 1 for ``n <= 2``, else 0."""
    return 1 if n <= 2 else 0


def error_scale(n: int, Q: int) -> float:
    if Q < 2:
        return math.nan
    return Q ** (n - 1) * math.log(Q) ** log_power(n)


def threshold_bracket(n: int, Q: int) -> tuple[Fraction, Fraction]:
    """Dyadic ``lo <= (n+1)^(1/4) Q^(1/2) < hi`` with ``hi - lo = 2^-40``."""
    scaled = (n + 1) * Q * Q << (4 * _THRESHOLD_BITS)
    m = math.isqrt(math.isqrt(scaled))
    den = 1 << _THRESHOLD_BITS
    return Fraction(m, den), Fraction(m + 1, den)


@dataclass(frozen=True)
class CensusBin:
    interval: RatInterval
    count: int
    predicted: float
    normalized_error: float
    # k -> number of irreducible polynomials with exactly k distinct roots here
    by_multiplicity: dict[int, int] = field(default_factory=dict)


@dataclass(frozen=True)
class CensusReport:
    n: int
    Q: int
    range: RatInterval
    bins: tuple[CensusBin, ...]
    total: int  # Omega_n(Q, range)
    total_real: int  # Omega_n(Q, R)
    polynomials: int
    reducible_discarded: int
    irreducible_count: int
    perron_enabled: bool
    perron_count: int = 0
    perron_certified: int = 0
    perron_in_plateau: int = 0
    indeterminate_perron: int = 0
    perron_contradictions: int = 0
    above_threshold: int = 0
    above_threshold_certified: int = 0
    elapsed: float = field(default=0.0, compare=False)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "Q": self.Q,
            "range": self.range.to_json(),
            "bins": [
                {
                    "lo": format_rat(b.interval.lo),
                    "hi": format_rat(b.interval.hi),
                    "count": b.count,
                    "predicted": _json_float(b.predicted),
                    "normalized_error": _json_float(b.normalized_error),
                    "by_multiplicity": {str(k): v for k, v in sorted(b.by_multiplicity.items())},
                }
                for b in self.bins
            ],
            "totals": {
                "omega_range": self.total,
                "omega_real_line": self.total_real,
                "polynomials": self.polynomials,
                "reducible_discarded": self.reducible_discarded,
                "irreducible_count": self.irreducible_count,
            },
            "perron": {
                "enabled": self.perron_enabled,
                "perron_count": self.perron_count,
                "certified": self.perron_certified,
                "in_plateau": self.perron_in_plateau,
                "indeterminate": self.indeterminate_perron,
                "contradictions": self.perron_contradictions,
                "above_threshold": self.above_threshold,
                "above_threshold_certified": self.above_threshold_certified,
            },
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CensusReport":
        bins = tuple(
            CensusBin(
                RatInterval(parse_rat(b["lo"]), parse_rat(b["hi"])),
                int(b["count"]),
                _from_json_float(b["predicted"]),
                _from_json_float(b["normalized_error"]),
                {int(k): int(v) for k, v in b["by_multiplicity"].items()},
            )
            for b in d["bins"]
        )
        t, p = d["totals"], d["perron"]
        return cls(
            n=int(d["n"]),
            Q=int(d["Q"]),
            range=RatInterval(parse_rat(d["range"]["lo"]), parse_rat(d["range"]["hi"])),
            bins=bins,
            total=int(t["omega_range"]),
            total_real=int(t["omega_real_line"]),
            polynomials=int(t["polynomials"]),
            reducible_discarded=int(t["reducible_discarded"]),
            irreducible_count=int(t["irreducible_count"]),
            perron_enabled=bool(p["enabled"]),
            perron_count=int(p["perron_count"]),
            perron_certified=int(p["certified"]),
            perron_in_plateau=int(p["in_plateau"]),
            indeterminate_perron=int(p["indeterminate"]),
            perron_contradictions=int(p["contradictions"]),
            above_threshold=int(p["above_threshold"]),
            above_threshold_certified=int(p["above_threshold_certified"]),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["bin_lo", "bin_hi", "count", "predicted", "normalized_error"])
        for b in self.bins:
            w.writerow([
                format_rat(b.interval.lo),
                format_rat(b.interval.hi),
                b.count,
                fmt_float(b.predicted),
                fmt_float(b.normalized_error),
            ])
        return buf.getvalue()


def fmt_float(x: float) -> str:
    return "nan" if math.isnan(x) else f"{x:.12g}"


def _json_float(x: float):
    return None if math.isnan(x) else float(f"{x:.12g}")


def _from_json_float(x) -> float:
    return math.nan if x is None else float(x)


# -- the enumeration kernel -------------------------------------------------

@dataclass
class _Tally:
    bins: list[int]
    multiplicity: list[dict[int, int]]
    total_real: int = 0
    polynomials: int = 0
    reducible: int = 0
    irreducible: int = 0
    perron: int = 0
    certified: int = 0
    in_plateau: int = 0
    indeterminate: int = 0
    contradictions: int = 0
    above: int = 0
    above_certified: int = 0

    @classmethod
    def empty(cls, nbins: int) -> "_Tally":
        return cls([0] * nbins, [{} for _ in range(nbins)])

    def merge(self, other: "_Tally") -> None:
        for i, c in enumerate(other.bins):
            self.bins[i] += c
            for k, v in other.multiplicity[i].items():
                self.multiplicity[i][k] = self.multiplicity[i].get(k, 0) + v
        for name in ("total_real", "polynomials", "reducible", "irreducible", "perron", "certified",
                     "in_plateau", "indeterminate", "contradictions", "above", "above_certified"):
            setattr(self, name, getattr(self, name) + getattr(other, name))


def _variations(chain, num: int, den: int, bound: int, v_neg: int, v_pos: int) -> int:
    # beyond the root bound the chain has its sign pattern at infinity
    if num <= -bound * den:
        return v_neg
    if num >= bound * den:
        return v_pos
    return sign_variations(chain, num, den)


def _largest_root_box(full: tuple[int, ...], chain: SturmChain, bound: int) -> tuple[RootBox, np.ndarray]:
    """Isolating box for the largest real root, seeded by the numerical roots."""
    roots = np.roots(np.asarray(full[::-1], dtype=float))
    poly = MonicIntPoly.from_full(full)
    real = roots[np.abs(roots.imag) <= 1e-7 * (1.0 + np.abs(roots))]
    if real.size:
        x = Fraction(float(real.real.max()))
        d = _BOX_REL * max(1, abs(x))
        lo, hi = x - d, x + d
        v_pos = chain.variations_at_infinity(True)
        if chain.count_half_open(lo, hi) == 1 and chain.variations(hi) == v_pos and hom_eval(full, hi.numerator, hi.denominator):
            return RootBox(RatInterval(lo, hi), poly), roots
    boxes = isolate_roots(poly, Fraction(1, 1 << 20), within=RatInterval(Fraction(-bound), Fraction(bound)))
    return boxes[-1], roots


def _exceeds_sqrt(box: RootBox, chain: SturmChain, Q: int) -> bool:
    """Exact ``alpha > sqrt(Q)`` for the irrational root isolated by ``box``."""
    a, b = box.interval.lo, box.interval.hi
    while True:
        if b <= 0 or b * b <= Q:
            return False
        if a > 0 and a * a > Q:
            return True
        m = (a + b) / 2
        if chain.count_half_open(a, m):
            b = m
        else:
            a = m


def _census_slice(n: int, Q: int, tops: tuple[int, ...], edges: tuple[tuple[int, int], ...], perron: bool) -> _Tally:
    nbins = len(edges) - 1
    tally = _Tally.empty(nbins)
    thr_lo, thr_hi = threshold_bracket(n, Q)
    for coeffs in enumerate_coeffs(n, Q, top=tops):
        tally.polynomials += 1
        full = coeffs + (1,)
        if find_factor_full(full) is not None:
            tally.reducible += 1
            continue
        tally.irreducible += 1
        H = max(1, max(abs(c) for c in coeffs))
        bound = H + 1
        chain = sturm_sequence(full)
        v_neg = _variations_inf(chain, False)
        v_pos = _variations_inf(chain, True)
        if v_neg == v_pos:
            continue
        tally.total_real += v_neg - v_pos
        vs = [_variations(chain, a, b, bound, v_neg, v_pos) for a, b in edges]
        for i in range(nbins):
            k = vs[i] - vs[i + 1]
            if k:
                tally.bins[i] += k
                m = tally.multiplicity[i]
                m[k] = m.get(k, 0) + 1
        if not perron or vs[0] == vs[-1]:
            continue
        # only the largest real root can be Perron, and only if it is positive
        a_hi, b_hi = edges[-1]
        top_in_range = vs[-1] == v_pos
        k_above = 0
        if thr_hi < Fraction(a_hi, b_hi):
            lo = max(thr_hi, Fraction(*edges[0]))
            k_above = _variations(chain, lo.numerator, lo.denominator, bound, v_neg, v_pos) - vs[-1]
        tally.above += k_above
        if not top_in_range or _variations(chain, 0, 1, bound, v_neg, v_pos) == v_pos:
            continue
        sc = SturmChain(chain)
        box, roots = _largest_root_box(full, sc, bound)
        if k_above and box.interval.lo < thr_hi:
            # Sturm already showed alpha >= thr_hi, so the box may start there
            box = RootBox(RatInterval(thr_hi, box.interval.hi), box.poly)
        verdict = classify_perron(box.poly, box, roots)
        if verdict.indeterminate:
            tally.indeterminate += 1
            continue
        if verdict.contradiction:
            tally.contradictions += 1
        if verdict.is_perron:
            tally.perron += 1
            if verdict.certified_by_bound:
                tally.certified += 1
            alpha_plateau = _exceeds_sqrt(box, sc, Q) and sc.variations(Fraction(Q)) == v_pos
            tally.in_plateau += int(alpha_plateau)
        if k_above and verdict.is_perron and verdict.certified_by_bound and not verdict.contradiction:
            tally.above_certified += 1
    return tally


def _slices(Q: int, parts: int) -> list[tuple[int, ...]]:
    tops = list(range(-Q, Q + 1))
    parts = max(1, min(parts, len(tops)))
    size = -(-len(tops) // parts)
    return [tuple(tops[i:i + size]) for i in range(0, len(tops), size)]


def census(
    n: int,
    Q: int,
    range: RatInterval | None = None,
    bins: int = 1,
    params: DensityParams | None = None,
    *,
    workers: int = 1,
    budget: int | None = None,
    perron: bool = True,
    predict: bool = True,
) -> CensusReport:
    """Exact ``Omega_n(Q, I)`` over ``bins`` equal half-open bins of ``range``.

    ``range=None`` means the whole real line, realised as ``[-Q-1, Q+1)``.
    ``predicted`` is the main-term density prediction (NaN when ``Q < 2`` or
    ``predict`` is off).  Counts do not depend on ``workers``.
    """
    if n < 2:
        raise ValueError(f"degree must be >= 2, got {n}")
    if Q < 1:
        raise ValueError(f"height must be >= 1, got {Q}")
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    check_budget(n, Q, budget)
    rng = range if range is not None else whole_line(Q)
    parts = rng.split(bins)
    edges = tuple((e.numerator, e.denominator) for e in [p.lo for p in parts] + [rng.hi])
    start = time.perf_counter()
    # fixed slicing, so the merged result is independent of the worker count
    slices = _slices(Q, 4 * workers if workers > 1 else 1)
    tally = _Tally.empty(bins)
    if workers == 1:
        for s in slices:
            tally.merge(_census_slice(n, Q, s, edges, perron))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_census_slice, n, Q, s, edges, perron) for s in slices]
            for f in futures:
                tally.merge(f.result())
    params = params or DensityParams(n=n)
    scale = error_scale(n, Q)
    out = []
    for part, count, mult in zip(parts, tally.bins, tally.multiplicity):
        if predict and Q >= 2:
            pred = predicted_count(n, Q, part, params)
            err = (count - pred) / scale
        else:
            pred = err = math.nan
        out.append(CensusBin(part, count, pred, err, mult))
    return CensusReport(
        n=n,
        Q=Q,
        range=rng,
        bins=tuple(out),
        total=sum(tally.bins),
        total_real=tally.total_real,
        polynomials=tally.polynomials,
        reducible_discarded=tally.reducible,
        irreducible_count=tally.irreducible,
        perron_enabled=perron,
        perron_count=tally.perron,
        perron_certified=tally.certified,
        perron_in_plateau=tally.in_plateau,
        indeterminate_perron=tally.indeterminate,
        perron_contradictions=tally.contradictions,
        above_threshold=tally.above,
        above_threshold_certified=tally.above_certified,
        elapsed=time.perf_counter() - start,
    )


# -- Perron tally ------------------------------------------------------------

class PerronViolation(AssertionError):
    pass


@dataclass(frozen=True)
class PerronTally:
    perron_count: int
    certified_count: int
    fraction_in_plateau: float
    indeterminate: int
    contradictions: int
    above_threshold: int


def perron_tally(report: CensusReport) -> PerronTally:
    """Perron verdicts of a census, with the large-root certificate enforced.

    ``fraction_in_plateau`` is the share of counted Perron numbers lying in
    ``(Q^(1/2), Q]``.  Raises :class:`PerronViolation` if some counted root
    above ``(n+1)^(1/4) Q^(1/2)`` was not certified Perron, or if a certified
    root failed the numerical conjugate comparison.
    """
    if not report.perron_enabled:
        raise ValueError("census was run without Perron classification")
    if report.above_threshold != report.above_threshold_certified:
        raise PerronViolation(
            f"{report.above_threshold - report.above_threshold_certified} of {report.above_threshold} "
            "roots above the threshold are not certified Perron"
        )
    if report.perron_contradictions:
        raise PerronViolation(f"{report.perron_contradictions} bound certificates contradict the numerical roots")
    frac = report.perron_in_plateau / report.perron_count if report.perron_count else 0.0
    return PerronTally(
        report.perron_count,
        report.perron_certified,
        frac,
        report.indeterminate_perron,
        report.perron_contradictions,
        report.above_threshold,
    )


# -- plateau -------------------------------------------------------------------

@dataclass(frozen=True)
class PlateauReport:
    n: int
    Q: int
    interval: RatInterval
    exact: int
    model: float
    ratio: float


def in_plateau_zone(Q: int, interval: RatInterval) -> bool:
    """``interval`` lies in ``(Q^(1/2), Q]`` or in ``[-Q, -Q^(1/2))``."""
    lo, hi = interval.lo, interval.hi
    if lo > 0:
        return lo * lo > Q and hi <= Q
    if hi <= 0:
        return lo >= -Q and hi * hi >= Q
    return False


def plateau_report(n: int, Q: int, interval: RatInterval, *, workers: int = 1, budget: int | None = None) -> PlateauReport:
    """Exact count on a plateau interval against ``2^(n-1) Q^(n-1) |I|``."""
    if not in_plateau_zone(Q, interval):
        raise ValueError(f"{interval} is not inside the plateau zone for Q={Q}")
    rep = census(n, Q, interval, 1, workers=workers, budget=budget, perron=False, predict=False)
    model = plateau_density(n, Q) * float(interval.width)
    return PlateauReport(n, Q, interval, rep.total, model, rep.total / model)


# -- gaps around rationals -----------------------------------------------------

@dataclass(frozen=True)
class GapEntry:
    x0: Fraction
    r0: Fraction
    nearest_root_distance: float
    passed: bool


@dataclass(frozen=True)
class GapReport:
    n: int
    Q: int
    b_max: int
    x_range: RatInterval
    entries: tuple[GapEntry, ...]
    roots_checked: int

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def violations(self) -> int:
        return sum(not e.passed for e in self.entries)


def gap_constant(n: int) -> Fraction:
    return Fraction(2, n * (n + 1))


def gap_radius(n: int, Q: int, x0: Fraction) -> Fraction:
    return gap_constant(n) / (max(abs(x0.numerator), x0.denominator) ** n * Q)


def reduced_rationals(b_max: int, x_range: RatInterval) -> list[Fraction]:
    out = set()
    for b in range(1, b_max + 1):
        a_lo = math.ceil(x_range.lo * b)
        a_hi = math.ceil(x_range.hi * b)
        for a in range(a_lo, a_hi):
            if math.gcd(a, b) == 1:
                out.add(Fraction(a, b))
    return sorted(out)


def verify_gap(n: int, Q: int, b_max: int, x_range: RatInterval, *, budget: int | None = None) -> GapReport:
    """Distance from each reduced ``a/b`` (``b <= b_max``) to the nearest counted root.

    Roots of every irreducible monic polynomial of degree ``n`` and height
    ``<= Q`` within ``GAP_SEARCH_MARGIN`` of ``x_range`` are isolated to a
    quarter of the smallest radius; distances are measured to those roots
    (``inf`` if there are none).  ``passed`` is decided exactly: no root in
    the closed interval ``[x0 - r0, x0 + r0]``.
    """
    if n < 2:
        raise ValueError("verify_gap needs n >= 2")
    xs = reduced_rationals(b_max, x_range)
    if not xs:
        return GapReport(n, Q, b_max, x_range, (), 0)
    check_budget(n, Q, budget)
    radii = [gap_radius(n, Q, x) for x in xs]
    eps = min(radii) / 4
    reach = max(max(radii) * 2, GAP_SEARCH_MARGIN)
    window = RatInterval(x_range.lo - reach, x_range.hi + reach)
    # (midpoint, box, chain) for every counted root in the window
    found: list[tuple[float, RootBox, SturmChain]] = []
    for coeffs in enumerate_coeffs(n, Q):
        full = coeffs + (1,)
        if find_factor_full(full) is not None:
            continue
        chain = SturmChain.build(full)
        if chain.count_half_open(window.lo, window.hi) == 0:
            continue
        for box in isolate_roots(MonicIntPoly(coeffs), eps, within=window):
            found.append((box.midpoint, box, chain))
    found.sort(key=lambda r: r[0])
    mids = [f[0] for f in found]
    entries = []
    for x0, r0 in zip(xs, radii):
        fx = float(x0)
        i = bisect.bisect_left(mids, fx)
        guess = min((abs(mids[j] - fx) for j in (i - 1, i) if 0 <= j < len(found)), default=math.inf)
        # any root closer than the neighbour guess has its midpoint within guess + eps
        reach_x = max(guess, float(r0)) + float(eps)
        nearest = math.inf
        clear = True
        lo, hi = x0 - r0, x0 + r0
        for mid, box, chain in found[bisect.bisect_left(mids, fx - reach_x):bisect.bisect_right(mids, fx + reach_x)]:
            nearest = min(nearest, _box_distance(box, x0, r0, chain))
            if box.interval.hi >= lo and box.interval.lo <= hi:
                if chain.count_half_open(lo, hi) or hom_eval(chain.poly, hi.numerator, hi.denominator) == 0:
                    clear = False
        entries.append(GapEntry(x0, r0, nearest, clear))
    return GapReport(n, Q, b_max, x_range, tuple(entries), len(found))


def _box_distance(box: RootBox, x0: Fraction, r0: Fraction, chain: SturmChain) -> float:
    """Distance from ``x0`` to the root in ``box``, refined to relative precision 1e-6."""
    a, b = box.interval.lo, box.interval.hi
    while True:
        gap = max(abs(a - x0), abs(b - x0), r0)
        if (b - a) * 1_000_000 <= gap:
            break
        m = (a + b) / 2
        if chain.count_half_open(a, m):
            b = m
        else:
            a = m
    return abs(float((a + b) / 2 - x0))
