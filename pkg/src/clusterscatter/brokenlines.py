"""Broken lines and theta functions over rank-2 scattering diagrams.

A broken line is a piecewise-straight path drawn in a two-dimensional
picture of the diagram.  Each straight piece carries a monomial
``coeff * z^E`` with ``E`` in the doubled exponent lattice and travels
with velocity equal to minus the chosen 2D projection of ``E``.  The
path comes in from infinity carrying ``z^{m0}`` with coefficient 1, may
bend wherever it crosses a wall by selecting a non-constant term of the
wall-crossing image of its monomial, and stops at a generic endpoint.
The theta function with initial exponent ``m0`` is the sum of the final
monomials over all such paths.

Two projections are supported:

* view ``"m"`` -- positions and velocities read the first two
  coordinates of each exponent.  Wall supports are used exactly as the
  diagram stores them (incoming walls are full lines, outgoing walls are
  rays along ``-p*(normal)``).
* view ``"n"`` -- positions and velocities read the last two
  coordinates.  This slice picture is available exactly when the initial
  exponent satisfies ``m-part == p*(x-part)``; bending preserves that
  relation, so the whole computation stays on the slice.  On the slice
  an incoming wall with normal ``d`` traces the full line ``R*d`` and an
  outgoing wall traces the ray ``R>=0 * (-d)``.

The crossing algebra is the same in both views.  A segment with exponent
``E`` crossing a wall with normal ``d`` multiplies its monomial by
``func ** |<E_m, d>|`` where ``E_m`` is the first-two-coordinates part;
the absolute value is correct because the functional is oriented to be
negative on the incoming velocity, which makes the exponent positive for
every transversal crossing.  Bending means keeping the ``j``-th power
term: the exponent shifts by ``j`` times the wall's step vector
``(p*(d), d)`` and the coefficient multiplies by that term's series
coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import GenericPositionError, InputError, UnsupportedInputError
from .lattice import (
    LaurentPoly,
    dual_pair,
    p_star,
    tilde_p_star,
    vec_add,
    vec_scale,
    x_degree,
)
from .scattering import (
    CrossingPath,
    ScatteringDiagram,
    Wall,
    cluster_complex_chambers,
    find_chamber,
    path_ordered_product,
)

Vec = tuple[int, ...]
Point = tuple[Fraction, Fraction]

VIEWS = ("m", "n")


# ---------------------------------------------------------------------------
# 2D exact geometry helpers (rational coordinates)


def _as_point(raw: Sequence) -> Point:
    pt = tuple(Fraction(x) for x in raw)
    if len(pt) != 2:
        raise UnsupportedInputError("broken lines are drawn in two dimensions")
    return pt


def _fcross(a: Sequence, b: Sequence) -> Fraction:
    return a[0] * b[1] - a[1] * b[0]


def _fdot(a: Sequence, b: Sequence) -> Fraction:
    return a[0] * b[0] + a[1] * b[1]


_ORIGIN = (Fraction(0), Fraction(0))


# ---------------------------------------------------------------------------
# Projection views


def _slice_compatible(m0: Vec, eps: Sequence[Sequence[int]]) -> bool:
    """Whether ``m0`` lies on the slice ``{(p*(v), v)}`` with ``v != 0``."""
    n = len(m0) // 2
    npart = m0[n:]
    if all(x == 0 for x in npart):
        return False
    return tuple(m0[:n]) == p_star(eps, npart)


def resolve_view(diagram: ScatteringDiagram, m0: Sequence[int], view: str = "auto") -> str:
    """Pick (or validate) the 2D projection used to draw broken lines."""
    m0 = tuple(int(x) for x in m0)
    eps = diagram.seed.exchange_block()
    if view == "auto":
        return "n" if _slice_compatible(m0, eps) else "m"
    if view not in VIEWS:
        raise InputError(f"unknown view {view!r}; expected one of {VIEWS + ('auto',)}")
    if view == "n" and not _slice_compatible(m0, eps):
        raise UnsupportedInputError(
            "view 'n' needs an initial exponent on the slice "
            "(first half equal to p* of the nonzero second half)"
        )
    return view


def _velocity(expo: Vec, view: str, n: int) -> Point:
    part = expo[:n] if view == "m" else expo[n:]
    return (Fraction(-part[0]), Fraction(-part[1]))


# ---------------------------------------------------------------------------
# Wall traces in a view


@dataclass(frozen=True)
class _Trace:
    """The 2D footprint of a wall in the chosen view."""

    wall: Wall
    kind: str  # "line" or "ray"
    direction: Vec

    def contains(self, pt: Point) -> bool:
        if _fcross(self.direction, pt) != 0:
            return False
        if self.kind == "line":
            return True
        return _fdot(self.direction, pt) >= 0


def _wall_trace(wall: Wall, view: str) -> _Trace:
    if view == "m":
        return _Trace(wall, wall.kind, wall.direction())
    if wall.incoming:
        return _Trace(wall, "line", wall.normal)
    return _Trace(wall, "ray", vec_scale(-1, wall.normal))


def ensure_generic_view(diagram: ScatteringDiagram, pt: Point, view: str) -> None:
    """Reject endpoints on the diagram's support (in the chosen view)."""
    if pt == _ORIGIN:
        raise GenericPositionError("endpoint at the origin is never generic")
    for wall in diagram.walls:
        if _wall_trace(wall, view).contains(pt):
            raise GenericPositionError(
                f"endpoint {pt} lies on the wall with normal {wall.normal}; "
                "perturb it off the support"
            )


def _backward_crossings(
    point: Point, velocity: Point, traces: Sequence[_Trace]
) -> list[tuple[Fraction, _Trace, Point]]:
    """Wall crossings of the backward ray ``{point - s*velocity : s > 0}``.

    Returned nearest-first.  Raises when the ray runs inside a support
    line or passes through the origin, both of which make the broken
    line degenerate.
    """
    found: list[tuple[Fraction, _Trace, Point]] = []
    for trace in traces:
        d = trace.direction
        denom = _fcross(d, velocity)
        if denom == 0:
            if _fcross(d, point) == 0:
                raise GenericPositionError(
                    f"a segment runs along the support line of the wall with "
                    f"normal {trace.wall.normal}; perturb the endpoint"
                )
            continue
        s = _fcross(d, point) / denom
        if s <= 0:
            continue
        x = (point[0] - s * velocity[0], point[1] - s * velocity[1])
        if x == _ORIGIN:
            raise GenericPositionError(
                "a segment passes through the origin; perturb the endpoint"
            )
        if trace.kind == "ray" and _fdot(d, x) < 0:
            continue
        found.append((s, trace, x))
    found.sort(key=lambda item: item[0])
    return found


# ---------------------------------------------------------------------------
# Broken lines


@dataclass(frozen=True)
class Segment:
    """One straight piece of a broken line, in travel order.

    ``start`` is the bend point where the piece begins (``None`` for the
    unbounded first piece), ``bend_wall``/``bend_power`` describe the
    bend that created it: the wall crossed there and the power term kept
    from the crossing series.  ``coefficient`` is cumulative, so the
    last segment carries the line's contribution to the theta function.
    """

    coefficient: int
    exponent: Vec
    start: Point | None
    bend_wall: Wall | None
    bend_power: int


@dataclass(frozen=True)
class BrokenLine:
    initial_exponent: Vec
    endpoint: Point
    view: str
    segments: tuple[Segment, ...]

    @property
    def final_exponent(self) -> Vec:
        return self.segments[-1].exponent

    @property
    def coefficient(self) -> int:
        return self.segments[-1].coefficient

    def bends(self) -> tuple[tuple[Wall, int], ...]:
        """The (wall, power) pairs in bend order along the line."""
        return tuple((seg.bend_wall, seg.bend_power) for seg in self.segments[1:])


@dataclass(frozen=True)
class ThetaResult:
    value: LaurentPoly
    lines: tuple[BrokenLine, ...]
    order: int
    endpoint: Point
    view: str


def _sort_key(line: BrokenLine):
    return (
        line.final_exponent,
        len(line.segments),
        tuple(
            (seg.bend_wall.normal, seg.bend_power, seg.start)
            for seg in line.segments[1:]
        ),
    )


class _Engine:
    """Backward depth-first enumeration shared by the public entry points."""

    def __init__(self, diagram: ScatteringDiagram, view: str):
        if diagram.rank != 2:
            raise UnsupportedInputError("broken lines implemented for rank-2 diagrams")
        self.diagram = diagram
        self.view = view
        self.n = diagram.rank
        self.eps = diagram.seed.exchange_block()
        self.traces = [_wall_trace(w, view) for w in diagram.walls]
        self._powers: dict[tuple[Wall, int], object] = {}

    def exponent(self, m0: Vec, c: Vec) -> Vec:
        return vec_add(m0, tilde_p_star(self.eps, c + (0,) * self.n))

    def step(self, wall: Wall) -> Vec:
        return tilde_p_star(self.eps, wall.normal + (0,) * self.n)

    def bend_factor(self, wall: Wall, power: int, j: int) -> int:
        """Coefficient of the ``j``-th step term in ``wall.func ** power``."""
        key = (wall, power)
        series = self._powers.get(key)
        if series is None:
            series = wall.func ** power
            self._powers[key] = series
        return series.coefficient(vec_scale(j, self.step(wall)))

    def search(self, m0: Vec, endpoint: Point, c_final: Vec) -> list[BrokenLine]:
        out: list[BrokenLine] = []
        self._descend(m0, c_final, endpoint, [], out, endpoint)
        return out

    def _descend(
        self,
        m0: Vec,
        c_cur: Vec,
        point: Point,
        rev_bends: list[tuple[Wall, Point, int, int]],
        out: list[BrokenLine],
        endpoint: Point,
    ) -> None:
        expo = self.exponent(m0, c_cur)
        vel = _velocity(expo, self.view, self.n)
        if vel == _ORIGIN:
            return
        # The scan also polices degeneracies (origin passage, running
        # inside a support line), so it runs even for the bend-free
        # initial segment.
        crossings = _backward_crossings(point, vel, self.traces)
        if all(x == 0 for x in c_cur):
            out.append(self._assemble(m0, endpoint, rev_bends))
            return
        for _, trace, x in crossings:
            normal = trace.wall.normal
            j = 1
            while True:
                c_prev = tuple(a - j * b for a, b in zip(c_cur, normal))
                if any(a < 0 for a in c_prev):
                    break
                prev_expo = self.exponent(m0, c_prev)
                pairing = dual_pair(prev_expo[: self.n], normal)
                if pairing != 0:
                    factor = self.bend_factor(trace.wall, abs(pairing), j)
                    if factor:
                        rev_bends.append((trace.wall, x, j, factor))
                        self._descend(m0, c_prev, x, rev_bends, out, endpoint)
                        rev_bends.pop()
                j += 1

    def _assemble(
        self,
        m0: Vec,
        endpoint: Point,
        rev_bends: list[tuple[Wall, Point, int, int]],
    ) -> BrokenLine:
        segments = [Segment(1, m0, None, None, 0)]
        c: Vec = (0,) * self.n
        coeff = 1
        for wall, x, j, factor in reversed(rev_bends):
            c = vec_add(c, vec_scale(j, wall.normal))
            coeff *= factor
            segments.append(Segment(coeff, self.exponent(m0, c), x, wall, j))
        return BrokenLine(m0, endpoint, self.view, tuple(segments))


def enumerate_broken_lines(
    m0: Sequence[int],
    endpoint: Sequence,
    diagram: ScatteringDiagram,
    k: int,
    *,
    view: str = "auto",
    final_filter: Sequence[int | None] | None = None,
) -> tuple[BrokenLine, ...]:
    """All broken lines with initial exponent ``m0`` ending at ``endpoint``.

    ``k`` bounds the series degree of the final exponent.  The optional
    ``final_filter`` keeps only lines whose final exponent matches every
    non-``None`` entry.  Endpoints on the diagram's support raise
    :class:`GenericPositionError`.
    """
    m0 = tuple(int(x) for x in m0)
    n = diagram.rank
    if len(m0) != 2 * n:
        raise InputError(f"initial exponent must have length {2 * n}")
    if all(x == 0 for x in m0):
        raise InputError("initial exponent must be nonzero")
    if k < 0:
        raise InputError("degree bound must be nonnegative")
    budget = k - x_degree(m0, n)
    if budget > diagram.order:
        raise InputError(
            f"degree bound {k} needs bend weight up to {budget}, beyond the "
            f"diagram's series order {diagram.order}; complete a deeper diagram"
        )
    chosen = resolve_view(diagram, m0, view)
    q = _as_point(endpoint)
    ensure_generic_view(diagram, q, chosen)
    engine = _Engine(diagram, chosen)
    if _velocity(m0, chosen, n) == _ORIGIN:
        raise UnsupportedInputError(
            f"initial exponent {m0} has no direction in view {chosen!r}"
        )
    if final_filter is not None and len(final_filter) != 2 * n:
        raise InputError(f"final filter must have length {2 * n}")
    lines: list[BrokenLine] = []
    for c1 in range(budget + 1):
        for c2 in range(budget + 1 - c1):
            c = (c1, c2)
            final = engine.exponent(m0, c)
            if final_filter is not None and any(
                want is not None and have != want
                for have, want in zip(final, final_filter)
            ):
                continue
            lines.extend(engine.search(m0, q, c))
    lines.sort(key=_sort_key)
    return tuple(lines)


def theta_function(
    m0: Sequence[int],
    endpoint: Sequence,
    diagram: ScatteringDiagram,
    k: int,
    *,
    view: str = "auto",
    final_filter: Sequence[int | None] | None = None,
) -> ThetaResult:
    """Sum of final monomials over all broken lines of degree at most ``k``."""
    lines = enumerate_broken_lines(
        m0, endpoint, diagram, k, view=view, final_filter=final_filter
    )
    value = LaurentPoly()
    for line in lines:
        value = value + LaurentPoly.monomial(line.final_exponent, line.coefficient)
    chosen = resolve_view(diagram, m0, view)
    return ThetaResult(value, lines, k, _as_point(endpoint), chosen)


# ---------------------------------------------------------------------------
# Validation


class Validation:
    """Boolean-like validation outcome carrying a diagnostic reason."""

    __slots__ = ("ok", "reason")

    def __init__(self, ok: bool, reason: str = ""):
        self.ok = ok
        self.reason = reason

    def __bool__(self) -> bool:
        return self.ok

    def __repr__(self) -> str:
        return f"Validation({self.ok}, {self.reason!r})"


def _fail(reason: str) -> Validation:
    return Validation(False, reason)


def validate_broken_line(line: BrokenLine, diagram: ScatteringDiagram) -> Validation:
    """Re-check a broken line's geometry and algebra against the diagram."""
    n = diagram.rank
    if n != 2:
        return _fail("validation implemented for rank-2 diagrams")
    if line.view not in VIEWS:
        return _fail(f"unknown view {line.view!r}")
    engine = _Engine(diagram, line.view)
    segs = line.segments
    if not segs:
        return _fail("a broken line needs at least one segment")
    first = segs[0]
    if first.coefficient != 1:
        return _fail("the initial segment must have coefficient 1")
    if tuple(first.exponent) != tuple(line.initial_exponent):
        return _fail("the initial segment must carry the initial exponent")
    if first.start is not None or first.bend_wall is not None:
        return _fail("the initial segment comes in from infinity, with no bend")
    try:
        ensure_generic_view(diagram, line.endpoint, line.view)
    except GenericPositionError as exc:
        return _fail(str(exc))
    walls = set(diagram.walls)
    for i, seg in enumerate(segs):
        vel = _velocity(seg.exponent, line.view, n)
        if vel == _ORIGIN:
            return _fail(f"segment {i} has a direction-free monomial")
        end = segs[i + 1].start if i + 1 < len(segs) else line.endpoint
        if end is None:
            return _fail(f"segment {i + 1} is missing its bend point")
        if seg.start is not None:
            delta = (end[0] - seg.start[0], end[1] - seg.start[1])
            if _fcross(delta, vel) != 0 or _fdot(delta, vel) <= 0:
                return _fail(
                    f"segment {i} does not travel with velocity {vel} "
                    f"from {seg.start} to {end}"
                )
        if i == 0:
            continue
        prev = segs[i - 1]
        if seg.bend_wall is None or seg.bend_power < 1:
            return _fail(f"segment {i} must record the bend that created it")
        if seg.bend_wall not in walls:
            return _fail(f"segment {i} bends on a wall absent from the diagram")
        trace = _wall_trace(seg.bend_wall, line.view)
        if seg.start == _ORIGIN or not trace.contains(seg.start):
            return _fail(
                f"bend point {seg.start} of segment {i} is off the wall with "
                f"normal {seg.bend_wall.normal}"
            )
        shift = vec_scale(seg.bend_power, engine.step(seg.bend_wall))
        if tuple(seg.exponent) != vec_add(prev.exponent, shift):
            return _fail(
                f"segment {i} exponent is not the previous exponent plus "
                f"{seg.bend_power} wall steps"
            )
        pairing = dual_pair(prev.exponent[:n], seg.bend_wall.normal)
        if pairing == 0:
            return _fail(f"segment {i - 1} meets its bend wall tangentially")
        factor = engine.bend_factor(seg.bend_wall, abs(pairing), seg.bend_power)
        if factor == 0 or seg.coefficient != prev.coefficient * factor:
            return _fail(
                f"segment {i} coefficient does not match the crossing series"
            )
    return Validation(True)


# ---------------------------------------------------------------------------
# Chamber transport route


def theta_via_path(
    m0: Sequence[int],
    endpoint: Sequence,
    diagram: ScatteringDiagram,
    *,
    depth: int = 8,
) -> LaurentPoly:
    """Transport ``z^{m0}`` from its chamber to the endpoint.

    Works when the first-two-coordinates direction of ``m0`` lies in a
    chamber of the mutation fan (explored to ``depth``); there the theta
    function is the bare monomial, and the path-ordered product moves it
    to the requested endpoint.
    """
    m0 = tuple(int(x) for x in m0)
    n = diagram.rank
    if n != 2:
        raise UnsupportedInputError("chamber transport implemented for rank 2")
    if len(m0) != 2 * n:
        raise InputError(f"initial exponent must have length {2 * n}")
    direction = m0[:n]
    if all(x == 0 for x in direction):
        raise UnsupportedInputError("initial exponent has no chamber direction")
    chambers = cluster_complex_chambers(diagram.seed, depth)
    try:
        chamber = find_chamber(chambers, direction)
    except InputError as exc:
        raise UnsupportedInputError(
            f"direction {direction} lies outside the explored mutation fan"
        ) from exc
    start = chamber.interior_point()
    path = CrossingPath(start=start, end=_as_point(endpoint))
    action = path_ordered_product(path, diagram)
    return action.apply(LaurentPoly.monomial(m0))


def restrict_to_A(theta: ThetaResult | LaurentPoly) -> LaurentPoly:
    """Set every series variable to 1: keep only first-half exponents."""
    poly = theta.value if isinstance(theta, ThetaResult) else theta
    width = poly.width()
    if width is None:
        return LaurentPoly.zero()
    if width % 2:
        raise InputError("expected exponents in a doubled lattice")
    n = width // 2
    folded: dict[Vec, int] = {}
    for expo, coeff in poly.terms.items():
        key = expo[:n]
        folded[key] = folded.get(key, 0) + coeff
    return LaurentPoly(folded)
