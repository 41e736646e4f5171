"""Walls, wall-crossing automorphisms, consistency completion in rank 2,
and cluster-complex wall fans in any rank.

Geometry conventions
--------------------
* All rank-2 geometry lives in the plane obtained by pairing exponents
  with base-lattice vectors coordinatewise (the "A-side" projection).
  Every wall support passes through the origin, so a path between two
  generic points is, up to homotopy avoiding the origin, an angular
  sweep; paths are therefore specified by start/end points plus a turn
  direction, and all angle comparisons use exact integer cross products.
* A wall stores a primitive normal with nonnegative entries, a support
  ("line" through the origin, "ray" from the origin, or a "cone" spanned
  by chamber generators in higher rank), a crossing function — a graded
  series in the doubled-lattice monomial of the normal with constant
  term 1 — and an incoming flag.
* Crossing signs: a crossing is positive when the pairing with the wall
  normal increases along the travel direction.  The crossing function is
  applied as ``z^e -> z^e * f^{s * <e_m, normal>}`` where ``s`` is -1 for
  a positive crossing and +1 for a negative one (the signed normal pairs
  negatively with the travel direction), and ``e_m`` is the base-lattice
  part of the exponent.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable, Sequence

from .cluster import Seed, apply_word, mutate_seed
from .errors import (
    GenericPositionError,
    InputError,
    NonTransversalCrossingError,
    UnsupportedInputError,
)
from .lattice import (
    GradedSeries,
    LaurentPoly,
    Vec,
    dual_pair,
    p_star,
    primitive,
    tilde_p_star,
    vec_add,
    vec_is_zero,
    vec_scale,
    vec_sub,
    x_degree,
)
from .quiver import (
    Quiver,
    classify_indecomposable,
    euler_form,
    is_predecessor,
    quiver_to_skew,
)

DEFAULT_ORDER = 8

Point = tuple[Fraction, Fraction]


def as_point(raw: Sequence) -> Point:
    """Coerce a pair of rationals (ints, strings, Fractions) to a point."""
    if len(raw) != 2:
        raise InputError("points live in the plane: need two coordinates")
    return (Fraction(raw[0]), Fraction(raw[1]))


def _direction_of_point(pt: Point) -> Vec:
    """Primitive integer direction of a nonzero rational point."""
    if pt[0] == 0 and pt[1] == 0:
        raise InputError("the origin has no direction")
    denom = pt[0].denominator * pt[1].denominator
    return primitive((int(pt[0] * denom), int(pt[1] * denom)))


def _cross(a: Sequence[int], b: Sequence[int]) -> int:
    return a[0] * b[1] - a[1] * b[0]


def _rot90(v: Sequence[int]) -> Vec:
    """Rotate a quarter turn anticlockwise."""
    return (-v[1], v[0])


# ---------------------------------------------------------------------------
# Walls and diagrams


@dataclass(frozen=True)
class Wall:
    """One wall of a scattering diagram.

    ``normal`` is primitive with nonnegative entries.  ``kind`` is
    "line" (full line through the origin, rank 2), "ray" (from the
    origin, rank 2), or "cone" (facet spanned by ``span`` in rank >= 3);
    for the 2D kinds ``span`` holds the single primitive direction.
    ``func`` has constant term 1 and lives in powers of the doubled
    monomial of the normal.
    """

    normal: Vec
    kind: str
    span: tuple[Vec, ...]
    func: GradedSeries
    incoming: bool

    def __post_init__(self) -> None:
        if any(x < 0 for x in self.normal) or vec_is_zero(self.normal):
            raise InputError("wall normal must be nonzero with nonnegative entries")
        if self.normal != primitive(self.normal):
            raise InputError("wall normal must be primitive")
        if self.kind not in ("line", "ray", "cone"):
            raise InputError(f"unknown wall kind {self.kind!r}")
        if self.func.constant_term() != 1:
            raise InputError("wall function must have constant term 1")

    def direction(self) -> Vec:
        if self.kind == "cone":
            raise InputError("cone walls have no single direction")
        return self.span[0]


@dataclass(frozen=True)
class ScatteringDiagram:
    """A finite-order collection of walls attached to a seed."""

    seed: Seed
    order: int
    walls: tuple[Wall, ...]

    @property
    def rank(self) -> int:
        return self.seed.rank


def initial_diagram(seed: Seed, order: int = DEFAULT_ORDER) -> ScatteringDiagram:
    """One incoming wall per seed direction: the coordinate hyperplane of
    each unit normal, with function ``1 + z^(doubled unit monomial)``."""
    n = seed.rank
    eps = seed.exchange_block()
    walls = []
    for i in range(n):
        unit = tuple(int(j == i) for j in range(n))
        expo = tilde_p_star(eps, unit + (0,) * n)
        func = GradedSeries.from_poly(
            n, order, LaurentPoly.one(2 * n) + LaurentPoly.monomial(expo)
        )
        if n == 2:
            span: tuple[Vec, ...] = ((0, 1) if i == 0 else (1, 0),)
            kind = "line"
        else:
            span = tuple(
                tuple(int(k == j) for k in range(n)) for j in range(n) if j != i
            )
            kind = "cone"
        walls.append(Wall(unit, kind, span, func, incoming=True))
    return ScatteringDiagram(seed, order, tuple(walls))


# ---------------------------------------------------------------------------
# Wall crossing


def wall_cross(
    poly: LaurentPoly, wall: Wall, sign: int, order: int
) -> LaurentPoly:
    """Push a Laurent polynomial through one wall crossing.

    ``sign`` is the crossing sign (+1 when the normal pairing increases
    along the travel direction).  Each monomial ``z^e`` becomes
    ``z^e * func^{-sign * <e_m, normal>}`` truncated at the series
    order.
    """
    if sign not in (1, -1):
        raise NonTransversalCrossingError(
            "crossing sign must be +1 or -1 (tangential crossings are invalid)"
        )
    n = len(wall.normal)
    out = LaurentPoly.zero()
    for expo, coeff in poly.terms.items():
        pairing = dual_pair(expo[:n], wall.normal)
        power = -sign * pairing
        if power == 0:
            out = out + LaurentPoly({expo: coeff})
            continue
        factor = wall.func.truncate(order) ** power
        out = out + (factor.poly * LaurentPoly({expo: coeff}))
    # re-truncate: multiplying by series may exceed the order
    truncated = {
        e: c for e, c in out.terms.items() if x_degree(e, n) <= order and c
    }
    return LaurentPoly(truncated)


# ---------------------------------------------------------------------------
# Angular paths


def _sector(base: Vec, u: Vec) -> int:
    """0 = same direction, 1 = strictly anticlockwise side (0, pi),
    2 = opposite, 3 = clockwise side (pi, 2 pi)."""
    cr = _cross(base, u)
    dt = base[0] * u[0] + base[1] * u[1]
    if cr == 0:
        return 0 if dt > 0 else 2
    return 1 if cr > 0 else 3


def angular_order_from(base: Vec, directions: Iterable[Vec]) -> list[Vec]:
    """Sort directions by anticlockwise angle from ``base`` (exclusive)."""

    def compare(u1: Vec, u2: Vec) -> int:
        s1, s2 = _sector(base, u1), _sector(base, u2)
        if s1 != s2:
            return -1 if s1 < s2 else 1
        cr = _cross(u1, u2)
        if cr == 0:
            return 0
        return -1 if cr > 0 else 1

    return sorted(directions, key=cmp_to_key(compare))


def _ccw_strictly_between(base: Vec, u: Vec, end: Vec) -> bool:
    """Is ``u`` strictly inside the anticlockwise sweep from base to end?"""
    sb, se = _sector(base, u), _sector(base, end)
    if _sector(base, end) == 0:
        return False
    if sb == 0:
        return False
    if sb != se:
        return sb < se
    return _cross(u, end) > 0


@dataclass(frozen=True)
class CrossingPath:
    """An origin-avoiding path between two generic points, encoded as an
    angular sweep: start point, end point, turn direction, and a number
    of extra full anticlockwise loops."""

    start: Point
    end: Point
    turn: str = "auto"
    full_loops: int = 0

    def __post_init__(self) -> None:
        if self.turn not in ("auto", "ccw", "cw"):
            raise InputError('turn must be "auto", "ccw" or "cw"')
        if self.full_loops < 0:
            raise InputError("full_loops must be nonnegative")


def _support_events(diagram: ScatteringDiagram) -> list[tuple[Vec, Wall]]:
    """All (support direction, wall) crossing events; a full line yields
    one event per direction."""
    events = []
    for wall in diagram.walls:
        if wall.kind == "cone":
            raise UnsupportedInputError(
                "angular paths are only defined for 2D diagrams"
            )
        dirs = [wall.direction()]
        if wall.kind == "line":
            dirs.append(vec_scale(-1, wall.direction()))
        for u in dirs:
            events.append((primitive(u), wall))
    return events


def _point_on_support(pt: Point, wall: Wall) -> bool:
    u = wall.direction()
    if pt[0] * u[1] != pt[1] * u[0]:
        return False
    if wall.kind == "line":
        return True
    # ray: same side as the direction
    return pt[0] * u[0] + pt[1] * u[1] > 0


def ensure_generic(diagram: ScatteringDiagram, pt: Point) -> None:
    """Reject the origin and points on any wall support."""
    if pt[0] == 0 and pt[1] == 0:
        raise GenericPositionError("the origin is never a generic point")
    for wall in diagram.walls:
        if _point_on_support(pt, wall):
            raise GenericPositionError(
                f"point {pt} lies on the wall with normal {wall.normal}"
            )


def path_crossings(
    path: CrossingPath, diagram: ScatteringDiagram
) -> list[tuple[Wall, int]]:
    """The ordered (wall, sign) crossing list of an angular path.

    Signs are computed from the anticlockwise tangent at each crossed
    support direction; clockwise travel flips them and reverses order.
    """
    if diagram.rank != 2:
        raise UnsupportedInputError("angular paths need a rank-2 diagram")
    ensure_generic(diagram, path.start)
    ensure_generic(diagram, path.end)
    start_dir = _direction_of_point(path.start)
    end_dir = _direction_of_point(path.end)
    events = _support_events(diagram)
    ordered = angular_order_from(start_dir, [u for u, _ in events])
    by_dir: dict[Vec, list[Wall]] = {}
    for u, wall in events:
        by_dir.setdefault(u, []).append(wall)

    def sweep_ccw() -> list[tuple[Wall, int]]:
        out = []
        for u in ordered:
            if _ccw_strictly_between(start_dir, u, end_dir):
                for wall in by_dir[u]:
                    out.append((wall, _ccw_sign(u, wall)))
        return out

    def sweep_cw() -> list[tuple[Wall, int]]:
        crossed = [
            u
            for u in ordered
            if _sector(start_dir, u) != 0
            and not _ccw_strictly_between(start_dir, u, end_dir)
            and _sector(end_dir, u) != 0
        ]
        out = []
        for u in reversed(crossed):
            for wall in by_dir[u]:
                out.append((wall, -_ccw_sign(u, wall)))
        return out

    loop_events: list[tuple[Wall, int]] = []
    for _ in range(path.full_loops):
        for u in ordered:
            if _sector(start_dir, u) == 0:
                raise GenericPositionError(
                    "loop start direction lies on a wall support"
                )
        for u in ordered:
            for wall in by_dir[u]:
                loop_events.append((wall, _ccw_sign(u, wall)))

    if path.turn == "ccw":
        tail = sweep_ccw()
    elif path.turn == "cw":
        tail = sweep_cw()
    else:
        ccw, cw = sweep_ccw(), sweep_cw()
        tail = ccw if len(ccw) <= len(cw) else cw
    return loop_events + tail


def _ccw_sign(u: Vec, wall: Wall) -> int:
    tangent = _rot90(u)
    s = dual_pair(tangent, wall.normal)
    if s == 0:
        raise NonTransversalCrossingError(
            f"support direction {u} is tangent to its own normal pairing"
        )
    return 1 if s > 0 else -1


def crossing_sign(direction: Sequence[int], wall: Wall) -> int:
    """Sign of a straight crossing with the given 2D travel direction:
    +1 when the normal pairing increases, -1 when it decreases."""
    s = dual_pair(tuple(direction), wall.normal)
    if s == 0:
        raise NonTransversalCrossingError(
            f"travel direction {tuple(direction)} is tangent to the wall "
            f"with normal {wall.normal}"
        )
    return 1 if s > 0 else -1


class PathAction:
    """The composite wall-crossing automorphism of a path, truncated."""

    def __init__(self, crossings: list[tuple[Wall, int]], order: int):
        self.crossings = crossings
        self.order = order

    def apply(self, poly: LaurentPoly) -> LaurentPoly:
        out = poly
        for wall, sign in self.crossings:
            out = wall_cross(out, wall, sign, self.order)
        return out


def path_ordered_product(path: CrossingPath, diagram: ScatteringDiagram) -> PathAction:
    return PathAction(path_crossings(path, diagram), diagram.order)


# ---------------------------------------------------------------------------
# Rank-2 consistency completion


def _loop_action(diagram: ScatteringDiagram, base_dir: Vec) -> PathAction:
    """Full anticlockwise loop starting (and ending) just after
    ``base_dir``, which must avoid every support direction."""
    events = _support_events(diagram)
    for u, _ in events:
        if _sector(base_dir, u) == 0:
            raise GenericPositionError("loop base direction lies on a support")
    ordered = angular_order_from(base_dir, [u for u, _ in events])
    by_dir: dict[Vec, list[Wall]] = {}
    for u, wall in events:
        by_dir.setdefault(u, []).append(wall)
    crossings = []
    for u in ordered:
        for wall in by_dir[u]:
            crossings.append((wall, _ccw_sign(u, wall)))
    return PathAction(crossings, diagram.order)


def complete_rank2(
    diagram: ScatteringDiagram, order: int
) -> ScatteringDiagram:
    """Add outgoing rays until every loop around the origin acts as the
    identity modulo the given order.

    Degree by degree, the full-loop defect is measured on the unit
    base-lattice monomials; each degree-``d`` defect term must be a
    doubled monomial ``z^(p~*(c, 0))`` with ``c`` of degree ``d``, and is
    cancelled by inserting ``(1 + z^(p~*(c,0)))^t`` on the ray in
    direction ``-p*(c)``.  The exponents ``t`` must come out as positive
    integers; anything else is an inconsistency and raises.
    """
    seed = diagram.seed
    n = seed.rank
    if n != 2:
        raise UnsupportedInputError("completion is implemented in rank 2 only")
    eps = seed.exchange_block()
    base_dir = (-1, 1)
    walls = [replace(w, func=w.func.truncate(order)) for w in diagram.walls]
    unit_vectors = [
        tuple(int(j == i) for j in range(2 * n)) for i in range(2 * n)
    ]

    for degree in range(1, order + 1):
        current = ScatteringDiagram(seed, order, tuple(walls))
        loop = _loop_action(current, base_dir)
        coeff_by_c: dict[Vec, int] = {}
        for i, unit in enumerate(unit_vectors):
            image = loop.apply(LaurentPoly.monomial(unit))
            defect = image - LaurentPoly.monomial(unit)
            for expo, coeff in defect.terms.items():
                rel = vec_sub(expo, unit)
                if x_degree(rel, n) != degree:
                    continue
                c = rel[n:]
                if any(x < 0 for x in c) or rel[:n] != p_star(eps, c):
                    raise InputError(
                        f"defect term {rel} is not a doubled normal monomial"
                    )
                # the loop defect is a sum of ray derivations; each pairs
                # monomials against the *primitive* normal of its ray
                pairing = dual_pair(unit[:n], primitive(c))
                if i < n:
                    if pairing == 0:
                        continue
                    value, rem = divmod(coeff, pairing)
                    if rem:
                        raise InputError(
                            f"defect coefficient {coeff} not divisible by "
                            f"pairing {pairing} at degree {degree}"
                        )
                    prev = coeff_by_c.setdefault(c, value)
                    if prev != value:
                        raise InputError(
                            f"inconsistent defect readings {prev} vs {value} "
                            f"for normal {c}"
                        )
                else:
                    # pure coefficient-lattice monomials pair to zero and
                    # must show no defect at all
                    raise InputError(
                        f"frozen-direction monomial picked up a defect {rel}"
                    )
        for c in sorted(coeff_by_c):
            a_c = coeff_by_c[c]
            if a_c == 0:
                continue
            ray_dir = primitive(vec_scale(-1, p_star(eps, c)))
            s = _ccw_sign(ray_dir, _bare_ray(c, ray_dir, n, order))
            # the inserted ray contributes -s*t per unit pairing to the
            # loop defect, so t = a_c * s cancels the measured a_c
            t = a_c * s
            if t <= 0:
                raise InputError(
                    f"completion produced a nonpositive exponent {t} for "
                    f"normal {c}; positivity violated"
                )
            expo = tilde_p_star(eps, c + (0,) * n)
            factor = GradedSeries.from_poly(
                n,
                order,
                LaurentPoly.one(2 * n) + LaurentPoly.monomial(expo),
            ) ** t
            walls = _merge_ray(walls, c, ray_dir, factor, n, order)
    final = ScatteringDiagram(seed, order, tuple(walls))
    _assert_consistent(final, base_dir, unit_vectors)
    return final


def _bare_ray(c: Vec, ray_dir: Vec, n: int, order: int) -> Wall:
    return Wall(
        primitive(c),
        "ray",
        (ray_dir,),
        GradedSeries.one(n, order),
        incoming=False,
    )


def _merge_ray(
    walls: list[Wall],
    c: Vec,
    ray_dir: Vec,
    factor: GradedSeries,
    n: int,
    order: int,
) -> list[Wall]:
    out = []
    merged = False
    for wall in walls:
        if wall.kind == "ray" and wall.direction() == ray_dir:
            out.append(replace(wall, func=wall.func * factor))
            merged = True
        else:
            out.append(wall)
    if not merged:
        out.append(
            Wall(primitive(c), "ray", (ray_dir,), factor, incoming=False)
        )
    return out


def _assert_consistent(
    diagram: ScatteringDiagram, base_dir: Vec, unit_vectors: list[Vec]
) -> None:
    loop = _loop_action(diagram, base_dir)
    for unit in unit_vectors:
        if loop.apply(LaurentPoly.monomial(unit)) != LaurentPoly.monomial(unit):
            raise InputError(
                "completion failed to make the loop product trivial"
            )


# ---------------------------------------------------------------------------
# Cluster-complex walls in any rank


@dataclass(frozen=True)
class Chamber:
    """A mutation-reachable chamber: generator columns, wall normals, and
    the word that reaches its seed."""

    generators: tuple[Vec, ...]
    normals: tuple[Vec, ...]
    word: tuple[int, ...]

    def interior_point(self) -> Vec:
        total = self.generators[0]
        for g in self.generators[1:]:
            total = vec_add(total, g)
        return total


def _positive_rep(v: Vec) -> Vec:
    if all(x <= 0 for x in v):
        return vec_scale(-1, v)
    if all(x >= 0 for x in v):
        return v
    raise InputError(f"vector {v} has mixed signs; coherence violated")


def cluster_complex_chambers(seed: Seed, depth: int) -> list[Chamber]:
    """Breadth-first mutation search recording each distinct chamber."""
    if depth < 0:
        raise InputError("depth must be nonnegative")
    n = seed.rank
    seen: dict[frozenset[Vec], Chamber] = {}

    def record(s: Seed) -> bool:
        """Store the chamber of ``s``; True when it was new."""
        gens = tuple(tuple(row[j] for row in s.g_matrix()) for j in range(n))
        key = frozenset(gens)
        if key in seen:
            return False
        normals = tuple(_positive_rep(c) for c in s.c_vectors())
        seen[key] = Chamber(gens, normals, s.word)
        return True

    record(seed)
    current = [seed]
    for _ in range(depth):
        nxt = []
        for s in current:
            for k in range(1, n + 1):
                child = mutate_seed(s, k)
                if record(child):
                    nxt.append(child)
        current = nxt
    return list(seen.values())


def cluster_complex_diagram(
    seed: Seed, depth: int, order: int = DEFAULT_ORDER
) -> ScatteringDiagram:
    """Walls separating adjacent chambers of the mutation fan.

    Each seed direction ``k`` contributes the facet of its chamber with
    the ``k``-th generator removed, normal the positive representative of
    the ``k``-th c-vector, and function ``1 + z^(p~*(normal, 0))``.
    """
    n = seed.rank
    eps = seed.exchange_block()
    chambers = cluster_complex_chambers(seed, depth)
    walls: dict[tuple[Vec, tuple[Vec, ...]], Wall] = {}
    for chamber in chambers:
        s = apply_word(seed, chamber.word)
        for k in range(1, n + 1):
            normal = _positive_rep(s.c_vectors()[k - 1])
            span = tuple(
                g for j, g in enumerate(chamber.generators) if j != k - 1
            )
            key = (normal, tuple(sorted(span)))
            if key in walls:
                continue
            expo = tilde_p_star(eps, normal + (0,) * n)
            func = GradedSeries.from_poly(
                n, order, LaurentPoly.one(2 * n) + LaurentPoly.monomial(expo)
            )
            if n == 2:
                walls[key] = Wall(
                    normal, "ray", (primitive(span[0]),), func, incoming=False
                )
            else:
                walls[key] = Wall(normal, "cone", span, func, incoming=False)
    ordered = tuple(
        walls[key] for key in sorted(walls, key=lambda k: (k[0], k[1]))
    )
    return ScatteringDiagram(seed, order, ordered)


def find_chamber(chambers: Sequence[Chamber], point: Sequence) -> Chamber:
    """The chamber whose closed cone contains the point (rank 2)."""
    pt = tuple(Fraction(x) for x in point)
    if len(pt) != 2:
        raise UnsupportedInputError("chamber location implemented in rank 2")
    for chamber in chambers:
        g1, g2 = chamber.generators
        det = _cross(g1, g2)
        if det == 0:
            continue
        alpha = Fraction(pt[0] * g2[1] - pt[1] * g2[0], det)
        beta = Fraction(g1[0] * pt[1] - g1[1] * pt[0], det)
        if alpha >= 0 and beta >= 0:
            return chamber
    raise InputError(f"point {point} lies in no explored chamber")


# ---------------------------------------------------------------------------
# Positive-crossing order theorem check


def ar_order_check(w1: Wall, w2: Wall, q: Quiver) -> bool:
    """Check the translate-order statement for a positive crossing pair.

    For walls crossed first-``w1``-then-``w2``, both positively, with the
    crossing leaving through the outgoing part of ``w1``, the
    indecomposable of ``w2``'s normal must precede the indecomposable of
    ``w1``'s normal.  Regular-regular pairs are unsupported.  As a
    cross-check, the skew pairing identity relating the two normals'
    bilinear forms is asserted.
    """
    c1, c2 = w1.normal, w2.normal
    if c1 == c2:
        return True
    node1 = classify_indecomposable(q, c1)
    node2 = classify_indecomposable(q, c2)
    if node1.component == "R" and node2.component == "R":
        raise UnsupportedInputError(
            "order check between two regular normals is not determined"
        )
    eps = quiver_to_skew(q)
    lhs = dual_pair(vec_scale(-1, p_star(eps, c1)), c2)
    rhs = euler_form(q, c1, c2) - euler_form(q, c2, c1)
    if lhs != rhs:
        raise InputError(
            f"pairing identity failed: {lhs} != {rhs} for normals {c1}, {c2}"
        )
    return is_predecessor(q, node2, node1)


# ---------------------------------------------------------------------------
# Serialization


def diagram_to_json(diagram: ScatteringDiagram) -> dict:
    walls = []
    for wall in diagram.walls:
        walls.append(
            {
                "normal": list(wall.normal),
                "kind": wall.kind,
                "span": [list(v) for v in wall.span],
                "incoming": wall.incoming,
                "function": {
                    ",".join(str(x) for x in expo): coeff
                    for expo, coeff in wall.func.poly.sorted_terms()
                },
            }
        )
    return {"order": diagram.order, "rank": diagram.rank, "walls": walls}
