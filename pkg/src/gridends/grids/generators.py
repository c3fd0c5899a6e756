"""Domain generators and rasterization.

Each generator turns a DomainSpec into concrete planar geometry: a base
region given by a predicate on cell centers, a list of one-dimensional
obstacle segments to remove, the effective window, which window sides are
truncation clips (the true domain continues beyond them), and the smallest
represented feature gap (used to reject spacings too coarse to separate
features).

Obstacle segments are measure-zero sets in the plane; the grid realizes them
as every cell whose closed square the segment meets, which dilates them to at
least one full cell of thickness and guarantees that a rasterized slit
4-disconnects its two sides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.typing import NDArray

from gridends.errors import BadParams, SpacingTooCoarse, UnknownGenerator
from gridends.grids.domain import DomainSpec, GridDomain, Window

# Obstacle primitives: ("h", y, x_lo, x_hi) or ("v", x, y_lo, y_hi).
Obstacle = tuple[str, float, float, float]


@dataclass
class Geometry:
    """Resolved geometry of a spec, ready to rasterize."""

    window: Window
    clipped: frozenset[str]
    min_gap: float
    base: Callable[[NDArray[np.float64], NDArray[np.float64]], NDArray[np.bool_]]
    obstacles: list[Obstacle] = field(default_factory=list)


def _span(lo: float, hi: float, origin: float, h: float, n: int) -> range:
    """Lattice indices of cells whose closed h-interval meets [lo, hi]."""
    i0 = math.ceil((lo - origin) / h - 1.0)
    i1 = math.floor((hi - origin) / h)
    return range(max(i0, 0), min(i1, n - 1) + 1)


def rasterize(spec: DomainSpec, spacing: float) -> GridDomain:
    """Realize a domain spec on a cell lattice.

    The effective window is the generator's (possibly clipped) window with
    extents snapped to whole cells. Obstacles are removed after sampling the
    base region at cell centers.

    Raises:
        UnknownGenerator: spec.name is not registered.
        SpacingTooCoarse: a represented feature gap is below 3*spacing.
        BadParams: generator parameters are invalid.
    """
    if spacing <= 0:
        raise BadParams("spacing must be positive")
    try:
        build = GENERATORS[spec.name]
    except KeyError:
        raise UnknownGenerator(spec.name) from None
    geom = build(spec)
    if geom.min_gap < 3.0 * spacing:
        raise SpacingTooCoarse(
            f"{spec.name}: smallest feature gap {geom.min_gap:.6g} "
            f"< 3 * spacing = {3 * spacing:.6g}"
        )
    x0, y0, x1, y1 = geom.window
    nx = max(1, round((x1 - x0) / spacing))
    ny = max(1, round((y1 - y0) / spacing))
    window = (x0, y0, x0 + nx * spacing, y0 + ny * spacing)
    xs = x0 + (np.arange(nx) + 0.5) * spacing
    ys = y0 + (np.arange(ny) + 0.5) * spacing
    cx, cy = np.meshgrid(xs, ys, indexing="ij")
    inside = np.asarray(geom.base(cx, cy), dtype=bool)
    for kind, c, lo, hi in geom.obstacles:
        if hi < lo:
            continue
        if kind == "h":
            rows = _span(c, c, y0, spacing, ny)
            cols = _span(lo, hi, x0, spacing, nx)
        elif kind == "v":
            cols = _span(c, c, x0, spacing, nx)
            rows = _span(lo, hi, y0, spacing, ny)
        else:
            raise BadParams(f"unknown obstacle kind {kind!r}")
        if len(rows) and len(cols):
            inside[cols.start : cols.stop, rows.start : rows.stop] = False
    return GridDomain(spec, spacing, window, inside, geom.clipped)


def _param(spec: DomainSpec, key: str, default: float | None = None) -> float:
    if key in spec.params:
        return float(spec.params[key])
    if default is None:
        raise BadParams(f"{spec.name}: missing parameter {key!r}")
    return default


# -- bounded model domains ----------------------------------------------


def _disk(spec: DomainSpec) -> Geometry:
    r = _param(spec, "radius", 1.0)
    ax = _param(spec, "cx", 0.0)
    ay = _param(spec, "cy", 0.0)
    if r <= 0:
        raise BadParams("disk radius must be positive")
    return Geometry(
        window=spec.window,
        clipped=frozenset(),
        min_gap=math.inf,
        base=lambda x, y: (x - ax) ** 2 + (y - ay) ** 2 < r * r,
    )


def _rectangle(spec: DomainSpec) -> Geometry:
    x0, y0, x1, y1 = spec.window
    return Geometry(
        window=spec.window,
        clipped=frozenset(),
        min_gap=math.inf,
        base=lambda x, y: (x > x0) & (x < x1) & (y > y0) & (y < y1),
    )


def _half_disk(spec: DomainSpec) -> Geometry:
    r = _param(spec, "radius", 1.0)
    if r <= 0:
        raise BadParams("half_disk radius must be positive")
    return Geometry(
        window=spec.window,
        clipped=frozenset(),
        min_gap=math.inf,
        base=lambda x, y: (x * x + y * y < r * r) & (y > 0),
    )


def _slit_disk(spec: DomainSpec) -> Geometry:
    r = _param(spec, "radius", 1.0)
    if r <= 0:
        raise BadParams("slit_disk radius must be positive")
    return Geometry(
        window=spec.window,
        clipped=frozenset(),
        min_gap=math.inf,
        base=lambda x, y: x * x + y * y < r * r,
        obstacles=[("h", 0.0, 0.0, r)],
    )


def _punctured_box(spec: DomainSpec) -> Geometry:
    hole = _param(spec, "hole_radius", 0.05)
    if hole <= 0:
        raise BadParams("hole_radius must be positive")
    return Geometry(
        window=spec.window,
        clipped=frozenset(("left", "right", "bottom", "top")),
        min_gap=math.inf,
        base=lambda x, y: x * x + y * y > hole * hole,
    )


def _half_plane(spec: DomainSpec) -> Geometry:
    return Geometry(
        window=spec.window,
        clipped=frozenset(("left", "right", "top")),
        min_gap=math.inf,
        base=lambda x, y: y > 0,
    )


# -- comb families -------------------------------------------------------


def _comb(spec: DomainSpec, positions: list[float], next_pos: float) -> Geometry:
    """Unit square minus vertical teeth at the given x positions.

    The teeth of the infinite family accumulate at x = 0; drawing only
    finitely many would leave fake free space left of the last tooth, so the
    window is clipped where the first unrepresented tooth would stand and the
    left side is marked as a continuation clip. The strip between that edge
    and the last drawn tooth is genuine and stays; only tooth-to-tooth gaps
    feed the aliasing guard.
    """
    x0, y0, x1, y1 = spec.window
    gaps = [a - b for a, b in zip(positions, positions[1:])]
    return Geometry(
        window=(max(x0, next_pos), y0, x1, y1),
        clipped=frozenset(("left",)),
        min_gap=min(gaps) if gaps else math.inf,
        base=lambda x, y: (x < 1.0) & (y > 0.0) & (y < 1.0),
        obstacles=[("v", p, 0.0, 0.5) for p in positions],
    )


def _harmonic_comb(spec: DomainSpec) -> Geometry:
    t = spec.truncation
    return _comb(spec, [1.0 / (n + 1) for n in range(1, t + 1)], 1.0 / (t + 2))


def _comb_1_over_n(spec: DomainSpec) -> Geometry:
    t = spec.truncation
    return _comb(spec, [1.0 / n for n in range(1, t + 1)], 1.0 / (t + 1))


def _double_comb_teeth(
    spec: DomainSpec, lower_end: Callable[[int], float], upper_start: Callable[[int], float]
) -> Geometry:
    """Unit square minus interleaved long teeth.

    Pair n has a tooth at height 1/(2n) anchored to the left wall and one at
    height 1/(2n+1) anchored to the right wall, for n = 2 .. truncation. The
    teeth accumulate at y = 0 but the corridor below the last pair is kept:
    the finite-pair domain honestly contains it.
    """
    pairs = range(2, spec.truncation + 1)
    obstacles: list[Obstacle] = []
    heights: list[float] = []
    for n in pairs:
        obstacles.append(("h", 1.0 / (2 * n), 0.0, lower_end(n)))
        obstacles.append(("h", 1.0 / (2 * n + 1), upper_start(n), 1.0))
        heights += [1.0 / (2 * n), 1.0 / (2 * n + 1)]
    gaps = [a - b for a, b in zip(heights, heights[1:])]
    x0, y0, x1, y1 = spec.window
    return Geometry(
        window=spec.window,
        clipped=frozenset(),
        min_gap=min(gaps),
        base=lambda x, y: (x > 0.0) & (x < 1.0) & (y > 0.0) & (y < 1.0),
        obstacles=obstacles,
    )


def _double_comb(spec: DomainSpec) -> Geometry:
    return _double_comb_teeth(spec, lambda n: 1.0 - 1.0 / n, lambda n: 1.0 / n)


def _double_comb_fixed(spec: DomainSpec) -> Geometry:
    return _double_comb_teeth(spec, lambda n: 2.0 / 3.0, lambda n: 1.0 / 3.0)


# -- slit strip ----------------------------------------------------------


def _strip_with_slits(spec: DomainSpec) -> Geometry:
    """Right half-strip (0, inf) x (0, 1) minus slits [0, k] x {2^-k}."""
    t = spec.truncation
    x0, y0, x1, y1 = spec.window
    heights = [2.0 ** (-k) for k in range(1, t + 1)]
    gaps = [a - b for a, b in zip(heights, heights[1:])]
    gaps.append(heights[-1])  # last slit down to the bottom edge
    return Geometry(
        window=(max(x0, 0.0), 0.0, x1, 1.0),
        clipped=frozenset(("right",)),
        min_gap=min(gaps),
        base=lambda x, y: (x > 0.0) & (y > 0.0) & (y < 1.0),
        obstacles=[("h", 2.0 ** (-k), 0.0, float(k)) for k in range(1, t + 1)],
    )


# -- gate barriers -------------------------------------------------------


def _gate_obstacles(
    cx: float, cy: float, height: float, k_max: int, window: Window
) -> list[Obstacle]:
    """Barrier set: baseline with a gap plus nested claws on both sides.

    The baseline removes the horizontal line through (cx, cy) except for the
    gap (cx-1, cx+1). Claw k has a sealed post at horizontal offset
    +-(1 - 2^-k) spanning heights +-height*2^-k, with horizontal arms from
    the post out to offset +-2^k at those heights.
    """
    x0, _, x1, _ = window
    obs: list[Obstacle] = [
        ("h", cy, x0, cx - 1.0),
        ("h", cy, cx + 1.0, x1),
    ]
    for k in range(1, k_max + 1):
        dx = 1.0 - 2.0 ** (-k)
        dy = height * 2.0 ** (-k)
        reach = 2.0**k
        for sx in (1.0, -1.0):
            obs.append(("v", cx + sx * dx, cy - dy, cy + dy))
            lo, hi = sorted((cx + sx * dx, cx + sx * reach))
            obs.append(("h", cy - dy, lo, hi))
            obs.append(("h", cy + dy, lo, hi))
    return obs


def _barrier_gate(spec: DomainSpec) -> Geometry:
    height = _param(spec, "height", 0.5)
    k_max = int(_param(spec, "k_max", 1))
    if not (0 < height) or k_max < 1:
        raise BadParams("barrier_gate needs height > 0 and k_max >= 1")
    return Geometry(
        window=spec.window,
        clipped=frozenset(("left", "right", "bottom", "top")),
        min_gap=min(height, 1.0) * 2.0 ** (-k_max),
        base=lambda x, y: np.ones_like(x, dtype=bool),
        obstacles=_gate_obstacles(0.0, 0.0, height, k_max, spec.window),
    )


def _gate_half_plane(spec: DomainSpec) -> Geometry:
    """Upper half-plane with a gate barrier at (2^j, 2^-j) per truncation j.

    Gate j = 2 .. truncation+1 has height 2^(-4j); the optional
    gate_height_scale parameter replaces that with scale * 2^-j, which keeps
    the claw geometry but makes it resolvable at desk spacings.
    """
    t = spec.truncation
    k_max = int(_param(spec, "k_max", 3))
    scale = spec.params.get("gate_height_scale")
    if k_max < 1:
        raise BadParams("k_max must be >= 1")
    obstacles: list[Obstacle] = []
    min_gap = math.inf
    for j in range(2, t + 2):
        cx, cy = 2.0**j, 2.0 ** (-j)
        height = float(scale) * 2.0 ** (-j) if scale is not None else 2.0 ** (-4 * j)
        if height >= cy:
            raise BadParams("gate height must stay below the gate elevation")
        obstacles += _gate_obstacles(cx, cy, height, k_max, spec.window)
        min_gap = min(
            min_gap,
            height * 2.0 ** (-k_max),  # arm stack pitch
            2.0 ** (-k_max),  # post pitch
            cy - height,  # clearance to the floor
        )
    return Geometry(
        window=spec.window,
        clipped=frozenset(("left", "right", "top")),
        min_gap=min_gap,
        base=lambda x, y: y > 0,
        obstacles=obstacles,
    )


# -- spiral tube ---------------------------------------------------------


def _tube_legs(k: int) -> list[tuple[float, float, float, float]]:
    """Polyline legs (x0, y0, x1, y1) of stage k of the square spiral."""
    a, b, c = 2.0 ** (-k), 2.0 ** (-k - 1), 2.0 ** (-k - 2)
    top = 2.0**k
    return [
        (a, 1.0, a, top),
        (b, top, a, top),
        (b, 0.0, b, top),
        (c, 0.0, b, 0.0),
        (c, 0.0, c, 1.0),
    ]


def _spiral_tube(spec: DomainSpec) -> Geometry:
    """Open tube neighborhoods of the even spiral stages, joined end to end.

    Stage j uses polyline 2j with tube half-width 64^(-2j) (overridable via
    the half_width parameter, same value for all stages). The next stage's
    rising leg is included as a stub so a window that cuts it realizes the
    tube continuing toward infinity.
    """
    t = spec.truncation
    hw = spec.params.get("half_width")
    x0, y0, x1, y1 = spec.window
    legs: list[tuple[float, float, float, float, float]] = []
    xs: list[float] = []
    widths: list[float] = []
    for j in range(1, t + 1):
        k = 2 * j
        w = float(hw) if hw is not None else 64.0 ** (-k)
        for lx0, ly0, lx1, ly1 in _tube_legs(k):
            legs.append((lx0, ly0, lx1, ly1, w))
        xs += [2.0 ** (-k), 2.0 ** (-k - 1), 2.0 ** (-k - 2)]
        widths.append(w)
    stub_x = 2.0 ** (-2 * t - 2)
    stub_w = float(hw) if hw is not None else 64.0 ** (-2 * t - 2)
    legs.append((stub_x, 1.0, stub_x, y1 + 1.0, stub_w))
    widths.append(stub_w)
    walls = sorted(set(xs))  # consecutive stages share their junction leg
    wall_gaps = [q - p - 2.0 * max(widths) for p, q in zip(walls, walls[1:])]
    min_gap = min(min(wall_gaps, default=math.inf), 2.0 * min(widths))

    def base(x: NDArray[np.float64], y: NDArray[np.float64]) -> NDArray[np.bool_]:
        mask = np.zeros_like(x, dtype=bool)
        for lx0, ly0, lx1, ly1, w in legs:
            mask |= (
                (x > lx0 - w) & (x < lx1 + w) & (y > ly0 - w) & (y < ly1 + w)
            )
        return mask

    return Geometry(
        window=spec.window,
        clipped=frozenset(("top",)),
        min_gap=min_gap,
        base=base,
    )


GENERATORS: dict[str, Callable[[DomainSpec], Geometry]] = {
    "disk": _disk,
    "rectangle": _rectangle,
    "half_disk": _half_disk,
    "slit_disk": _slit_disk,
    "punctured_box": _punctured_box,
    "half_plane": _half_plane,
    "harmonic_comb": _harmonic_comb,
    "comb_1_over_n": _comb_1_over_n,
    "double_comb": _double_comb,
    "double_comb_fixed": _double_comb_fixed,
    "strip_with_slits": _strip_with_slits,
    "barrier_gate": _barrier_gate,
    "gate_half_plane": _gate_half_plane,
    "spiral_tube": _spiral_tube,
}
