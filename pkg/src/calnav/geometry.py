"""Axis-aligned box and box-union geometry.

Boxes are closed axis-aligned rectangles (2D) or cuboids (3D). Unions are
finite lists of boxes, possibly overlapping. Containment between unions is
decided exactly by coordinate-compressed slab decomposition: every box edge
coordinate becomes a grid line, so each induced cell lies entirely inside or
outside every box and a single midpoint probe per cell is exact. No sampling
is involved. Zero-thickness boxes are treated as empty regions (containment
is up to measure zero).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .conformal import minimal_parameter


@dataclass(frozen=True)
class Aabb:
    """Closed axis-aligned box given by min and max corners (meters)."""

    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self):
        lo = tuple(float(v) for v in self.lo)
        hi = tuple(float(v) for v in self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if len(lo) != len(hi) or len(lo) not in (2, 3):
            raise ValueError(f"expected 2 or 3 coordinates, got {len(lo)}/{len(hi)}")
        if not all(math.isfinite(v) for v in lo + hi):
            raise ValueError("box coordinates must be finite")
        if any(l > h for l, h in zip(lo, hi)):
            raise ValueError(f"box has lo > hi: {lo} > {hi}")

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def extents(self) -> tuple[float, ...]:
        return tuple(h - l for l, h in zip(self.lo, self.hi))

    @property
    def center(self) -> tuple[float, ...]:
        return tuple((l + h) / 2.0 for l, h in zip(self.lo, self.hi))

    def area(self) -> float:
        return float(np.prod(self.extents))

    def is_degenerate(self) -> bool:
        """True when some axis has zero thickness (zero measure)."""
        return any(l == h for l, h in zip(self.lo, self.hi))

    def corners(self) -> np.ndarray:
        """All 2^d corner points, shape (2^d, d)."""
        axes = [(l, h) for l, h in zip(self.lo, self.hi)]
        pts = np.array(np.meshgrid(*axes, indexing="ij")).reshape(self.dim, -1).T
        return pts


@dataclass(frozen=True)
class BoxUnion:
    """Finite union of boxes; an empty list is the empty region."""

    boxes: tuple[Aabb, ...]

    def __post_init__(self):
        object.__setattr__(self, "boxes", tuple(self.boxes))
        dims = {b.dim for b in self.boxes}
        if len(dims) > 1:
            raise ValueError("mixed dimensions in union")

    @classmethod
    def of(cls, *boxes: Aabb) -> "BoxUnion":
        return cls(tuple(boxes))

    @classmethod
    def empty(cls) -> "BoxUnion":
        return cls(())

    @classmethod
    def from_arrays(cls, lo: np.ndarray, hi: np.ndarray) -> "BoxUnion":
        lo = np.atleast_2d(lo)
        hi = np.atleast_2d(hi)
        return cls(tuple(Aabb(tuple(l), tuple(h)) for l, h in zip(lo, hi)))

    def __len__(self) -> int:
        return len(self.boxes)

    def is_empty(self) -> bool:
        """True when the union has zero measure."""
        return all(b.is_degenerate() for b in self.boxes)

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """(lo, hi) stacked as (n, d) arrays; (0, 0)-shaped when empty."""
        if not self.boxes:
            return np.zeros((0, 0)), np.zeros((0, 0))
        lo = np.array([b.lo for b in self.boxes])
        hi = np.array([b.hi for b in self.boxes])
        return lo, hi


def inflate(box: Aabb, q: float) -> Aabb | None:
    """Grow (q > 0) or shrink (q < 0) a box by q meters on every face.

    Returns None when a negative q collapses some axis (empty region).
    """
    lo = tuple(l - q for l in box.lo)
    hi = tuple(h + q for h in box.hi)
    if any(l > h for l, h in zip(lo, hi)):
        return None
    return Aabb(lo, hi)


def inflate_union(union: BoxUnion, q: float) -> BoxUnion:
    """Inflate every member box by q; collapsed boxes drop out."""
    out = []
    for b in union.boxes:
        ib = inflate(b, q)
        if ib is not None:
            out.append(ib)
    return BoxUnion(tuple(out))


class RectRegion:
    """Coordinate-compressed occupancy of a box union over a slab grid.

    The cut coordinates must include every edge coordinate of every box that
    will be tested against the region; midpoint probes are then exact.
    """

    def __init__(self, cuts: Sequence[np.ndarray], mask: np.ndarray):
        self.cuts = [np.asarray(c, dtype=float) for c in cuts]
        self.mask = mask

    @classmethod
    def build(cls, union: BoxUnion, cuts: Sequence[np.ndarray]) -> "RectRegion":
        mids = [(c[:-1] + c[1:]) / 2.0 for c in cuts]
        shape = tuple(len(m) for m in mids)
        mask = np.zeros(shape, dtype=bool)
        d = len(mids)
        for b in union.boxes:
            if b.is_degenerate():
                continue
            cell = None
            for k in range(d):
                ind = (mids[k] >= b.lo[k]) & (mids[k] <= b.hi[k])
                ind = ind.reshape([-1 if j == k else 1 for j in range(d)])
                cell = ind if cell is None else (cell & ind)
            mask |= cell
        return cls(cuts, mask)


def _cuts(dim: int, unions: Iterable[BoxUnion]) -> list[np.ndarray]:
    per_axis: list[list[float]] = [[] for _ in range(dim)]
    for u in unions:
        for b in u.boxes:
            for k in range(dim):
                per_axis[k].append(b.lo[k])
                per_axis[k].append(b.hi[k])
    return [np.unique(np.array(c, dtype=float)) for c in per_axis]


def contains(a: BoxUnion, b: BoxUnion) -> bool:
    """Exact test that every point of union a lies in union b.

    Decided on the slab grid induced by all edge coordinates of both unions;
    zero-measure slivers of a (degenerate boxes) do not count.
    """
    a_solid = [box for box in a.boxes if not box.is_degenerate()]
    if not a_solid:
        return True
    dim = a_solid[0].dim
    if b.boxes and b.boxes[0].dim != dim:
        raise ValueError("dimension mismatch between unions")
    if b.is_empty():
        return False
    cuts = _cuts(dim, [a, b])
    ra = RectRegion.build(BoxUnion(tuple(a_solid)), cuts)
    rb = RectRegion.build(b, cuts)
    return not bool(np.any(ra.mask & ~rb.mask))


def minimal_inflation(
    a: BoxUnion,
    b: BoxUnion,
    bracket: tuple[float, float],
    tol: float = 1e-4,
) -> float:
    """Smallest q (within tol) with contains(a, inflate_union(b, q)).

    Containment is monotone in q, so bisection applies. Returns the bracket
    floor when it already suffices (deflation floor) and +inf when even the
    bracket ceiling fails.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    q_lo, q_hi = bracket
    if q_lo >= q_hi:
        raise ValueError("bracket must satisfy q_lo < q_hi")
    return minimal_parameter(lambda q: contains(a, inflate_union(b, q)), (q_lo, q_hi), tol)


class AreaOps(NamedTuple):
    a_not_b: float
    b_not_a: float
    union: float
    inter: float
    hull: float


def area_ops(a: Aabb, b: Aabb) -> AreaOps:
    """Exact areas of a\\b, b\\a, a∪b, a∩b and the joint bounding box.

    The "hull" of two axis-aligned boxes is their coordinate-wise bounding
    box (the usual enclosing-box choice), not the true convex hull.
    """
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    ov = [max(0.0, min(ah, bh) - max(al, bl))
          for al, ah, bl, bh in zip(a.lo, a.hi, b.lo, b.hi)]
    inter = float(np.prod(ov))
    area_a = a.area()
    area_b = b.area()
    hull = float(np.prod([max(ah, bh) - min(al, bl)
                          for al, ah, bl, bh in zip(a.lo, a.hi, b.lo, b.hi)]))
    return AreaOps(
        a_not_b=area_a - inter,
        b_not_a=area_b - inter,
        union=area_a + area_b - inter,
        inter=inter,
        hull=hull,
    )


def diagonal(box: Aabb) -> float:
    """Euclidean length of the box diagonal."""
    return float(np.hypot.reduce(np.array(box.extents))) if box.dim == 2 else float(
        np.sqrt(np.sum(np.square(box.extents))))
