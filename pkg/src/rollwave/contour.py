"""Contours in the spectral plane, adaptive winding numbers, real-axis scans.

The winding number of the Evans function along a closed positively-oriented
contour counts the roots enclosed (argument principle).  Mesh adaptivity
keeps the relative change of D between consecutive points below a threshold
(default 0.2), which bounds each argument increment away from pi and makes
the per-step principal-branch accumulation exact.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import NumericalError, UnreliableResultError, ValidationError
from .evans import EvansSystem, evans_eval

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class _Segment:
    """One smooth piece: a circular arc (center 0) or a straight line."""

    kind: str  # "arc" | "line"
    a: complex  # arc: radius (real); line: start point
    b: complex  # arc: (theta0, theta1) packed as a complex; line: end point

    def point(self, t: float) -> complex:
        if self.kind == "arc":
            theta = self.b.real + t * (self.b.imag - self.b.real)
            return self.a.real * cmath.exp(1j * theta)
        return self.a + t * (self.b - self.a)

    def reversed(self) -> "_Segment":
        if self.kind == "arc":
            return _Segment("arc", self.a, complex(self.b.imag, self.b.real))
        return _Segment("line", self.b, self.a)


@dataclass(frozen=True)
class SpectralContour:
    segments: tuple
    closed: bool
    descriptor: dict = field(compare=False)
    n0: int = 32

    def initial_nodes(self):
        """Per-segment parameter nodes; junction points appear in both pieces."""
        return [
            (si, j / self.n0) for si in range(len(self.segments)) for j in range(self.n0 + 1)
        ]

    def point(self, node) -> complex:
        si, t = node
        return self.segments[si].point(t)

    @property
    def points(self) -> np.ndarray:
        return np.array([self.point(nd) for nd in self.initial_nodes()])

    def reversed(self) -> "SpectralContour":
        segs = tuple(s.reversed() for s in reversed(self.segments))
        desc = dict(self.descriptor)
        desc["orientation"] = "negative" if desc.get("orientation", "positive") == "positive" else "positive"
        return SpectralContour(segments=segs, closed=self.closed, descriptor=desc, n0=self.n0)


@dataclass(frozen=True)
class WindingResult:
    winding: int
    max_rel_step: float
    n_points: int


@dataclass(frozen=True)
class RealRoot:
    root: float
    bracket: tuple


def build_semicircle(R: float, r_in: float = 1e-3, n0: int = 32) -> SpectralContour:
    """Positively-oriented boundary of {Re lambda >= 0, r_in <= |lambda| <= R}.

    Outer arc from -iR through R to +iR, down the imaginary axis, a clockwise
    indentation arc of radius r_in around the origin, and back down to -iR.
    """
    if not (0.0 < r_in < R):
        raise ValidationError(f"need 0 < r_in < R, got r_in={r_in}, R={R}")
    if n0 < 16:
        raise ValidationError(f"n0 must be >= 16, got {n0}")
    segments = (
        _Segment("arc", complex(R), complex(-math.pi / 2.0, math.pi / 2.0)),
        _Segment("line", 1j * R, 1j * r_in),
        _Segment("arc", complex(r_in), complex(math.pi / 2.0, -math.pi / 2.0)),
        _Segment("line", -1j * r_in, -1j * R),
    )
    descriptor = {
        "shape": "semicircle-with-indentation",
        "R": float(R),
        "r_in": float(r_in),
        "orientation": "positive",
    }
    return SpectralContour(segments=segments, closed=True, descriptor=descriptor, n0=int(n0))


def _reduced_delta(log_a: complex, log_b: complex) -> complex:
    """log(D_b/D_a) with the imaginary part reduced to (-pi, pi]."""
    d = log_b - log_a
    im = math.remainder(d.imag, TWO_PI)
    return complex(d.real, im)


def _rel_change(d: complex) -> float:
    """|exp(d) - 1| without overflow for large |Re d|."""
    if abs(d.real) > 10.0:
        return math.inf if d.real > 0.0 else 1.0
    return abs(cmath.exp(d) - 1.0)


def adaptive_winding(
    system: EvansSystem,
    contour: SpectralContour,
    max_rel_change: float = 0.2,
    max_points: int = 20000,
) -> WindingResult:
    """Winding number of D along the contour with midpoint mesh refinement.

    The relative change |D_{j+1}/D_j - 1| (computed in log form, immune to
    radial overflow) is driven below max_rel_change on every consecutive
    pair by inserting parameter midpoints; exceeding max_points raises
    UnreliableResultError.
    """
    if not contour.closed:
        raise ValidationError("winding numbers require a closed contour")
    cache: dict = {}

    def logD(node) -> complex:
        if node not in cache:
            lam = contour.point(node)
            # the reduced determinant d0 = D * exp(-log_gamma) has the same
            # winding as D (log_gamma is continuous and single-valued in
            # lambda) but is order-one in modulus and slowly varying, so the
            # 0.2 relative-change criterion stays meaningful at large radii
            cache[node] = cmath.log(evans_eval(system, lam).reduced)
        return cache[node]

    nodes = contour.initial_nodes()
    for nd in nodes:
        logD(nd)
    while True:
        inserts = []
        for j in range(len(nodes) - 1):
            a, b = nodes[j], nodes[j + 1]
            if a[0] != b[0]:
                continue  # junction duplicate, same lambda
            d = _reduced_delta(logD(a), logD(b))
            if _rel_change(d) > max_rel_change:
                inserts.append((j, (a[0], 0.5 * (a[1] + b[1]))))
        if not inserts:
            break
        if len(cache) + len(inserts) > max_points:
            raise UnreliableResultError(
                f"winding mesh would exceed max_points={max_points}; result unreliable"
            )
        for j, nd in reversed(inserts):
            nodes.insert(j + 1, nd)
            logD(nd)

    total = 0.0
    max_rel = 0.0
    for j in range(len(nodes) - 1):
        d = _reduced_delta(logD(nodes[j]), logD(nodes[j + 1]))
        total += d.imag
        max_rel = max(max_rel, _rel_change(d))
    w = total / TWO_PI
    if abs(w - round(w)) > 0.05:
        raise NumericalError(f"argument accumulation {w:.6f} is not close to an integer")
    return WindingResult(winding=int(round(w)), max_rel_step=max_rel, n_points=len(nodes))


def real_axis_scan(system: EvansSystem, interval, n: int = 200):
    """Roots of D on a positive real interval, bisected to width 1e-8.

    D is real on the real axis by conjugate symmetry; a residual imaginary
    part above tolerance indicates a broken evaluation and raises.
    """
    a, b = float(interval[0]), float(interval[1])
    if not (0.0 < a < b):
        raise ValidationError(f"need 0 < a < b, got ({a}, {b})")
    if n < 2:
        raise ValidationError("n must be >= 2")

    def Dr(lam: float) -> float:
        ev = evans_eval(system, complex(lam))
        if abs(ev.D.imag) > 1e-8 * max(abs(ev.D.real), 1.0):
            raise NumericalError(f"Evans value not real on the real axis at lambda={lam}: {ev.D}")
        return ev.D.real

    xs = np.linspace(a, b, n)
    vals = [Dr(x) for x in xs]
    roots = []
    for j in range(n - 1):
        v0, v1 = vals[j], vals[j + 1]
        if v0 == 0.0:
            roots.append(RealRoot(root=float(xs[j]), bracket=(float(xs[j]), float(xs[j]))))
            continue
        if v0 * v1 < 0.0:
            lo, hi = float(xs[j]), float(xs[j + 1])
            r = brentq(Dr, lo, hi, xtol=1e-8)
            roots.append(RealRoot(root=float(r), bracket=(lo, hi)))
    if vals[-1] == 0.0:
        roots.append(RealRoot(root=b, bracket=(b, b)))
    return roots
