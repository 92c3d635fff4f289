"""Matrix-valued classical Hamiltonian on CP^2 and its three-level band structure.

The symbol is ``H(lam, [Z]) = (1 - lam) * diag(-1, 0, 1) + lam * |Z><Z|`` with
``|Z><Z|`` the orthogonal projector onto the complex line spanned by ``Z``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import GapClosed

H0 = np.diag([-1.0, 0.0, 1.0]).astype(complex)

NORM_TOL = 1e-12
GAP_TOL = 1e-9
DISCRIMINANT_TOL = 1e-18

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class PhasePoint:
    """Unit-norm representative ``Z`` of a point ``[Z]`` of CP^2."""

    z: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.z, dtype=complex).reshape(3)
        nrm = np.linalg.norm(z)
        if nrm == 0.0:
            raise ValueError("the zero vector does not represent a point of CP^2")
        if abs(nrm - 1.0) > NORM_TOL:
            z = z / nrm
        object.__setattr__(self, "z", z)

    def rephase(self, phi: float) -> "PhasePoint":
        return PhasePoint(np.exp(1j * phi) * self.z)


@dataclass(frozen=True)
class ChartPoint:
    """Affine chart coordinates: slot ``chart`` (1..3) of ``Z`` set to 1."""

    chart: int
    w: tuple[complex, complex]

    def __post_init__(self):
        if self.chart not in (1, 2, 3):
            raise ValueError(f"chart must be 1, 2 or 3, got {self.chart}")


@dataclass(frozen=True)
class SymbolMatrix:
    m: np.ndarray
    lam: float


@dataclass(frozen=True)
class SearchConfig:
    """Controls for the phase-space gap minimization.

    ``grid`` points per chart axis (four axes per chart, three charts),
    ``refine_iters`` golden-section steps per line search, ``sweeps`` rounds of
    coordinate-wise descent. ``n_starts`` best grid cells are refined, plus
    ``random_starts`` seeded random chart points.
    """

    grid: int = 10
    refine_iters: int = 64
    sweeps: int = 40
    n_starts: int = 3
    random_starts: int = 0
    seed: int = 0


@dataclass(frozen=True)
class GapMinimum:
    gap: float
    argmin: PhasePoint
    chart: int = field(default=1)


def as_phase_point(p) -> PhasePoint:
    return p if isinstance(p, PhasePoint) else PhasePoint(np.asarray(p, dtype=complex))


def chart_embed(p: ChartPoint) -> PhasePoint:
    w = np.asarray(p.w, dtype=complex)
    z = np.insert(w, p.chart - 1, 1.0)
    return PhasePoint(z / np.linalg.norm(z))


def compact_chart_coords(chart: int, x: np.ndarray) -> np.ndarray:
    """Embed compactified chart coordinates ``(t1, phi1, t2, phi2)`` into C^3.

    ``w_k = tan(t_k) exp(i phi_k)``; works on arrays with a trailing axis of
    length 4 and returns unit vectors with a trailing axis of length 3.
    """
    x = np.asarray(x, dtype=float)
    w1 = np.tan(x[..., 0]) * np.exp(1j * x[..., 1])
    w2 = np.tan(x[..., 2]) * np.exp(1j * x[..., 3])
    one = np.ones_like(w1)
    slots = [w1, w2]
    slots.insert(chart - 1, one)
    z = np.stack(slots, axis=-1)
    return z / np.linalg.norm(z, axis=-1, keepdims=True)


def symbol_matrices(lam: float, z: np.ndarray) -> np.ndarray:
    """Batched symbol: ``z`` has shape ``(..., 3)``; returns ``(..., 3, 3)``."""
    z = np.asarray(z, dtype=complex)
    z = z / np.linalg.norm(z, axis=-1, keepdims=True)
    line = z[..., :, None] * z.conj()[..., None, :]
    return (1.0 - lam) * H0 + lam * line


def symbol_matrix(lam: float, p) -> SymbolMatrix:
    p = as_phase_point(p)
    return SymbolMatrix(m=symbol_matrices(lam, p.z), lam=float(lam))


def symbol_spectrum(lam: float, p) -> tuple[float, float, float]:
    e = np.linalg.eigvalsh(symbol_matrix(lam, p).m)
    return float(e[0]), float(e[1]), float(e[2])


def gap(lam: float, p, pair: tuple[int, int] = (2, 3)) -> float:
    k = _check_pair(pair)
    e = symbol_spectrum(lam, p)
    return e[k] - e[k - 1]


def discriminant(m: np.ndarray) -> float:
    """Discriminant ``prod_{i<j} (E_i - E_j)^2`` of a 3x3 Hermitian matrix.

    Evaluated exactly in rationals from the characteristic-polynomial
    coefficients of the given floating-point entries. The float version of
    this expression cancels catastrophically (noise near 1e-16), which would
    swamp any threshold tied to a 1e-9 gap. No eigensolver is involved.
    """
    m = np.asarray(m, dtype=complex)
    d = [Fraction(float(m[k, k].real)) for k in range(3)]

    def entry(i, j):
        return Fraction(float(m[i, j].real)), Fraction(float(m[i, j].imag))

    (x12, y12), (x13, y13), (x23, y23) = entry(0, 1), entry(0, 2), entry(1, 2)
    n12, n13, n23 = x12**2 + y12**2, x13**2 + y13**2, x23**2 + y23**2
    # Re(b12 b23 conj(b13))
    cyc = (x12 * x23 - y12 * y23) * x13 + (x12 * y23 + y12 * x23) * y13
    det = d[0] * d[1] * d[2] + 2 * cyc - d[0] * n23 - d[1] * n13 - d[2] * n12
    a = -(d[0] + d[1] + d[2])
    b = d[0] * d[1] + d[0] * d[2] + d[1] * d[2] - n12 - n13 - n23
    c = -det
    disc = a * a * b * b - 4 * b**3 - 4 * a**3 * c - 27 * c * c + 18 * a * b * c
    return float(disc)


def is_degenerate(lam: float, p, tol: float = DISCRIMINANT_TOL) -> bool:
    return discriminant(symbol_matrix(lam, p).m) < tol


def _check_pair(pair) -> int:
    k, k1 = pair
    if k not in (1, 2) or k1 != k + 1:
        raise ValueError(f"pair must be (1, 2) or (2, 3), got {pair}")
    return k


def _check_bands(bands: Iterable[int]) -> list[int]:
    sel = sorted(set(int(b) for b in bands))
    if not sel or any(b not in (1, 2, 3) for b in sel):
        raise ValueError(f"bands must be a nonempty subset of {{1, 2, 3}}, got {bands}")
    return sel


def boundary_gap(evals: np.ndarray, bands: Sequence[int]) -> np.ndarray:
    """Smallest gap between the selected bands and the rest (``inf`` if none)."""
    sel = _check_bands(bands)
    out = np.full(evals.shape[:-1], np.inf)
    for k in (1, 2):
        if (k in sel) != (k + 1 in sel):
            out = np.minimum(out, evals[..., k] - evals[..., k - 1])
    return out


def projectors_from_matrices(
    m: np.ndarray, bands: Sequence[int], min_gap: float | None = GAP_TOL
) -> np.ndarray:
    """Eigenprojectors onto the selected bands for a batch of Hermitian matrices."""
    sel = _check_bands(bands)
    evals, vecs = np.linalg.eigh(m)
    if min_gap is not None:
        g = boundary_gap(evals, sel)
        if np.any(g <= min_gap):
            raise GapClosed(
                f"bands {sel} touch their complement (min boundary gap {float(np.min(g)):.3e})"
            )
    v = vecs[..., [b - 1 for b in sel]]
    return v @ np.swapaxes(v.conj(), -1, -2)


def band_projector(lam: float, p, bands: Iterable[int]) -> np.ndarray:
    p = as_phase_point(p)
    return projectors_from_matrices(symbol_matrix(lam, p).m, list(bands))


def _golden_section(f, a: float, b: float, iters: int) -> tuple[float, float]:
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return (c, fc) if fc < fd else (d, fd)


def _chart_grid(n: int) -> tuple[np.ndarray, np.ndarray]:
    t = np.arange(n) * (0.5 * np.pi / n)
    phi = np.arange(n) * (2.0 * np.pi / n)
    return t, phi


def _refine(lam, k, chart, x0, g0, step, cfg: SearchConfig):
    x = np.array(x0, dtype=float)
    g = g0
    h = np.array(step, dtype=float)

    def gap_at(y):
        m = symbol_matrices(lam, compact_chart_coords(chart, y))
        e = np.linalg.eigvalsh(m)
        return e[k] - e[k - 1]

    for _ in range(cfg.sweeps):
        g_start = g
        for c in range(4):
            y = x.copy()

            def f(v, c=c, y=y):
                y[c] = v
                return gap_at(y)

            v, fv = _golden_section(f, x[c] - h[c], x[c] + h[c], cfg.refine_iters)
            if fv < g:
                x[c], g = v, fv
        h *= 0.5
        if g == 0.0 or g >= g_start:
            break
    return g, x


def min_gap_over_phase_space(
    lam: float, pair: tuple[int, int] = (2, 3), search: SearchConfig | None = None
) -> GapMinimum:
    """Minimum of ``E_{k+1} - E_k`` over CP^2.

    A uniform grid on each of the three affine charts is scanned; the best
    cells (in fixed chart/index order) are then refined by coordinate-wise
    golden-section descent.
    """
    cfg = search or SearchConfig()
    k = _check_pair(pair)
    t, phi = _chart_grid(cfg.grid)
    mesh = np.stack(np.meshgrid(t, phi, t, phi, indexing="ij"), axis=-1).reshape(-1, 4)
    candidates = []
    for chart in (1, 2, 3):
        e = np.linalg.eigvalsh(symbol_matrices(lam, compact_chart_coords(chart, mesh)))
        g = e[:, k] - e[:, k - 1]
        order = np.argsort(g, kind="stable")[: cfg.n_starts]
        candidates.extend((float(g[i]), chart, i) for i in order)
    candidates.sort(key=lambda c: (c[0], c[1], c[2]))
    starts = [(chart, mesh[i], g) for g, chart, i in candidates[: cfg.n_starts]]
    if cfg.random_starts:
        rng = np.random.default_rng(cfg.seed)
        for _ in range(cfg.random_starts):
            chart = int(rng.integers(1, 4))
            x = rng.uniform([0, 0, 0, 0], [np.pi / 2, 2 * np.pi, np.pi / 2, 2 * np.pi])
            e = np.linalg.eigvalsh(symbol_matrices(lam, compact_chart_coords(chart, x)))
            starts.append((chart, x, float(e[k] - e[k - 1])))

    step = np.array([t[1] - t[0] if len(t) > 1 else np.pi / 4, phi[1] - phi[0] if len(phi) > 1 else np.pi] * 2)
    best = None
    for chart, x0, g0 in starts:
        g, x = _refine(lam, k, chart, x0, g0, step, cfg)
        if best is None or g < best[0]:
            best = (g, chart, x)
    g, chart, x = best
    return GapMinimum(gap=float(g), argmin=PhasePoint(compact_chart_coords(chart, x)), chart=chart)


def degeneracy_lambda_window(
    pair: tuple[int, int] = (2, 3),
    tol: float = 1e-6,
    resolution: int = 41,
    search: SearchConfig | None = None,
    width: float = 1e-3,
) -> list[tuple[float, float]]:
    """Maximal lambda-intervals of [0, 1] on which the pair's bands touch.

    Lambda is scanned on ``resolution`` uniform points; each interval
    endpoint is then bisected against its outside neighbour down to ``width``.
    """
    cfg = search or SearchConfig()
    lams = np.linspace(0.0, 1.0, resolution)

    def touching(lam: float) -> bool:
        return min_gap_over_phase_space(float(lam), pair, cfg).gap <= tol

    flags = [touching(l) for l in lams]

    def bisect(inside: float, outside: float) -> float:
        while abs(outside - inside) > width:
            mid = 0.5 * (inside + outside)
            if touching(mid):
                inside = mid
            else:
                outside = mid
        return inside

    windows = []
    i = 0
    while i < len(lams):
        if not flags[i]:
            i += 1
            continue
        j = i
        while j + 1 < len(lams) and flags[j + 1]:
            j += 1
        lo = lams[i] if i == 0 else bisect(lams[i], lams[i - 1])
        hi = lams[j] if j == len(lams) - 1 else bisect(lams[j], lams[j + 1])
        windows.append((float(lo), float(hi)))
        i = j + 1
    return windows
