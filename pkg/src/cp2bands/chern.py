"""Chern classes of eigen-band bundles of the symbol over CP^2.

Invariants come from eigenprojectors ``P`` of the selected bands:

* ``c1`` on an embedded projective line, ``(1/2 pi i) int tr(P [dP/du, dP/dv])``;
* a Fukui-Hatsugai-Suzuki plaquette sum on the same line, which is
  integer-valued by construction and serves as a cross-check;
* ``int ch2 = -(1/8 pi^2) int eps tr(P dP dP dP dP)`` over one compactified
  affine chart.

``B`` is recovered from ``A`` and ``int ch2`` as ``(A^2 - 2 int ch2) / 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import GapClosed, InconsistentInvariants, TopologyUnresolved, VortexOnPlaquette
from .symbol import (
    GAP_TOL,
    SearchConfig,
    _check_bands,
    boundary_gap,
    compact_chart_coords,
    min_gap_over_phase_space,
    symbol_matrices,
)

RESIDUAL_MAX = 0.05
VORTEX_TOL = 1e-8

# Orientation constants, fixed once so that the top band at lambda = 1 (the
# line bundle |Z><Z|) has A = +1 and int ch2 = +1/2. The line is oriented by
# (t, phi) and the chart by (t1, phi1, t2, phi2), its complex orientation;
# with these orderings no extra sign is needed.
C1_ORIENTATION = 1.0
CH2_ORIENTATION = 1.0


@dataclass(frozen=True)
class ChernClass:
    """Rank and total Chern class ``1 + A x + B x^2``."""

    r: int
    A: int
    B: int

    def __post_init__(self):
        if self.r < 1:
            raise ValueError(f"rank must be positive, got {self.r}")
        if self.r == 1 and self.B != 0:
            raise ValueError("a rank-1 bundle has B = 0")


@dataclass(frozen=True)
class InvariantEstimate:
    raw: float
    rounded: float
    residual: float
    grid: tuple[int, ...]
    history: tuple[tuple[tuple[int, ...], float], ...] = field(default=(), compare=False)


@dataclass(frozen=True)
class ChernConfig:
    line: tuple[int, int] = (1, 2)
    line_grid: tuple[int, int] = (128, 256)
    volume_grid: int = 24
    residual_max: float = RESIDUAL_MAX
    gap_tol: float = 1e-6
    search: SearchConfig = field(default_factory=lambda: SearchConfig(grid=8))
    check_gap: bool = True


def _frames(m: np.ndarray, bands: Sequence[int], rng: np.random.Generator | None = None):
    """Eigenvalues and orthonormal frames (``(..., 3, r)``) of the selected bands.

    With ``rng`` each frame is multiplied by a random unitary, which must not
    change any gauge-invariant quantity.
    """
    evals, vecs = np.linalg.eigh(m)
    v = vecs[..., [b - 1 for b in bands]]
    if rng is not None:
        r = len(bands)
        x = rng.normal(size=v.shape[:-2] + (r, r)) + 1j * rng.normal(size=v.shape[:-2] + (r, r))
        q, _ = np.linalg.qr(x)
        v = v @ q
    return evals, v


def _projectors(m, bands, rng=None, min_gap=GAP_TOL):
    evals, v = _frames(m, bands, rng)
    g = boundary_gap(evals, bands)
    if np.any(g <= min_gap):
        raise GapClosed(f"bands {list(bands)} touch their complement on the grid (gap {float(np.min(g)):.3e})")
    return v @ np.swapaxes(v.conj(), -1, -2)


def line_points(line: tuple[int, int], t: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Points ``cos(t/2) e_a + sin(t/2) e^{i phi} e_b`` on the projective line through slots a, b."""
    a, b = line
    if a == b or a not in (1, 2, 3) or b not in (1, 2, 3):
        raise ValueError(f"line must name two distinct slots in 1..3, got {line}")
    tt, pp = np.meshgrid(t, phi, indexing="ij")
    z = np.zeros(tt.shape + (3,), dtype=complex)
    z[..., a - 1] = np.cos(tt / 2)
    z[..., b - 1] = np.sin(tt / 2) * np.exp(1j * pp)
    return z


def check_gapped(lam: float, bands: Iterable[int], search: SearchConfig, tol: float) -> None:
    sel = _check_bands(bands)
    for k in (1, 2):
        if (k in sel) != (k + 1 in sel):
            res = min_gap_over_phase_space(lam, (k, k + 1), search)
            if res.gap <= tol:
                raise GapClosed(
                    f"bands {sel} touch band {k if k + 1 in sel else k + 1} at lambda={lam} "
                    f"(min gap {res.gap:.3e})"
                )


def _line_c1_raw(lam, bands, line, nt, nphi, rng=None) -> float:
    ht = np.pi / nt
    hp = 2.0 * np.pi / nphi
    t = (np.arange(-1, nt + 1) + 0.5) * ht
    phi = np.arange(nphi) * hp
    p = _projectors(symbol_matrices(lam, line_points(line, t, phi)), bands, rng)
    dt = (p[2:] - p[:-2]) / (2 * ht)
    pc = p[1:-1]
    dp = (np.roll(pc, -1, axis=1) - np.roll(pc, 1, axis=1)) / (2 * hp)
    curv = np.einsum("...ij,...jk,...ki->...", pc, dt, dp) - np.einsum(
        "...ij,...jk,...ki->...", pc, dp, dt
    )
    total = curv.sum() * ht * hp
    return float(C1_ORIENTATION * (total / (2j * np.pi)).real)


def _with_doubling(compute, grid: tuple[int, ...], residual_max: float, step: float = 1.0):
    """Run ``compute(grid)``; if it does not round within ``residual_max``, double once."""
    history = []
    for attempt in range(2):
        raw = compute(grid)
        rounded = step * round(raw / step)
        history.append((grid, raw))
        residual = abs(raw - rounded)
        if residual < residual_max:
            return InvariantEstimate(raw, float(rounded), residual, grid, tuple(history))
        grid = tuple(2 * g for g in grid)
    raise TopologyUnresolved(
        f"estimate {raw:.4f} is {residual:.3f} from the nearest multiple of {step} after grid doubling"
    )


def first_chern_on_line(
    lam: float,
    bands: Iterable[int],
    line: tuple[int, int] = (1, 2),
    grid: tuple[int, int] = (128, 256),
    residual_max: float = RESIDUAL_MAX,
    gauge_seed: int | None = None,
) -> InvariantEstimate:
    sel = _check_bands(bands)
    rng = None if gauge_seed is None else np.random.default_rng(gauge_seed)
    return _with_doubling(
        lambda g: _line_c1_raw(lam, sel, line, g[0], g[1], rng), tuple(grid), residual_max
    )


def first_chern_plaquette(
    lam: float,
    bands: Iterable[int],
    line: tuple[int, int] = (1, 2),
    grid: tuple[int, int] = (128, 256),
    gauge_seed: int | None = None,
) -> InvariantEstimate:
    """Lattice first Chern number from overlap-determinant link variables."""
    sel = _check_bands(bands)
    rng = None if gauge_seed is None else np.random.default_rng(gauge_seed)
    nt, nphi = grid
    t = np.linspace(0.0, np.pi, nt + 1)
    phi = np.arange(nphi) * (2.0 * np.pi / nphi)
    evals, v = _frames(symbol_matrices(lam, line_points(line, t, phi)), sel, rng)
    g = boundary_gap(evals, sel)
    if np.any(g <= GAP_TOL):
        raise GapClosed(f"bands {sel} touch their complement on the line (gap {float(np.min(g)):.3e})")
    vh = np.swapaxes(v.conj(), -1, -2)
    u_t = np.linalg.det(vh[:-1] @ v[1:])
    u_p = np.linalg.det(vh @ np.roll(v, -1, axis=1))
    if min(np.abs(u_t).min(), np.abs(u_p).min()) < VORTEX_TOL:
        raise VortexOnPlaquette("an overlap determinant vanished; refine the grid")
    loop = u_t * u_p[1:] * np.conj(np.roll(u_t, -1, axis=1)) * np.conj(u_p[:-1])
    raw = float(C1_ORIENTATION * np.angle(loop).sum() / (2.0 * np.pi))
    rounded = float(round(raw))
    return InvariantEstimate(raw, rounded, abs(raw - rounded), (nt, nphi))


def _eps_contraction(p: np.ndarray, d: list[np.ndarray]) -> np.ndarray:
    """``eps^{abcd} tr(P d_a P d_b P d_c P d_d P)`` via commutators of derivatives."""

    def comm(a, b):
        return d[a] @ d[b] - d[b] @ d[a]

    g01, g23 = comm(0, 1), comm(2, 3)
    g02, g13 = comm(0, 2), comm(1, 3)
    g03, g12 = comm(0, 3), comm(1, 2)
    s = g01 @ g23 + g23 @ g01 - g02 @ g13 - g13 @ g02 + g03 @ g12 + g12 @ g03
    return np.einsum("...ij,...ji->...", p, s)


def _ch2_raw(lam, bands, n: int, chart: int = 1, rng=None) -> float:
    ht = 0.5 * np.pi / n
    hp = 2.0 * np.pi / n
    t = (np.arange(-1, n + 1) + 0.5) * ht
    phi = np.arange(n) * hp
    # slab over t1: axes (phi1, t2 with halo, phi2)
    sub = np.stack(np.meshgrid(phi, t, phi, indexing="ij"), axis=-1)

    def slab(t1):
        x = np.concatenate([np.full(sub.shape[:-1] + (1,), t1), sub], axis=-1)
        return _projectors(symbol_matrices(lam, compact_chart_coords(chart, x)), bands, rng)

    total = 0.0
    prev, cur = slab(t[0]), slab(t[1])
    for j in range(1, n + 1):
        nxt = slab(t[j + 1])
        pc = cur[:, 1:-1]
        d_t1 = (nxt[:, 1:-1] - prev[:, 1:-1]) / (2 * ht)
        d_p1 = (np.roll(pc, -1, axis=0) - np.roll(pc, 1, axis=0)) / (2 * hp)
        d_t2 = (cur[:, 2:] - cur[:, :-2]) / (2 * ht)
        d_p2 = (np.roll(pc, -1, axis=2) - np.roll(pc, 1, axis=2)) / (2 * hp)
        total += _eps_contraction(pc, [d_t1, d_p1, d_t2, d_p2]).sum()
        prev, cur = cur, nxt
    value = -total * (ht * hp) ** 2 / (8.0 * np.pi**2)
    return float(CH2_ORIENTATION * value.real)


def second_chern_character(
    lam: float,
    bands: Iterable[int],
    grid4: int = 24,
    residual_max: float = RESIDUAL_MAX,
    chart: int = 1,
    gauge_seed: int | None = None,
) -> InvariantEstimate:
    """``int_{CP^2} ch2`` of the band bundle, rounded to the nearest half-integer.

    The integral is always evaluated at ``grid4`` and ``2 * grid4`` points per
    axis; the finer value is reported and both are kept in ``history``.
    """
    sel = _check_bands(bands)
    rng = None if gauge_seed is None else np.random.default_rng(gauge_seed)
    history = []
    for n in (grid4, 2 * grid4):
        raw = _ch2_raw(lam, sel, n, chart, rng)
        history.append(((n,) * 4, raw))
    rounded = 0.5 * round(2.0 * raw)
    residual = abs(raw - rounded)
    if residual >= residual_max:
        raise TopologyUnresolved(
            f"int ch2 = {raw:.4f} is {residual:.3f} from the nearest half-integer at {2 * grid4}^4"
        )
    return InvariantEstimate(raw, float(rounded), residual, (2 * grid4,) * 4, tuple(history))


@dataclass(frozen=True)
class ChernReport:
    chern: ChernClass
    c1_line: InvariantEstimate
    c1_plaquette: InvariantEstimate
    ch2: InvariantEstimate
    B_raw: float


def chern_report(lam: float, bands: Iterable[int], config: ChernConfig | None = None) -> ChernReport:
    """All invariants of one band group, with the cross-checks applied."""
    cfg = config or ChernConfig()
    sel = _check_bands(bands)
    if cfg.check_gap:
        check_gapped(lam, sel, cfg.search, cfg.gap_tol)
    a_line = first_chern_on_line(lam, sel, cfg.line, cfg.line_grid, cfg.residual_max)
    a_lat = first_chern_plaquette(lam, sel, cfg.line, cfg.line_grid)
    if a_line.rounded != a_lat.rounded:
        raise InconsistentInvariants(
            f"curvature integral gives A={a_line.rounded:g}, plaquette sum gives A={a_lat.rounded:g}"
        )
    ch2 = second_chern_character(lam, sel, cfg.volume_grid, cfg.residual_max)
    A = int(a_line.rounded)
    b_exact = (A * A - 2.0 * ch2.rounded) / 2.0
    if b_exact != round(b_exact):
        raise InconsistentInvariants(f"B = (A^2 - 2 ch2)/2 = {b_exact} is not an integer")
    B = int(round(b_exact))
    if len(sel) == 1 and B != 0:
        raise InconsistentInvariants(f"rank-1 band with B = {B}")
    b_raw = (A * A - 2.0 * ch2.raw) / 2.0
    return ChernReport(ChernClass(len(sel), A, B), a_line, a_lat, ch2, b_raw)


def chern_class_of_band(lam: float, bands: Iterable[int], config: ChernConfig | None = None) -> ChernClass:
    return chern_report(lam, bands, config).chern


def whitney_sum_check(classes: Iterable[ChernClass]) -> bool:
    """True iff the truncated product of the total Chern classes is 1."""
    a_tot, b_tot = 0, 0
    for c in classes:
        # (1 + a x + b x^2)(1 + A x + B x^2) mod x^3
        a_tot, b_tot = a_tot + c.A, b_tot + c.B + a_tot * c.A
    return a_tot == 0 and b_tot == 0


def indecomposability_test(c: ChernClass) -> bool:
    """True iff a rank-2 class admits no split into two integral line-bundle classes.

    A split ``(1 + A1 x)(1 + A2 x)`` needs integer roots of ``t^2 - A t + B``.
    """
    if c.r != 2:
        raise ValueError(f"indecomposability is tested on rank-2 classes, got rank {c.r}")
    disc = c.A * c.A - 4 * c.B
    if disc < 0:
        return True
    s = math.isqrt(disc)
    if s * s != disc or (c.A + s) % 2:
        return True
    return False

