"""Quantized vibronic Hamiltonian on one polyad and its band clustering.

The total space is ``C^3 (x) polyad(N)`` ordered electronic-major: row
``i * N0 + n`` is electronic state ``i`` times polyad basis state ``n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .polyad import enumerate_basis, ladder_matrix, polyad_dimension
from .symbol import H0

DEFAULT_GAP_FACTOR = 10.0
# absolute floor on the split threshold, relative to the spectral width;
# keeps rounding noise inside exactly degenerate levels from splitting bands
SPLIT_FLOOR = 1e-8


def auto_gap_factor(N: int) -> float:
    """Default split factor for polyad ``N``.

    The widest gap inside a band grows faster than the median level spacing
    as ``N`` increases, so a fixed factor cannot separate bands for both
    small and large polyads; ``2.5 N^1.3`` stays inside the admissible window
    for every ``N`` up to 12 at lambda = 0.2 and 0.9.
    """
    return 2.5 * float(N) ** 1.3


@dataclass(frozen=True)
class QuantumHamiltonian:
    N: int
    lam: float
    matrix: np.ndarray


@dataclass(frozen=True)
class BandSpectrum:
    lam: float
    energies: np.ndarray
    clusters: tuple[tuple[int, int], ...]
    ambiguous: bool = False

    @property
    def counts(self) -> list[int]:
        return [c for _, c in self.clusters]


@dataclass(frozen=True)
class Clustering:
    clusters: tuple[tuple[int, int], ...]
    ambiguous: bool = False
    threshold: float = field(default=0.0, compare=False)


def quantize_symbol(N: int, convention: str = "paper") -> np.ndarray:
    """Quantized projector symbol ``(1/N) sum_ij |i><j| (x) a_j^+ a_i``.

    Equal to ``(M^+ M - 1) / N`` with ``M`` the map ``e_j (x) |n> -> a_j^+ |n>``
    into polyad ``N + 1``, so its spectrum is ``1`` with multiplicity
    ``(N+2)(N+3)/2`` and ``-1/N`` with multiplicity ``N(N+2)``.

    ``convention="swapped"`` uses ``a_i^+ a_j`` in the ``(i, j)`` block
    instead; it gives the conjugate SU(3) splitting and exists only so the
    ordering choice can be checked against it.
    """
    if N < 1:
        raise ValueError(f"quantization needs N >= 1, got {N}")
    if convention not in ("paper", "swapped"):
        raise ValueError(f"unknown ordering convention {convention!r}")
    basis = enumerate_basis(N)
    n0 = len(basis)
    out = np.zeros((3 * n0, 3 * n0), dtype=complex)
    for i in range(3):
        for j in range(3):
            a, b = (j + 1, i + 1) if convention == "paper" else (i + 1, j + 1)
            out[i * n0 : (i + 1) * n0, j * n0 : (j + 1) * n0] = ladder_matrix(basis, a, b)
    return out / N


def build_hamiltonian(N: int, lam: float, convention: str = "paper") -> QuantumHamiltonian:
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    h1 = quantize_symbol(N, convention)
    n0 = polyad_dimension(N)
    h = (1.0 - lam) * np.kron(H0, np.eye(n0)) + lam * h1
    return QuantumHamiltonian(N=N, lam=float(lam), matrix=h)


def spectrum(h: QuantumHamiltonian) -> np.ndarray:
    try:
        e = np.linalg.eigvalsh(h.matrix)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"eigensolver failed for N={h.N}, lambda={h.lam}: {exc}") from exc
    return np.sort(e)


def cluster_bands(energies: Sequence[float], gap_factor: float = DEFAULT_GAP_FACTOR) -> Clustering:
    """Split a sorted level list wherever a gap exceeds ``gap_factor`` x median gap.

    The result is flagged ambiguous when the widest gap kept inside a cluster
    exceeds half the narrowest gap used for splitting, which happens when
    bands are close to touching.
    """
    if gap_factor <= 1.0:
        raise ValueError(f"gap_factor must exceed 1, got {gap_factor}")
    e = np.asarray(energies, dtype=float)
    if e.size == 0:
        return Clustering(clusters=())
    if e.size == 1:
        return Clustering(clusters=((0, 1),))
    gaps = np.diff(e)
    scale = max(float(e[-1] - e[0]), float(np.max(np.abs(e))), 1.0)
    threshold = max(gap_factor * float(np.median(gaps)), SPLIT_FLOOR * scale)
    cuts = np.flatnonzero(gaps > threshold)
    bounds = [0, *(int(c) + 1 for c in cuts), e.size]
    clusters = tuple((bounds[k], bounds[k + 1] - bounds[k]) for k in range(len(bounds) - 1))
    ambiguous = False
    if cuts.size:
        inside = np.delete(gaps, cuts)
        if inside.size and inside.max() > 0.5 * gaps[cuts].min():
            ambiguous = True
    return Clustering(clusters=clusters, ambiguous=ambiguous, threshold=threshold)


def band_spectrum(N: int, lam: float, gap_factor: float | None = None) -> BandSpectrum:
    if gap_factor is None:
        gap_factor = auto_gap_factor(N)
    e = spectrum(build_hamiltonian(N, lam))
    c = cluster_bands(e, gap_factor)
    return BandSpectrum(lam=float(lam), energies=e, clusters=c.clusters, ambiguous=c.ambiguous)


def sweep(
    N: int, lambda_grid: Iterable[float], gap_factor: float | None = None
) -> list[BandSpectrum]:
    if gap_factor is None:
        gap_factor = auto_gap_factor(N)
    # lambda-independent pieces are built once; each point is diagonalized on its own
    h1 = quantize_symbol(N)
    h0 = np.kron(H0, np.eye(polyad_dimension(N)))
    out = []
    for lam in lambda_grid:
        lam = float(lam)
        if not 0.0 <= lam <= 1.0:
            raise ValueError(f"lambda must lie in [0, 1], got {lam}")
        e = spectrum(QuantumHamiltonian(N, lam, (1.0 - lam) * h0 + lam * h1))
        c = cluster_bands(e, gap_factor)
        out.append(BandSpectrum(lam=lam, energies=e, clusters=c.clusters, ambiguous=c.ambiguous))
    return out


def transfer_count(before: BandSpectrum, after: BandSpectrum) -> int:
    """Levels gained by the top cluster between a 3-band and a 2-band spectrum."""
    if len(before.clusters) != 3 or len(after.clusters) != 2:
        raise ValueError(
            f"expected 3 clusters before and 2 after, got {len(before.clusters)} and {len(after.clusters)}"
        )
    return after.clusters[-1][1] - before.clusters[-1][1]
