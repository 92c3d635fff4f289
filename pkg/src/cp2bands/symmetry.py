"""SU(3) > O(3) > T_d branching of the two lambda = 1 bands.

Parity labels follow the tabulated convention: ``g`` for odd ``N``, ``u`` for
even ``N``, applied to every level of both bands.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import NonIntegralMultiplicity


@dataclass(frozen=True, order=True)
class O3Irrep:
    L: int
    parity: str

    def __post_init__(self):
        if self.L < 0 or self.parity not in ("g", "u"):
            raise ValueError(f"invalid O(3) irrep {self.L}_{self.parity}")

    @property
    def dim(self) -> int:
        return 2 * self.L + 1

    def __str__(self) -> str:
        return f"{self.L}_{self.parity}"


# class name -> (size, rotation angle in degrees, improper)
TD_CLASSES: dict[str, tuple[int, float, bool]] = {
    "E": (1, 0.0, False),
    "8C3": (8, 120.0, False),
    "3C2": (3, 180.0, False),
    "6S4": (6, 90.0, True),
    "6sd": (6, 180.0, True),
}
TD_ORDER = 24

TD_CHARACTERS: dict[str, tuple[int, ...]] = {
    "A1": (1, 1, 1, 1, 1),
    "A2": (1, 1, 1, -1, -1),
    "E": (2, -1, 2, 0, 0),
    "F1": (3, 0, -1, 1, -1),
    "F2": (3, 0, -1, -1, 1),
}
TD_LABELS = tuple(TD_CHARACTERS)
TD_DIMS = {k: v[0] for k, v in TD_CHARACTERS.items()}

BANDS = ("Line", "Orth")


def band_parity(N: int) -> str:
    return "g" if N % 2 else "u"


def polyad_o3_content(N: int) -> list[int]:
    """Angular momenta ``N, N-2, ..., 1 or 0`` of the oscillator polyad."""
    if N < 0:
        raise ValueError(f"polyad number must be nonnegative, got {N}")
    return list(range(N, -1, -2))


def _couple_vector(ls) -> Counter:
    """Clebsch-Gordan content of ``L = 1 (x) (sum of ls)``."""
    out = Counter()
    for l in ls:
        for k in range(abs(l - 1), l + 2):
            out[k] += 1
    return out


def band_o3_content(band: str, N: int) -> list[O3Irrep]:
    if band not in BANDS:
        raise ValueError(f"band must be one of {BANDS}, got {band!r}")
    if N < 1:
        raise ValueError(f"band content needs N >= 1, got {N}")
    line = Counter(range(N + 1, -1, -2))
    if band == "Line":
        ls = line
    else:
        ls = _couple_vector(polyad_o3_content(N))
        ls.subtract(line)
        if any(v < 0 for v in ls.values()):
            raise AssertionError(f"Line content is not contained in 1 x polyad({N})")
    par = band_parity(N)
    return sorted(O3Irrep(L, par) for L, m in ls.items() for _ in range(m))


def o3_character_on_td_class(irrep: O3Irrep, cls: str) -> float:
    """Character of ``irrep`` on a T_d class: ``sin((2L+1) a/2) / sin(a/2)`` times parity."""
    _, angle, improper = TD_CLASSES[cls]
    a = np.deg2rad(angle)
    if angle == 0.0:
        chi = float(irrep.dim)
    else:
        chi = float(np.sin((2 * irrep.L + 1) * a / 2) / np.sin(a / 2))
    if improper and irrep.parity == "u":
        chi = -chi
    return chi


def subduce_o3_to_td(irrep: O3Irrep, tol: float = 1e-9) -> dict[str, int]:
    chi = [o3_character_on_td_class(irrep, c) for c in TD_CLASSES]
    sizes = [s for s, _, _ in TD_CLASSES.values()]
    out = {}
    for label, row in TD_CHARACTERS.items():
        n = sum(s * a * b for s, a, b in zip(sizes, row, chi)) / TD_ORDER
        k = round(n)
        if abs(n - k) > tol or k < 0:
            raise NonIntegralMultiplicity(f"{irrep} gives multiplicity {n} for {label}")
        if k:
            out[label] = k
    return out


def band_td_content(band: str, N: int) -> dict[str, int]:
    total = Counter()
    for irrep in band_o3_content(band, N):
        total.update(subduce_o3_to_td(irrep))
    return {label: total[label] for label in TD_LABELS if total[label]}


def multiset_dimension(content: dict[str, int]) -> int:
    return sum(TD_DIMS[k] * m for k, m in content.items())


def format_td(content: dict[str, int]) -> str:
    return ",".join(f"{m}{k}" if m > 1 else k for k, m in content.items())


def format_o3(irreps: list[O3Irrep]) -> str:
    return ",".join(str(i) for i in irreps)
