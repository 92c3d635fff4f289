"""Polyad basis of three degenerate oscillators and bilinear boson operators."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def polyad_dimension(N: int) -> int:
    """Number of occupation triples with ``n1 + n2 + n3 = N``."""
    if N < 0:
        raise ValueError(f"polyad number must be nonnegative, got {N}")
    return (N + 1) * (N + 2) // 2


@dataclass(frozen=True)
class PolyadBasis:
    """Occupation-number basis of the ``N``-quanta polyad.

    States are ordered lexicographically descending in ``(n1, n2, n3)``, so
    ``(N, 0, 0)`` comes first and ``(0, 0, N)`` last.
    """

    N: int
    states: tuple[tuple[int, int, int], ...]
    index: dict[tuple[int, int, int], int] = field(repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.states)


def enumerate_basis(N: int) -> PolyadBasis:
    if N < 0:
        raise ValueError(f"polyad number must be nonnegative, got {N}")
    states = tuple(
        (n1, n2, N - n1 - n2) for n1 in range(N, -1, -1) for n2 in range(N - n1, -1, -1)
    )
    return PolyadBasis(N=N, states=states, index={s: k for k, s in enumerate(states)})


def ladder_matrix(basis: PolyadBasis, i: int, j: int) -> np.ndarray:
    """Matrix of ``a_i^+ a_j`` on the polyad (modes numbered 1..3).

    Entry ``[m, n]`` is ``<m| a_i^+ a_j |n>``.
    """
    if i not in (1, 2, 3) or j not in (1, 2, 3):
        raise IndexError(f"mode indices must be in 1..3, got ({i}, {j})")
    i0, j0 = i - 1, j - 1
    dim = len(basis)
    out = np.zeros((dim, dim), dtype=complex)
    for col, n in enumerate(basis.states):
        if n[j0] == 0:
            continue
        if i0 == j0:
            out[col, col] = n[i0]
            continue
        m = list(n)
        m[j0] -= 1
        m[i0] += 1
        out[basis.index[tuple(m)], col] = np.sqrt((n[i0] + 1) * n[j0])
    return out

