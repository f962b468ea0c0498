"""Exterior algebra over R^d: simple k-vectors, inner products, Hodge star.

Coefficients of a grade-k multivector are stored densely in the lexicographic
order of the 0-based index sets ``(i_1 < ... < i_k)``, the same order produced
by :func:`itertools.combinations`.  A k-vector in R^d therefore carries
``C(d, k)`` doubles.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import CapacityError, InvalidInputError

MAX_DIM = 16
MAX_COEFFS = 2**20


def _check_capacity(d: int, k: int) -> None:
    if not (0 <= k <= d):
        raise InvalidInputError(f"grade {k} not in [0, {d}]")
    if d > MAX_DIM:
        raise CapacityError(f"ambient dimension {d} exceeds {MAX_DIM}")
    if comb(d, k) > MAX_COEFFS:
        raise CapacityError(f"C({d},{k}) = {comb(d, k)} coefficients exceeds {MAX_COEFFS}")


@lru_cache(maxsize=None)
def basis_indices(d: int, k: int) -> tuple[tuple[int, ...], ...]:
    """All increasing k-index sets of ``range(d)`` in lexicographic order."""
    _check_capacity(d, k)
    return tuple(combinations(range(d), k))


@lru_cache(maxsize=None)
def _index_array(d: int, k: int) -> np.ndarray:
    arr = np.array(basis_indices(d, k), dtype=np.intp).reshape(-1, k)
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=None)
def _rank_table(d: int, k: int) -> dict[tuple[int, ...], int]:
    return {idx: pos for pos, idx in enumerate(basis_indices(d, k))}


def index_rank(indices: Sequence[int], d: int) -> int:
    """Lexicographic position of a strictly increasing index set."""
    idx = tuple(int(i) for i in indices)
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise InvalidInputError(f"index set {idx} is not strictly increasing")
    if idx and (idx[0] < 0 or idx[-1] >= d):
        raise InvalidInputError(f"index set {idx} out of range for d={d}")
    return _rank_table(d, len(idx))[idx]


@lru_cache(maxsize=None)
def _hodge_table(d: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    # target position of each I^c in grade d-k, and the sign of (I, I^c)
    ranks = _rank_table(d, d - k)
    target = np.empty(comb(d, k), dtype=np.intp)
    sign = np.empty(comb(d, k))
    for pos, idx in enumerate(basis_indices(d, k)):
        rest = tuple(i for i in range(d) if i not in idx)
        target[pos] = ranks[rest]
        inversions = sum(i - j for j, i in enumerate(idx))
        sign[pos] = -1.0 if inversions % 2 else 1.0
    target.setflags(write=False)
    sign.setflags(write=False)
    return target, sign


class Multivector:
    """An element of Lambda^k(R^d) with immutable dense coefficients."""

    __slots__ = ("d", "k", "_data")

    def __init__(self, d: int, k: int, data: Iterable[float] | None = None):
        _check_capacity(d, k)
        size = comb(d, k)
        if data is None:
            arr = np.zeros(size)
        else:
            arr = np.array(data, dtype=float).reshape(-1)
            if arr.shape[0] != size:
                raise InvalidInputError(
                    f"expected {size} coefficients for grade {k} in R^{d}, got {arr.shape[0]}")
        arr.setflags(write=False)
        self.d = d
        self.k = k
        self._data = arr

    @classmethod
    def from_dict(cls, d: int, k: int, coeffs: Mapping[Sequence[int], float]) -> "Multivector":
        arr = np.zeros(comb(d, k))
        for idx, value in coeffs.items():
            if len(idx) != k:
                raise InvalidInputError(f"index set {tuple(idx)} does not have grade {k}")
            arr[index_rank(idx, d)] += value
        return cls(d, k, arr)

    @classmethod
    def basis(cls, d: int, indices: Sequence[int]) -> "Multivector":
        """The basis blade ``e_{i_1} ^ ... ^ e_{i_k}`` (indices need not be sorted)."""
        idx = [int(i) for i in indices]
        if len(set(idx)) != len(idx):
            return cls(d, len(idx))
        order = np.argsort(idx)
        sign = _permutation_sign(order)
        return cls.from_dict(d, len(idx), {tuple(sorted(idx)): sign})

    @property
    def data(self) -> np.ndarray:
        """Dense read-only coefficient vector in lexicographic order."""
        return self._data

    @property
    def coeffs(self) -> dict[tuple[int, ...], float]:
        """Nonzero coefficients keyed by index set."""
        basis = basis_indices(self.d, self.k)
        return {basis[i]: float(self._data[i]) for i in np.flatnonzero(self._data)}

    def __getitem__(self, indices: Sequence[int]) -> float:
        return float(self._data[index_rank(indices, self.d)])

    def _same_space(self, other: "Multivector") -> None:
        if not isinstance(other, Multivector):
            raise InvalidInputError(f"expected Multivector, got {type(other).__name__}")
        if (self.d, self.k) != (other.d, other.k):
            raise InvalidInputError(
                f"grade/dimension mismatch: ({self.d},{self.k}) vs ({other.d},{other.k})")

    def __add__(self, other: "Multivector") -> "Multivector":
        self._same_space(other)
        return Multivector(self.d, self.k, self._data + other._data)

    def __sub__(self, other: "Multivector") -> "Multivector":
        self._same_space(other)
        return Multivector(self.d, self.k, self._data - other._data)

    def __neg__(self) -> "Multivector":
        return Multivector(self.d, self.k, -self._data)

    def __mul__(self, scalar: float) -> "Multivector":
        return Multivector(self.d, self.k, float(scalar) * self._data)

    __rmul__ = __mul__

    def norm(self) -> float:
        return float(np.sqrt(inner(self, self)))

    def normalized(self) -> "Multivector":
        nrm = self.norm()
        if nrm == 0.0:
            raise InvalidInputError("cannot normalize the zero multivector")
        return self * (1.0 / nrm)

    def allclose(self, other: "Multivector", atol: float = 1e-10) -> bool:
        self._same_space(other)
        return bool(np.allclose(self._data, other._data, rtol=0.0, atol=atol))

    def __repr__(self) -> str:
        terms = ", ".join(f"{idx}: {val:.6g}" for idx, val in list(self.coeffs.items())[:6])
        more = ", ..." if len(self.coeffs) > 6 else ""
        return f"Multivector(d={self.d}, k={self.k}, {{{terms}{more}}})"


def _permutation_sign(perm: Sequence[int]) -> float:
    perm = list(perm)
    sign = 1.0
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def wedge(vectors) -> Multivector:
    """Exterior product ``v_1 ^ ... ^ v_k`` of the rows of ``vectors``.

    The coefficient at index set I is the k x k minor on rows I of the matrix
    whose columns are the vectors.
    """
    mat = np.asarray(vectors, dtype=float)
    if mat.ndim == 1:
        mat = mat[None, :]
    if mat.ndim != 2:
        raise InvalidInputError("vectors must form a 2-d array (k rows of length d)")
    k, d = mat.shape
    if k < 1 or k > d:
        raise InvalidInputError(f"need 1 <= k <= d, got k={k}, d={d}")
    idx = _index_array(d, k)
    minors = mat[:, idx].transpose(1, 0, 2)  # (C(d,k), k, k)
    return Multivector(d, k, np.linalg.det(minors))


def inner(a: Multivector, b: Multivector) -> float:
    """Euclidean inner product induced on Lambda^k(R^d)."""
    a._same_space(b)
    return float(a.data @ b.data)


def hodge_star(a: Multivector) -> Multivector:
    """Hodge dual with ``*(e_I) = sign(I, I^c) e_{I^c}``.

    With this convention ``A ^ *A = |A|^2 e_1 ^ ... ^ e_d``.
    """
    target, sign = _hodge_table(a.d, a.k)
    out = np.zeros(comb(a.d, a.d - a.k))
    out[target] = sign * a.data
    return Multivector(a.d, a.d - a.k, out)
