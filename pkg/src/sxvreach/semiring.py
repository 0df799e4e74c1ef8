"""Dense Boolean and (min, +) matrix kernels.

Boolean matrices are bit-packed row-wise (``np.packbits``); a product ORs
together the packed rows of the right operand selected by each left row.
Distance matrices are plain ``int64`` arrays with :data:`INF` as the reserved
maximum. Addition saturates at :data:`INF`.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

INF = np.iinfo(np.int64).max


class DimensionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class BoolMatrix:
    rows: int
    cols: int
    bits: np.ndarray  # uint8, shape (rows, ceil(cols / 8))

    @classmethod
    def from_dense(cls, a) -> "BoolMatrix":
        a = np.asarray(a, dtype=bool)
        if a.ndim != 2:
            raise DimensionError("expected a 2-d array")
        return cls(a.shape[0], a.shape[1], np.packbits(a, axis=1))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BoolMatrix":
        return cls(rows, cols, np.zeros((rows, (cols + 7) // 8), dtype=np.uint8))

    @classmethod
    def identity(cls, n: int) -> "BoolMatrix":
        return cls.from_dense(np.eye(n, dtype=bool))

    def to_dense(self) -> np.ndarray:
        if self.rows == 0:
            return np.zeros((0, self.cols), dtype=bool)
        return np.unpackbits(self.bits, axis=1, count=self.cols).astype(bool)

    def __eq__(self, other):
        return (isinstance(other, BoolMatrix) and self.rows == other.rows
                and self.cols == other.cols and np.array_equal(self.bits, other.bits))

    def __or__(self, other: "BoolMatrix") -> "BoolMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError("shape mismatch")
        return BoolMatrix(self.rows, self.cols, self.bits | other.bits)

    def nnz(self) -> int:
        return int(np.unpackbits(self.bits).sum())

    def tolist(self) -> list[list[int]]:
        return self.to_dense().astype(int).tolist()


def _row_blocks(rows: int, threads: int):
    threads = max(1, int(threads))
    step = max(1, math.ceil(rows / threads))
    return [(lo, min(rows, lo + step)) for lo in range(0, rows, step)]


def _run_blocks(fn, rows, threads):
    blocks = _row_blocks(rows, threads)
    if threads <= 1 or len(blocks) <= 1:
        for lo, hi in blocks:
            fn(lo, hi)
        return
    with ThreadPoolExecutor(max_workers=threads) as ex:
        list(ex.map(lambda b: fn(*b), blocks))


def bool_matmul(B: BoolMatrix, A: BoolMatrix, threads: int = 1) -> BoolMatrix:
    """C[i, j] = OR_k (B[i, k] AND A[k, j])."""
    if B.cols != A.rows:
        raise DimensionError(f"inner dimensions differ: {B.cols} vs {A.rows}")
    out = np.zeros((B.rows, A.bits.shape[1]), dtype=np.uint8)
    Bd = B.to_dense()

    def work(lo, hi):
        for i in range(lo, hi):
            ks = np.flatnonzero(Bd[i])
            if ks.size:
                np.bitwise_or.reduce(A.bits[ks], axis=0, out=out[i])

    _run_blocks(work, B.rows, threads)
    return BoolMatrix(B.rows, A.cols, out)


def rows_restrict(A, S):
    """Rows of A indexed by S (a VertexSubset or sequence of row ids)."""
    idx = np.asarray(getattr(S, "members", S), dtype=np.int64).reshape(-1)
    nrows = A.rows if isinstance(A, BoolMatrix) else A.shape[0]
    if idx.size and (idx.min() < 0 or idx.max() >= nrows):
        raise IndexError("row index out of range")
    if isinstance(A, BoolMatrix):
        return BoolMatrix(idx.size, A.cols, A.bits[idx].copy())
    return np.asarray(A)[idx].copy()


def check_dist(M: np.ndarray, name: str = "matrix") -> np.ndarray:
    M = np.asarray(M)
    if M.ndim != 2:
        raise DimensionError(f"{name} must be 2-d")
    if np.any(M < 0):
        raise ValueError(f"{name} has negative entries")
    return M


def _sat_add(x, y):
    # x, y >= 0 int64; returns min(x + y, INF) without overflow
    return np.minimum(x, INF - y) + y


def minplus_product(B: np.ndarray, A: np.ndarray, threads: int = 1) -> np.ndarray:
    """C[i, j] = min_k B[i, k] + A[k, j].

    Integer inputs use the saturating :data:`INF` convention; float inputs use
    ``np.inf``.
    """
    B = check_dist(B, "B")
    A = check_dist(A, "A")
    if B.shape[1] != A.shape[0]:
        raise DimensionError(f"inner dimensions differ: {B.shape[1]} vs {A.shape[0]}")
    r, n = B.shape
    cols = A.shape[1]
    integer = np.issubdtype(B.dtype, np.integer) and np.issubdtype(A.dtype, np.integer)
    if integer:
        B = B.astype(np.int64, copy=False)
        A = A.astype(np.int64, copy=False)
        out = np.full((r, cols), INF, dtype=np.int64)
    else:
        B = B.astype(np.float64, copy=False)
        A = A.astype(np.float64, copy=False)
        out = np.full((r, cols), np.inf)
    if r == 0 or n == 0:
        return out
    chunk = max(1, (1 << 22) // max(1, n * cols))

    def work(lo, hi):
        for a in range(lo, hi, chunk):
            b = min(hi, a + chunk)
            left = B[a:b, :, None]
            if integer:
                s = _sat_add(A[None, :, :], left)
            else:
                s = left + A[None, :, :]
            out[a:b] = s.min(axis=1)

    _run_blocks(work, r, threads)
    return out


def is_power_of_two(x: int) -> bool:
    return isinstance(x, (int, np.integer)) and x > 0 and (int(x) & (int(x) - 1)) == 0


def next_power_of_two(x: int) -> int:
    return 1 if x <= 1 else 1 << (int(x) - 1).bit_length()


def scale_clamp(M: np.ndarray, k: int, R: int) -> np.ndarray:
    """Entries above R * 2**k become INF; the rest are divided by 2**k, rounded up."""
    if not is_power_of_two(R):
        raise ValueError(f"R must be a power of two, got {R}")
    if k < 0:
        raise ValueError("level k must be >= 0")
    M = np.asarray(M, dtype=np.int64)
    cut = int(R) << int(k)
    keep = M <= cut
    safe = np.where(keep, M, 0)
    scaled = (safe + ((1 << k) - 1)) >> k
    return np.where(keep, scaled, INF)


def approx_distance_product(B: np.ndarray, A: np.ndarray, xi: float, threads: int = 1) -> np.ndarray:
    """(1 + 4 xi)-approximate distance product by weight scaling.

    For each level k = 0..m-r the operands are clamped to R * 2**k, divided by
    2**k (rounding up), multiplied exactly, and scaled back; the entrywise
    minimum over levels is returned. R = 1/xi and the largest finite entry are
    first rounded up to powers of two. All finite outputs are integers and
    ``exact <= out <= (1 + 4 xi) * exact``.
    """
    if not xi > 0:
        raise ValueError("xi must be positive")
    B = check_dist(B, "B")
    A = check_dist(A, "A")
    for name, M in (("B", B), ("A", A)):
        if not np.issubdtype(M.dtype, np.integer):
            fin = M[np.isfinite(M)]
            if np.any(fin != np.floor(fin)):
                raise ValueError(f"{name} has non-integer finite entries")
    B = _to_int(B)
    A = _to_int(A)
    if B.shape[1] != A.shape[0]:
        raise DimensionError(f"inner dimensions differ: {B.shape[1]} vs {A.shape[0]}")

    finite = np.concatenate([B[B != INF], A[A != INF]])
    top = int(finite.max()) if finite.size else 0
    big = next_power_of_two(max(top, 1))
    R = next_power_of_two(math.ceil(1.0 / xi))
    if big <= R:
        return minplus_product(B, A, threads)
    m, r = big.bit_length() - 1, R.bit_length() - 1

    best = np.full((B.shape[0], A.shape[1]), INF, dtype=np.int64)
    for k in range(m - r + 1):
        Ck = minplus_product(scale_clamp(B, k, R), scale_clamp(A, k, R), threads)
        # scaled-back values never exceed 2 * R * 2**k, far below INF
        back = np.where(Ck == INF, INF, Ck << k)
        np.minimum(best, back, out=best)
    return best


def _to_int(M):
    if np.issubdtype(M.dtype, np.integer):
        return M.astype(np.int64, copy=False)
    out = np.full(M.shape, INF, dtype=np.int64)
    fin = np.isfinite(M)
    out[fin] = M[fin].astype(np.int64)
    return out


def to_float(M: np.ndarray) -> np.ndarray:
    """INF-sentinel integer matrix -> float matrix with np.inf."""
    M = np.asarray(M)
    if not np.issubdtype(M.dtype, np.integer):
        return M.astype(np.float64)
    out = M.astype(np.float64)
    out[M == INF] = np.inf
    return out


def minplus_identity(n: int) -> np.ndarray:
    I = np.full((n, n), INF, dtype=np.int64)
    np.fill_diagonal(I, 0)
    return I
