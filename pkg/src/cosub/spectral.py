"""Deterministic Laplacian eigenbases with Lp-normalized analysis/synthesis pairs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Relative tolerance under which two eigenvalues are treated as one multiplet.
EIGENVALUE_GROUP_RTOL = 1e-8
# A coefficient counts as "non-zero" for the sign rule above this fraction of
# the vector's Euclidean norm.
SIGN_EPS = 1e-12
# Residual bound enforced on the synthesis/analysis pairing.
DUAL_RESIDUAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class LocalEigenBasis:
    """Eigendecomposition of one subgraph Laplacian.

    `analysis` holds the Lp-normalized eigenvectors as columns (ascending
    eigenvalues, canonical orientation); `synthesis` is its inverse-transpose,
    so synthesis @ analysis.T is the identity.  For p=2 the two coincide.
    """

    eigenvalues: np.ndarray
    analysis: np.ndarray
    synthesis: np.ndarray
    p: int

    @property
    def size(self) -> int:
        return len(self.eigenvalues)


def lp_normalize(v: np.ndarray, p: int) -> np.ndarray:
    """Scale a nonzero vector to unit L1 or L2 norm, preserving direction."""
    if p not in (1, 2):
        raise ValueError("normalization exponent must be 1 or 2")
    v = np.asarray(v, dtype=np.float64)
    norm = np.abs(v).sum() if p == 1 else float(np.linalg.norm(v))
    if norm == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return v / norm


def dual_basis(q: np.ndarray) -> np.ndarray:
    """Synthesis basis P with P.T == inv(Q), obtained by solving Q.T P = I."""
    q = np.asarray(q, dtype=np.float64)
    n = q.shape[0]
    try:
        p = np.linalg.solve(q.T, np.eye(n))
    except np.linalg.LinAlgError as exc:
        raise ValueError("analysis basis is singular") from exc
    residual = np.abs(p.T @ q - np.eye(n)).max()
    if residual > DUAL_RESIDUAL_TOL:
        raise ValueError(f"dual basis residual {residual:.2e} exceeds tolerance")
    return p


def _sign_canonicalize(v: np.ndarray) -> np.ndarray:
    scale = np.linalg.norm(v)
    nz = np.flatnonzero(np.abs(v) > SIGN_EPS * scale)
    if len(nz) and v[nz[0]] < 0.0:
        return -v
    return v


def _nullspace(m: np.ndarray, dim: int) -> tuple[int, np.ndarray | None]:
    """Nullspace dimension of an (r, dim) constraint matrix and a basis vector
    when that dimension is exactly one."""
    if m.shape[0] == 0:
        return dim, (np.ones(1) if dim == 1 else None)
    _, s, vt = np.linalg.svd(m, full_matrices=True)
    # Constraint rows have natural scale <= 1; the floor keeps noise-only rows
    # (projections of vectors already orthogonal to the subspace) rankless.
    tol = max(m.shape) * np.finfo(np.float64).eps * max(float(s[0]), 1.0)
    rank = int(np.sum(s > tol))
    null_dim = dim - rank
    if null_dim == 1:
        return 1, vt[-1]
    return null_dim, None


def canonicalize_degenerate(eigenspace: np.ndarray, fixed, p: int) -> np.ndarray:
    """Deterministic basis of a degenerate eigenspace.

    Vector i (1-based) of an m-dimensional eigenspace gets its last (m - i)
    coefficients forced to exactly zero and must be orthogonal to all `fixed`
    vectors and to the i-1 vectors already produced; the surviving direction
    is Lp-normalized with its first non-zero coefficient positive.  When the
    zero pattern leaves no solution the trailing-zero constraints are released
    one position at a time; when it leaves several, further trailing positions
    are zeroed until the direction is pinned down.
    """
    e = np.asarray(eigenspace, dtype=np.float64)
    if e.ndim == 1:
        e = e[:, None]
    n, m = e.shape
    # Work in an orthonormal coordinate frame of the subspace.
    basis, _ = np.linalg.qr(e)
    fixed = [np.asarray(f, dtype=np.float64) for f in (fixed if fixed is not None else [])]
    fixed_rows = [f @ basis for f in fixed]
    produced_dirs: list[np.ndarray] = []
    out = np.empty((n, m))
    for i in range(1, m + 1):
        zeros = m - i
        coeffs = None
        while True:
            rows = list(fixed_rows) + [d @ basis for d in produced_dirs]
            if zeros > 0:
                rows.extend(basis[n - zeros:, :])
            # Rows of negligible norm (vectors already orthogonal to the
            # subspace, or coordinates absent from it) impose no constraint.
            rows = [r for r in rows if np.linalg.norm(r) > 1e-12]
            mat = np.vstack(rows) if rows else np.empty((0, m))
            null_dim, vec = _nullspace(mat, m)
            if null_dim == 1:
                coeffs = vec
                break
            if null_dim < 1:
                zeros -= 1
                if zeros < 0:
                    raise ValueError("degenerate eigenspace admits no canonical vector")
            else:
                zeros += 1
                if zeros > n:
                    raise ValueError("degenerate eigenspace cannot be pinned down")
        v = basis @ coeffs
        if zeros > 0:
            v[n - zeros:] = 0.0
        direction = v / np.linalg.norm(v)
        produced_dirs.append(direction)
        out[:, i - 1] = _sign_canonicalize(lp_normalize(v, p))
    return out


def _group_eigenvalues(w: np.ndarray) -> list[tuple[int, int]]:
    """Slices (start, stop) of eigenvalue multiplets, grouping near-equal values."""
    tol = EIGENVALUE_GROUP_RTOL * max(1.0, float(np.abs(w).max()) if len(w) else 1.0)
    groups = []
    start = 0
    for i in range(1, len(w)):
        if w[i] - w[i - 1] > tol:
            groups.append((start, i))
            start = i
    groups.append((start, len(w)))
    return groups


def laplacian_eigh(lap: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Canonical eigendecomposition of a symmetric Laplacian matrix.

    Returns ascending eigenvalues (zero group clamped to exactly 0) and the
    Lp-normalized, sign-canonical eigenvector matrix.  Requires the zero
    eigenvalue to be simple, i.e. the underlying graph must be connected.
    """
    lap = np.asarray(lap, dtype=np.float64)
    if lap.ndim != 2 or lap.shape[0] != lap.shape[1]:
        raise ValueError("Laplacian must be a square matrix")
    scale = max(1.0, float(np.abs(lap).max()))
    if np.abs(lap - lap.T).max() > 1e-10 * scale:
        raise ValueError("Laplacian must be symmetric")
    n = lap.shape[0]
    w, v = np.linalg.eigh(lap)
    groups = _group_eigenvalues(w)
    tol = EIGENVALUE_GROUP_RTOL * max(1.0, float(np.abs(w).max()))
    zero_group = groups[0]
    if abs(w[0]) > tol:
        raise ValueError("Laplacian has no zero eigenvalue; not a valid Laplacian")
    if zero_group[1] - zero_group[0] > 1:
        raise ValueError("zero eigenvalue has multiplicity > 1; subgraph is disconnected")
    w = w.copy()
    w[zero_group[0]:zero_group[1]] = 0.0

    q = np.empty((n, n))
    done: list[np.ndarray] = []
    for start, stop in groups:
        if start == 0:
            # Constant mode of a connected Laplacian, written exactly.
            col = np.full(n, 1.0 / n if p == 1 else 1.0 / np.sqrt(n))
            q[:, 0] = col
            done.append(col / np.linalg.norm(col))
            continue
        if stop - start == 1:
            col = _sign_canonicalize(lp_normalize(v[:, start], p))
            q[:, start] = col
            done.append(col / np.linalg.norm(col))
            continue
        block = canonicalize_degenerate(v[:, start:stop], done, p)
        q[:, start:stop] = block
        for j in range(block.shape[1]):
            done.append(block[:, j] / np.linalg.norm(block[:, j]))
    return w, q


def local_eigenbasis(local_laplacian: np.ndarray, p: int) -> LocalEigenBasis:
    """Full analysis/synthesis eigenbasis of one connected subgraph Laplacian."""
    if p not in (1, 2):
        raise ValueError("normalization exponent must be 1 or 2")
    w, q = laplacian_eigh(local_laplacian, p)
    synthesis = q if p == 2 else dual_basis(q)
    return LocalEigenBasis(eigenvalues=w, analysis=q, synthesis=synthesis, p=p)
