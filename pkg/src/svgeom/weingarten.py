"""Assembly and sampling of the shape operator at the base point.

For a normal tensor the shape operator is a symmetric matrix on the tangent
space with one block row per factor.  Diagonal block i is built from the
degree-drop-two coordinates of factor i, scaled by sqrt((d_i - 1)/d_i), with
the diagonal entries carrying an extra sqrt(2); off-diagonal block (i, j) is
exactly the grid of cross-factor degree-drop coordinates.  The flat part of
the normal space contributes nothing.

Gaussian normal directions make the blocks independent: when the normal
coordinates are unit-variance on the orthonormal split basis, diagonal block
i is sqrt(2(d_i - 1)/d_i) times a GOE matrix and the off-diagonal blocks are
standard normal.  Published normalizations of this family disagree with each
other, so the samplers take an explicit variance profile; the Monte Carlo
suite adjudicates which profile matches the assembled operator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .bw_algebra import Array, SpaceSpec, Tensor
from .errors import DomainError
from .geodesics_reach import GeodesicSpec, geodesic_eval
from .manifold import NormalSplit, normal_split, project_components

PROFILE_NAMES = ("def-d", "weingarten", "corollary")


@dataclass(frozen=True)
class VarianceProfile:
    """Per-factor entry variances of the block-Gaussian symmetric matrix.

    within_offdiag[k] is the variance of off-diagonal entries inside the
    k-th diagonal block (it doubles as the within-group edge weight of the
    matching combinatorics), within_diag[k] the variance of its diagonal
    entries, cross the variance of entries in off-diagonal blocks.  Values
    are exact rationals so the matching sums stay exact.
    """

    name: str
    within_offdiag: tuple
    within_diag: tuple
    cross: Fraction = Fraction(1)

    def __post_init__(self):
        if any(v < 0 for v in self.within_offdiag) or \
           any(v < 0 for v in self.within_diag) or self.cross < 0:
            raise DomainError("variances must be nonnegative")


def variance_profile(name: str, degrees) -> VarianceProfile:
    """Named profile for a degree tuple.

    def-d:      within-block off-diagonal variance d_k (d_k - 1)
    weingarten: (d_k - 1) / d_k, the variance of the assembled operator
    corollary:  d_k (d_k - 1) / 4, the printed GOE normalization

    All three keep the GOE shape (diagonal variance twice the off-diagonal)
    and cross-block variance one.
    """
    degrees = tuple(int(d) for d in degrees)
    if name == "def-d":
        off = tuple(Fraction(d * (d - 1)) for d in degrees)
    elif name == "weingarten":
        off = tuple(Fraction(d - 1, d) for d in degrees)
    elif name == "corollary":
        off = tuple(Fraction(d * (d - 1), 4) for d in degrees)
    else:
        raise DomainError(f"unknown profile {name!r}; choose from {PROFILE_NAMES}")
    return VarianceProfile(name, off, tuple(2 * v for v in off))


@dataclass(frozen=True, eq=False)
class WeingartenMatrix:
    """Symmetric matrix of the shape operator, blocked by factor."""

    space: SpaceSpec
    entries: Array

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=float)
        n = self.space.manifold_dim
        if m.shape != (n, n):
            raise DomainError(f"entries must be {n}x{n}")
        object.__setattr__(self, "entries", m)

    def to_csv(self, path) -> None:
        np.savetxt(path, self.entries, fmt="%.17g", delimiter=",")


# ---------------------------------------------------------------------------
# assembly from normal coordinates
# ---------------------------------------------------------------------------

@lru_cache(maxsize=128)
def _assembly_plan(space: SpaceSpec):
    """Row/column positions and scales for the split's W and G coordinates."""
    split = normal_split(space)
    offsets = np.concatenate(([0], np.cumsum(space.dims)))
    w_rows, w_cols, w_scales = [], [], []
    for i, (k, l) in split.w_labels:
        d = space.degrees[i]
        scale = math.sqrt((d - 1) / d)
        w_rows.append(offsets[i] + k - 1)
        w_cols.append(offsets[i] + l - 1)
        w_scales.append(scale * (math.sqrt(2.0) if k == l else 1.0))
    g_rows, g_cols = [], []
    for (i, j), (k, l) in split.g_labels:
        g_rows.append(offsets[i] + k - 1)
        g_cols.append(offsets[j] + l - 1)
    return (np.array(w_rows, dtype=np.intp), np.array(w_cols, dtype=np.intp),
            np.array(w_scales), np.array(g_rows, dtype=np.intp),
            np.array(g_cols, dtype=np.intp))


def assemble_batch(space: SpaceSpec, w: Array, g: Array) -> Array:
    """Shape-operator matrices from batches of W and G coordinates."""
    w = np.atleast_2d(np.asarray(w, dtype=float))
    g = np.atleast_2d(np.asarray(g, dtype=float))
    w_rows, w_cols, w_scales, g_rows, g_cols = _assembly_plan(space)
    n = space.manifold_dim
    mats = np.zeros((w.shape[0], n, n))
    if w_rows.size:
        scaled = w * w_scales
        mats[:, w_rows, w_cols] = scaled
        mats[:, w_cols, w_rows] = scaled
    if g_rows.size:
        mats[:, g_rows, g_cols] = g
        mats[:, g_cols, g_rows] = g
    return mats


def _check_normal(comp, norm: float, what: str, tol: float = 1e-10) -> None:
    bound = tol * max(1.0, norm)
    if abs(comp.base) > bound or np.max(np.abs(comp.tangent), initial=0.0) > bound:
        raise DomainError(f"{what} must be orthogonal to the base point and "
                          "to the tangent space")


def assemble_weingarten(f: Tensor, split: NormalSplit | None = None) -> WeingartenMatrix:
    """Shape operator of the manifold at the base point, normal direction f."""
    split = split or normal_split(f.space)
    comp = project_components(f, split)
    _check_normal(comp, f.norm, "the normal direction")
    mat = assemble_batch(f.space, comp.w[None, :], comp.g[None, :])[0]
    return WeingartenMatrix(f.space, mat)


def veronese_weingarten(f: Tensor) -> WeingartenMatrix:
    """Single-factor shape operator; zero whenever the degree is one."""
    if f.space.r != 1:
        raise DomainError("veronese_weingarten expects a single-factor space")
    if f.space.degrees[0] == 1:
        comp = project_components(f, normal_split(f.space))
        _check_normal(comp, f.norm, "the normal direction")
        n = f.space.manifold_dim
        return WeingartenMatrix(f.space, np.zeros((n, n)))
    return assemble_weingarten(f)


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def gaussian_weingarten_batch(space: SpaceSpec, rng: np.random.Generator,
                              count: int) -> Array:
    """Operators assembled from unit-variance Gaussian normal coordinates.

    Only the curved normal coordinates are drawn; the flat remainder never
    enters the operator.
    """
    split = normal_split(space)
    w = rng.standard_normal((count, len(split.w_labels)))
    g = rng.standard_normal((count, len(split.g_labels)))
    return assemble_batch(space, w, g)


def sample_block_matrix_batch(group_sizes, profile: VarianceProfile,
                              rng: np.random.Generator, count: int) -> Array:
    """Direct sampler of the block-Gaussian symmetric matrix.

    Diagonal block k has off-diagonal variance within_offdiag[k] and
    diagonal variance within_diag[k]; off-diagonal blocks have iid entries
    of variance `cross`.
    """
    group_sizes = tuple(int(m) for m in group_sizes)
    if len(group_sizes) != len(profile.within_offdiag):
        raise DomainError("profile and group sizes must have equal length")
    m = sum(group_sizes)
    offsets = np.concatenate(([0], np.cumsum(group_sizes)))
    mats = np.zeros((count, m, m))
    cross_std = math.sqrt(float(profile.cross))
    for k, size in enumerate(group_sizes):
        if size == 0:
            continue
        a, b = offsets[k], offsets[k + 1]
        off_std = math.sqrt(float(profile.within_offdiag[k]))
        diag_std = math.sqrt(float(profile.within_diag[k]))
        block = rng.standard_normal((count, size, size))
        sym = np.triu(block, 1) * off_std
        sym = sym + np.swapaxes(sym, 1, 2)
        diag = rng.standard_normal((count, size)) * diag_std
        idx = np.arange(size)
        sym[:, idx, idx] = diag
        mats[:, a:b, a:b] = sym
        for j in range(k + 1, len(group_sizes)):
            c, d = offsets[j], offsets[j + 1]
            if d == c:
                continue
            cross = rng.standard_normal((count, size, d - c)) * cross_std
            mats[:, a:b, c:d] = cross
            mats[:, c:d, a:b] = np.swapaxes(cross, 1, 2)
    return mats


def sample_gaussian_weingarten(space: SpaceSpec, seed: int,
                               method: str = "assemble",
                               profile: VarianceProfile | None = None) -> WeingartenMatrix:
    """One random shape operator, deterministic per seed.

    method "assemble" draws Gaussian normal coordinates and assembles the
    operator (the canonical path).  method "direct" uses the block sampler
    with the given profile; the default profile is the one that reproduces
    the assembled distribution.
    """
    rng = np.random.default_rng(seed)
    if method == "assemble":
        mat = gaussian_weingarten_batch(space, rng, 1)[0]
    elif method == "direct":
        profile = profile or variance_profile("weingarten", space.degrees)
        mat = sample_block_matrix_batch(space.dims, profile, rng, 1)[0]
    else:
        raise DomainError("method must be 'assemble' or 'direct'")
    return WeingartenMatrix(space, mat)


# ---------------------------------------------------------------------------
# principal minors
# ---------------------------------------------------------------------------

def principal_minor_sum(matrix, k: int) -> float:
    """Sum of all k x k principal minors; the empty minor counts as one."""
    from itertools import combinations

    mat = matrix.entries if isinstance(matrix, WeingartenMatrix) else \
        np.asarray(matrix, dtype=float)
    n = mat.shape[0]
    if not 0 <= k <= n:
        raise DomainError(f"minor order {k} out of range 0..{n}")
    if k == 0:
        return 1.0
    total = 0.0
    for subset in combinations(range(n), k):
        sel = np.ix_(subset, subset)
        total += float(np.linalg.det(mat[sel]))
    return total


def principal_minor_sums_batch(mats: Array, k: int) -> Array:
    """Batched sum of k x k principal minors via eigenvalues.

    The sums are the elementary symmetric functions of the eigenvalues,
    read off the coefficients of prod_j (1 + t * lambda_j).
    """
    mats = np.asarray(mats, dtype=float)
    n = mats.shape[-1]
    if not 0 <= k <= n:
        raise DomainError(f"minor order {k} out of range 0..{n}")
    if k == 0:
        return np.ones(mats.shape[0])
    lam = np.linalg.eigvalsh(mats)
    coeffs = np.zeros((mats.shape[0], n + 1))
    coeffs[:, 0] = 1.0
    for j in range(n):
        coeffs[:, 1: j + 2] += coeffs[:, 0: j + 1] * lam[:, j: j + 1]
    return coeffs[:, k]


# ---------------------------------------------------------------------------
# finite-difference oracle
# ---------------------------------------------------------------------------

def second_fundamental_form_fd(space: SpaceSpec, v, normal: Tensor,
                               h: float = 1e-4) -> float:
    """Pairing of the curve acceleration with a normal direction.

    Builds the arc-length curve through the base point with tangent
    coordinates v, takes the central second difference of the embedding,
    and pairs it with the normal tensor.  Equals v^T L v for the assembled
    operator L of that normal direction.
    """
    v = np.asarray(v, dtype=float)
    if v.shape != (space.manifold_dim,):
        raise DomainError("tangent coordinates have the wrong length")
    if abs(np.linalg.norm(v) - 1.0) > 1e-9:
        raise DomainError("tangent coordinates must be a unit vector")
    if normal.space != space:
        raise DomainError("normal tensor lives in a different space")
    v = v / np.linalg.norm(v)
    speeds, targets = [], []
    pos = 0
    for n in space.dims:
        block = v[pos: pos + n]
        pos += n
        theta = float(np.linalg.norm(block))
        speeds.append(theta)
        target = np.zeros(n + 1)
        if theta > 0:
            target[1:] = block / theta
        else:
            target[1] = 1.0
        targets.append(target)
    spec = GeodesicSpec(space, tuple(speeds), targets=tuple(targets))
    plus = geodesic_eval(spec, h).coeffs
    zero = geodesic_eval(spec, 0.0).coeffs
    minus = geodesic_eval(spec, -h).coeffs
    acc = (plus - 2.0 * zero + minus) / (h * h)
    return float(np.dot(acc, normal.coeffs))
