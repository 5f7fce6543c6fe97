"""Independent stochastic oracles for determinants, minors, and tube volumes.

Sampling is organized in fixed-size batches whose random streams are derived
by hashing (seed, batch index), so every estimate is a pure function of the
inputs, the seed, and the sample count; scheduling and the advisory worker
count never enter the arithmetic.  Batch sums are accumulated and reduced
with numpy's pairwise summation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bw_algebra import SpaceSpec
from .errors import DomainError, ResourceError
from .manifold import max_correlation_batch
from .matchings import MatchingProblem
from .tube import sphere_volume
from .weingarten import (
    gaussian_weingarten_batch,
    principal_minor_sums_batch,
    sample_block_matrix_batch,
)

BATCH_SIZE = 8192
MC_TUBE_AMBIENT_CAP = 12


@dataclass(frozen=True)
class McConfig:
    """Sample count, seed, advisory worker count, optional output path."""

    samples: int
    seed: int = 42
    workers: int = 1
    output: Path | str | None = None

    def __post_init__(self):
        if self.samples < 1:
            raise DomainError("samples must be >= 1")
        if self.seed < 0:
            raise DomainError("seed must be nonnegative")


def _batch_streams(cfg: McConfig):
    """Deterministic (generator, batch size) pairs covering cfg.samples."""
    done = 0
    index = 0
    while done < cfg.samples:
        count = min(BATCH_SIZE, cfg.samples - done)
        yield np.random.default_rng([cfg.seed, index]), count
        done += count
        index += 1


@dataclass(frozen=True, eq=False)
class Histogram:
    bin_edges: np.ndarray
    counts: np.ndarray

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("bin_left,bin_right,count\n")
            for left, right, count in zip(self.bin_edges[:-1],
                                          self.bin_edges[1:], self.counts):
                fh.write(f"{left!r},{right!r},{int(count)}\n")


def _make_histogram(values: np.ndarray, bins: int = 100) -> Histogram:
    # Heavy determinant tails would otherwise dominate the binning.
    lo, hi = np.quantile(values, [0.0005, 0.9995])
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    counts, edges = np.histogram(values, bins=bins, range=(float(lo), float(hi)))
    return Histogram(edges, counts)


@dataclass(frozen=True, eq=False)
class McStats:
    mean: float
    std_error: float
    samples: int
    seed: int
    histogram: Histogram | None = None

    def to_json(self) -> str:
        return json.dumps({"mean": self.mean, "std_error": self.std_error,
                           "samples": self.samples, "seed": self.seed})


def mc_expected_det(problem: MatchingProblem, cfg: McConfig) -> McStats:
    """Sample determinants of the block matrix and report their statistics.

    The mean estimates the signed weighted matching sum; a 100-bin histogram
    of the empirical distribution is attached and optionally written as CSV.
    """
    profile = problem.resolved_profile()
    chunks = []
    for rng, count in _batch_streams(cfg):
        mats = sample_block_matrix_batch(problem.group_sizes, profile, rng, count)
        chunks.append(np.linalg.det(mats))
    values = np.concatenate(chunks)
    mean = float(np.mean(values))
    std_error = float(np.std(values, ddof=1) / math.sqrt(cfg.samples)) \
        if cfg.samples > 1 else float("inf")
    hist = _make_histogram(values)
    if cfg.output is not None:
        hist.to_csv(cfg.output)
    return McStats(mean, std_error, cfg.samples, cfg.seed, hist)


def mc_minor_sum(space: SpaceSpec, i: int, cfg: McConfig) -> McStats:
    """Average sum of 2i x 2i principal minors of sampled shape operators."""
    if not 0 <= 2 * i <= space.manifold_dim:
        raise DomainError(f"minor index {i} out of range for this space")
    chunks = []
    for rng, count in _batch_streams(cfg):
        mats = gaussian_weingarten_batch(space, rng, count)
        chunks.append(principal_minor_sums_batch(mats, 2 * i))
    values = np.concatenate(chunks)
    mean = float(np.mean(values))
    std_error = float(np.std(values, ddof=1) / math.sqrt(cfg.samples)) \
        if cfg.samples > 1 else float("inf")
    return McStats(mean, std_error, cfg.samples, cfg.seed)


@dataclass(frozen=True, eq=False)
class McVolume:
    volume: float
    std_error: float
    fraction: float
    samples: int
    seed: int

    def to_json(self) -> str:
        return json.dumps({"volume": self.volume, "std_error": self.std_error,
                           "fraction": self.fraction, "samples": self.samples,
                           "seed": self.seed})


def mc_tube_volume(space: SpaceSpec, eps: float, cfg: McConfig) -> McVolume:
    """Rejection estimate of the tube volume from uniform sphere samples.

    Draws normalized Gaussians on the ambient sphere, counts those whose
    best rank-one correlation exceeds cos(eps), and scales the hit fraction
    by the sphere volume.  The standard error comes from the binomial
    variance of the hit count.
    """
    if space.ambient_dim > MC_TUBE_AMBIENT_CAP:
        raise ResourceError(
            f"ambient dimension {space.ambient_dim} exceeds the rejection "
            f"sampling cap {MC_TUBE_AMBIENT_CAP}; use a smaller space")
    if not 0.0 < eps <= math.pi / 2.0:
        raise DomainError("radius must lie in (0, pi/2]")
    threshold = math.cos(eps)
    hits = 0
    for rng, count in _batch_streams(cfg):
        points = rng.standard_normal((count, space.ambient_dim))
        points /= np.linalg.norm(points, axis=1, keepdims=True)
        corr = max_correlation_batch(space, points)
        hits += int(np.count_nonzero(corr > threshold))
    fraction = hits / cfg.samples
    total = sphere_volume(space.sphere_dim)
    volume = fraction * total
    std_error = total * math.sqrt(max(fraction * (1.0 - fraction), 0.0)
                                  / cfg.samples)
    return McVolume(volume, std_error, fraction, cfg.samples, cfg.seed)
