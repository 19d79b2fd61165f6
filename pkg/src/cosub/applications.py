"""Compression by non-linear approximation, hard-threshold denoising, metrics."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .filterbank import Pyramid, analyze_cascade, synthesize_cascade
from .graphs import WeightedGraph, as_signal, global_eigenbasis


@dataclass(frozen=True)
class NlaResult:
    """Outcome of a non-linear approximation at one cascade depth."""

    level: int
    kept_hp: int
    kept_lp: int
    ratio: float
    psnr: float


def psnr(reference, estimate) -> float:
    """Peak signal-to-noise ratio in dB; peak is max |reference|."""
    ref = np.asarray(reference, dtype=np.float64)
    est = np.asarray(estimate, dtype=np.float64)
    if ref.shape != est.shape:
        raise ValueError("signals must have equal length")
    mse = float(np.mean(np.square(ref - est)))
    if mse == 0.0:
        return math.inf
    peak = float(np.abs(ref).max())
    return 10.0 * math.log10(peak * peak / mse)


def snr(reference, estimate) -> float:
    """Signal-to-noise ratio in dB relative to the reference energy."""
    ref = np.asarray(reference, dtype=np.float64)
    est = np.asarray(estimate, dtype=np.float64)
    if ref.shape != est.shape:
        raise ValueError("signals must have equal length")
    err = float(np.sum(np.square(ref - est)))
    if err == 0.0:
        return math.inf
    num = float(np.sum(np.square(ref)))
    if num == 0.0:
        raise ValueError("SNR needs a nonzero reference signal")
    return 10.0 * math.log10(num / err)


def compression_ratio(total: int, kept_lp: int, kept_hp: int) -> float:
    """Original coefficient count over retained coefficient count."""
    kept = kept_lp + kept_hp
    if kept <= 0:
        raise ValueError("at least one coefficient must be kept")
    if kept > total:
        raise ValueError("kept coefficients exceed the total")
    return total / kept


def nla_compress(pyramid: Pyramid, keep_hp: int) -> Pyramid:
    """Keep the `keep_hp` largest-magnitude detail coefficients, zero the rest.

    The final approximation channel is always retained in full.  Magnitude
    ties are resolved in ascending (level, channel, index) order.
    """
    entries = []
    for j, level in enumerate(pyramid.levels):
        for l, chan in enumerate(level.channels[1:], start=2):
            for idx, value in enumerate(chan):
                entries.append((abs(value), j, l, idx))
    if keep_hp < 0 or keep_hp > len(entries):
        raise ValueError("keep_hp must lie in [0, total detail count]")
    entries.sort(key=lambda e: (-e[0], e[1], e[2], e[3]))
    keep = {(j, l, idx) for _, j, l, idx in entries[:keep_hp]}
    new_levels = []
    for j, level in enumerate(pyramid.levels):
        channels = [level.channels[0].copy()]
        for l, chan in enumerate(level.channels[1:], start=2):
            kept = np.array([v if (j, l, i) in keep else 0.0
                             for i, v in enumerate(chan)])
            channels.append(kept)
        new_levels.append(replace(level, channels=channels))
    return Pyramid(levels=new_levels,
                   final_approximation=pyramid.final_approximation.copy(),
                   p=pyramid.p, n=pyramid.n)


def _resolve_keep(keep_hp, available: int) -> int:
    if isinstance(keep_hp, float) and 0.0 < keep_hp < 1.0:
        return round(keep_hp * available)
    count = int(keep_hp)
    if count < 0:
        raise ValueError("keep_hp must be non-negative")
    return min(count, available)


def best_level_nla(graph: WeightedGraph, signal, partitions, keep_hp,
                   p: int = 1, max_levels: int | None = None) -> NlaResult:
    """Evaluate the non-linear approximation at every cascade depth and return
    the depth with the best reconstruction.

    `keep_hp` is an absolute detail-coefficient count, or a fraction in (0, 1)
    of the details available at each depth.
    """
    x = as_signal(signal, graph.n)
    pyramid = analyze_cascade(graph, x, partitions, p=p, max_levels=max_levels)
    if pyramid.num_levels == 0:
        raise ValueError("the cascade produced no level to compress")
    best: NlaResult | None = None
    for depth in range(1, pyramid.num_levels + 1):
        sub = pyramid.truncated(depth)
        available = sub.detail_counts()
        kept = _resolve_keep(keep_hp, available)
        if kept == available:
            # Nothing is discarded: the transform is the identity and the
            # reconstruction is the input itself.
            reconstruction = x
        else:
            reconstruction = synthesize_cascade(nla_compress(sub, kept))
        lp = len(sub.final_approximation)
        result = NlaResult(level=depth, kept_hp=kept, kept_lp=lp,
                           ratio=compression_ratio(graph.n, lp, kept),
                           psnr=psnr(x, reconstruction))
        if best is None or result.psnr > best.psnr:
            best = result
    return best


def denoise(graph: WeightedGraph, noisy, sigma: float, levels: int,
            partitions, p: int = 2) -> np.ndarray:
    """Hard-threshold denoising: analyze, discard detail coefficients with
    magnitude at most 3*sigma, reconstruct.

    The scheme assumes unit-energy local modes, so p=2 is enforced; passing
    p=1 is honoured but warned about.
    """
    if sigma < 0.0:
        raise ValueError("noise level must be non-negative")
    if p != 2:
        warnings.warn("hard-threshold denoising expects L2-normalized modes (p=2)",
                      stacklevel=2)
    x = as_signal(noisy, graph.n)
    pyramid = analyze_cascade(graph, x, partitions, p=p, max_levels=levels)
    threshold = 3.0 * sigma
    new_levels = []
    for level in pyramid.levels:
        channels = [level.channels[0].copy()]
        for chan in level.channels[1:]:
            channels.append(np.where(np.abs(chan) > threshold, chan, 0.0))
        new_levels.append(replace(level, channels=channels))
    cleaned = Pyramid(levels=new_levels,
                      final_approximation=pyramid.final_approximation.copy(),
                      p=pyramid.p, n=pyramid.n)
    return synthesize_cascade(cleaned)


def smooth_test_signal(graph: WeightedGraph, k: int) -> np.ndarray:
    """Sum of the first k global Fourier modes, scaled to unit peak value."""
    if not 1 <= k <= graph.n:
        raise ValueError("mode count must lie in 1..n")
    _, q = global_eigenbasis(graph, p=2)
    x = q[:, :k].sum(axis=1)
    return x / np.abs(x).max()
