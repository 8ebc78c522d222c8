"""Shared numerical engines.

Deterministic counter-based RNG substreams, chunked Monte Carlo with error
estimates, radial Gamma integrals, sphere volumes, log-gamma, and finite
differences.  Every stochastic routine in the package goes through
:func:`mc_mean` so that results are bit-identical for a fixed seed,
independent of how many workers execute the chunks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy.special import gammaln

__all__ = [
    "MCConfig",
    "MCEstimate",
    "central_diff",
    "gamma_radial",
    "log_gamma",
    "log_gamma_radial",
    "mc_mean",
    "radial_quad",
    "sphere_uniform",
    "substream",
    "vol_ball",
    "vol_sphere",
]

DEFAULT_CHUNK = 1 << 16


@dataclass(frozen=True)
class MCConfig:
    """Configuration of one Monte Carlo run.

    Fixing ``seed`` fixes the output exactly; ``workers`` only changes how
    chunks are scheduled, never the result.
    """

    samples: int = 100_000
    seed: int = 0
    workers: int = 1
    target_rel_stderr: float | None = None
    chunk: int = DEFAULT_CHUNK

    def scaled(self, factor):
        return MCConfig(samples=int(self.samples * factor), seed=self.seed,
                        workers=self.workers,
                        target_rel_stderr=self.target_rel_stderr,
                        chunk=self.chunk)


@dataclass(frozen=True)
class MCEstimate:
    """Monte Carlo value with standard error and provenance."""

    value: complex
    stderr: float
    samples: int
    seed: int = 0

    def within(self, expected, nsigma=3.0, floor=0.0):
        """True if ``expected`` lies within ``nsigma`` standard errors."""
        return abs(self.value - expected) <= nsigma * self.stderr + floor


def substream(seed, index):
    """Independent reproducible generator for chunk ``index`` of ``seed``.

    Philox is counter-based, so (seed, index) keys a stream directly.
    """
    return np.random.Generator(np.random.Philox(key=np.uint64(seed), counter=[0, 0, 0, np.uint64(index)]))


def _chunk_stats(batch_fn, seed, index, m):
    rng = substream(seed, index)
    vals = np.asarray(batch_fn(rng, m))
    if vals.shape[0] != m:
        raise ValueError("batch function returned wrong sample count")
    s = vals.sum(dtype=complex)
    s2 = np.abs(vals - s / m) ** 2
    return s, s2.sum(dtype=float)


def _combine(jobs, stats):
    n = sum(m for _, m in jobs)
    total = complex(math.fsum(s.real for s, _ in stats), math.fsum(s.imag for s, _ in stats))
    mean = total / n
    # within-chunk spreads are around chunk means; recentre around the global mean
    var_sum = math.fsum(v for _, v in stats)
    for (_, m), (s, _) in zip(jobs, stats):
        var_sum += m * abs(s / m - mean) ** 2
    var = var_sum / max(n - 1, 1)
    return mean, math.sqrt(var / n), n


def mc_mean(batch_fn, config, max_extension=64):
    """Mean of ``batch_fn(rng, m) -> (m,) array`` over ``config.samples`` draws.

    Chunks are keyed by index, partial sums are combined in index order with
    compensated summation, so the estimate does not depend on ``workers``.
    With ``target_rel_stderr`` set, whole rounds of further chunks are drawn
    (continuing the index sequence, hence still deterministic) until the
    relative standard error reaches the target or the sample budget has
    grown by ``max_extension``.
    """
    n = int(config.samples)
    chunk = int(config.chunk)
    sizes = [chunk] * (n // chunk)
    if n % chunk:
        sizes.append(n % chunk)
    if not sizes:
        raise ValueError("samples must be positive")
    jobs = list(enumerate(sizes))

    def run(new_jobs):
        if config.workers > 1:
            with ThreadPoolExecutor(max_workers=config.workers) as ex:
                return list(ex.map(lambda im: _chunk_stats(batch_fn, config.seed,
                                                           im[0], im[1]), new_jobs))
        return [_chunk_stats(batch_fn, config.seed, i, m) for i, m in new_jobs]

    stats = run(jobs)
    mean, stderr, total_n = _combine(jobs, stats)
    target = config.target_rel_stderr
    while (target is not None and stderr > target * abs(mean)
           and total_n < max_extension * n):
        start = jobs[-1][0] + 1
        extra = [(start + k, chunk) for k in range(max(total_n // chunk, 1))]
        jobs.extend(extra)
        stats.extend(run(extra))
        mean, stderr, total_n = _combine(jobs, stats)
    if np.iscomplexobj(np.asarray(mean)) and abs(mean.imag) == 0.0:
        mean = mean.real
    return MCEstimate(value=mean, stderr=stderr, samples=total_n, seed=config.seed)


def sphere_uniform(dim, rng, size=None):
    """Uniform samples on the unit sphere S^dim in R^(dim+1)."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    shape = (dim + 1,) if size is None else (size, dim + 1)
    v = rng.standard_normal(shape)
    nrm = np.linalg.norm(v, axis=-1, keepdims=True)
    # resample the (measure-zero) degenerate draws
    while np.any(nrm < 1e-12):
        bad = nrm[..., 0] < 1e-12
        v[bad] = rng.standard_normal((int(bad.sum()), dim + 1))
        nrm = np.linalg.norm(v, axis=-1, keepdims=True)
    return v / nrm


def log_gamma(x):
    """log Gamma(x) for x > 0, accurate to ~1e-14 relative."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("log_gamma requires x > 0")
    out = gammaln(x)
    return float(out) if out.ndim == 0 else out


def log_gamma_radial(k, c):
    """log of integral_0^inf t^k e^(-c t) dt = Gamma(k+1)/c^(k+1)."""
    if k <= -1:
        raise ValueError("radial Gamma integral needs k > -1")
    if c <= 0:
        raise ValueError("radial Gamma integral needs c > 0")
    return log_gamma(k + 1.0) - (k + 1.0) * math.log(c)


def gamma_radial(k, c):
    """integral_0^inf t^k e^(-c t) dt, evaluated in log space."""
    return math.exp(log_gamma_radial(k, c))


def vol_sphere(m):
    """Riemannian volume of the unit sphere S^m; vol(S^3) = 2 pi^2."""
    if m < 0:
        raise ValueError("sphere dimension must be >= 0")
    return math.exp(math.log(2.0) + 0.5 * (m + 1) * math.log(math.pi) - log_gamma(0.5 * (m + 1)))


def vol_ball(m):
    """Volume of the unit ball in R^m."""
    return vol_sphere(m - 1) / m if m > 0 else 1.0


def radial_quad(fn, c, power=0.0, growth_bound=None, tol=1e-11):
    """Adaptive integral_0^inf fn(r) r^power e^(-c r) dr.

    ``growth_bound`` declares a polynomial bound on ``fn``; integrands
    without one are rejected since e^(-c r) cannot be assumed to win.
    """
    if growth_bound is None:
        raise ValueError("declare a polynomial growth bound for the radial integrand")
    if c <= 0:
        raise ValueError("decay rate must be positive")
    scale = (power + growth_bound + 1.0) / c  # peak location heuristic
    val, err = integrate.quad(lambda r: fn(r) * r ** power * math.exp(-c * r),
                              0.0, np.inf, epsabs=0.0, epsrel=tol,
                              points=None, limit=200)
    del scale
    return val, err


def central_diff(f, x, direction, h=1e-5):
    """Central difference of scalar f along ``direction`` at x."""
    x = np.asarray(x, dtype=complex)
    d = np.asarray(direction, dtype=complex)
    return (f(x + h * d) - f(x - h * d)) / (2.0 * h)
