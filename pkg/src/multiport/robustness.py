"""Monte-Carlo robustness of block-decomposed unitaries under Gaussian noise.

The noise model perturbs every entry of every factor block independently:
real and imaginary parts each receive an N(0, sigma^2) offset.  Output
phases are left exact.  Fidelity between an ideal matrix and its perturbed
counterpart is the phase-insensitive overlap

    F = |tr(q^dag p) / d|^2 / (tr(p^dag p) / d)

which is 1 exactly when ``p`` equals ``q`` up to a global phase.

All sampling is driven by ``numpy`` seed sequences derived from a single
master seed plus fixed stream tags, so every sweep is reproducible and
distinct loops never share a stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .decomposition import DecompositionPlan, _compose, decompose
from .linalg import as_matrix, haar_random_unitary, sample_haar

__all__ = [
    "CalibrationError",
    "NoiseModel",
    "PerturbedFactor",
    "FidelityStats",
    "SweepResult",
    "CalibrationResult",
    "fidelity",
    "perturb_factor",
    "reconstruct_perturbed",
    "component_fidelity_estimate",
    "calibrate_sigma",
    "sweep_noise",
    "sweep_size",
]

_U64_MASK = (1 << 64) - 1

# Stream tags keep the independent sampling loops (matrix draws, noise draws,
# calibration probes, component estimates) on disjoint substreams of one seed.
_MATRIX_STREAM = 1
_NOISE_STREAM = 2
_CALIBRATE_STREAM = 3
_ESTIMATE_STREAM = 4


class CalibrationError(RuntimeError):
    """Noise calibration could not reach the requested fidelity window."""


def _child_seed(*parts: int) -> int:
    """Collapse a tuple of integers into one derived 64-bit seed."""
    entropy = tuple(int(p) & _U64_MASK for p in parts)
    return int(np.random.SeedSequence(entropy).generate_state(1, np.uint64)[0])


def _rng(*parts: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(_child_seed(*parts)))


@dataclass(frozen=True)
class NoiseModel:
    """Additive complex Gaussian entry noise of strength ``sigma``.

    ``seed`` fixes the noise stream; a given ``(seed, draw_index)`` pair
    always produces the same offsets.
    """

    sigma: float
    seed: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "sigma", float(self.sigma))
        object.__setattr__(self, "seed", int(self.seed))
        if not (math.isfinite(self.sigma) and self.sigma >= 0.0):
            raise ValueError(f"sigma must be finite and >= 0, got {self.sigma}")


@dataclass(frozen=True, eq=False)
class PerturbedFactor:
    """A factor whose block is no longer exactly unitary.

    Same fields as ``Factor`` but without the unitarity validation, since the
    whole point is to carry a noisy block.
    """

    size: int
    base_row: int
    columns: tuple[int, ...]
    block: np.ndarray


@dataclass(frozen=True)
class FidelityStats:
    """Sample mean, standard error of the mean, and sample count."""

    mean: float
    std_error: float
    samples: int

    def __post_init__(self) -> None:
        if self.samples < 1:
            raise ValueError(f"samples must be positive, got {self.samples}")
        if not (math.isfinite(self.mean) and math.isfinite(self.std_error)):
            raise ValueError("fidelity statistics must be finite")


@dataclass(frozen=True)
class SweepResult:
    """Pooled fidelities for one ``(n, m, sigma)`` cell of a sweep.

    ``fq`` pools the per-factor block fidelities over every factor of every
    perturbation draw (undersized remainder blocks included); ``fu`` pools
    the matrix-level fidelity of the reassembled unitaries.
    """

    n: int
    m: int
    sigma: float
    fq: FidelityStats
    fu: FidelityStats


@dataclass(frozen=True)
class CalibrationResult:
    """Noise strength found for a target block fidelity.

    ``achieved`` is the empirical fidelity at ``sigma`` from the calibration
    probes themselves; ``probes`` counts how many Monte-Carlo probes the
    search spent.
    """

    sigma: float
    achieved: FidelityStats
    target: float
    probes: int


def fidelity(q, q_pert) -> float:
    """Phase-insensitive fidelity between a matrix and its perturbed version."""
    q = as_matrix(q, square=True)
    p = as_matrix(q_pert, square=True)
    if q.shape != p.shape:
        raise ValueError(f"shape mismatch: {q.shape} vs {p.shape}")
    d = q.shape[0]
    denom = np.vdot(p, p).real / d
    if denom == 0.0:
        raise ValueError("perturbed matrix is identically zero")
    overlap = np.vdot(q, p) / d
    return float(abs(overlap) ** 2 / denom)


def perturb_factor(factor, noise: NoiseModel, draw_index: int) -> PerturbedFactor:
    """Apply one seeded draw of entry noise to a factor's block.

    ``draw_index`` selects the draw: the offsets are a pure function of
    ``(noise.seed, draw_index)`` and the block shape.
    """
    draw_index = int(draw_index)
    if draw_index < 0:
        raise ValueError(f"draw_index must be >= 0, got {draw_index}")
    if noise.sigma == 0.0:
        return PerturbedFactor(factor.size, factor.base_row, factor.columns, factor.block)
    rng = _rng(noise.seed, _NOISE_STREAM, draw_index)
    shape = factor.block.shape
    offset = rng.normal(0.0, noise.sigma, size=shape)
    offset = offset + 1j * rng.normal(0.0, noise.sigma, size=shape)
    return PerturbedFactor(
        factor.size, factor.base_row, factor.columns, factor.block + offset
    )


def _perturbed_composition(plan: DecompositionPlan, noise: NoiseModel):
    """Perturb every factor, compose, and return per-factor block fidelities.

    Factor ``k`` uses draw index ``k`` of the noise stream, so one
    ``NoiseModel`` describes one joint perturbation of the whole mesh.
    """
    perturbed = [perturb_factor(f, noise, k) for k, f in enumerate(plan.factors)]
    block_fids = np.array(
        [fidelity(f.block, p.block) for f, p in zip(plan.factors, perturbed)]
    )
    matrix = _compose(
        plan.n,
        plan.phases,
        ((p.columns, p.block) for p in reversed(perturbed)),
    )
    return matrix, block_fids


def reconstruct_perturbed(plan: DecompositionPlan, noise: NoiseModel) -> np.ndarray:
    """Reassemble a plan with every factor independently perturbed.

    With ``noise.sigma == 0`` this reproduces ``reconstruct(plan)`` bit for
    bit (same composition code path, identical blocks).
    """
    matrix, _ = _perturbed_composition(plan, noise)
    return matrix


class _RunningMean:
    """Streaming mean / standard-error accumulator."""

    __slots__ = ("count", "total", "total_sq")

    def __init__(self) -> None:
        self.count = 0
        self.total = 0.0
        self.total_sq = 0.0

    def add(self, values) -> None:
        arr = np.atleast_1d(np.asarray(values, dtype=np.float64))
        self.count += arr.size
        self.total += float(arr.sum())
        self.total_sq += float((arr * arr).sum())

    def stats(self) -> FidelityStats:
        if self.count == 0:
            raise ValueError("no samples accumulated")
        mean = self.total / self.count
        if self.count > 1:
            var = max(self.total_sq - self.count * mean * mean, 0.0) / (self.count - 1)
            std_error = math.sqrt(var / self.count)
        else:
            std_error = 0.0
        return FidelityStats(mean=mean, std_error=std_error, samples=self.count)


def component_fidelity_estimate(
    m: int,
    sigma: float,
    trials: int,
    seed: int,
    chunk: int = 32768,
) -> FidelityStats:
    """Monte-Carlo mean fidelity of a single noisy m x m Haar block.

    Each trial draws a fresh Haar unitary, perturbs it with entry noise of
    strength ``sigma``, and records the fidelity.  Fully vectorized in
    chunks; deterministic for fixed ``(m, sigma, trials, seed)``.
    """
    m = int(m)
    trials = int(trials)
    if m < 1:
        raise ValueError(f"dimension must be at least 1, got {m}")
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    sigma = float(sigma)
    if not (math.isfinite(sigma) and sigma >= 0.0):
        raise ValueError(f"sigma must be finite and >= 0, got {sigma}")
    # Haar draws and noise draws ride separate substreams, so the result is
    # independent of the internal chunk size and two estimates at different
    # sigma share the exact same Haar samples (common random numbers).
    root = np.random.SeedSequence(_child_seed(seed, _ESTIMATE_STREAM))
    haar_rng, noise_rng = (np.random.default_rng(s) for s in root.spawn(2))
    acc = _RunningMean()
    remaining = trials
    while remaining:
        b = min(int(chunk), remaining)
        remaining -= b
        q = sample_haar(haar_rng, m, count=b)
        if sigma == 0.0:
            p = q
        else:
            pairs = noise_rng.normal(0.0, sigma, size=(b, m, m, 2))
            p = q + pairs[..., 0] + 1j * pairs[..., 1]
        overlap = np.abs(np.einsum("bij,bij->b", np.conj(q), p) / m) ** 2
        power = np.einsum("bij,bij->b", np.conj(p), p).real / m
        acc.add(overlap / power)
    return acc.stats()


def calibrate_sigma(
    m: int,
    target_fq: float,
    tolerance: float,
    seed: int,
    trials: int = 200_000,
) -> CalibrationResult:
    """Find the noise strength whose mean block fidelity hits ``target_fq``.

    Brackets the target by doubling sigma, then bisects.  Every probe reuses
    the same seed (common random numbers), which makes the empirical mean a
    smooth, monotone function of sigma, so the bisection converges cleanly.
    Stops once the probe mean is within ``0.3 * tolerance`` of the target;
    raises ``CalibrationError`` if no probe lands within ``tolerance``.
    """
    m = int(m)
    if m < 2:
        raise ValueError(f"block size must be at least 2, got {m}")
    target_fq = float(target_fq)
    if not 0.0 < target_fq <= 1.0:
        raise ValueError(f"target fidelity must be in (0, 1], got {target_fq}")
    tolerance = float(tolerance)
    if not 0.0 < tolerance < 1.0:
        raise ValueError(f"tolerance must be in (0, 1), got {tolerance}")

    probe_seed = _child_seed(seed, _CALIBRATE_STREAM)

    def probe(sigma: float) -> FidelityStats:
        return component_fidelity_estimate(m, sigma, trials, probe_seed)

    if target_fq == 1.0:
        return CalibrationResult(
            sigma=0.0, achieved=probe(0.0), target=target_fq, probes=1
        )

    probes = 0
    lo = 0.0
    hi = 0.05
    while True:
        stats_hi = probe(hi)
        probes += 1
        if stats_hi.mean < target_fq:
            break
        lo = hi
        hi *= 2.0
        if hi > 1e6:
            raise CalibrationError(
                f"could not bracket target fidelity {target_fq} below sigma=1e6"
            )
    best_sigma, best_stats = hi, stats_hi

    for _ in range(80):
        if abs(best_stats.mean - target_fq) <= 0.3 * tolerance:
            break
        mid = 0.5 * (lo + hi)
        stats = probe(mid)
        probes += 1
        if abs(stats.mean - target_fq) < abs(best_stats.mean - target_fq):
            best_sigma, best_stats = mid, stats
        if stats.mean > target_fq:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-12 * max(1.0, hi):
            break

    if abs(best_stats.mean - target_fq) > tolerance:
        raise CalibrationError(
            f"calibration stalled at mean {best_stats.mean:.6f} for target "
            f"{target_fq} +/- {tolerance} (sigma={best_sigma:.6g}); "
            f"try more trials per probe"
        )
    return CalibrationResult(
        sigma=best_sigma, achieved=best_stats, target=target_fq, probes=probes
    )


def _check_counts(n_matrices: int, n_perturbations: int) -> tuple[int, int]:
    n_matrices = int(n_matrices)
    n_perturbations = int(n_perturbations)
    if n_matrices < 1:
        raise ValueError(f"n_matrices must be positive, got {n_matrices}")
    if n_perturbations < 1:
        raise ValueError(f"n_perturbations must be positive, got {n_perturbations}")
    return n_matrices, n_perturbations


def sweep_noise(
    n: int,
    m_list,
    sigma_grid,
    n_matrices: int,
    n_perturbations: int,
    seed: int,
    tol: float | None = None,
) -> list[SweepResult]:
    """Fidelity statistics over a grid of block sizes and noise strengths.

    For each ``m`` the sweep decomposes ``n_matrices`` fresh Haar unitaries
    once, then evaluates every ``sigma`` with ``n_perturbations``
    independent joint perturbations per matrix, pooling block fidelities and
    matrix fidelities per ``(m, sigma)`` cell.  Results are ordered with
    ``m`` outermost, then ``sigma`` in the given order.
    """
    n = int(n)
    if n < 2:
        raise ValueError(f"dimension must be at least 2, got {n}")
    m_list = [int(m) for m in m_list]
    if not m_list:
        raise ValueError("m_list must not be empty")
    for m in m_list:
        if not 2 <= m <= n:
            raise ValueError(f"block size m={m} must satisfy 2 <= m <= n={n}")
    sigma_grid = [float(s) for s in sigma_grid]
    if not sigma_grid:
        raise ValueError("sigma_grid must not be empty")
    for s in sigma_grid:
        if not (math.isfinite(s) and s >= 0.0):
            raise ValueError(f"sigma must be finite and >= 0, got {s}")
    n_matrices, n_perturbations = _check_counts(n_matrices, n_perturbations)

    results: list[SweepResult] = []
    for mi, m in enumerate(m_list):
        # Decompose each trial matrix once; the plan is reused across the
        # whole sigma grid (perturbation draws stay independent per sigma).
        prepared = []
        for t in range(n_matrices):
            u = haar_random_unitary(n, _child_seed(seed, _MATRIX_STREAM, mi, t))
            prepared.append((u, decompose(u, m, tol)))
        for si, sigma in enumerate(sigma_grid):
            fq_acc = _RunningMean()
            fu_acc = _RunningMean()
            for t, (u, plan) in enumerate(prepared):
                for p in range(n_perturbations):
                    noise = NoiseModel(
                        sigma=sigma,
                        seed=_child_seed(seed, _NOISE_STREAM, mi, si, t, p),
                    )
                    rebuilt, block_fids = _perturbed_composition(plan, noise)
                    fq_acc.add(block_fids)
                    fu_acc.add(fidelity(u, rebuilt))
            results.append(
                SweepResult(
                    n=n, m=m, sigma=sigma, fq=fq_acc.stats(), fu=fu_acc.stats()
                )
            )
    return results


def sweep_size(
    m_list,
    n_grid,
    target_fq: float,
    fq_tolerance: float,
    n_matrices: int,
    n_perturbations: int,
    seed: int,
    calibration_trials: int = 200_000,
) -> list[SweepResult]:
    """Fidelity versus matrix size at a fixed calibrated block fidelity.

    For each ``m`` the noise strength is first calibrated so a single noisy
    ``m x m`` block averages ``target_fq`` within ``fq_tolerance``; the same
    sigma is then applied across every ``n`` in ``n_grid``.  Grid points
    with ``n < m`` are skipped so one shared ``n_grid`` can serve several
    block sizes.  Results are ordered with ``m`` outermost, then ``n``.
    """
    m_list = [int(m) for m in m_list]
    if not m_list:
        raise ValueError("m_list must not be empty")
    n_grid = [int(n) for n in n_grid]
    if not n_grid:
        raise ValueError("n_grid must not be empty")
    for n in n_grid:
        if n < 2:
            raise ValueError(f"dimension must be at least 2, got {n}")
    n_matrices, n_perturbations = _check_counts(n_matrices, n_perturbations)

    results: list[SweepResult] = []
    for mi, m in enumerate(m_list):
        calib = calibrate_sigma(
            m,
            target_fq,
            fq_tolerance,
            _child_seed(seed, _CALIBRATE_STREAM, mi),
            trials=calibration_trials,
        )
        for ni, n in enumerate(n_grid):
            if n < m:
                continue
            fq_acc = _RunningMean()
            fu_acc = _RunningMean()
            for t in range(n_matrices):
                u = haar_random_unitary(n, _child_seed(seed, _MATRIX_STREAM, mi, ni, t))
                plan = decompose(u, m)
                for p in range(n_perturbations):
                    noise = NoiseModel(
                        sigma=calib.sigma,
                        seed=_child_seed(seed, _NOISE_STREAM, mi, ni, t, p),
                    )
                    rebuilt, block_fids = _perturbed_composition(plan, noise)
                    fq_acc.add(block_fids)
                    fu_acc.add(fidelity(u, rebuilt))
            results.append(
                SweepResult(
                    n=n,
                    m=m,
                    sigma=calib.sigma,
                    fq=fq_acc.stats(),
                    fu=fu_acc.stats(),
                )
            )
    return results
