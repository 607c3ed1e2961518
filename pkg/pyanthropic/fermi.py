# -*- coding: utf-8 -*-
"""
Interference model for the Fermi paradox.

log10 p (chance that a species like us develops locally) and log10 f
(propensity of other species to interfere) get independent Gaussian
priors whose means sum to zero. With V the collapsed opportunity factor,
the expected number of interfering species is f*p*V and the probability
that someone like you exists is p*exp(-f*p*V).

The posterior is sampled by shifting the prior mean of log10 p by
sd10_p^2 * ln(10), which absorbs the factor p exactly, then accepting
each proposal with probability exp(-f*p*V) <= 1.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import NamedTuple, Optional, Union

import numpy as np
import polars as pl

from pyanthropic.errors import ConfigurationError, DomainError, SamplerStarvationError
from pyanthropic.numerics import (
    LN10,
    Gaussian10,
    RandomSource,
    central_interval,
    compensated_mean,
    lognormal_mean,
    std_normal_quantile,
)
from pyanthropic.settings import DEFAULTS

logger = logging.getLogger(__name__)

# CONSTANTS -------------------------------------------------------------------

PRIOR_SUBSTREAM = 2**63  # substream for plot points drawn from the prior

###############################################################################


class FermiPrior(NamedTuple):
    """Independent Gaussian priors on log10 p and log10 f, means summing to 0."""

    sd10_p: float = DEFAULTS["fermi"]["sd10_p"]
    sd10_f: float = DEFAULTS["fermi"]["sd10_f"]
    mean10_p: float = 0.0
    mean10_f: float = 0.0

    @classmethod
    def with_split(cls, mean10_p: float, **kwargs) -> "FermiPrior":
        """Prior with mean10_f = -mean10_p."""
        return cls(mean10_p=mean10_p, mean10_f=-mean10_p, **kwargs)

    @classmethod
    def from_settings(cls, **kwargs) -> "FermiPrior":
        """Prior with widths from the active settings."""
        cfg = DEFAULTS["fermi"]
        kwargs = {"sd10_p": cfg["sd10_p"], "sd10_f": cfg["sd10_f"], **kwargs}
        return cls(**kwargs)

    @property
    def shifted_mean10_p(self) -> float:
        return self.mean10_p + self.sd10_p**2 * LN10


class FermiParams(NamedTuple):
    V: float = 0.0


class FactorSpec(NamedTuple):
    """Sub-factor of p or f, e.g. p1 with log10 p1 ~ N(mean10, sd10^2)."""

    mean10: float = DEFAULTS["fermi"]["factor_mean10"]
    sd10: float = DEFAULTS["fermi"]["factor_sd10"]
    parent: str = "p"

    @classmethod
    def from_settings(cls, parent: str = "p") -> "FactorSpec":
        cfg = DEFAULTS["fermi"]
        return cls(cfg["factor_mean10"], cfg["factor_sd10"], parent)


class FermiSampleSet(NamedTuple):
    """Accepted posterior draws; points[:, 0] is log10 f, points[:, 1] is log10 p."""

    points: np.ndarray
    prior: FermiPrior
    V: float
    seed: int
    proposal_count: int
    accepted_count: int
    algorithm: str = "philox"

    @property
    def log10_f(self) -> np.ndarray:
        return self.points[:, 0]

    @property
    def log10_p(self) -> np.ndarray:
        return self.points[:, 1]

    @property
    def acceptance_rate(self) -> float:
        return self.accepted_count / self.proposal_count


FactorPosterior = NamedTuple(
    "factor_posterior",
    [("mean10", float), ("sd10", float), ("mean_value", float), ("mean_value_se", float)],
)

FermiSummary = NamedTuple(
    "fermi_summary",
    [
        ("mean10_p", float),
        ("mean10_p_se", float),
        ("sd10_p", float),
        ("mean10_f", float),
        ("mean10_f_se", float),
        ("sd10_f", float),
        ("acceptance_rate", float),
    ],
)

PlotData = NamedTuple("plot_data", [("points", pl.DataFrame), ("intercept", Optional[float])])


def check_prior(prior: FermiPrior):
    """Raise ConfigurationError unless sds are positive and the means sum to zero."""
    for name in ("sd10_p", "sd10_f"):
        v = getattr(prior, name)
        if not (math.isfinite(v) and v > 0):
            raise ConfigurationError(f"{name} must be > 0, got {v}")
    if prior.mean10_p + prior.mean10_f != 0.0:
        raise ConfigurationError(
            f"mean10_p + mean10_f must be 0, got {prior.mean10_p} + {prior.mean10_f}"
        )


def _check_params(params: FermiParams):
    if not (math.isfinite(params.V) and params.V >= 0):
        raise DomainError(f"V must be finite and >= 0, got {params.V}")


###############################################################################


def expected_interferers(
    p: Union[float, np.ndarray], f: Union[float, np.ndarray], params: FermiParams
) -> Union[float, np.ndarray]:
    """Expected number of other species that would interfere, f*p*V."""
    _check_params(params)
    p, f = np.asarray(p, dtype=float), np.asarray(f, dtype=float)
    if np.any(p <= 0) or np.any(f <= 0):
        raise DomainError("p and f must be > 0")
    out = f * p * params.V
    return float(out) if out.ndim == 0 else out


def existence_prob(
    p: Union[float, np.ndarray], f: Union[float, np.ndarray], params: FermiParams
) -> Union[float, np.ndarray]:
    """Probability that someone like you exists, p*exp(-f*p*V)."""
    lam = expected_interferers(p, f, params)
    out = np.asarray(p, dtype=float) * np.exp(-np.asarray(lam))
    return float(out) if out.ndim == 0 else out


###############################################################################


def _draw_batch(
    rs: RandomSource, k: int, prior: FermiPrior, V: float, n: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    gen = rs.substream(k)
    z = gen.standard_normal((2, n))
    lp = prior.shifted_mean10_p + prior.sd10_p * z[0]
    lf = prior.mean10_f + prior.sd10_f * z[1]
    if V == 0:
        keep = np.ones(n, dtype=bool)
    else:
        u = gen.random(n)
        with np.errstate(over="ignore"):
            keep = u < np.exp(-V * 10.0 ** (lp + lf))
    return lf, lp, keep


def sample_posterior(
    prior: FermiPrior,
    params: FermiParams,
    target_accepted: int,
    seed: int,
    *,
    batch_size: Optional[int] = None,
    max_proposals: Optional[int] = None,
    min_acceptance: Optional[float] = None,
    workers: int = 1,
    algorithm: str = "philox",
) -> FermiSampleSet:
    """
    Draw target_accepted points from the posterior by shift-then-reject.

    Parameters
    ----------
    prior : FermiPrior
    params : FermiParams
    target_accepted : int
        Number of posterior points to return.
    seed : int
        Seed of the RandomSource; batch k uses substream k.
    batch_size, max_proposals, min_acceptance : optional
        Override the [fermi] settings.
    workers : int, optional
        Threads drawing batches. Batches are merged in substream order, so
        the result does not depend on this. The default is 1.
    algorithm : str, optional
        Bit generator of the RandomSource. The default is "philox".

    Raises
    ------
    SamplerStarvationError
        Acceptance rate below min_acceptance after max_proposals proposals.

    Returns
    -------
    FermiSampleSet
    """
    check_prior(prior)
    _check_params(params)
    if target_accepted < 1:
        raise DomainError("target_accepted must be >= 1")
    cfg = DEFAULTS["fermi"]
    batch_size = int(batch_size or cfg["batch_size"])
    max_proposals = int(max_proposals or cfg["max_proposals"])
    min_acceptance = float(cfg["min_acceptance"] if min_acceptance is None else min_acceptance)
    rs = RandomSource(seed, algorithm)

    chunks, n_acc, proposals, k = [], 0, 0, 0
    executor = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while n_acc < target_accepted:
            ks = range(k, k + max(workers, 1))
            k += len(ks)
            if executor is None:
                batches = [_draw_batch(rs, i, prior, params.V, batch_size) for i in ks]
            else:
                batches = list(
                    executor.map(lambda i: _draw_batch(rs, i, prior, params.V, batch_size), ks)
                )
            for lf, lp, keep in batches:
                idx = np.flatnonzero(keep)
                need = target_accepted - n_acc
                if idx.size >= need:
                    idx = idx[:need]
                    proposals += int(idx[-1]) + 1
                else:
                    proposals += batch_size
                chunks.append(np.column_stack((lf[idx], lp[idx])))
                n_acc += idx.size
                if n_acc >= target_accepted:
                    break
                if proposals >= max_proposals and n_acc / proposals < min_acceptance:
                    raise SamplerStarvationError(params.V, n_acc / proposals, proposals)
            logger.debug(
                "V=%g: %d/%d accepted after %d proposals", params.V, n_acc, target_accepted, proposals
            )
    finally:
        if executor is not None:
            executor.shutdown()

    return FermiSampleSet(
        points=np.concatenate(chunks, axis=0),
        prior=prior,
        V=params.V,
        seed=seed,
        proposal_count=proposals,
        accepted_count=n_acc,
        algorithm=algorithm,
    )


def summarize(samples: FermiSampleSet) -> FermiSummary:
    """Posterior means (with standard errors) and sds of log10 p and log10 f."""
    n = samples.accepted_count
    lp, lf = samples.log10_p, samples.log10_f
    sd_p = float(np.std(lp, ddof=1)) if n > 1 else 0.0
    sd_f = float(np.std(lf, ddof=1)) if n > 1 else 0.0
    return FermiSummary(
        mean10_p=compensated_mean(lp),
        mean10_p_se=sd_p / math.sqrt(n),
        sd10_p=sd_p,
        mean10_f=compensated_mean(lf),
        mean10_f_se=sd_f / math.sqrt(n),
        sd10_f=sd_f,
        acceptance_rate=samples.acceptance_rate,
    )


###############################################################################


def _factor_terms(prior: FermiPrior, factor: FactorSpec) -> tuple[float, float, float]:
    """Parent prior mean, regression coefficient and conditional variance."""
    if factor.parent == "p":
        parent_mean, parent_sd = prior.mean10_p, prior.sd10_p
    elif factor.parent == "f":
        parent_mean, parent_sd = prior.mean10_f, prior.sd10_f
    else:
        raise ConfigurationError(f"factor parent must be 'p' or 'f', got {factor.parent!r}")
    if not 0 < factor.sd10 < parent_sd:
        raise ConfigurationError(
            f"factor sd10 {factor.sd10} must be in (0, {parent_sd}) for parent {factor.parent}"
        )
    c = factor.sd10**2 / parent_sd**2
    return parent_mean, c, factor.sd10**2 * (1 - c)


def prior_factor(factor: FactorSpec) -> Gaussian10:
    return Gaussian10(factor.mean10, factor.sd10)


def factor_posterior(
    prior: FermiPrior, factor: FactorSpec, samples: FermiSampleSet
) -> FactorPosterior:
    """
    Posterior of a sub-factor given posterior draws of its parent.

    Conditional on log10 of the parent being x, log10 of the factor is
    Gaussian with mean factor.mean10 + c*(x - parent prior mean) and
    variance factor.sd10^2 * (1 - c), where c = factor.sd10^2 / parent sd^2.
    mean_value averages the conditional lognormal means over the draws.
    """
    if samples.accepted_count < 1:
        raise DomainError("empty sample set")
    if samples.prior != prior:
        raise ConfigurationError("samples were drawn under a different prior")
    parent_mean, c, var_c = _factor_terms(prior, factor)
    x = samples.log10_p if factor.parent == "p" else samples.log10_f
    m = factor.mean10 + c * (x - parent_mean)
    values = 10.0**m * math.exp(var_c * LN10**2 / 2)
    n = values.size
    se = float(np.std(values, ddof=1)) / math.sqrt(n) if n > 1 else math.nan
    return FactorPosterior(
        mean10=compensated_mean(m),
        sd10=math.sqrt(var_c + c**2 * float(np.var(x))),
        mean_value=compensated_mean(values),
        mean_value_se=se,
    )


def factor_posterior_analytic(prior: FermiPrior, factor: FactorSpec) -> FactorPosterior:
    """Closed form of factor_posterior for V = 0 (posterior of the parent is Gaussian)."""
    check_prior(prior)
    parent_mean, c, var_c = _factor_terms(prior, factor)
    if factor.parent == "p":
        post_mean, post_sd = prior.shifted_mean10_p, prior.sd10_p
    else:
        post_mean, post_sd = prior.mean10_f, prior.sd10_f
    mean10 = factor.mean10 + c * (post_mean - parent_mean)
    sd10 = math.sqrt(var_c + c**2 * post_sd**2)
    return FactorPosterior(mean10, sd10, lognormal_mean(Gaussian10(mean10, sd10)), 0.0)


def posterior_interval(fp: FactorPosterior, coverage: Optional[float] = None) -> tuple[float, float]:
    """Central interval of the factor, treating its log10 as Gaussian."""
    coverage = DEFAULTS["fermi"]["coverage"] if coverage is None else coverage
    return central_interval(Gaussian10(fp.mean10, fp.sd10), coverage)


def span_log10(sd10: float, coverage: Optional[float] = None) -> float:
    """Width in decades of the central interval of a Gaussian10 with this sd."""
    coverage = DEFAULTS["fermi"]["coverage"] if coverage is None else coverage
    return 2 * std_normal_quantile(0.5 + coverage / 2) * sd10


###############################################################################


def posterior_grid(
    prior: FermiPrior,
    params: FermiParams,
    bins: int = 60,
    span: float = 4.0,
    oversample: int = 4,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Posterior mass per grid cell by direct evaluation of the density.

    The grid covers +-span sds of the shifted proposal in both directions.

    Returns
    -------
    tuple
        (log10_f edges, log10_p edges, mass of shape (bins, bins)), mass summing to 1.
    """
    check_prior(prior)
    _check_params(params)
    f_edges = np.linspace(
        prior.mean10_f - span * prior.sd10_f, prior.mean10_f + span * prior.sd10_f, bins + 1
    )
    p_edges = np.linspace(
        prior.shifted_mean10_p - span * prior.sd10_p,
        prior.shifted_mean10_p + span * prior.sd10_p,
        bins + 1,
    )
    # midpoints of an oversample x oversample sub-grid
    def _sub(edges):
        fine = np.linspace(edges[0], edges[-1], bins * oversample + 1)
        return (fine[:-1] + fine[1:]) / 2

    lf, lp = np.meshgrid(_sub(f_edges), _sub(p_edges), indexing="ij")
    zf = (lf - prior.mean10_f) / prior.sd10_f
    zp = (lp - prior.shifted_mean10_p) / prior.sd10_p
    with np.errstate(over="ignore"):
        dens = np.exp(-0.5 * (zf**2 + zp**2)) * np.exp(-params.V * 10.0 ** (lf + lp))
    mass = dens.reshape(bins, oversample, bins, oversample).sum(axis=(1, 3))
    return f_edges, p_edges, mass / mass.sum()


def grid_total_variation(
    samples: FermiSampleSet, grid: tuple[np.ndarray, np.ndarray, np.ndarray]
) -> float:
    """Total-variation distance between the sample histogram and the grid masses."""
    f_edges, p_edges, mass = grid
    hist, _, _ = np.histogram2d(samples.log10_f, samples.log10_p, bins=[f_edges, p_edges])
    hist = hist / samples.accepted_count
    return 0.5 * float(np.abs(hist - mass).sum())


###############################################################################


def emit_plot_points(
    samples: FermiSampleSet, include_prior: bool = True, prior_points: Optional[int] = None
) -> PlotData:
    """
    Plot data: posterior points, optionally points from the unmodified prior,
    and the intercept of the line log10 f + log10 p = -log10 V (None for V = 0).
    """
    prior_points = DEFAULTS["fermi"]["prior_points"] if prior_points is None else prior_points
    frames = [
        pl.DataFrame(
            {
                "series": ["posterior"] * samples.accepted_count,
                "log10_f": samples.log10_f,
                "log10_p": samples.log10_p,
            }
        )
    ]
    if include_prior and prior_points > 0:
        gen = RandomSource(samples.seed, samples.algorithm).substream(PRIOR_SUBSTREAM)
        z = gen.standard_normal((2, prior_points))
        pr = samples.prior
        frames.append(
            pl.DataFrame(
                {
                    "series": ["prior"] * prior_points,
                    "log10_f": pr.mean10_f + pr.sd10_f * z[1],
                    "log10_p": pr.mean10_p + pr.sd10_p * z[0],
                }
            )
        )
    intercept = -math.log10(samples.V) if samples.V > 0 else None
    return PlotData(pl.concat(frames), intercept)


def write_plot_csv(plot: PlotData, path: Union[str, Path]) -> Path:
    """Write plot data as CSV, the diagonal as a trailing 'line,intercept,<value>' row."""
    path = Path(path)
    text = plot.points.write_csv()
    if plot.intercept is not None:
        text += f"line,intercept,{plot.intercept!r}\n"
    with open(path, "w", encoding="utf-8") as fobj:
        fobj.write(text)
    return path
