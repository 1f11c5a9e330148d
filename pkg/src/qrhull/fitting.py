"""Polynomial models of quality versus (normalized) log-bitrate.

Fits are least squares via an orthogonal decomposition (SVD-backed lstsq);
raw normal equations exist only as a test oracle.  RMSE is the
degree-of-freedom-adjusted sqrt(SSE / (n - p)) convention, which lets RMSE
rise with degree even when SSE falls.  Confidence bounds are the usual
t-based intervals from the residual-variance-scaled inverse Gram matrix.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np

from qrhull.errors import FitError, ValidationError
from qrhull.hulls import HullPoint

MAX_DEGREE = 8


@dataclass(frozen=True)
class PolyModel:
    """A fitted hull model: quality = poly(z), z = (ln rate - x_mean)/x_std."""

    codec: str
    metric: str
    degree: int
    coefficients: tuple[float, ...]  # highest degree first
    x_mean: float
    x_std: float
    rmse: float
    r_squared: float
    ci_95: tuple[tuple[float, float], ...]
    n_points: int
    log_base: float = math.e
    ln_rate_min: Optional[float] = None
    ln_rate_max: Optional[float] = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "PolyModel":
        doc = json.loads(text)
        doc["coefficients"] = tuple(doc["coefficients"])
        doc["ci_95"] = tuple(tuple(b) for b in doc["ci_95"])
        return cls(**doc)


@dataclass(frozen=True)
class DegreeSweepRow:
    degree: int
    rmse: Optional[float]
    r_squared: Optional[float]
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None


def normalize_abscissa(values: Sequence[float]) -> tuple[np.ndarray, float, float]:
    """Center and scale by sample mean / sample (n-1) standard deviation."""
    x = np.asarray(values, dtype=np.float64)
    if len(set(x.tolist())) < 2:
        raise FitError("normalization needs at least 2 distinct abscissa values")
    mean = float(x.mean())
    std = float(x.std(ddof=1))
    if std == 0.0:
        raise FitError("zero-variance abscissa cannot be normalized")
    return (x - mean) / std, mean, std


def _design(z: np.ndarray, degree: int) -> np.ndarray:
    return np.vander(z, degree + 1)  # columns z^d ... z^0


def polyfit(z: Sequence[float], y: Sequence[float], degree: int) -> np.ndarray:
    """Least-squares coefficients, highest degree first."""
    z = np.asarray(z, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if not 1 <= degree <= MAX_DEGREE:
        raise ValidationError(f"degree {degree} outside [1, {MAX_DEGREE}]")
    p = degree + 1
    if len(z) < p + 1:
        raise FitError(
            f"degree {degree} needs at least {p + 1} points "
            f"(one residual dof), got {len(z)}"
        )
    design = _design(z, degree)
    # rcond=-1: machine-precision rank cutoff; numpy's padded default wrongly
    # truncates degree-8 Vandermonde systems on unnormalized ln-bitrate
    coef, _, rank, _ = np.linalg.lstsq(design, y, rcond=-1)
    if rank < p:
        raise FitError(
            f"rank-deficient design (rank {rank} < {p}); abscissas too degenerate"
        )
    return coef


def goodness_of_fit(
    coefficients: Sequence[float], z: Sequence[float], y: Sequence[float]
) -> tuple[float, float]:
    """(RMSE, R^2) with RMSE = sqrt(SSE / (n - p))."""
    z = np.asarray(z, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    coefficients = np.asarray(coefficients, dtype=np.float64)
    n, p = len(y), len(coefficients)
    if n <= p:
        raise FitError(f"no residual degrees of freedom: n={n}, p={p}")
    residuals = y - np.polyval(coefficients, z)
    sse = float(residuals @ residuals)
    sst = float(np.sum((y - y.mean()) ** 2))
    rmse = math.sqrt(sse / (n - p))
    r_squared = 1.0 - sse / sst if sst > 0 else 1.0
    return rmse, r_squared


def confidence_bounds(
    coefficients: Sequence[float],
    z: Sequence[float],
    y: Sequence[float],
    level: float = 0.95,
) -> list[tuple[float, float]]:
    """Per-coefficient t-based confidence intervals."""
    from scipy import stats  # deferred: keeps bare-metrics imports light

    z = np.asarray(z, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    coefficients = np.asarray(coefficients, dtype=np.float64)
    n, p = len(y), len(coefficients)
    if n <= p:
        raise FitError(f"no residual degrees of freedom: n={n}, p={p}")
    design = _design(z, p - 1)
    gram = design.T @ design
    try:
        gram_inv = np.linalg.inv(gram)
    except np.linalg.LinAlgError as exc:
        raise FitError(f"singular design matrix: {exc}") from exc
    residuals = y - design @ coefficients
    s2 = float(residuals @ residuals) / (n - p)
    se = np.sqrt(np.maximum(s2 * np.diag(gram_inv), 0.0))
    t_mult = float(stats.t.ppf(0.5 + level / 2.0, n - p))
    return [(float(c - t_mult * s), float(c + t_mult * s)) for c, s in zip(coefficients, se)]


def degree_sweep(
    z: Sequence[float], y: Sequence[float], degrees: Sequence[int] = range(1, MAX_DEGREE + 1)
) -> list[DegreeSweepRow]:
    """Fit every degree, recording RMSE/R^2 or the failure per degree."""
    rows = []
    for d in degrees:
        try:
            coef = polyfit(z, y, d)
            rmse, r2 = goodness_of_fit(coef, z, y)
            rows.append(DegreeSweepRow(degree=d, rmse=rmse, r_squared=r2))
        except (FitError, ValidationError) as exc:
            rows.append(DegreeSweepRow(degree=d, rmse=None, r_squared=None, error=str(exc)))
    return rows


def select_degree(rows: Sequence[DegreeSweepRow]) -> int:
    """Lowest RMSE; ties broken by higher R^2, then lower degree."""
    valid = [r for r in rows if r.ok]
    if not valid:
        raise FitError("no valid degree in sweep")
    return min(valid, key=lambda r: (r.rmse, -r.r_squared, r.degree)).degree


def fit_hull_model(
    points: Sequence[HullPoint],
    degree: Optional[int] = None,
    normalize: bool = False,
    codec: str = "",
    metric: str = "psnr",
    log_base: float = math.e,
) -> PolyModel:
    """Fit one model to hull points; sweeps degrees 1-8 when degree is None."""
    x = np.array([p.log_bitrate for p in points], dtype=np.float64)
    y = np.array([p.quality for p in points], dtype=np.float64)
    if normalize:
        z, x_mean, x_std = normalize_abscissa(x)
    else:
        z, x_mean, x_std = x, 0.0, 1.0
    if degree is None:
        degree = select_degree(degree_sweep(z, y))
    coef = polyfit(z, y, degree)
    rmse, r2 = goodness_of_fit(coef, z, y)
    bounds = confidence_bounds(coef, z, y)
    return PolyModel(
        codec=codec,
        metric=metric,
        degree=degree,
        coefficients=tuple(float(c) for c in coef),
        x_mean=x_mean,
        x_std=x_std,
        rmse=rmse,
        r_squared=r2,
        ci_95=tuple(bounds),
        n_points=len(points),
        log_base=log_base,
        ln_rate_min=float(x.min()),
        ln_rate_max=float(x.max()),
    )


def evaluate_model(model: PolyModel, bitrate_kbps: float) -> float:
    """Predicted quality at a bitrate (kb/s), by Horner evaluation."""
    if bitrate_kbps <= 0:
        raise ValidationError(f"bitrate must be positive, got {bitrate_kbps}")
    x = math.log(bitrate_kbps) / math.log(model.log_base)
    z = (x - model.x_mean) / model.x_std
    acc = 0.0
    for c in model.coefficients:
        acc = acc * z + c
    return acc


def compare_codec_models(
    model_a: PolyModel, model_b: PolyModel, grid_size: int = 50
) -> dict:
    """Sample both models on a shared log-spaced bitrate grid."""
    if model_a.metric != model_b.metric:
        raise ValidationError(
            f"metric mismatch: {model_a.metric} vs {model_b.metric}"
        )
    lo = max(model_a.ln_rate_min or -math.inf, model_b.ln_rate_min or -math.inf)
    hi = min(model_a.ln_rate_max or math.inf, model_b.ln_rate_max or math.inf)
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
        raise ValidationError("models have disjoint or unknown fitted bitrate ranges")
    ln_grid = np.linspace(lo, hi, grid_size)
    rates = np.exp(ln_grid)
    qa = np.array([evaluate_model(model_a, r) for r in rates])
    qb = np.array([evaluate_model(model_b, r) for r in rates])
    delta = qa - qb
    if np.ptp(qa) == 0 or np.ptp(qb) == 0:
        corr = 1.0 if np.allclose(qa - qa.mean(), qb - qb.mean()) else 0.0
    else:
        corr = float(np.corrcoef(qa, qb)[0, 1])
    return {
        "codec_a": model_a.codec,
        "codec_b": model_b.codec,
        "metric": model_a.metric,
        "bitrate_kbps": rates.tolist(),
        "quality_a": qa.tolist(),
        "quality_b": qb.tolist(),
        "delta": delta.tolist(),
        "mean_abs_delta": float(np.mean(np.abs(delta))),
        "max_abs_delta": float(np.max(np.abs(delta))),
        "pearson_r": corr,
    }
