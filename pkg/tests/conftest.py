import numpy as np
import pytest


def ks_statistic(samples: np.ndarray, cdf_values: np.ndarray) -> float:
    """Two-sided Kolmogorov-Smirnov distance from sorted-sample CDF values."""
    n = cdf_values.size
    hi = np.arange(1, n + 1) / n
    lo = np.arange(0, n) / n
    return float(max(np.max(hi - cdf_values), np.max(cdf_values - lo)))


def ks_critical(n: int, alpha: float = 0.01) -> float:
    """Asymptotic two-sided KS critical value for an i.i.d. sample of size n."""
    return float(np.sqrt(-0.5 * np.log(alpha / 2.0)) / np.sqrt(n))


def integrated_autocorrelation_time(series: np.ndarray, max_lag: int = 500) -> float:
    """Initial-positive-sequence estimate of the autocorrelation time."""
    x = series - series.mean()
    n = x.size
    var = float(x.var())
    tau = 1.0
    for lag in range(1, max_lag):
        rho = float(np.dot(x[:-lag], x[lag:]) / ((n - lag) * var))
        if rho <= 0.0:
            break
        tau += 2.0 * rho
    return tau


@pytest.fixture(scope="session")
def mp():
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 40
    return mpmath
