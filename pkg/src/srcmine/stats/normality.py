"""D'Agostino-Pearson K^2 omnibus normality test.

K^2 = Z(skewness)^2 + Z(kurtosis)^2 with the standard transformed-moment
normalizations (D'Agostino 1970 for skewness, Anscombe & Glynn 1983 for
kurtosis); p from chi-square with 2 degrees of freedom.
"""

import math

from srcmine.stats.results import make_result
from srcmine.stats.special import chi2_sf

MIN_SAMPLE_SIZE = 20  # documented minimum for the K^2 approximation


def _moments(sample):
    n = len(sample)
    mean = sum(sample) / n
    m2 = sum((v - mean) ** 2 for v in sample) / n
    m3 = sum((v - mean) ** 3 for v in sample) / n
    m4 = sum((v - mean) ** 4 for v in sample) / n
    return m2, m3, m4


def skewness_z(sample):
    """Transformed sample skewness, approximately standard normal under H0."""
    n = len(sample)
    m2, m3, _ = _moments(sample)
    b1 = m3 / m2**1.5
    y = b1 * math.sqrt((n + 1) * (n + 3) / (6.0 * (n - 2)))
    beta2 = 3.0 * (n * n + 27 * n - 70) * (n + 1) * (n + 3) / (
        (n - 2) * (n + 5) * (n + 7) * (n + 9)
    )
    w2 = -1.0 + math.sqrt(2.0 * (beta2 - 1.0))
    delta = 1.0 / math.sqrt(0.5 * math.log(w2))
    alpha = math.sqrt(2.0 / (w2 - 1.0))
    y = y / alpha
    return delta * math.log(y + math.sqrt(y * y + 1.0))


def kurtosis_z(sample):
    """Transformed sample kurtosis, approximately standard normal under H0."""
    n = len(sample)
    m2, _, m4 = _moments(sample)
    b2 = m4 / (m2 * m2)
    mean_b2 = 3.0 * (n - 1) / (n + 1)
    var_b2 = 24.0 * n * (n - 2) * (n - 3) / ((n + 1) ** 2 * (n + 3) * (n + 5))
    x = (b2 - mean_b2) / math.sqrt(var_b2)
    sqrt_beta1 = (
        6.0 * (n * n - 5 * n + 2) / ((n + 7) * (n + 9))
        * math.sqrt(6.0 * (n + 3) * (n + 5) / (n * (n - 2) * (n - 3)))
    )
    a = 6.0 + 8.0 / sqrt_beta1 * (2.0 / sqrt_beta1 + math.sqrt(1.0 + 4.0 / sqrt_beta1**2))
    term = (1.0 - 2.0 / a) / (1.0 + x * math.sqrt(2.0 / (a - 4.0)))
    term = math.copysign(abs(term) ** (1.0 / 3.0), term)
    return ((1.0 - 2.0 / (9.0 * a)) - term) / math.sqrt(2.0 / (9.0 * a))


def dagostino_pearson(sample):
    """Omnibus normality test; requires n >= 20 and non-constant input."""
    n = len(sample)
    if n < MIN_SAMPLE_SIZE:
        raise ValueError(f"need at least {MIN_SAMPLE_SIZE} observations, got {n}")
    m2, _, _ = _moments(sample)
    if m2 == 0.0:
        raise ValueError("zero variance: normality test undefined")
    zs = skewness_z(sample)
    zk = kurtosis_z(sample)
    k2 = zs * zs + zk * zk
    p = chi2_sf(k2, 2)
    notes = f"Z_skew={zs:.6g}, Z_kurt={zk:.6g}"
    return make_result(k2, p, "dagostino_pearson", notes)
