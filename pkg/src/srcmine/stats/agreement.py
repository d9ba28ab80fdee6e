"""Cohen's kappa for two annotators.

Counts are integers, so observed and expected agreement are computed with
exact rational arithmetic and only converted to float at the end; worked
examples with terminating decimal answers come out exact.
"""

from collections import Counter
from fractions import Fraction

from srcmine.stats.results import AgreementResult


def cohen_kappa(a, b) -> AgreementResult:
    """Chance-corrected agreement between two equal-length decision lists."""
    if len(a) != len(b):
        raise ValueError("annotation lists must have equal length")
    n = len(a)
    if n == 0:
        raise ValueError("nothing to compare")
    po = Fraction(sum(1 for x, y in zip(a, b) if x == y), n)
    counts_a = Counter(a)
    counts_b = Counter(b)
    pe = sum(
        (Fraction(counts_a[c], n) * Fraction(counts_b.get(c, 0), n) for c in counts_a),
        Fraction(0),
    )
    if pe == 1:
        if po == 1:
            return AgreementResult(kappa=1.0, observed_agreement=1.0, expected_agreement=1.0)
        raise ValueError("degenerate marginals: expected agreement is 1 but observed is not")
    kappa = (po - pe) / (1 - pe)
    return AgreementResult(
        kappa=float(kappa),
        observed_agreement=float(po),
        expected_agreement=float(pe),
    )
