"""Result records shared by the statistical tests."""

from dataclasses import dataclass, field


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    method: str  # dagostino_pearson | kruskal_wallis | mann_whitney_u | spearman
    reject_at_5pct: bool
    notes: str = ""

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError(f"p_value outside [0, 1]: {self.p_value}")
        if self.reject_at_5pct != (self.p_value < 0.05):
            raise ValueError("reject_at_5pct inconsistent with p_value")


def make_result(statistic, p_value, method, notes=""):
    """Build a TestResult, deriving the 5% rejection flag from p."""
    return TestResult(
        statistic=float(statistic),
        p_value=float(p_value),
        method=method,
        reject_at_5pct=float(p_value) < 0.05,
        notes=notes,
    )


@dataclass(frozen=True)
class AgreementResult:
    kappa: float
    observed_agreement: float
    expected_agreement: float


@dataclass(frozen=True)
class SampleGroup:
    group_id: str
    values: list = field(default_factory=list)
