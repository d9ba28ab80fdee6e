"""Order statistics used by the report tables."""


def median(values):
    """Middle element of the sorted values; mean of the middle two when even."""
    if not values:
        raise ValueError("median of empty sequence")
    ordered = sorted(values)
    n = len(ordered)
    mid = n // 2
    if n % 2:
        return ordered[mid]
    return (ordered[mid - 1] + ordered[mid]) / 2.0
