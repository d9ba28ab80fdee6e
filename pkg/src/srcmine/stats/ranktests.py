"""Rank-based tests: Kruskal-Wallis, Mann-Whitney U, Spearman's rho.

All three assign midranks to ties.  Conventions (two-sided p values,
continuity correction in the Mann-Whitney normal approximation, the d^2
form of Spearman's rho as the primary statistic) are recorded in each
result's notes field so downstream comparisons know what was computed.
"""

import itertools
import math
from collections import Counter
from functools import lru_cache

from srcmine.stats.results import make_result
from srcmine.stats.special import chi2_sf, normal_sf, t_sf

# exact Mann-Whitney enumeration is used while C(n1+n2, n1) stays below this
EXACT_COMBINATION_BOUND = 25_000


def midranks(values):
    """1-based ranks with ties given the mean of their rank positions."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        rank = (i + j + 2) / 2.0  # average of 1-based positions i+1 .. j+1
        for k in range(i, j + 1):
            ranks[order[k]] = rank
        i = j + 1
    return ranks


def tie_correction(all_values):
    """1 - sum(t^3 - t) / (N^3 - N) over tie groups; 0 when all values equal."""
    n = len(all_values)
    if n < 2:
        return 1.0
    tie_sum = sum(t**3 - t for t in Counter(all_values).values())
    return 1.0 - tie_sum / (n**3 - n)


def kruskal_wallis(groups):
    """Kruskal-Wallis H test across SampleGroups, chi-square approximation."""
    if len(groups) < 2:
        raise ValueError("need at least 2 groups")
    sizes = [len(g.values) for g in groups]
    if any(s == 0 for s in sizes):
        raise ValueError("every group must be non-empty")
    pooled = [v for g in groups for v in g.values]
    n = len(pooled)
    if n < 5:
        raise ValueError("need at least 5 observations in total")
    correction = tie_correction(pooled)
    if correction == 0.0:
        raise ValueError("all values identical: H undefined")
    ranks = midranks(pooled)
    h = 0.0
    offset = 0
    for size in sizes:
        rank_sum = sum(ranks[offset:offset + size])
        h += rank_sum * rank_sum / size
        offset += size
    h = (12.0 / (n * (n + 1))) * h - 3.0 * (n + 1)
    h /= correction
    h = max(h, 0.0)  # guard tiny negative from rounding
    df = len(groups) - 1
    p = chi2_sf(h, df)
    notes = f"chi-square approximation, df={df}, tie correction {correction:.6g}"
    return make_result(h, p, "kruskal_wallis", notes)


def _u_statistic(a, b):
    # U_a = #(pairs with a > b), counting ties as half
    ranks = midranks(list(a) + list(b))
    rank_sum_a = sum(ranks[: len(a)])
    return rank_sum_a - len(a) * (len(a) + 1) / 2.0


@lru_cache(maxsize=256)
def _rank_sum_distribution(n1, n2):
    """Counts of rank sums over all size-n1 subsets of ranks {1..n1+n2}.

    Returned as a tuple indexed by sum; built with a subset-sum table.
    """
    n = n1 + n2
    max_sum = n * (n + 1) // 2
    ways = [[0] * (max_sum + 1) for _ in range(n1 + 1)]
    ways[0][0] = 1
    for rank in range(1, n + 1):
        for k in range(min(rank, n1), 0, -1):
            row_k, row_km1 = ways[k], ways[k - 1]
            for s in range(max_sum, rank - 1, -1):
                if row_km1[s - rank]:
                    row_k[s] += row_km1[s - rank]
    return tuple(ways[n1])


def _exact_two_sided_p(a, b):
    """P(|U - n1*n2/2| >= observed) over all rank placements (tie-free)."""
    n1, n2 = len(a), len(b)
    u_obs = _u_statistic(a, b)
    mean = n1 * n2 / 2.0
    dev = abs(u_obs - mean)
    hits = 0
    total = 0
    for s, count in enumerate(_rank_sum_distribution(n1, n2)):
        if not count:
            continue
        total += count
        u = s - n1 * (n1 + 1) / 2.0
        if abs(u - mean) >= dev:
            hits += count
    return hits / total


def exact_two_sided_p_bruteforce(a, b):
    """Independent oracle: enumerate every C(N, n1) assignment directly."""
    n1, n2 = len(a), len(b)
    n = n1 + n2
    u_obs = _u_statistic(a, b)
    mean = n1 * n2 / 2.0
    dev = abs(u_obs - mean)
    hits = 0
    total = 0
    for combo in itertools.combinations(range(1, n + 1), n1):
        total += 1
        u = sum(combo) - n1 * (n1 + 1) / 2.0
        if abs(u - mean) >= dev:
            hits += 1
    return hits / total


def mann_whitney_u(a, b, exact_bound=EXACT_COMBINATION_BOUND):
    """Two-sided Mann-Whitney U test.

    Uses exact enumeration for small tie-free samples, otherwise the normal
    approximation with tie-corrected variance and continuity correction.
    """
    if not a or not b:
        raise ValueError("both samples must be non-empty")
    pooled = list(a) + list(b)
    correction = tie_correction(pooled)
    if correction == 0.0:
        raise ValueError("all values identical: U test undefined")
    n1, n2 = len(a), len(b)
    u1 = _u_statistic(a, b)
    has_ties = len(set(pooled)) != len(pooled)
    if not has_ties and math.comb(n1 + n2, n1) <= exact_bound:
        p = _exact_two_sided_p(a, b)
        notes = "exact enumeration over rank arrangements"
    else:
        mean = n1 * n2 / 2.0
        sd = math.sqrt(correction * n1 * n2 * (n1 + n2 + 1) / 12.0)
        # continuity correction: shrink the deviation by 0.5
        z = (abs(u1 - mean) - 0.5) / sd
        z = max(z, 0.0)
        p = min(1.0, 2.0 * normal_sf(z))
        notes = (
            f"normal approximation, continuity correction, tie correction {correction:.6g}"
        )
    return make_result(u1, p, "mann_whitney_u", notes)


def spearman_rho(x, y):
    """Spearman rank correlation with midranks, d^2 form, t-approximation p.

    The d^2 statistic is primary; Pearson on ranks is recorded in notes
    (the two differ once ties are present).
    """
    if len(x) != len(y):
        raise ValueError("samples must have equal length")
    n = len(x)
    if n < 3:
        raise ValueError("need at least 3 paired observations")
    if len(set(x)) == 1 or len(set(y)) == 1:
        raise ValueError("constant input: rho undefined")
    rx = midranks(list(x))
    ry = midranks(list(y))
    d2 = sum((a - b) ** 2 for a, b in zip(rx, ry))
    rho = 1.0 - 6.0 * d2 / (n * (n * n - 1))
    pearson = _pearson(rx, ry)
    if abs(rho) >= 1.0:
        p = 0.0
    else:
        t = rho * math.sqrt((n - 2) / (1.0 - rho * rho))
        p = 2.0 * t_sf(abs(t), n - 2)
        p = min(1.0, p)
    notes = f"d^2 form on midranks; Pearson-on-ranks {pearson:.12g}; t-approximation df={n - 2}"
    return make_result(rho, p, "spearman", notes)


def _pearson(x, y):
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    return sxy / math.sqrt(sxx * syy)
