"""Weighted log odds ratio with an informative Dirichlet prior.

Contrasts term usage between two groups.  The pooled corpus supplies an
empirical prior: term w with pooled count y_w out of n total tokens gets
prior mass alpha_w = alpha0 * y_w / n.  Each group's smoothed log odds is

    omega_g = (y_gw + alpha_w) / (n_g + alpha0 - y_gw - alpha_w)

and the reported effect is delta_w = ln omega_a - ln omega_b with variance
1 / (y_aw + alpha_w) + 1 / (y_bw + alpha_w) and z = delta / sqrt(variance).
Swapping the two groups negates delta and z exactly, bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

from .errors import DegenerateDataError
from .features import FrequencyTable

__all__ = ["LogOddsEntry", "LogOddsTable", "weighted_log_odds", "top_k_terms"]


@dataclass(frozen=True)
class LogOddsEntry:
    """Weighted log odds of one term between the two groups."""

    term: str
    count_a: int
    count_b: int
    alpha: float
    delta: float
    variance: float
    z: float


@dataclass(eq=False)
class LogOddsTable:
    """Term-sorted weighted log odds for a two-group frequency table.

    Positive z favors ``groups[0]``, negative z favors ``groups[1]``.
    """

    order: int
    groups: tuple[str, str]
    alpha0: float
    entries: list[LogOddsEntry]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[LogOddsEntry]:
        return iter(self.entries)

    def entry(self, term: str) -> LogOddsEntry:
        for item in self.entries:
            if item.term == term:
                return item
        raise KeyError(term)

    def by_z(self, descending: bool = True) -> list[LogOddsEntry]:
        """Entries ordered by z (ties broken by term)."""
        if descending:
            return sorted(self.entries, key=lambda e: (-e.z, e.term))
        return sorted(self.entries, key=lambda e: (e.z, e.term))


def weighted_log_odds(
    table: FrequencyTable, alpha0: float = 1.0, min_count: int = 0
) -> LogOddsTable:
    """Weighted log odds of every pooled-vocabulary term.

    ``alpha0`` scales the total prior mass (larger values shrink every z
    toward zero); ``min_count`` restricts the reported vocabulary to terms
    with at least that pooled count without changing the group totals or
    the prior, since discarded tokens still occurred.
    """
    if alpha0 <= 0.0:
        raise ValueError(f"alpha0 must be positive, got {alpha0}")
    if min_count < 0:
        raise ValueError(f"min_count must be >= 0, got {min_count}")
    total_a, total_b = table.group_totals
    pooled_total = total_a + total_b
    if pooled_total == 0:
        raise DegenerateDataError("frequency table has no tokens")
    entries: list[LogOddsEntry] = []
    for term in table.vocabulary:
        count_a, count_b = table.counts[term]
        pooled = count_a + count_b
        if pooled < min_count:
            continue
        alpha_w = alpha0 * pooled / pooled_total
        num_a = count_a + alpha_w
        den_a = total_a + alpha0 - count_a - alpha_w
        num_b = count_b + alpha_w
        den_b = total_b + alpha0 - count_b - alpha_w
        if den_a <= 0.0 or den_b <= 0.0:
            raise DegenerateDataError(
                f"smoothed odds undefined for term {term!r}: a group has no "
                "tokens outside this term"
            )
        # Grouped per side so that swapping the groups negates delta exactly.
        side_a = math.log(num_a) - math.log(den_a)
        side_b = math.log(num_b) - math.log(den_b)
        delta = side_a - side_b
        variance = 1.0 / num_a + 1.0 / num_b
        z = delta / math.sqrt(variance)
        entries.append(
            LogOddsEntry(
                term=term,
                count_a=count_a,
                count_b=count_b,
                alpha=alpha_w,
                delta=delta,
                variance=variance,
                z=z,
            )
        )
    return LogOddsTable(
        order=table.order, groups=table.groups, alpha0=alpha0, entries=entries
    )


def top_k_terms(table: LogOddsTable, k: int, group: str) -> list[str]:
    """The k terms most associated with one group (largest |z| on its side).

    Ties break lexicographically; fewer than k entries returns them all.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if group not in table.groups:
        raise ValueError(f"group {group!r} not in {table.groups}")
    ordered = table.by_z(descending=group == table.groups[0])
    return [entry.term for entry in ordered[:k]]
