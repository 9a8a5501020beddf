"""Total ordering of poker hands for showdowns.

``evaluate7`` classifies a 7-card hand directly (flush scan, rank
multiplicities, straight search) instead of enumerating five-card subsets;
the test suite checks it against a naive best-of-21-subsets oracle.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .cards import Card


class BadInput(ValueError):
    """Wrong card count or duplicate cards."""


class HandCategory(enum.IntEnum):
    HIGH_CARD = 0
    PAIR = 1
    TWO_PAIR = 2
    TRIPS = 3
    STRAIGHT = 4
    FLUSH = 5
    FULL_HOUSE = 6
    QUADS = 7
    STRAIGHT_FLUSH = 8


@dataclass(frozen=True, order=True)
class HandRank:
    """Strength of the best five-card hand; compares lexicographically.

    ``tiebreak`` holds the significant rank values, most significant first.
    The ace plays low only in the 5-high straight (tiebreak ``(5,)``).
    """

    category: HandCategory
    tiebreak: tuple[int, ...]


def _straight_high(ranks: set[int]) -> int | None:
    for high in range(14, 5, -1):
        if all(high - i in ranks for i in range(5)):
            return high
    if {14, 5, 4, 3, 2} <= ranks:
        return 5
    return None


def _require_distinct(cs: Iterable[Card], count: int) -> tuple[Card, ...]:
    cs = tuple(cs)
    if len(cs) != count:
        raise BadInput(f"expected {count} cards, got {len(cs)}")
    if len(set(cs)) != count:
        raise BadInput("duplicate cards")
    return cs


def _classify(cs: tuple[Card, ...]) -> HandRank:
    # Single pass over 5..7 cards; the best five determine the rank.
    ranks = sorted((c.rank for c in cs), reverse=True)

    by_suit: dict[str, list[int]] = {}
    for c in cs:
        by_suit.setdefault(c.suit, []).append(c.rank)
    flush_ranks: list[int] | None = None
    for suit_ranks in by_suit.values():
        if len(suit_ranks) >= 5:
            flush_ranks = sorted(suit_ranks, reverse=True)
            break

    if flush_ranks is not None:
        sf_high = _straight_high(set(flush_ranks))
        if sf_high is not None:
            return HandRank(HandCategory.STRAIGHT_FLUSH, (sf_high,))

    counts = Counter(ranks)
    quads = [r for r, n in counts.items() if n == 4]
    trips = sorted((r for r, n in counts.items() if n == 3), reverse=True)
    pairs = sorted((r for r, n in counts.items() if n == 2), reverse=True)

    if quads:
        q = quads[0]
        kicker = max(r for r in ranks if r != q)
        return HandRank(HandCategory.QUADS, (q, kicker))

    if trips and (len(trips) > 1 or pairs):
        # Second trips rank can fill the pair slot of a full house.
        pair_rank = max(trips[1:] + pairs)
        return HandRank(HandCategory.FULL_HOUSE, (trips[0], pair_rank))

    if flush_ranks is not None:
        return HandRank(HandCategory.FLUSH, tuple(flush_ranks[:5]))

    straight_high = _straight_high(set(ranks))
    if straight_high is not None:
        return HandRank(HandCategory.STRAIGHT, (straight_high,))

    if trips:
        t = trips[0]
        kickers = [r for r in ranks if r != t][:2]
        return HandRank(HandCategory.TRIPS, (t, *kickers))

    if len(pairs) >= 2:
        # With seven cards a third pair can still supply the kicker.
        high_pair, low_pair = pairs[0], pairs[1]
        kicker = max(r for r in ranks if r != high_pair and r != low_pair)
        return HandRank(HandCategory.TWO_PAIR, (high_pair, low_pair, kicker))

    if pairs:
        p = pairs[0]
        kickers = [r for r in ranks if r != p][:3]
        return HandRank(HandCategory.PAIR, (p, *kickers))

    return HandRank(HandCategory.HIGH_CARD, tuple(ranks[:5]))


def evaluate5(cs: Iterable[Card]) -> HandRank:
    """Rank exactly five distinct cards."""
    return _classify(_require_distinct(cs, 5))


def evaluate7(cs: Iterable[Card]) -> HandRank:
    """Best five-card rank achievable from seven distinct cards."""
    return _classify(_require_distinct(cs, 7))


def showdown(
    board: Iterable[Card], hole_a: Iterable[Card], hole_b: Iterable[Card]
) -> int | None:
    """Compare two players' best hands over a full board.

    Returns 0 if ``hole_a`` wins, 1 if ``hole_b`` wins, None on a tie.
    """
    board = tuple(board)
    hole_a = tuple(hole_a)
    hole_b = tuple(hole_b)
    if len(board) != 5 or len(hole_a) != 2 or len(hole_b) != 2:
        raise BadInput("showdown needs a 5-card board and two 2-card holes")
    if len(set(board + hole_a + hole_b)) != 9:
        raise BadInput("duplicate cards")
    rank_a = evaluate7(board + hole_a)
    rank_b = evaluate7(board + hole_b)
    if rank_a > rank_b:
        return 0
    if rank_b > rank_a:
        return 1
    return None
