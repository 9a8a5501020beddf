"""Cards, decks, and the deterministic shuffle used by digital-deck play.

Text codes are two characters: rank in ``23456789TJQKA`` followed by a
lowercase suit in ``cdhs`` (e.g. ``"As"``, ``"Td"``).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

RANK_CHARS = "23456789TJQKA"
SUITS = "cdhs"


@dataclass(frozen=True, order=True)
class Card:
    rank: int  # 2..14, 14 = Ace
    suit: str  # one of "cdhs"

    def __post_init__(self) -> None:
        if not 2 <= self.rank <= 14:
            raise ValueError(f"rank out of range: {self.rank}")
        if self.suit not in SUITS:
            raise ValueError(f"unknown suit: {self.suit!r}")

    @property
    def code(self) -> str:
        return RANK_CHARS[self.rank - 2] + self.suit

    def __str__(self) -> str:
        return self.code


def card(code: str) -> Card:
    """Parse a single text code like ``"As"``."""
    if len(code) != 2 or code[0] not in RANK_CHARS or code[1] not in SUITS:
        raise ValueError(f"bad card code: {code!r}")
    return Card(RANK_CHARS.index(code[0]) + 2, code[1])


def cards(codes: str) -> tuple[Card, ...]:
    """Parse a space-separated run of codes, e.g. ``"As Td 2c"``."""
    return tuple(card(c) for c in codes.split())


def fresh_deck() -> tuple[Card, ...]:
    """All 52 cards in a fixed reference order (suits c,d,h,s; ranks 2..A)."""
    return tuple(Card(rank, suit) for suit in SUITS for rank in range(2, 15))


def shuffled_deck(seed: int | str, hand_number: int) -> tuple[Card, ...]:
    """Fisher-Yates shuffle of a fresh deck, keyed by match seed and hand number.

    The string-form seed makes the stream stable across interpreter runs, so
    any hand can be re-dealt exactly from its match config.
    """
    rng = random.Random(f"{seed}:{hand_number}")
    deck = list(fresh_deck())
    rng.shuffle(deck)
    return tuple(deck)
