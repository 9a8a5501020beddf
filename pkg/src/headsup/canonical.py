"""Canonical JSON forms and state hashes.

Every hash is SHA-256 over the compact UTF-8 JSON encoding with a fixed key
order (insertion order below, never alphabetized). Three views exist:

  * ``full``   — everything, including hole cards and the remaining deck;
                 host-side only, used for replay-determinism checks.
  * seat 0/1   — that seat's hole cards, opponent's hidden until a showdown
                 settlement reveals them; no deck.
  * ``public`` — no private zones at all.

The replicated state hash always covers the public view of match + hand, so
host and both replicas can compute and compare the same digest.

Hand document key order: hand_number, dealer_seat, small_blind, big_blind,
deck_mode, starting_stacks, stacks, committed, pot, street, to_act,
last_raise_increment, action_history, hand_history, terminal, board,
annotations, settlement, then (non-public views) hole_cards, deck_remaining.

Match document key order: starting_stack, small_blind, big_blind, deck_mode,
stacks, hand_number, dealer_seat, then (full view only) rng_seed.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any

from .cards import card
from .engine import (
    Action,
    ActionKind,
    DeckMode,
    EndReason,
    GameAnnotations,
    HandState,
    MatchState,
    Settlement,
    Street,
    Terminal,
)

FULL = "full"
PUBLIC = "public"

View = Any  # "full" | "public" | 0 | 1


def action_doc(action: Action) -> dict:
    return {"kind": action.kind.value, "amount": action.amount}


def action_from_doc(doc: dict) -> Action:
    return Action(ActionKind(doc["kind"]), doc["amount"])


def terminal_doc(terminal: Terminal | None) -> dict | None:
    if terminal is None:
        return None
    doc: dict = {"kind": terminal.kind}
    if terminal.is_end_hand:
        doc["reason"] = terminal.reason.value
        doc["fold_winner"] = terminal.fold_winner
    return doc


def terminal_from_doc(doc: dict | None) -> Terminal | None:
    if doc is None:
        return None
    if doc["kind"] == "advance":
        return Terminal.advance()
    winner = doc.get("fold_winner")
    return Terminal(
        "end_hand",
        EndReason(doc["reason"]),
        winner,
    )


def settlement_doc(settlement: Settlement | None) -> dict | None:
    if settlement is None:
        return None
    return {
        "winner": settlement.winner,
        "reason": settlement.reason,
        "amount_per_seat": list(settlement.amount_per_seat),
        "net_delta": list(settlement.net_delta),
    }


def settlement_from_doc(doc: dict | None) -> Settlement | None:
    if doc is None:
        return None
    return Settlement(
        winner=doc["winner"],
        reason=doc["reason"],
        amount_per_seat=tuple(doc["amount_per_seat"]),
        net_delta=tuple(doc["net_delta"]),
    )


def annotations_doc(a: GameAnnotations) -> dict:
    return {
        "hands_played": a.hands_played,
        "current_round": a.current_round.name.lower(),
        "current_dealer": a.current_dealer,
        "previous_action": a.previous_action,
        "amount_to_call": a.amount_to_call,
        "waiting_for": a.waiting_for,
    }


def _hole_docs(hand: HandState, view: View) -> list[list[str] | None] | None:
    if hand.hole_cards is None:
        return None
    revealed = hand.settlement is not None and hand.settlement.reason == "showdown"
    docs: list[list[str] | None] = []
    for seat, hole in enumerate(hand.hole_cards):
        visible = view == FULL or view == seat or revealed
        if hole is None or not visible:
            docs.append(None)
        else:
            docs.append([c.code for c in hole])
    return docs


def hand_doc(hand: HandState, view: View = FULL) -> dict:
    doc = {
        "hand_number": hand.hand_number,
        "dealer_seat": hand.dealer_seat,
        "small_blind": hand.small_blind,
        "big_blind": hand.big_blind,
        "deck_mode": hand.deck_mode.value,
        "starting_stacks": list(hand.starting_stacks),
        "stacks": list(hand.stacks),
        "committed": list(hand.committed),
        "pot": hand.pot,
        "street": hand.street.name.lower(),
        "to_act": hand.to_act,
        "last_raise_increment": hand.last_raise_increment,
        "action_history": [
            [seat, action_doc(action)] for seat, action in hand.action_history
        ],
        "hand_history": [
            [street.name.lower(), seat, action_doc(action)]
            for street, seat, action in hand.hand_history
        ],
        "terminal": terminal_doc(hand.terminal),
        "board": [c.code for c in hand.board],
        "annotations": annotations_doc(hand.annotations),
        "settlement": settlement_doc(hand.settlement),
    }
    if view != PUBLIC:
        doc["hole_cards"] = _hole_docs(hand, view)
        doc["deck_remaining"] = (
            [c.code for c in hand.deck_remaining]
            if view == FULL and hand.deck_remaining is not None
            else None
        )
    return doc


def hand_from_doc(doc: dict) -> HandState:
    """Rebuild a HandState from a (possibly redacted) hand document."""
    holes_doc = doc.get("hole_cards")
    hole_cards = None
    if holes_doc is not None:
        hole_cards = tuple(
            tuple(card(code) for code in hole) if hole is not None else None
            for hole in holes_doc
        )
    deck_doc = doc.get("deck_remaining")
    return HandState(
        hand_number=doc["hand_number"],
        dealer_seat=doc["dealer_seat"],
        small_blind=doc["small_blind"],
        big_blind=doc["big_blind"],
        deck_mode=DeckMode(doc["deck_mode"]),
        starting_stacks=tuple(doc["starting_stacks"]),
        stacks=tuple(doc["stacks"]),
        committed=tuple(doc["committed"]),
        pot=doc["pot"],
        street=Street[doc["street"].upper()],
        to_act=doc["to_act"],
        last_raise_increment=doc["last_raise_increment"],
        action_history=tuple(
            (seat, action_from_doc(a)) for seat, a in doc["action_history"]
        ),
        hand_history=tuple(
            (Street[street.upper()], seat, action_from_doc(a))
            for street, seat, a in doc["hand_history"]
        ),
        terminal=terminal_from_doc(doc["terminal"]),
        board=tuple(card(code) for code in doc["board"]),
        hole_cards=hole_cards,
        deck_remaining=tuple(card(c) for c in deck_doc) if deck_doc else None,
        settlement=settlement_from_doc(doc["settlement"]),
    )


def match_doc(match: MatchState, view: View = FULL) -> dict:
    doc = {
        "starting_stack": match.config.starting_stack,
        "small_blind": match.config.small_blind,
        "big_blind": match.config.big_blind,
        "deck_mode": match.config.deck_mode.value,
        "stacks": list(match.stacks),
        "hand_number": match.hand_number,
        "dealer_seat": match.dealer_seat,
    }
    if view == FULL:
        doc["rng_seed"] = match.config.rng_seed
    return doc


def canonical_bytes(doc: Any) -> bytes:
    return json.dumps(doc, separators=(",", ":"), ensure_ascii=True).encode()


def digest(doc: Any) -> str:
    return hashlib.sha256(canonical_bytes(doc)).hexdigest()


def state_hash(match_public: dict | MatchState, hand: HandState | None) -> str:
    """The replicated hash: public projection of match + current hand."""
    if isinstance(match_public, MatchState):
        match_public = match_doc(match_public, PUBLIC)
    return digest(
        {
            "match": match_public,
            "hand": hand_doc(hand, PUBLIC) if hand is not None else None,
        }
    )


def full_hand_hash(hand: HandState) -> str:
    """Host-side digest over everything, private zones included."""
    return digest(hand_doc(hand, FULL))
