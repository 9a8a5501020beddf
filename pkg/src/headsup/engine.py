"""Heads-up no-limit hold'em rules engine.

Each betting round runs as a small deterministic automaton: from the street's
start state, every legal action either passes the turn or reaches one of two
terminals — the hand ends, or play advances to the next street. All
transitions are pure: operations return new frozen states and never touch
their inputs, so any state can be reproduced by replaying its history from
the post-blind state.

Conventions:
  * Seats are 0 and 1. The dealer posts the small blind and acts first
    pre-flop; the other seat (the opponent) posts the big blind and acts
    first on later streets. The dealer button alternates every hand.
  * Bet/Raise amounts are the actor's *total* wager for the current street,
    not the increment. All amounts are integer chip units.
  * Minimum open is one big blind; a raise must add at least the largest
    prior bet/raise increment of the street, except that an all-in for less
    is always allowed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .cards import Card, shuffled_deck
from .evaluator import HandRank, evaluate7


class EngineError(Exception):
    """Base class for rule violations and bad inputs."""


class InvalidConfig(EngineError):
    pass


class MatchOver(EngineError):
    pass


class TerminalState(EngineError):
    pass


class OutOfTurn(EngineError):
    pass


class IllegalAction(EngineError):
    pass


class IllegalAmount(EngineError):
    pass


class NotAdvanceable(EngineError):
    pass


class NotSettleable(EngineError):
    pass


class InvalidDeclaration(EngineError):
    pass


class Street(enum.IntEnum):
    PREFLOP = 0
    FLOP = 1
    TURN = 2
    RIVER = 3

    @property
    def board_size(self) -> int:
        return (0, 3, 4, 5)[self]


class DeckMode(str, enum.Enum):
    DIGITAL = "digital"
    PHYSICAL = "physical"


class ActionKind(str, enum.Enum):
    CHECK = "check"
    CALL = "call"
    BET = "bet"
    RAISE = "raise"
    FOLD = "fold"


CHOP = "chop"

_BOARD_DEALS = {Street.FLOP: 3, Street.TURN: 1, Street.RIVER: 1}


@dataclass(frozen=True)
class Action:
    """A concrete player action; amount is the street total for bet/raise."""

    kind: ActionKind
    amount: int | None = None

    def __post_init__(self) -> None:
        if self.kind in (ActionKind.BET, ActionKind.RAISE):
            if self.amount is None or self.amount < 0:
                raise IllegalAmount(f"{self.kind.value} needs a non-negative amount")
        elif self.amount is not None:
            raise IllegalAmount(f"{self.kind.value} carries no amount")


@dataclass(frozen=True)
class ActionSpec:
    """One legal choice, with inclusive total-wager bounds for bet/raise."""

    kind: ActionKind
    min_amount: int | None = None
    max_amount: int | None = None

    def allows(self, action: Action) -> bool:
        if action.kind != self.kind:
            return False
        if self.min_amount is None:
            return action.amount is None
        return (
            action.amount is not None
            and self.min_amount <= action.amount <= self.max_amount
        )


class EndReason(str, enum.Enum):
    FOLD = "fold"
    SHOWDOWN = "showdown"


@dataclass(frozen=True)
class Terminal:
    kind: str  # "advance" | "end_hand"
    reason: EndReason | None = None
    fold_winner: int | None = None

    @classmethod
    def advance(cls) -> "Terminal":
        return cls("advance")

    @classmethod
    def fold(cls, winner: int) -> "Terminal":
        return cls("end_hand", EndReason.FOLD, winner)

    @classmethod
    def showdown(cls) -> "Terminal":
        return cls("end_hand", EndReason.SHOWDOWN)

    @property
    def is_advance(self) -> bool:
        return self.kind == "advance"

    @property
    def is_end_hand(self) -> bool:
        return self.kind == "end_hand"


@dataclass(frozen=True)
class GameAnnotations:
    """The six-item message record shown beside the table."""

    hands_played: int
    current_round: Street
    current_dealer: int
    previous_action: str | None
    amount_to_call: int
    waiting_for: int | None


@dataclass(frozen=True)
class Settlement:
    """How one finished hand's chips went back to the seats.

    ``amount_per_seat`` is the gross amount returned to each seat (pot share
    plus any uncalled refund); it sums to pot + committed. ``net_delta`` is
    each stack's change over the whole hand and sums to zero.
    """

    winner: int | str  # seat id or CHOP
    reason: str  # "fold" | "showdown" | "declared"
    amount_per_seat: tuple[int, int]
    net_delta: tuple[int, int]


@dataclass(frozen=True)
class FoldWin:
    seat: int


@dataclass(frozen=True)
class ShowdownResult:
    winner: int | None  # None = tie
    ranks: tuple[HandRank, HandRank] | None = None


@dataclass(frozen=True)
class DeclaredWinner:
    winner: int | str  # seat id or CHOP


@dataclass(frozen=True)
class MatchConfig:
    starting_stack: int
    small_blind: int = 1
    big_blind: int = 2
    deck_mode: DeckMode = DeckMode.DIGITAL
    rng_seed: int = 0


@dataclass(frozen=True)
class MatchState:
    config: MatchConfig
    stacks: tuple[int, int]
    hand_number: int = 0  # hands started so far
    dealer_seat: int | None = None  # dealer of the most recent hand

    @property
    def over(self) -> bool:
        return min(self.stacks) == 0


@dataclass(frozen=True)
class HandState:
    """Complete state of one hand. Frozen; transitions return new values."""

    hand_number: int
    dealer_seat: int
    small_blind: int
    big_blind: int
    deck_mode: DeckMode
    starting_stacks: tuple[int, int]  # stacks before blinds were posted
    stacks: tuple[int, int]  # chips behind
    committed: tuple[int, int]  # wagered on the current street
    pot: int  # collected from completed streets
    street: Street
    to_act: int | None
    last_raise_increment: int
    action_history: tuple[tuple[int, Action], ...] = ()  # current street
    hand_history: tuple[tuple[Street, int, Action], ...] = ()  # whole hand
    terminal: Terminal | None = None
    board: tuple[Card, ...] = ()
    hole_cards: tuple[tuple[Card, Card] | None, tuple[Card, Card] | None] | None = None
    deck_remaining: tuple[Card, ...] | None = None
    settlement: Settlement | None = None

    @property
    def opponent_seat(self) -> int:
        return 1 - self.dealer_seat

    @property
    def chips_on_table(self) -> int:
        return sum(self.stacks) + sum(self.committed) + self.pot

    @property
    def annotations(self) -> GameAnnotations:
        if self.to_act is not None:
            deficit = max(self.committed) - self.committed[self.to_act]
            amount_to_call = min(deficit, self.stacks[self.to_act])
        else:
            amount_to_call = 0
        previous = None
        if self.action_history:
            previous = describe_action(*self.action_history[-1])
        return GameAnnotations(
            hands_played=self.hand_number,
            current_round=self.street,
            current_dealer=self.dealer_seat,
            previous_action=previous,
            amount_to_call=amount_to_call,
            waiting_for=self.to_act,
        )


@dataclass(frozen=True)
class StackReport:
    behind: tuple[int, int]
    committed: tuple[int, int]
    pot: int

    @property
    def total(self) -> int:
        return sum(self.behind) + sum(self.committed) + self.pot


def describe_action(seat: int, action: Action) -> str:
    if action.kind is ActionKind.BET:
        return f"seat {seat} bet {action.amount}"
    if action.kind is ActionKind.RAISE:
        return f"seat {seat} raised to {action.amount}"
    return f"seat {seat} {action.kind.value}{'ed' if action.kind is not ActionKind.RAISE else ''}"


def new_match(config: MatchConfig) -> MatchState:
    """Create a fresh two-seat match; deterministic given config.rng_seed."""
    if not 1 <= config.small_blind <= config.big_blind:
        raise InvalidConfig("need 1 <= small_blind <= big_blind")
    if config.big_blind > config.starting_stack:
        raise InvalidConfig("big blind cannot exceed the starting stack")
    if not isinstance(config.deck_mode, DeckMode):
        raise InvalidConfig(f"unknown deck mode {config.deck_mode!r}")
    return MatchState(config=config, stacks=(config.starting_stack,) * 2)


def _has_decision(stacks: Sequence[int], committed: Sequence[int], seat: int) -> bool:
    # A seat has a decision when it can still wager and either faces an
    # outstanding amount or could be wagered against; a lone forced check
    # (opponent all-in, nothing to call) is not a decision.
    other = 1 - seat
    if stacks[seat] == 0:
        return False
    if committed[other] - committed[seat] > 0:
        return True
    return stacks[other] > 0


def _street_end(street: Street) -> Terminal:
    return Terminal.showdown() if street is Street.RIVER else Terminal.advance()


def start_hand(match: MatchState) -> HandState:
    """Alternate the button, post blinds, deal (digital mode), set the turn.

    A blind larger than its seat's stack posts the whole stack. If neither
    seat is left with a decision the hand is born terminal (all-in run-out).
    """
    if match.over:
        raise MatchOver(f"stacks {match.stacks}: a seat is out of chips")
    config = match.config
    hand_number = match.hand_number + 1
    dealer = 0 if match.dealer_seat is None else 1 - match.dealer_seat
    opponent = 1 - dealer

    stacks = list(match.stacks)
    committed = [0, 0]
    committed[dealer] = min(config.small_blind, stacks[dealer])
    stacks[dealer] -= committed[dealer]
    committed[opponent] = min(config.big_blind, stacks[opponent])
    stacks[opponent] -= committed[opponent]

    board: tuple[Card, ...] = ()
    hole_cards = None
    deck_remaining = None
    if config.deck_mode is DeckMode.DIGITAL:
        deck = shuffled_deck(config.rng_seed, hand_number)
        # one card at a time, opponent (non-dealer) first
        holes = {opponent: (deck[0], deck[2]), dealer: (deck[1], deck[3])}
        hole_cards = (holes[0], holes[1])
        deck_remaining = deck[4:]

    to_act = None
    terminal = None
    for seat in (dealer, opponent):  # pre-flop order
        if _has_decision(stacks, committed, seat):
            to_act = seat
            break
    if to_act is None:
        terminal = Terminal.advance()

    return HandState(
        hand_number=hand_number,
        dealer_seat=dealer,
        small_blind=config.small_blind,
        big_blind=config.big_blind,
        deck_mode=config.deck_mode,
        starting_stacks=match.stacks,
        stacks=tuple(stacks),
        committed=tuple(committed),
        pot=0,
        street=Street.PREFLOP,
        to_act=to_act,
        last_raise_increment=config.big_blind,
        terminal=terminal,
        board=board,
        hole_cards=hole_cards,
        deck_remaining=deck_remaining,
    )


def legal_actions(hand: HandState) -> list[ActionSpec]:
    """The exact legal set for the acting player. Never empty."""
    if hand.terminal is not None or hand.to_act is None:
        raise TerminalState("betting on this street has ended")
    seat = hand.to_act
    other = 1 - seat
    level = max(hand.committed)
    mine = hand.committed[seat]
    all_in_total = hand.stacks[seat] + mine
    specs: list[ActionSpec] = []

    if level == mine:
        # nothing outstanding: check, or open the wagering
        specs.append(ActionSpec(ActionKind.CHECK))
        if hand.stacks[other] > 0:
            if hand.street is Street.PREFLOP:
                # the blind already counts as a bet, so opening is a raise
                kind = ActionKind.RAISE
                floor = level + hand.last_raise_increment
            else:
                kind = ActionKind.BET
                floor = hand.big_blind
            specs.append(
                ActionSpec(kind, min(floor, all_in_total), all_in_total)
            )
    else:
        specs.append(ActionSpec(ActionKind.FOLD))
        specs.append(ActionSpec(ActionKind.CALL))
        if hand.stacks[other] > 0 and all_in_total > level:
            floor = level + hand.last_raise_increment
            specs.append(
                ActionSpec(ActionKind.RAISE, min(floor, all_in_total), all_in_total)
            )
    return specs


def apply_action(hand: HandState, seat: int, action: Action) -> HandState:
    """Apply one action for the acting seat; returns the successor state."""
    if hand.terminal is not None:
        raise TerminalState("betting on this street has ended")
    if seat != hand.to_act:
        raise OutOfTurn(f"seat {seat} acted but it is seat {hand.to_act}'s turn")
    spec = next((s for s in legal_actions(hand) if s.kind == action.kind), None)
    if spec is None:
        raise IllegalAction(f"{action.kind.value} is not legal here")
    if not spec.allows(action):
        raise IllegalAmount(
            f"{action.kind.value} {action.amount} outside "
            f"[{spec.min_amount}, {spec.max_amount}]"
        )

    other = 1 - seat
    stacks = list(hand.stacks)
    committed = list(hand.committed)
    increment = hand.last_raise_increment
    to_act: int | None = None
    terminal: Terminal | None = None

    if action.kind is ActionKind.FOLD:
        terminal = Terminal.fold(winner=other)
    elif action.kind is ActionKind.CHECK:
        if hand.action_history:
            terminal = _street_end(hand.street)
        else:
            to_act = other
    elif action.kind is ActionKind.CALL:
        pay = min(max(committed) - committed[seat], stacks[seat])
        stacks[seat] -= pay
        committed[seat] += pay
        other_acted = any(s == other for s, _ in hand.action_history)
        big_blind_option = (
            hand.street is Street.PREFLOP
            and not other_acted
            and committed[other] == committed[seat]
            and stacks[other] > 0
            and stacks[seat] > 0
        )
        if big_blind_option:
            to_act = other
        else:
            terminal = _street_end(hand.street)
    else:  # bet or raise, to a street total
        total = action.amount
        raise_size = total - max(committed)
        stacks[seat] -= total - committed[seat]
        committed[seat] = total
        if raise_size >= increment:
            increment = raise_size  # a short all-in never resets the bar
        to_act = other

    entry = (seat, action)
    return replace(
        hand,
        stacks=tuple(stacks),
        committed=tuple(committed),
        to_act=to_act,
        terminal=terminal,
        last_raise_increment=increment,
        action_history=hand.action_history + (entry,),
        hand_history=hand.hand_history + ((hand.street, seat, action),),
    )


def advance_street(hand: HandState, dealt: Sequence[Card] | None = None) -> HandState:
    """Sweep the street's chips and move on; runs out the board if all-in.

    Uncalled excess is refunded before the sweep, so the pot only ever holds
    matched chips. In digital mode board cards come off the hand's own deck;
    a replica that only mirrors public data passes them in via ``dealt``.
    """
    if hand.terminal is None or not hand.terminal.is_advance:
        raise NotAdvanceable("street is still being bet")

    matched = min(hand.committed)
    stacks = (
        hand.stacks[0] + hand.committed[0] - matched,
        hand.stacks[1] + hand.committed[1] - matched,
    )
    pot = hand.pot + 2 * matched

    board = hand.board
    deck = hand.deck_remaining
    supplied = list(dealt) if dealt is not None else None
    street = hand.street
    to_act: int | None = None
    terminal: Terminal | None = None

    while True:
        street = Street(street + 1)
        if hand.deck_mode is DeckMode.DIGITAL:
            need = _BOARD_DEALS[street]
            if deck is not None:
                board += deck[:need]
                deck = deck[need:]
            elif supplied is not None:
                if len(supplied) < need:
                    raise NotAdvanceable("not enough dealt cards supplied")
                board += tuple(supplied[:need])
                del supplied[:need]
            else:
                raise NotAdvanceable("no deck and no dealt cards to advance with")
        if stacks[0] > 0 and stacks[1] > 0:
            to_act = hand.opponent_seat
            break
        if street is Street.RIVER:
            terminal = Terminal.showdown()  # all-in run-out ends here
            break

    return replace(
        hand,
        stacks=stacks,
        committed=(0, 0),
        pot=pot,
        street=street,
        board=board,
        deck_remaining=deck,
        to_act=to_act,
        terminal=terminal,
        action_history=(),
        last_raise_increment=hand.big_blind,
    )


def showdown_result(hand: HandState) -> ShowdownResult:
    """Resolve a digital-mode showdown from the board and hole cards."""
    terminal = hand.terminal
    if terminal is None or not terminal.is_end_hand or terminal.reason is not EndReason.SHOWDOWN:
        raise NotSettleable("hand is not at showdown")
    if hand.deck_mode is not DeckMode.DIGITAL or hand.hole_cards is None:
        raise NotSettleable("physical-deck showdowns need a declared winner")
    if None in hand.hole_cards:
        raise NotSettleable("hole cards unknown on this side")
    ranks = (
        evaluate7(hand.board + hand.hole_cards[0]),
        evaluate7(hand.board + hand.hole_cards[1]),
    )
    if ranks[0] > ranks[1]:
        winner = 0
    elif ranks[1] > ranks[0]:
        winner = 1
    else:
        winner = None
    return ShowdownResult(winner=winner, ranks=ranks)


def _build_settlement(hand: HandState, winner: int | str, reason: str) -> Settlement:
    matched = min(hand.committed)
    refunds = (hand.committed[0] - matched, hand.committed[1] - matched)
    contested = hand.pot + 2 * matched
    shares = [0, 0]
    if winner == CHOP:
        half, odd = divmod(contested, 2)
        shares[0] = shares[1] = half
        shares[hand.opponent_seat] += odd  # odd chip to the non-dealer seat
    else:
        shares[winner] = contested
    amounts = (refunds[0] + shares[0], refunds[1] + shares[1])
    final = (hand.stacks[0] + amounts[0], hand.stacks[1] + amounts[1])
    net = (
        final[0] - hand.starting_stacks[0],
        final[1] - hand.starting_stacks[1],
    )
    return Settlement(winner=winner, reason=reason, amount_per_seat=amounts, net_delta=net)


def apply_settlement(hand: HandState, settlement: Settlement) -> HandState:
    """Book a settlement into the stacks (also used replica-side)."""
    stacks = (
        hand.stacks[0] + settlement.amount_per_seat[0],
        hand.stacks[1] + settlement.amount_per_seat[1],
    )
    return replace(
        hand,
        stacks=stacks,
        committed=(0, 0),
        pot=0,
        to_act=None,
        settlement=settlement,
    )


def settle(
    hand: HandState, outcome: FoldWin | ShowdownResult | DeclaredWinner
) -> tuple[HandState, Settlement]:
    """Award the pot (and refund any uncalled excess) per the outcome."""
    terminal = hand.terminal
    if terminal is None or not terminal.is_end_hand:
        raise NotSettleable("hand has not ended")
    if hand.settlement is not None:
        raise NotSettleable("hand already settled")

    if isinstance(outcome, FoldWin):
        if terminal.reason is not EndReason.FOLD or outcome.seat != terminal.fold_winner:
            raise NotSettleable("fold outcome does not match the terminal")
        winner: int | str = outcome.seat
        reason = "fold"
    elif isinstance(outcome, ShowdownResult):
        if terminal.reason is not EndReason.SHOWDOWN:
            raise NotSettleable("showdown outcome without a showdown")
        winner = CHOP if outcome.winner is None else outcome.winner
        reason = "showdown"
    elif isinstance(outcome, DeclaredWinner):
        if terminal.reason is not EndReason.SHOWDOWN:
            raise NotSettleable("declaration outside a showdown")
        if outcome.winner not in (0, 1, CHOP):
            raise InvalidDeclaration(f"declared winner {outcome.winner!r} is not seated")
        winner = outcome.winner
        reason = "declared"
    else:
        raise NotSettleable(f"unknown outcome {outcome!r}")

    settlement = _build_settlement(hand, winner, reason)
    return apply_settlement(hand, settlement), settlement


def finish_hand(match: MatchState, hand: HandState) -> MatchState:
    """Fold a settled hand's result back into the match."""
    if hand.settlement is None:
        raise NotSettleable("hand is not settled")
    return replace(
        match,
        stacks=hand.stacks,
        hand_number=hand.hand_number,
        dealer_seat=hand.dealer_seat,
    )


def stack_report(hand: HandState) -> StackReport:
    """Live chip count: chips behind, committed this street, and the pot."""
    return StackReport(behind=hand.stacks, committed=hand.committed, pot=hand.pot)


def replay_hand(
    match: MatchState, history: Iterable[tuple[Street, int, Action]]
) -> HandState:
    """Re-deal from the match state and reapply a hand's recorded actions."""
    hand = start_hand(match)
    for street, seat, action in history:
        while hand.terminal is not None and hand.terminal.is_advance:
            hand = advance_street(hand)
        if hand.street is not street:
            raise EngineError(
                f"history desync: expected street {street}, at {hand.street}"
            )
        hand = apply_action(hand, seat, action)
    while hand.terminal is not None and hand.terminal.is_advance:
        hand = advance_street(hand)
    return hand
