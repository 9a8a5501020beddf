"""Host-authoritative replication of a two-player session.

One side owns the match and validates every request; the other sides mirror
it by applying a gapless, hash-checked event stream. Events carry only public
data plus the receiving seat's own cards, so a replica can rebuild the exact
public state and verify each event's digest. Anything that cannot be derived
publicly (dealt board cards, settlement amounts, revealed holes) rides in the
event payload.

Recovery: sequence gaps are buffered briefly; a persistent gap or a digest
mismatch flags the replica to request a full snapshot.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from . import engine
from .canonical import (
    PUBLIC,
    action_doc,
    action_from_doc,
    hand_doc,
    hand_from_doc,
    match_doc,
    settlement_doc,
    settlement_from_doc,
    state_hash,
)
from .cards import card
from .engine import (
    Action,
    CHOP,
    DeckMode,
    DeclaredWinner,
    EngineError,
    FoldWin,
    HandState,
    IllegalAction,
    IllegalAmount,
    InvalidDeclaration,
    MatchConfig,
    OutOfTurn,
    TerminalState,
)

HAND_STARTED = "hand_started"
ACTION_APPLIED = "action_applied"
STREET_ADVANCED = "street_advanced"
HAND_SETTLED = "hand_settled"
PLAYER_JOINED = "player_joined"
PLAYER_LEFT = "player_left"
WINNER_DECLARED = "winner_declared"


class SyncError(Exception):
    pass


class GapDetected(SyncError):
    pass


class HashMismatch(SyncError):
    pass


class StaleSnapshot(SyncError):
    pass


@dataclass(frozen=True)
class Event:
    """One replicated step; payload is host-side (unredacted) JSON data."""

    seq: int
    kind: str
    payload: dict
    state_hash: str


@dataclass(frozen=True)
class ClientRequest:
    kind: str  # "action" | "declare_winner" | "start_hand"
    seat: int
    request_id: str
    action: Action | None = None
    declaration: int | str | None = None
    expected_seq: int | None = None


@dataclass(frozen=True)
class Reject:
    reason: str  # out_of_turn | illegal_action | illegal_amount | stale_seq | ...
    seq: int
    detail: str = ""


def event_wire(event: Event, seat: int) -> dict:
    """The frame actually sent to a seat: payload redacted for that seat."""
    payload = event.payload
    if event.kind == HAND_STARTED:
        payload = {
            "match": payload["match"],
            "hand": _redact_hand_doc(payload["hand"], seat),
        }
    return {
        "seq": event.seq,
        "kind": event.kind,
        "payload": payload,
        "state_hash": event.state_hash,
    }


def _redact_hand_doc(doc: dict, seat: int) -> dict:
    out = dict(doc)
    holes = doc.get("hole_cards")
    if holes is not None:
        out["hole_cards"] = [
            hole if i == seat else None for i, hole in enumerate(holes)
        ]
    out["deck_remaining"] = None
    return out


class HostSession:
    """The authoritative side of one session."""

    def __init__(self, config: MatchConfig):
        self.match = engine.new_match(config)
        self.hand: HandState | None = None
        self.events: list[Event] = []
        self.seq = 0
        self.match_over = False
        self.declarations: dict[int, int | str] = {}
        self._request_cache: dict[tuple[int, str], tuple[Event, ...]] = {}

    # -- state ------------------------------------------------------------

    def state_hash(self) -> str:
        return state_hash(self.match, self.hand)

    @property
    def hand_in_progress(self) -> bool:
        return self.hand is not None and self.hand.settlement is None

    @property
    def awaiting_declaration(self) -> bool:
        return (
            self.hand is not None
            and self.hand.settlement is None
            and self.hand.terminal is not None
            and self.hand.terminal.is_end_hand
            and self.hand.terminal.reason is engine.EndReason.SHOWDOWN
            and self.hand.deck_mode is DeckMode.PHYSICAL
        )

    def snapshot_for(self, seat: int) -> dict:
        return {
            "seq": self.seq,
            "match": match_doc(self.match, PUBLIC),
            "hand": hand_doc(self.hand, seat) if self.hand is not None else None,
            "match_over": self.match_over,
            "declarations": {str(s): w for s, w in self.declarations.items()},
            "state_hash": self.state_hash(),
        }

    def events_since(self, seq: int) -> list[Event]:
        return self.events[seq:]

    # -- request handling ---------------------------------------------------

    def host_apply(self, request: ClientRequest) -> tuple[Event, ...] | Reject:
        """Validate and apply one client request; emits the event cascade.

        Requests are idempotent per (seat, request_id): a duplicate returns
        the originally emitted events without touching state.
        """
        cached = self._request_cache.get((request.seat, request.request_id))
        if cached is not None:
            return cached
        if request.expected_seq is not None and request.expected_seq != self.seq:
            return Reject("stale_seq", self.seq, "state advanced past the request")
        if self.match_over:
            return Reject("session_ended", self.seq, "the match is over")

        try:
            if request.kind == "action":
                events = self._apply_action(request.seat, request.action)
            elif request.kind == "declare_winner":
                events = self._apply_declaration(request.seat, request.declaration)
            elif request.kind == "start_hand":
                events = self._start_hand()
            else:
                return Reject("illegal_action", self.seq, f"unknown request {request.kind}")
        except OutOfTurn as exc:
            return Reject("out_of_turn", self.seq, str(exc))
        except IllegalAmount as exc:
            return Reject("illegal_amount", self.seq, str(exc))
        except InvalidDeclaration as exc:
            return Reject("invalid_declaration", self.seq, str(exc))
        except (IllegalAction, TerminalState, EngineError) as exc:
            return Reject("illegal_action", self.seq, str(exc))

        self._request_cache[(request.seat, request.request_id)] = events
        return events

    def player_joined(self, seat: int, name: str) -> Event:
        return self._emit(PLAYER_JOINED, {"seat": seat, "name": name})

    def player_left(self, seat: int, name: str) -> Event:
        return self._emit(PLAYER_LEFT, {"seat": seat, "name": name})

    # -- internals ----------------------------------------------------------

    def _emit(self, kind: str, payload: dict) -> Event:
        self.seq += 1
        event = Event(self.seq, kind, payload, self.state_hash())
        self.events.append(event)
        return event

    def _start_hand(self) -> tuple[Event, ...]:
        if self.hand_in_progress:
            raise IllegalAction("a hand is already in progress")
        if self.match_over:
            raise IllegalAction("the match is over")
        self.hand = engine.start_hand(self.match)
        self.declarations = {}
        started = self._emit(
            HAND_STARTED,
            {"match": match_doc(self.match, PUBLIC), "hand": hand_doc(self.hand)},
        )
        return (started,) + self._run_transitions()

    def _apply_action(self, seat: int, action: Action) -> tuple[Event, ...]:
        if not self.hand_in_progress or self.hand.terminal is not None:
            raise IllegalAction("no betting to act on")
        self.hand = engine.apply_action(self.hand, seat, action)
        applied = self._emit(
            ACTION_APPLIED, {"seat": seat, "action": action_doc(action)}
        )
        return (applied,) + self._run_transitions()

    def _apply_declaration(self, seat: int, claim: int | str | None) -> tuple[Event, ...]:
        if not self.awaiting_declaration:
            raise IllegalAction("no winner declaration is pending")
        if claim not in (0, 1, CHOP):
            raise InvalidDeclaration(f"declared winner {claim!r} is not seated")
        self.declarations[seat] = claim
        if len(self.declarations) < 2:
            event = self._emit(
                WINNER_DECLARED,
                {"seat": seat, "claim": claim, "status": "recorded"},
            )
            return (event,)
        if self.declarations[0] != self.declarations[1]:
            self.declarations = {}
            event = self._emit(
                WINNER_DECLARED,
                {"seat": seat, "claim": claim, "status": "mismatch"},
            )
            return (event,)
        event = self._emit(
            WINNER_DECLARED, {"seat": seat, "claim": claim, "status": "matched"}
        )
        return (event,) + self._settle(DeclaredWinner(claim))

    def _run_transitions(self) -> tuple[Event, ...]:
        """Advance streets and settle automatically until input is needed."""
        events: list[Event] = []
        while self.hand.terminal is not None:
            if self.hand.terminal.is_advance:
                before = len(self.hand.board)
                self.hand = engine.advance_street(self.hand)
                events.append(
                    self._emit(
                        STREET_ADVANCED,
                        {
                            "street": self.hand.street.name.lower(),
                            "dealt": [c.code for c in self.hand.board[before:]],
                            "board": [c.code for c in self.hand.board],
                        },
                    )
                )
                continue
            reason = self.hand.terminal.reason
            if reason is engine.EndReason.FOLD:
                events.extend(self._settle(FoldWin(self.hand.terminal.fold_winner)))
            elif self.hand.deck_mode is DeckMode.DIGITAL:
                events.extend(self._settle(engine.showdown_result(self.hand)))
            # physical-mode showdown waits for matching declarations
            break
        return tuple(events)

    def _settle(self, outcome) -> tuple[Event, ...]:
        revealed = None
        if (
            isinstance(outcome, engine.ShowdownResult)
            and self.hand.hole_cards is not None
        ):
            revealed = [[c.code for c in hole] for hole in self.hand.hole_cards]
        self.hand, settlement = engine.settle(self.hand, outcome)
        self.match = engine.finish_hand(self.match, self.hand)
        self.match_over = self.match.over
        event = self._emit(
            HAND_SETTLED,
            {
                "settlement": settlement_doc(settlement),
                "revealed_holes": revealed,
                "stacks": list(self.match.stacks),
                "match_over": self.match_over,
            },
        )
        return (event,)


class Replica:
    """One client's mirror, fed by seat-redacted wire events."""

    def __init__(self, seat: int, stall_limit: int = 32):
        self.seat = seat
        self.seq = 0
        self.match: dict | None = None  # public match document
        self.hand: HandState | None = None
        self.match_over = False
        self.needs_snapshot = False
        self.stall_limit = stall_limit
        self._buffer: dict[int, dict] = {}
        self._stalled = 0

    def state_hash(self) -> str | None:
        if self.match is None:
            return None
        return state_hash(dict(self.match), self.hand)

    # -- strict single-event application ------------------------------------

    def replica_apply(self, wire: dict) -> None:
        """Apply the next in-order event; raises on gaps and divergence."""
        seq = wire["seq"]
        if seq != self.seq + 1:
            raise GapDetected(f"expected seq {self.seq + 1}, got {seq}")
        match, hand, match_over = self._transition(wire)
        check = state_hash(dict(match), hand) if match is not None else None
        if check != wire["state_hash"]:
            self.needs_snapshot = True
            raise HashMismatch(f"event {seq}: local state diverged")
        self.match, self.hand, self.match_over = match, hand, match_over
        self.seq = seq

    def _transition(self, wire: dict) -> tuple[dict | None, HandState | None, bool]:
        kind = wire["kind"]
        payload = wire["payload"]
        match = dict(self.match) if self.match is not None else None
        hand = self.hand
        match_over = self.match_over

        if kind == HAND_STARTED:
            match = dict(payload["match"])
            hand = hand_from_doc(payload["hand"])
        elif kind == ACTION_APPLIED:
            hand = engine.apply_action(
                hand, payload["seat"], action_from_doc(payload["action"])
            )
        elif kind == STREET_ADVANCED:
            dealt = [card(c) for c in payload["dealt"]]
            hand = engine.advance_street(hand, dealt=dealt)
        elif kind == HAND_SETTLED:
            settlement = settlement_from_doc(payload["settlement"])
            hand = engine.apply_settlement(hand, settlement)
            if payload.get("revealed_holes"):
                holes = tuple(
                    tuple(card(c) for c in hole) for hole in payload["revealed_holes"]
                )
                hand = replace(hand, hole_cards=holes)
            match["stacks"] = list(payload["stacks"])
            match["hand_number"] = hand.hand_number
            match["dealer_seat"] = hand.dealer_seat
            match_over = payload["match_over"]
        elif kind in (PLAYER_JOINED, PLAYER_LEFT, WINNER_DECLARED):
            pass  # session bookkeeping; replicated state unchanged
        else:
            raise SyncError(f"unknown event kind {kind!r}")
        return match, hand, match_over

    # -- delivery policy ------------------------------------------------------

    def ingest(self, wire: dict) -> None:
        """Tolerant entry point: drops duplicates, buffers reordered events,
        and flags for snapshot recovery when stuck."""
        seq = wire["seq"]
        if seq <= self.seq:
            return  # duplicate or already covered by a snapshot
        if seq > self.seq + 1:
            self._buffer[seq] = wire
            self._stalled += 1
            if self._stalled > self.stall_limit:
                self.needs_snapshot = True
            return
        try:
            self.replica_apply(wire)
        except HashMismatch:
            return  # needs_snapshot already set
        self._stalled = 0
        self._drain()

    def _drain(self) -> None:
        while self.seq + 1 in self._buffer:
            wire = self._buffer.pop(self.seq + 1)
            try:
                self.replica_apply(wire)
            except HashMismatch:
                return

    def snapshot_recover(self, snapshot: dict) -> None:
        """Replace local state wholesale; subsequent events resume after it."""
        if snapshot["seq"] < self.seq:
            raise StaleSnapshot(
                f"snapshot at {snapshot['seq']} is behind replica at {self.seq}"
            )
        self.match = dict(snapshot["match"])
        self.hand = (
            hand_from_doc(snapshot["hand"]) if snapshot["hand"] is not None else None
        )
        self.match_over = snapshot["match_over"]
        self.seq = snapshot["seq"]
        self.needs_snapshot = False
        self._stalled = 0
        self._buffer = {s: w for s, w in self._buffer.items() if s > self.seq}
        if self.state_hash() != snapshot["state_hash"]:
            raise HashMismatch("snapshot digest does not match its contents")
        self._drain()
