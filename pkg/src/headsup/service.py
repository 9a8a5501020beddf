"""Session lobby and message routing, independent of any transport.

A registry keeps live sessions addressable by 6-character join codes and
turns inbound JSON frames into host requests, handing back the frames to
deliver: events are fanned out to both seats (each redacted for its
receiver), rejects go to the sender only. The WebSocket layer in
``headsup.server`` is a thin adapter over this.

Liveness: any inbound frame refreshes a seat; a seat that stays silent for
three heartbeat intervals is considered disconnected and gets a fresh
snapshot when it comes back.
"""

from __future__ import annotations

import random
import string
import time
from dataclasses import dataclass, field

from .canonical import PUBLIC, hand_doc, match_doc
from .engine import (
    Action,
    ActionKind,
    DeckMode,
    IllegalAmount,
    InvalidConfig,
    MatchConfig,
    legal_actions,
)
from .replication import ClientRequest, HostSession, Reject, event_wire

HEARTBEAT_SECONDS = 5.0
MISSED_HEARTBEAT_LIMIT = 3

WAITING_FOR_PLAYERS = "waiting_for_players"
IN_HAND = "in_hand"
BETWEEN_HANDS = "between_hands"
ENDED = "ended"

CODE_ALPHABET = string.ascii_uppercase + string.digits


class ServiceError(Exception):
    reason = "service_error"


class UnknownCode(ServiceError):
    reason = "unknown_code"


class SessionFull(ServiceError):
    reason = "session_full"


class CapacityExceeded(ServiceError):
    reason = "capacity_exceeded"


class NotSeated(ServiceError):
    reason = "not_seated"


class SessionEnded(ServiceError):
    reason = "session_ended"


@dataclass
class SeatBinding:
    name: str
    connected: bool = True
    last_seen: float = 0.0


@dataclass
class Delivery:
    """Frames produced by one inbound frame."""

    to_sender: list[dict] = field(default_factory=list)
    broadcast: dict[int, list[dict]] = field(default_factory=lambda: {0: [], 1: []})


class Session:
    def __init__(self, code: str, config: MatchConfig, host_name: str, now: float):
        self.code = code
        self.host = HostSession(config)
        self.seats: dict[int, SeatBinding] = {
            0: SeatBinding(name=host_name, last_seen=now)
        }
        self.phase = WAITING_FOR_PLAYERS

    def refresh_phase(self) -> None:
        if self.phase == ENDED:
            return
        if len(self.seats) < 2:
            self.phase = WAITING_FOR_PLAYERS
        elif self.host.match_over:
            self.phase = ENDED
        elif self.host.hand_in_progress:
            self.phase = IN_HAND
        else:
            self.phase = BETWEEN_HANDS

    def view_for(self, seat: int) -> dict:
        """Render-ready summary a thin client can display without rules logic."""
        host = self.host
        hand = host.hand
        view: dict = {
            "seat": seat,
            "phase": self.phase,
            "session_code": self.code,
            "names": {str(s): b.name for s, b in self.seats.items()},
            "match": match_doc(host.match, PUBLIC),
            "hand": hand_doc(hand, seat) if hand is not None else None,
            "your_turn": False,
            "legal_actions": None,
            "awaiting_declaration": host.awaiting_declaration,
            "declared": {str(s): w for s, w in host.declarations.items()},
            "match_over": host.match_over,
        }
        if hand is not None and hand.terminal is None and hand.to_act == seat:
            view["your_turn"] = True
            view["legal_actions"] = [
                {
                    "kind": spec.kind.value,
                    "min_amount": spec.min_amount,
                    "max_amount": spec.max_amount,
                }
                for spec in legal_actions(hand)
            ]
        return view


class SessionRegistry:
    """All live sessions on one server."""

    def __init__(
        self,
        max_sessions: int = 256,
        clock=time.monotonic,
        code_seed: int | None = None,
    ):
        self.max_sessions = max_sessions
        self.clock = clock
        self.sessions: dict[str, Session] = {}
        self._rng = random.Random(code_seed)

    # -- lobby ----------------------------------------------------------------

    def _new_code(self) -> str:
        while True:
            code = "".join(self._rng.choice(CODE_ALPHABET) for _ in range(6))
            if code not in self.sessions:
                return code

    def create_session(self, config: MatchConfig, host_name: str) -> tuple[str, dict]:
        """Register a session; the creator takes seat 0. Returns (code, frame)."""
        if len(self.sessions) >= self.max_sessions:
            raise CapacityExceeded(f"at capacity ({self.max_sessions} sessions)")
        config = self._coerce_config(config)
        code = self._new_code()
        session = Session(code, config, host_name, self.clock())
        self.sessions[code] = session
        session.host.player_joined(0, host_name)
        session.refresh_phase()
        frame = {
            "type": "created",
            "code": code,
            "seat": 0,
            "snapshot": self._snapshot_frame(session, 0)["snapshot"],
            "view": session.view_for(0),
        }
        return code, frame

    def join_session(self, code: str, name: str) -> tuple[int, Delivery]:
        """Seat a joiner (or re-seat a returning player) and notify both."""
        session = self._session(code)
        delivery = Delivery()

        # reconnection: a disconnected seat with the same name is reclaimed
        for seat, binding in session.seats.items():
            if binding.name == name and not binding.connected:
                binding.connected = True
                binding.last_seen = self.clock()
                event = session.host.player_joined(seat, name)
                self._fan_out(session, delivery, [event], exclude=seat)
                delivery.to_sender.append(
                    {
                        "type": "joined",
                        "code": code,
                        "seat": seat,
                        "snapshot": session.host.snapshot_for(seat),
                        "view": session.view_for(seat),
                    }
                )
                return seat, delivery

        if session.phase == ENDED:
            raise SessionEnded("this match has finished")
        if len(session.seats) >= 2:
            raise SessionFull("both seats are taken")
        seat = 1
        session.seats[seat] = SeatBinding(name=name, last_seen=self.clock())
        event = session.host.player_joined(seat, name)
        session.refresh_phase()
        self._fan_out(session, delivery, [event], exclude=seat)
        delivery.to_sender.append(
            {
                "type": "joined",
                "code": code,
                "seat": seat,
                "snapshot": session.host.snapshot_for(seat),
                "view": session.view_for(seat),
            }
        )
        return seat, delivery

    # -- in-session traffic ----------------------------------------------------

    def route_request(self, code: str, seat: int, frame: dict) -> Delivery:
        """Handle one inbound frame from a seated client."""
        session = self._session(code)
        if seat not in session.seats:
            raise NotSeated(f"seat {seat} is not bound in session {code}")
        binding = session.seats[seat]
        binding.last_seen = self.clock()
        binding.connected = True
        delivery = Delivery()

        ftype = frame.get("type")
        if ftype == "ping":
            delivery.to_sender.append({"type": "pong"})
            return delivery
        if ftype == "snapshot_request":
            delivery.to_sender.append(self._snapshot_frame(session, seat))
            return delivery
        if ftype in ("action", "declare_winner", "start_hand"):
            try:
                request = self._parse_request(ftype, seat, frame)
            except IllegalAmount as exc:
                delivery.to_sender.append(
                    {
                        "type": "reject",
                        "reason": "illegal_amount",
                        "seq": session.host.seq,
                        "detail": str(exc),
                    }
                )
                return delivery
            except (KeyError, ValueError, TypeError) as exc:
                delivery.to_sender.append(
                    {
                        "type": "reject",
                        "reason": "bad_request",
                        "seq": session.host.seq,
                        "detail": f"malformed frame: {exc}",
                    }
                )
                return delivery
            result = session.host.host_apply(request)
            if isinstance(result, Reject):
                delivery.to_sender.append(
                    {
                        "type": "reject",
                        "reason": result.reason,
                        "seq": result.seq,
                        "detail": result.detail,
                    }
                )
            else:
                session.refresh_phase()
                self._fan_out(session, delivery, result)
            return delivery
        delivery.to_sender.append(
            {
                "type": "reject",
                "reason": "bad_request",
                "seq": session.host.seq,
                "detail": f"unknown frame type {ftype!r}",
            }
        )
        return delivery

    def mark_disconnected(self, code: str, seat: int) -> Delivery:
        session = self.sessions.get(code)
        delivery = Delivery()
        if session is None or seat not in session.seats:
            return delivery
        binding = session.seats[seat]
        if binding.connected:
            binding.connected = False
            event = session.host.player_left(seat, binding.name)
            self._fan_out(session, delivery, [event], exclude=seat)
        return delivery

    def sweep_heartbeats(self) -> dict[str, Delivery]:
        """Mark seats disconnected after three missed heartbeat intervals."""
        deadline = self.clock() - HEARTBEAT_SECONDS * MISSED_HEARTBEAT_LIMIT
        out: dict[str, Delivery] = {}
        for code, session in list(self.sessions.items()):
            for seat, binding in list(session.seats.items()):
                if binding.connected and binding.last_seen < deadline:
                    delivery = self.mark_disconnected(code, seat)
                    if delivery.broadcast[0] or delivery.broadcast[1]:
                        merged = out.setdefault(code, Delivery())
                        for s in (0, 1):
                            merged.broadcast[s].extend(delivery.broadcast[s])
        return out

    # -- helpers ---------------------------------------------------------------

    def _session(self, code: str) -> Session:
        session = self.sessions.get(code)
        if session is None:
            raise UnknownCode(f"no session with code {code!r}")
        return session

    def _snapshot_frame(self, session: Session, seat: int) -> dict:
        return {
            "type": "snapshot",
            "snapshot": session.host.snapshot_for(seat),
            "view": session.view_for(seat),
        }

    def _fan_out(
        self,
        session: Session,
        delivery: Delivery,
        events,
        exclude: int | None = None,
    ) -> None:
        # The view describes the host's *current* state, so it rides only on
        # the last frame of the batch; earlier frames are mid-cascade steps.
        events = list(events)
        for index, event in enumerate(events):
            for seat in (0, 1):
                if seat == exclude or seat not in session.seats:
                    continue
                frame = {"type": "event", **event_wire(event, seat)}
                if index == len(events) - 1:
                    frame["view"] = session.view_for(seat)
                delivery.broadcast[seat].append(frame)

    def _parse_request(self, ftype: str, seat: int, frame: dict) -> ClientRequest:
        request_id = str(frame.get("request_id", ""))
        expected_seq = frame.get("seq")
        if ftype == "action":
            kind = ActionKind(frame["kind"])
            amount = frame.get("amount")
            action = Action(kind, amount)
            return ClientRequest(
                "action", seat, request_id, action=action, expected_seq=expected_seq
            )
        if ftype == "declare_winner":
            return ClientRequest(
                "declare_winner",
                seat,
                request_id,
                declaration=frame.get("winner"),
                expected_seq=expected_seq,
            )
        return ClientRequest("start_hand", seat, request_id, expected_seq=expected_seq)

    @staticmethod
    def _coerce_config(config: MatchConfig | dict) -> MatchConfig:
        if isinstance(config, MatchConfig):
            return config
        try:
            return MatchConfig(
                starting_stack=int(config.get("starting_stack", 100)),
                small_blind=int(config.get("small_blind", 1)),
                big_blind=int(config.get("big_blind", 2)),
                deck_mode=DeckMode(config.get("deck_mode", "digital")),
                rng_seed=int(config.get("rng_seed", random.SystemRandom().randrange(2**63))),
            )
        except (TypeError, ValueError) as exc:
            raise InvalidConfig(str(exc)) from None
