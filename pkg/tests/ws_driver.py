"""Headless WebSocket clients for end-to-end tests.

The orchestrator is single-threaded: after each request it reads frames from
both sockets until each reaches a rest point (someone to act, a declaration
pending, a settlement booked, or no hand at all), which is exactly the last
frame of the host's event cascade. That keeps reads deterministic — we never
block on a frame that is not coming.
"""

import itertools
import json


def at_rest(view) -> bool:
    if view is None:
        return False
    if view.get("awaiting_declaration"):
        return True
    hand = view.get("hand")
    if hand is None:
        return True
    return hand["to_act"] is not None or hand["settlement"] is not None


class WsSeat:
    """One seated headless client."""

    _ids = itertools.count(1)

    def __init__(self, ws, seat, name):
        self.ws = ws
        self.seat = seat
        self.name = name
        self.frames = []  # every frame ever received
        self.view = None
        self.seqs = []  # event sequence numbers in arrival order

    def _absorb(self, frame):
        self.frames.append(frame)
        if frame.get("type") == "event":
            self.seqs.append(frame["seq"])
        if "view" in frame:
            self.view = frame["view"]

    def recv(self):
        frame = json.loads(self.ws.receive_text())
        self._absorb(frame)
        return frame

    def read_to_rest(self):
        """Read until the latest view is a decision point or a settled state."""
        while True:
            frame = self.recv()
            if frame.get("type") == "reject":
                return frame
            if at_rest(frame.get("view")):
                return frame

    def send(self, frame):
        frame = dict(frame)
        frame.setdefault("request_id", f"{self.name}-{next(self._ids)}")
        self.ws.send_text(json.dumps(frame))

    def request(self, frame):
        """Send one frame and read own cascade (or reject) to completion."""
        self.send(frame)
        return self.read_to_rest()


def open_pair(client, config, names=("alice", "bob")):
    """Connect two clients to a fresh session; returns (ctx0, ctx1, code)."""
    ws0 = client.websocket_connect("/ws")
    sock0 = ws0.__enter__()
    sock0.send_text(json.dumps({"type": "create", "name": names[0], "config": config}))
    created = json.loads(sock0.receive_text())
    assert created["type"] == "created", created
    code = created["code"]
    seat0 = WsSeat(sock0, 0, names[0])
    seat0._absorb(created)

    ws1 = client.websocket_connect("/ws")
    sock1 = ws1.__enter__()
    sock1.send_text(json.dumps({"type": "join", "code": code, "name": names[1]}))
    seat1 = WsSeat(sock1, 1, names[1])
    joined = seat1.recv()
    assert joined["type"] == "joined", joined
    seat0.read_to_rest()  # player_joined event
    return (ws0, seat0), (ws1, seat1), code


def scripted_policy(rng):
    """Mild action mix that keeps matches alive: favors calls and min raises."""

    def choose(view):
        actions = view["legal_actions"]
        by_kind = {a["kind"]: a for a in actions}
        roll = rng.random()
        if roll < 0.18 and "fold" in by_kind and len(by_kind) > 1:
            return {"type": "action", "kind": "fold"}
        wager = by_kind.get("bet") or by_kind.get("raise")
        if roll < 0.45 and wager is not None:
            return {
                "type": "action",
                "kind": wager["kind"],
                "amount": wager["min_amount"],
            }
        for kind in ("check", "call"):
            if kind in by_kind:
                return {"type": "action", "kind": kind}
        return {"type": "action", "kind": "fold"}

    return choose


def play_hands(seats, n_hands, rng, policy=None):
    """Drive n_hands through two connected seats; returns per-hand settlements."""
    policy = policy or scripted_policy(rng)
    settlements = []
    for _ in range(n_hands):
        starter = seats[0]
        frame = starter.request({"type": "start_hand"})
        assert frame.get("type") != "reject", frame
        seats[1].read_to_rest()
        while True:
            view0, view1 = seats[0].view, seats[1].view
            hand = view0.get("hand")
            if hand is not None and hand["settlement"] is not None:
                settlements.append(hand["settlement"])
                break
            actor = next((s for s in seats if s.view.get("your_turn")), None)
            assert actor is not None, (view0, view1)
            reply = actor.request(policy(actor.view))
            assert reply.get("type") != "reject", reply
            seats[1 - actor.seat].read_to_rest()
        if seats[0].view["match_over"]:
            break
    return settlements
