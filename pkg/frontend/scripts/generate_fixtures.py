#!/usr/bin/env python3
"""Record per-seat frame logs for the frontend test suite.

Drives the session service directly (no sockets) with a seeded policy and
writes every frame each seat would receive, in delivery order, as JSON
lines. Rerunning always produces identical files.

Usage: python scripts/generate_fixtures.py [output_dir]
"""

import json
import random
import sys
from pathlib import Path

from headsup.engine import DeckMode, MatchConfig
from headsup.service import SessionRegistry


class Recorder:
    def __init__(self, registry, code):
        self.registry = registry
        self.code = code
        self.frames = {0: [], 1: []}

    def absorb(self, seat, delivery):
        # mirror the websocket adapter: sender frames first, then broadcasts
        self.frames[seat].extend(delivery.to_sender)
        for s in (0, 1):
            self.frames[s].extend(delivery.broadcast[s])

    def request(self, seat, frame):
        delivery = self.registry.route_request(self.code, seat, frame)
        self.absorb(seat, delivery)
        return delivery

    def latest_view(self, seat):
        for frame in reversed(self.frames[seat]):
            if frame.get("view"):
                return frame["view"]
        return None


def scripted_policy(rng):
    # favors calls and minimum wagers so a 20-hand session never busts
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


def open_session(config, code_seed):
    registry = SessionRegistry(code_seed=code_seed)
    code, created = registry.create_session(config, "alice")
    recorder = Recorder(registry, code)
    recorder.frames[0].append(created)
    seat, delivery = registry.join_session(code, "bob")
    recorder.absorb(seat, delivery)
    return recorder


def play_session(recorder, n_hands, rng, policy=None, on_declaration=None):
    policy = policy or scripted_policy(rng)
    rid = iter(range(1, 100_000))
    for _ in range(n_hands):
        recorder.request(0, {"type": "start_hand", "request_id": f"s{next(rid)}"})
        while True:
            view0 = recorder.latest_view(0)
            view1 = recorder.latest_view(1)
            hand = view0["hand"]
            if hand is not None and hand["settlement"] is not None:
                break
            if view0["awaiting_declaration"]:
                on_declaration(recorder, rid, view0)
                continue
            actor = 0 if view0["your_turn"] else 1 if view1["your_turn"] else None
            assert actor is not None, (view0, view1)
            view = view0 if actor == 0 else view1
            frame = dict(policy(view))
            frame["request_id"] = f"a{next(rid)}"
            recorder.request(actor, frame)
        if recorder.latest_view(0)["match_over"]:
            break


def declarations_script():
    # first hand: disagree once, then agree on a chop; later hands: seat 0 wins
    state = {"round": 0}

    def declare(recorder, rid, view):
        declared = view["declared"]
        if state["round"] == 0:
            if not declared:
                recorder.request(0, {"type": "declare_winner", "winner": 0,
                                     "request_id": f"d{next(rid)}"})
                recorder.request(1, {"type": "declare_winner", "winner": 1,
                                     "request_id": f"d{next(rid)}"})
                state["round"] = 1
            return
        if "0" not in declared:
            recorder.request(0, {"type": "declare_winner", "winner": "chop",
                                 "request_id": f"d{next(rid)}"})
        recorder.request(1, {"type": "declare_winner", "winner": "chop",
                             "request_id": f"d{next(rid)}"})

    return declare


def checkdown_policy():
    def choose(view):
        by_kind = {a["kind"]: a for a in view["legal_actions"]}
        for kind in ("check", "call"):
            if kind in by_kind:
                return {"type": "action", "kind": kind}
        return {"type": "action", "kind": "fold"}

    return choose


def write(out_dir, name, recorder):
    for seat in (0, 1):
        path = out_dir / f"{name}_seat{seat}.jsonl"
        with path.open("w") as fh:
            for frame in recorder.frames[seat]:
                fh.write(json.dumps(frame, separators=(",", ":")) + "\n")
        print(f"wrote {path} ({len(recorder.frames[seat])} frames)")


def main():
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else (
        Path(__file__).resolve().parents[1] / "test" / "fixtures"
    )
    out_dir.mkdir(parents=True, exist_ok=True)

    digital = open_session(
        MatchConfig(starting_stack=2000, small_blind=1, big_blind=2,
                    deck_mode=DeckMode.DIGITAL, rng_seed=2024),
        code_seed=11,
    )
    play_session(digital, 20, random.Random(6))
    settled = sum(
        1 for f in digital.frames[0]
        if f.get("type") == "event" and f.get("kind") == "hand_settled"
    )
    assert settled == 20, f"expected a full 20-hand session, got {settled}"
    write(out_dir, "digital20", digital)

    physical = open_session(
        MatchConfig(starting_stack=60, small_blind=1, big_blind=2,
                    deck_mode=DeckMode.PHYSICAL, rng_seed=1),
        code_seed=12,
    )
    play_session(
        physical, 3, random.Random(9),
        policy=checkdown_policy(),
        on_declaration=declarations_script(),
    )
    write(out_dir, "physical3", physical)


if __name__ == "__main__":
    main()
