"""Operator entry points.

Subcommands: ``serve`` (run the session server), ``host``/``join`` (terminal
clients for a networked table), ``play-local`` (hot-seat match on one
terminal), and the verification rigs ``explore``/``fuzz``/``simulate``.
Verification subcommands are non-interactive, print a JSON report with
``--json``, and exit nonzero iff violations were found.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import os
import sys

from .engine import (
    CHOP,
    Action,
    DeckMode,
    DeclaredWinner,
    EndReason,
    FoldWin,
    HandState,
    MatchConfig,
    Street,
    advance_street,
    apply_action,
    finish_hand,
    legal_actions,
    new_match,
    settle,
    showdown_result,
    start_hand,
)
from .simulation import ChannelModel, converge_test, explore_dfa, fuzz_matches

DEFAULT_LISTEN = "127.0.0.1:8099"


# ---------------------------------------------------------------------------
# rendering helpers


def _fmt_cards(cards) -> str:
    return " ".join(c.code for c in cards) if cards else "-"


def render_hand(hand: HandState, out) -> None:
    a = hand.annotations
    out.write(
        f"\n=== hand #{a.hands_played} | {a.current_round.name.lower()} | "
        f"dealer: seat {a.current_dealer} ===\n"
    )
    report_rows = zip(hand.stacks, hand.committed)
    for seat, (behind, committed) in enumerate(report_rows):
        marker = "*" if hand.to_act == seat else " "
        out.write(f"{marker} seat {seat}: {behind} behind, {committed} in front\n")
    out.write(f"  pot: {hand.pot}   board: {_fmt_cards(hand.board)}\n")
    if a.previous_action:
        out.write(f"  previous action: {a.previous_action}\n")
    if a.waiting_for is not None:
        out.write(
            f"  waiting for seat {a.waiting_for} (to call: {a.amount_to_call})\n"
        )


def _prompt(in_stream, out, text: str) -> str:
    out.write(text)
    out.flush()
    line = in_stream.readline()
    if line == "":
        raise EOFError("input stream closed")
    return line.strip()


# ---------------------------------------------------------------------------
# play-local (hot-seat)


def _choose_action(hand, in_stream, out) -> Action:
    specs = legal_actions(hand)
    seat = hand.to_act
    out.write(f"seat {seat} options:\n")
    for idx, spec in enumerate(specs, start=1):
        if spec.min_amount is None:
            out.write(f"  {idx}. {spec.kind.value}\n")
        else:
            out.write(
                f"  {idx}. {spec.kind.value} [{spec.min_amount}..{spec.max_amount}]\n"
            )
    while True:
        raw = _prompt(in_stream, out, f"seat {seat}> ")
        parts = raw.split()
        if not parts:
            continue
        try:
            choice = int(parts[0])
            spec = specs[choice - 1]
        except (ValueError, IndexError):
            out.write(f"enter a number 1..{len(specs)}\n")
            continue
        if spec.min_amount is None:
            return Action(spec.kind)
        if len(parts) > 1:
            raw_amount = parts[1]
        else:
            raw_amount = _prompt(
                in_stream, out, f"amount [{spec.min_amount}..{spec.max_amount}]> "
            )
        try:
            amount = int(raw_amount)
        except ValueError:
            out.write("amounts are whole chips\n")
            continue
        if not spec.min_amount <= amount <= spec.max_amount:
            out.write(f"amount must be in [{spec.min_amount}..{spec.max_amount}]\n")
            continue
        return Action(spec.kind, amount)


def _declare_winners(in_stream, out) -> int | str:
    """Both players must enter matching declarations; re-prompts on mismatch."""
    while True:
        claims = []
        for seat in (0, 1):
            while True:
                raw = _prompt(
                    in_stream, out, f"seat {seat}, declare winner (0/1/chop)> "
                ).lower()
                if raw in ("0", "1"):
                    claims.append(int(raw))
                    break
                if raw == CHOP:
                    claims.append(CHOP)
                    break
                out.write("enter 0, 1 or chop\n")
        if claims[0] == claims[1]:
            return claims[0]
        out.write("declarations do not match; try again\n")


def play_local(
    config: MatchConfig,
    max_hands: int | None = None,
    in_stream=None,
    out=None,
) -> int:
    """Hot-seat match: both seats act on one terminal."""
    in_stream = in_stream if in_stream is not None else sys.stdin
    out = out if out is not None else sys.stdout
    match = new_match(config)
    hands = 0
    while not match.over and (max_hands is None or hands < max_hands):
        hand = start_hand(match)
        while True:
            while hand.terminal is None:
                render_hand(hand, out)
                try:
                    action = _choose_action(hand, in_stream, out)
                except EOFError:
                    out.write("\ninput closed; abandoning the match\n")
                    return 0
                hand = apply_action(hand, hand.to_act, action)
            if hand.terminal.is_advance:
                hand = advance_street(hand)
            else:
                break

        if hand.terminal.reason is EndReason.FOLD:
            winner = hand.terminal.fold_winner
            hand, settlement = settle(hand, FoldWin(winner))
        elif config.deck_mode is DeckMode.DIGITAL:
            result = showdown_result(hand)
            out.write(
                f"showdown: seat 0 shows {_fmt_cards(hand.hole_cards[0])}, "
                f"seat 1 shows {_fmt_cards(hand.hole_cards[1])} "
                f"(board {_fmt_cards(hand.board)})\n"
            )
            hand, settlement = settle(hand, result)
        else:
            out.write(f"board (physical): {_fmt_cards(hand.board)}\n")
            try:
                claim = _declare_winners(in_stream, out)
            except EOFError:
                out.write("\ninput closed; abandoning the match\n")
                return 0
            hand, settlement = settle(hand, DeclaredWinner(claim))

        if settlement.winner == CHOP:
            out.write(
                f"hand #{hand.hand_number}: chopped pot "
                f"({settlement.amount_per_seat[0]}/{settlement.amount_per_seat[1]}), "
                f"reason: {settlement.reason}\n"
            )
        else:
            out.write(
                f"hand #{hand.hand_number}: seat {settlement.winner} wins "
                f"{settlement.amount_per_seat[settlement.winner]} "
                f"({settlement.reason}); net {settlement.net_delta}\n"
            )
        out.write(f"stacks: {list(hand.stacks)}\n")
        match = finish_hand(match, hand)
        hands += 1

    if match.over:
        out.write(f"match over after {hands} hands; final stacks {list(match.stacks)}\n")
    return 0


# ---------------------------------------------------------------------------
# networked terminal client (host / join)


async def _terminal_client(url: str, hello: dict) -> int:
    import websockets

    async with websockets.connect(url) as socket:
        await socket.send(json.dumps(hello))

        async def reader():
            async for raw in socket:
                frame = json.loads(raw)
                _render_frame(frame)

        async def feeder():
            loop = asyncio.get_running_loop()
            counter = 0
            while True:
                line = await loop.run_in_executor(None, sys.stdin.readline)
                if not line:
                    return
                counter += 1
                frame = _parse_client_line(line.strip(), counter)
                if frame is not None:
                    await socket.send(json.dumps(frame))

        reader_task = asyncio.create_task(reader())
        feeder_task = asyncio.create_task(feeder())
        done, pending = await asyncio.wait(
            {reader_task, feeder_task}, return_when=asyncio.FIRST_COMPLETED
        )
        for task in pending:
            task.cancel()
    return 0


def _render_frame(frame: dict) -> None:
    ftype = frame.get("type")
    if ftype in ("created", "joined"):
        code = frame.get("code", "")
        print(f"[{ftype}] seat {frame.get('seat')} in session {code}")
    elif ftype == "reject":
        print(f"[reject] {frame.get('reason')}: {frame.get('detail')}")
    elif ftype == "pong":
        return
    view = frame.get("view")
    if not view:
        return
    hand = view.get("hand")
    if hand is None:
        print(f"[{view['phase']}] stacks {view['match']['stacks']} "
              f"(start a hand with: start)")
        return
    a = hand["annotations"]
    print(
        f"hand #{a['hands_played']} {a['current_round']} | "
        f"stacks {hand['stacks']} committed {hand['committed']} pot {hand['pot']} | "
        f"board {' '.join(hand['board']) or '-'} | your cards "
        f"{' '.join(hand['hole_cards'][view['seat']] or []) if hand.get('hole_cards') else '(physical)'}"
    )
    if a["previous_action"]:
        print(f"  previous: {a['previous_action']}")
    if view.get("awaiting_declaration"):
        print("  declare the winner with: declare 0|1|chop")
    if view.get("your_turn"):
        options = ", ".join(
            f"{s['kind']}"
            + (f" {s['min_amount']}..{s['max_amount']}" if s["min_amount"] is not None else "")
            for s in view["legal_actions"]
        )
        print(f"  YOUR TURN ({options}); e.g.: call | bet 10 | fold")
    elif a["waiting_for"] is not None:
        print(f"  waiting for seat {a['waiting_for']}")


def _parse_client_line(line: str, counter: int) -> dict | None:
    if not line:
        return None
    parts = line.split()
    word = parts[0].lower()
    rid = f"cli-{counter}"
    if word in ("start", "deal"):
        return {"type": "start_hand", "request_id": rid}
    if word == "declare" and len(parts) > 1:
        claim = parts[1].lower()
        winner = CHOP if claim == CHOP else int(claim) if claim in ("0", "1") else None
        if winner is None:
            print("declare 0|1|chop")
            return None
        return {"type": "declare_winner", "winner": winner, "request_id": rid}
    if word in ("check", "call", "fold", "bet", "raise"):
        frame = {"type": "action", "kind": word, "request_id": rid}
        if word in ("bet", "raise"):
            try:
                frame["amount"] = int(parts[1])
            except (IndexError, ValueError):
                print(f"{word} needs an amount, e.g. `{word} 10`")
                return None
        return frame
    if word == "ping":
        return {"type": "ping"}
    print("commands: start | check | call | bet N | raise N | fold | declare 0|1|chop")
    return None


# ---------------------------------------------------------------------------
# argument parsing and dispatch


def _add_match_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--stack", type=int, default=100, help="starting stack per seat")
    parser.add_argument("--sb", type=int, default=1, help="small blind")
    parser.add_argument("--bb", type=int, default=2, help="big blind")
    parser.add_argument(
        "--deck", choices=["digital", "physical"], default="digital",
        help="digital deals cards; physical tracks chips only",
    )
    parser.add_argument("--seed", type=int, default=0, help="deck shuffle seed")


def _match_config(args) -> MatchConfig:
    return MatchConfig(
        starting_stack=args.stack,
        small_blind=args.sb,
        big_blind=args.bb,
        deck_mode=DeckMode(args.deck),
        rng_seed=args.seed,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="headsup",
        description="heads-up hold'em: engine, session server, and verification rigs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the session server")
    serve.add_argument(
        "--listen",
        default=os.environ.get("HEADSUP_LISTEN", DEFAULT_LISTEN),
        help="host:port to bind (env HEADSUP_LISTEN)",
    )
    serve.add_argument("--max-sessions", type=int, default=256)
    serve.add_argument(
        "--log-level",
        default=os.environ.get("HEADSUP_LOG_LEVEL", "info"),
        choices=["critical", "error", "warning", "info", "debug"],
    )
    serve.set_defaults(func=cmd_serve)

    host = sub.add_parser("host", help="create a networked session from the terminal")
    host.add_argument("--url", default=None, help="server ws url (default local)")
    host.add_argument("--name", default="host")
    _add_match_flags(host)
    host.set_defaults(func=cmd_host)

    join = sub.add_parser("join", help="join a session by code")
    join.add_argument("code", help="6-character session code")
    join.add_argument("--url", default=None)
    join.add_argument("--name", default="guest")
    join.set_defaults(func=cmd_join)

    local = sub.add_parser("play-local", help="hot-seat match on this terminal")
    _add_match_flags(local)
    local.add_argument("--hands", type=int, default=None, help="stop after N hands")
    local.set_defaults(func=cmd_play_local)

    explore = sub.add_parser("explore", help="exhaustive DFA walk of one street")
    explore.add_argument(
        "--street", choices=[s.name.lower() for s in Street], default="flop"
    )
    explore.add_argument("--stack", type=int, default=200)
    explore.add_argument("--stack2", type=int, default=None,
                         help="second seat's stack (defaults to --stack)")
    explore.add_argument("--sb", type=int, default=1)
    explore.add_argument("--bb", type=int, default=2)
    explore.add_argument("--json", action="store_true")
    explore.set_defaults(func=cmd_explore)

    fuzz = sub.add_parser("fuzz", help="random-play invariant fuzzing")
    fuzz.add_argument("--hands", type=int, default=10_000)
    fuzz.add_argument("--seed", type=int, default=1)
    fuzz.add_argument("--stack", type=int, default=100)
    fuzz.add_argument("--replay-check", action="store_true",
                      help="also replay every hand and compare state hashes")
    fuzz.add_argument("--json", action="store_true")
    fuzz.set_defaults(func=cmd_fuzz)

    simulate = sub.add_parser(
        "simulate", help="two-replica convergence over a lossy channel"
    )
    simulate.add_argument("--hands", type=int, default=100)
    simulate.add_argument("--seed", type=int, default=1)
    simulate.add_argument("--dup", type=float, default=0.0, help="duplication probability")
    simulate.add_argument("--reorder", type=int, default=0, help="reorder window")
    simulate.add_argument("--channel-seed", type=int, default=0)
    simulate.add_argument("--forced-gap", action="store_true",
                          help="drop one event permanently to force snapshot recovery")
    simulate.add_argument("--json", action="store_true")
    simulate.set_defaults(func=cmd_simulate)

    return parser


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app
    from .service import SessionRegistry

    host, _, port = args.listen.rpartition(":")
    host = host or "127.0.0.1"
    try:
        port = int(port)
    except ValueError:
        print(f"bad --listen value {args.listen!r}; expected host:port", file=sys.stderr)
        return 2
    app = create_app(registry=SessionRegistry(max_sessions=args.max_sessions))
    try:
        uvicorn.run(app, host=host, port=port, log_level=args.log_level)
    except (OSError, SystemExit) as exc:
        print(f"server failed to start on {args.listen}: {exc}", file=sys.stderr)
        return 1
    return 0


def _default_url(args) -> str:
    if args.url:
        return args.url
    listen = os.environ.get("HEADSUP_LISTEN", DEFAULT_LISTEN)
    return f"ws://{listen}/ws"


def cmd_host(args) -> int:
    config = _match_config(args)
    hello = {
        "type": "create",
        "name": args.name,
        "config": {
            "starting_stack": config.starting_stack,
            "small_blind": config.small_blind,
            "big_blind": config.big_blind,
            "deck_mode": config.deck_mode.value,
            "rng_seed": config.rng_seed,
        },
    }
    return asyncio.run(_terminal_client(_default_url(args), hello))


def cmd_join(args) -> int:
    hello = {"type": "join", "code": args.code.upper(), "name": args.name}
    return asyncio.run(_terminal_client(_default_url(args), hello))


def cmd_play_local(args) -> int:
    return play_local(_match_config(args), max_hands=args.hands)


def _emit_report(report, as_json: bool, summary: str) -> int:
    if as_json:
        print(report.to_json())
    else:
        print(summary)
        for violation in report.violations:
            print(f"  violation: {violation}")
    return 1 if report.violations else 0


def cmd_explore(args) -> int:
    stacks = (args.stack, args.stack2 if args.stack2 is not None else args.stack)
    report = explore_dfa(
        Street[args.street.upper()], stacks, small_blind=args.sb, big_blind=args.bb
    )
    return _emit_report(
        report,
        args.json,
        f"explore {report.street} stacks={stacks}: "
        f"{report.states_visited} states, "
        f"{report.end_hand_terminals} end-hand / {report.advance_terminals} advance "
        f"terminals, max depth {report.max_sequence_length}, "
        f"{len(report.violations)} violations",
    )


def cmd_fuzz(args) -> int:
    report = fuzz_matches(
        n_hands=args.hands,
        seed=args.seed,
        starting_stack=args.stack,
        replay_check=args.replay_check,
    )
    return _emit_report(
        report,
        args.json,
        f"fuzz {report.hands} hands (seed {report.seed}): "
        f"{report.matches_played} matches, {report.fold_wins} folds, "
        f"{report.showdown_wins} showdowns, {report.chops} chops, "
        f"{report.all_in_runouts} run-outs, {len(report.violations)} violations",
    )


def cmd_simulate(args) -> int:
    channel = ChannelModel(
        dup_probability=args.dup,
        reorder_window=args.reorder,
        seed=args.channel_seed,
    )
    report = converge_test(
        channel, n_hands=args.hands, seed=args.seed, forced_gap=args.forced_gap
    )
    return _emit_report(
        report,
        args.json,
        f"simulate {report.hands} hands over dup={report.dup_probability} "
        f"reorder={report.reorder_window}: sessions={report.sessions}, "
        f"events={report.events_emitted}, snapshots={report.snapshots_recovered}, "
        f"converged={report.converged}",
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
