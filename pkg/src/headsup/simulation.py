"""Deterministic verification rig.

Three drivers, all pure functions of their seeds:

  * ``explore_dfa`` — exhaustive reachability over one street's betting
    automaton with wager amounts abstracted to {min, all-in}, proving both
    that every path reaches a terminal and that no reachable decision point
    has an empty legal-action set.
  * ``fuzz_matches`` — plays whole matches with uniformly random legal
    actions, checking chip conservation, dealer alternation and (optionally)
    that replaying each hand's history reproduces its exact final state.
  * ``converge_test`` — runs a host and two replicas over a simulated lossy
    channel (delays, duplication, reordering, optional forced gap) and
    checks that both replicas reach the host's state hash at quiescence.

Reports serialize to JSON and contain no timestamps, so identical seeds give
byte-identical output.
"""

from __future__ import annotations

import heapq
import json
import random
from dataclasses import asdict, dataclass, field

from . import engine
from .engine import (
    Action,
    DeckMode,
    FoldWin,
    HandState,
    MatchConfig,
    Street,
)
from .replication import (
    ClientRequest,
    HostSession,
    Reject,
    Replica,
    StaleSnapshot,
    event_wire,
)

MAX_PLAUSIBLE_DEPTH = 10_000


# ---------------------------------------------------------------------------
# DFA exploration


@dataclass
class ExplorationReport:
    street: str
    stacks: tuple[int, int]
    small_blind: int
    big_blind: int
    states_visited: int = 0
    end_hand_terminals: int = 0
    advance_terminals: int = 0
    max_sequence_length: int = 0
    violations: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), separators=(",", ":"))


def _abstract_amounts(spec) -> list[int | None]:
    if spec.min_amount is None:
        return [None]
    if spec.min_amount == spec.max_amount:
        return [spec.min_amount]
    return [spec.min_amount, spec.max_amount]


def _street_start_state(
    street: Street, stacks: tuple[int, int], small_blind: int, big_blind: int
) -> HandState:
    """A physical-mode hand poised at the start of the given street.

    ``stacks`` is what each seat has available to wager on that street: the
    pre-blind stacks for the pre-flop automaton, the chips behind (with a
    nominal pot already collected) for later streets.
    """
    config = MatchConfig(
        starting_stack=max(stacks),
        small_blind=small_blind,
        big_blind=big_blind,
        deck_mode=DeckMode.PHYSICAL,
    )
    if street is Street.PREFLOP:
        match = engine.MatchState(config=config, stacks=stacks, dealer_seat=None)
        return engine.start_hand(match)
    if min(stacks) <= 0:
        raise ValueError("post-flop exploration needs both seats holding chips")
    pot = 2 * big_blind
    return HandState(
        hand_number=1,
        dealer_seat=0,
        small_blind=small_blind,
        big_blind=big_blind,
        deck_mode=DeckMode.PHYSICAL,
        starting_stacks=(stacks[0] + big_blind, stacks[1] + big_blind),
        stacks=stacks,
        committed=(0, 0),
        pot=pot,
        street=street,
        to_act=1,  # the non-dealer leads every post-flop street
        last_raise_increment=big_blind,
    )


def explore_dfa(
    street: Street,
    stacks: tuple[int, int],
    small_blind: int = 1,
    big_blind: int = 2,
) -> ExplorationReport:
    """Walk every abstracted action path of one street to its terminal."""
    report = ExplorationReport(
        street=street.name.lower(),
        stacks=stacks,
        small_blind=small_blind,
        big_blind=big_blind,
    )
    start = _street_start_state(street, stacks, small_blind, big_blind)
    stack = [(start, 0)]
    while stack:
        hand, depth = stack.pop()
        report.states_visited += 1
        report.max_sequence_length = max(report.max_sequence_length, depth)
        if depth > MAX_PLAUSIBLE_DEPTH:
            report.violations.append(
                f"non-terminating path beyond depth {MAX_PLAUSIBLE_DEPTH}"
            )
            continue
        terminal = hand.terminal
        if terminal is not None:
            if terminal.is_advance:
                report.advance_terminals += 1
            elif terminal.is_end_hand:
                report.end_hand_terminals += 1
            else:
                report.violations.append(f"unknown terminal {terminal!r}")
            continue
        if hand.to_act is None:
            report.violations.append(f"no terminal and nobody to act at depth {depth}")
            continue
        try:
            specs = engine.legal_actions(hand)
        except engine.EngineError as exc:
            report.violations.append(f"legal_actions failed at depth {depth}: {exc}")
            continue
        if not specs:
            report.violations.append(f"empty legal-action set at depth {depth}")
            continue
        for spec in specs:
            for amount in _abstract_amounts(spec):
                child = engine.apply_action(hand, hand.to_act, Action(spec.kind, amount))
                stack.append((child, depth + 1))
    return report


# ---------------------------------------------------------------------------
# Random-play fuzzing


@dataclass
class FuzzReport:
    hands: int
    seed: int
    starting_stack: int
    replay_checked: bool
    matches_played: int = 0
    fold_wins: int = 0
    showdown_wins: int = 0
    chops: int = 0
    all_in_runouts: int = 0
    max_hand_actions: int = 0
    violations: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), separators=(",", ":"))


def _random_action(rng: random.Random, specs) -> Action:
    spec = rng.choice(specs)
    if spec.min_amount is None:
        return Action(spec.kind)
    return Action(spec.kind, rng.randint(spec.min_amount, spec.max_amount))


def fuzz_matches(
    n_hands: int,
    seed: int,
    starting_stack: int = 100,
    replay_check: bool = False,
) -> FuzzReport:
    """Play random legal actions for n_hands, restarting finished matches."""
    report = FuzzReport(
        hands=n_hands,
        seed=seed,
        starting_stack=starting_stack,
        replay_checked=replay_check,
    )
    rng = random.Random(seed)
    hands_done = 0
    match = None
    expected_total = 2 * starting_stack
    previous_dealer: int | None = None

    while hands_done < n_hands:
        if match is None or match.over:
            match = engine.new_match(
                MatchConfig(
                    starting_stack=starting_stack, rng_seed=rng.randrange(2**63)
                )
            )
            report.matches_played += 1
            previous_dealer = None

        hand = engine.start_hand(match)
        if previous_dealer is not None and hand.dealer_seat == previous_dealer:
            report.violations.append(
                f"hand {hands_done + 1}: dealer did not alternate"
            )
        previous_dealer = hand.dealer_seat

        ran_out = False
        while True:
            while hand.terminal is None:
                specs = engine.legal_actions(hand)
                if not specs:
                    report.violations.append(
                        f"hand {hands_done + 1}: empty legal set"
                    )
                    break
                hand = engine.apply_action(hand, hand.to_act, _random_action(rng, specs))
                if hand.chips_on_table != expected_total:
                    report.violations.append(
                        f"hand {hands_done + 1}: conservation broken mid-hand "
                        f"({hand.chips_on_table} != {expected_total})"
                    )
            if hand.terminal.is_advance:
                hand = engine.advance_street(hand)
                if hand.terminal is not None and hand.terminal.is_end_hand:
                    ran_out = True  # board completed with no further action
            else:
                break

        terminal_hand = hand
        if hand.terminal.reason is engine.EndReason.FOLD:
            hand, settlement = engine.settle(hand, FoldWin(hand.terminal.fold_winner))
            report.fold_wins += 1
        else:
            result = engine.showdown_result(hand)
            hand, settlement = engine.settle(hand, result)
            if settlement.winner == engine.CHOP:
                report.chops += 1
            else:
                report.showdown_wins += 1
        if ran_out:
            report.all_in_runouts += 1

        if sum(hand.stacks) != expected_total:
            report.violations.append(
                f"hand {hands_done + 1}: conservation broken at settle "
                f"({sum(hand.stacks)} != {expected_total})"
            )
        if settlement.net_delta[0] + settlement.net_delta[1] != 0:
            report.violations.append(
                f"hand {hands_done + 1}: settlement deltas do not cancel"
            )
        report.max_hand_actions = max(
            report.max_hand_actions, len(terminal_hand.hand_history)
        )

        if replay_check:
            from .canonical import full_hand_hash

            replayed = engine.replay_hand(match, terminal_hand.hand_history)
            if full_hand_hash(replayed) != full_hand_hash(terminal_hand):
                report.violations.append(
                    f"hand {hands_done + 1}: replay hash diverged"
                )

        match = engine.finish_hand(match, hand)
        hands_done += 1

    return report


# ---------------------------------------------------------------------------
# Channel simulation and convergence


@dataclass(frozen=True)
class ChannelModel:
    """Adversarial but lossless delivery: delay, duplication, reordering."""

    dup_probability: float = 0.0
    reorder_window: int = 0
    min_delay: int = 0
    seed: int = 0


class SimChannel:
    """Priority-queue delivery schedule; deterministic given the model seed."""

    def __init__(self, model: ChannelModel, salt: int):
        self.model = model
        self.rng = random.Random((model.seed, salt).__repr__())
        self.queue: list[tuple[int, int, dict]] = []
        self.clock = 0
        self.counter = 0
        self.dups_scheduled = 0

    def _delay(self) -> int:
        return self.model.min_delay + self.rng.randint(0, self.model.reorder_window)

    def send(self, frame: dict) -> None:
        self.clock += 1
        heapq.heappush(self.queue, (self.clock + self._delay(), self.counter, frame))
        self.counter += 1
        if self.rng.random() < self.model.dup_probability:
            self.dups_scheduled += 1
            heapq.heappush(
                self.queue, (self.clock + self._delay(), self.counter, frame)
            )
            self.counter += 1

    def deliver_due(self) -> list[dict]:
        """Frames whose delivery tick has passed the channel clock."""
        out = []
        while self.queue and self.queue[0][0] <= self.clock:
            out.append(heapq.heappop(self.queue)[2])
        return out

    def drain(self) -> list[dict]:
        out = []
        while self.queue:
            out.append(heapq.heappop(self.queue)[2])
        return out


@dataclass
class ConvergenceReport:
    hands: int
    seed: int
    dup_probability: float
    reorder_window: int
    forced_gap: bool
    sessions: int = 0
    events_emitted: int = 0
    frames_delivered: int = 0
    duplicates_scheduled: int = 0
    snapshots_recovered: int = 0
    converged: bool = False
    host_hash: str = ""
    replica_hashes: list[str] = field(default_factory=list)
    violations: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), separators=(",", ":"))


class _SessionSim:
    """One host + two replicas over two simulated channels."""

    def __init__(
        self,
        channel: ChannelModel,
        rng: random.Random,
        report: ConvergenceReport,
        starting_stack: int,
        stall_limit: int,
        gap_target: int | None,
    ):
        self.report = report
        self.gap_target = gap_target
        self.host = HostSession(
            MatchConfig(starting_stack=starting_stack, rng_seed=rng.randrange(2**63))
        )
        self.replicas = [
            Replica(0, stall_limit=stall_limit),
            Replica(1, stall_limit=stall_limit),
        ]
        self.channels = [SimChannel(channel, salt=seat) for seat in (0, 1)]
        for seat in (0, 1):
            self.replicas[seat].snapshot_recover(self.host.snapshot_for(seat))

    def push_events(self, events) -> None:
        self.report.events_emitted += len(events)
        for event in events:
            for seat in (0, 1):
                if seat == 0 and event.seq == self.gap_target:
                    continue  # permanently lost: beyond the channel's contract
                self.channels[seat].send({"event": event_wire(event, seat)})

    def _consume(self, seat: int, frame: dict) -> None:
        self.report.frames_delivered += 1
        if "event" in frame:
            self.replicas[seat].ingest(frame["event"])
            return
        try:
            self.replicas[seat].snapshot_recover(frame["snapshot"])
            self.report.snapshots_recovered += 1
        except (StaleSnapshot,):
            pass  # overtaken by newer state; harmless

    def pump(self) -> None:
        for seat in (0, 1):
            for frame in self.channels[seat].deliver_due():
                self._consume(seat, frame)
            if self.replicas[seat].needs_snapshot:
                self.replicas[seat].needs_snapshot = False
                self.channels[seat].send({"snapshot": self.host.snapshot_for(seat)})

    def quiesce(self) -> None:
        """Deliver the backlog, then service any snapshot requests it raised."""
        for _ in range(4):
            for seat in (0, 1):
                for frame in self.channels[seat].drain():
                    self._consume(seat, frame)
                if (
                    self.replicas[seat].needs_snapshot
                    or self.replicas[seat].seq < self.host.seq
                ):
                    self.replicas[seat].needs_snapshot = False
                    self.channels[seat].send(
                        {"snapshot": self.host.snapshot_for(seat)}
                    )

    def finalize(self, label: str) -> None:
        self.quiesce()
        self.report.duplicates_scheduled += sum(
            c.dups_scheduled for c in self.channels
        )
        host_hash = self.host.state_hash()
        self.report.host_hash = host_hash
        self.report.replica_hashes = [r.state_hash() for r in self.replicas]
        for seat in (0, 1):
            if self.report.replica_hashes[seat] != host_hash:
                self.report.violations.append(
                    f"{label}: replica {seat} hash mismatch at quiescence"
                )
            if self.replicas[seat].seq != self.host.seq:
                self.report.violations.append(
                    f"{label}: replica {seat} at seq "
                    f"{self.replicas[seat].seq} != {self.host.seq}"
                )


def converge_test(
    channel: ChannelModel,
    n_hands: int = 50,
    seed: int = 0,
    starting_stack: int = 200,
    forced_gap: bool = False,
    stall_limit: int = 32,
) -> ConvergenceReport:
    """Host plays scripted random hands; replicas follow over the channel.

    A match that ends (one stack at zero) is replaced by a fresh session so
    the run always covers n_hands; convergence is verified at each session's
    quiescence, and any mismatch is a violation.
    """
    report = ConvergenceReport(
        hands=n_hands,
        seed=seed,
        dup_probability=channel.dup_probability,
        reorder_window=channel.reorder_window,
        forced_gap=forced_gap,
    )
    rng = random.Random(seed)
    hands_done = 0
    request_counter = 0
    gap_pending = forced_gap

    while hands_done < n_hands:
        report.sessions += 1
        gap_target = rng.randint(2, 20) if gap_pending else None
        gap_pending = False
        sim = _SessionSim(channel, rng, report, starting_stack, stall_limit, gap_target)

        while hands_done < n_hands and not sim.host.match_over:
            request_counter += 1
            result = sim.host.host_apply(
                ClientRequest("start_hand", 0, f"sim-start-{request_counter}")
            )
            if isinstance(result, Reject):
                report.violations.append(f"start_hand rejected: {result.reason}")
                return report
            sim.push_events(result)
            sim.pump()
            while sim.host.hand_in_progress and sim.host.hand.terminal is None:
                seat = sim.host.hand.to_act
                action = _random_action(rng, engine.legal_actions(sim.host.hand))
                request_counter += 1
                outcome = sim.host.host_apply(
                    ClientRequest(
                        "action", seat, f"sim-act-{request_counter}", action=action
                    )
                )
                if isinstance(outcome, Reject):
                    report.violations.append(
                        f"scripted action rejected: {outcome.reason}"
                    )
                    return report
                sim.push_events(outcome)
                sim.pump()
            hands_done += 1

        sim.finalize(f"session {report.sessions}")

    report.converged = not any("mismatch" in v or "seq" in v for v in report.violations)
    return report
