from headsup.engine import Street
from headsup.simulation import (
    ChannelModel,
    SimChannel,
    converge_test,
    explore_dfa,
    fuzz_matches,
)


class TestExplore:
    def test_postflop_deep_stacks_terminates_cleanly(self):
        report = explore_dfa(Street.FLOP, (200, 200))
        assert report.violations == []
        assert report.end_hand_terminals > 0
        assert report.advance_terminals > 0
        assert report.states_visited > 10

    def test_preflop_one_blind_stack_collapses(self):
        # cover short both ways: short dealer and short big blind
        report = explore_dfa(Street.PREFLOP, (2, 2))
        assert report.violations == []
        # with 1bb stacks the tree is tiny: fold or call(all-in) style branches
        assert report.states_visited <= 12
        report = explore_dfa(Street.PREFLOP, (200, 2))
        assert report.violations == []

    def test_check_check_is_an_advance_terminal(self):
        report = explore_dfa(Street.TURN, (50, 50))
        assert report.violations == []
        assert report.advance_terminals >= 1

    def test_preflop_standard_stacks(self):
        report = explore_dfa(Street.PREFLOP, (200, 200))
        assert report.violations == []
        assert report.max_sequence_length > 10  # the raise cycle got walked

    def test_reports_are_deterministic(self):
        a = explore_dfa(Street.FLOP, (40, 40)).to_json()
        b = explore_dfa(Street.FLOP, (40, 40)).to_json()
        assert a == b

    def test_postflop_prefix_matches_hand_verification(self):
        # depth <= 2 of the post-flop automaton, worked out by hand for
        # 10-chip stacks and a 2-chip big blind:
        #   start: opponent may check, bet 2 (min) or bet 10 (all-in)
        #   check -> dealer may check (advance), bet 2 or bet 10
        #   bet 2 -> dealer may fold (end), call (advance), raise 4 or 10
        #   bet 10 -> dealer may fold (end) or call (advance); no raise left
        from headsup.engine import Action, ActionKind, apply_action, legal_actions
        from headsup.simulation import _street_start_state

        start = _street_start_state(Street.FLOP, (10, 10), 1, 2)
        opponent = start.to_act
        dealer = 1 - opponent

        def kinds_and_amounts(hand):
            out = []
            for spec in legal_actions(hand):
                if spec.min_amount is None:
                    out.append((spec.kind.value, None, None))
                else:
                    out.append((spec.kind.value, spec.min_amount, spec.max_amount))
            return out

        assert kinds_and_amounts(start) == [("check", None, None), ("bet", 2, 10)]

        checked = apply_action(start, opponent, Action(ActionKind.CHECK))
        assert checked.to_act == dealer
        assert kinds_and_amounts(checked) == [("check", None, None), ("bet", 2, 10)]
        both_checked = apply_action(checked, dealer, Action(ActionKind.CHECK))
        assert both_checked.terminal.is_advance

        min_bet = apply_action(start, opponent, Action(ActionKind.BET, 2))
        assert kinds_and_amounts(min_bet) == [
            ("fold", None, None),
            ("call", None, None),
            ("raise", 4, 10),
        ]
        assert apply_action(min_bet, dealer, Action(ActionKind.FOLD)).terminal.is_end_hand
        assert apply_action(min_bet, dealer, Action(ActionKind.CALL)).terminal.is_advance

        shove = apply_action(start, opponent, Action(ActionKind.BET, 10))
        assert kinds_and_amounts(shove) == [("fold", None, None), ("call", None, None)]
        called = apply_action(shove, dealer, Action(ActionKind.CALL))
        assert called.terminal.is_advance


class TestFuzz:
    def test_small_fuzz_is_clean(self):
        report = fuzz_matches(n_hands=300, seed=123)
        assert report.violations == []
        assert report.fold_wins + report.showdown_wins + report.chops == 300

    def test_replay_check_mode(self):
        report = fuzz_matches(n_hands=60, seed=9, replay_check=True)
        assert report.violations == []
        assert report.replay_checked

    def test_same_seed_byte_identical(self):
        a = fuzz_matches(n_hands=50, seed=77).to_json()
        b = fuzz_matches(n_hands=50, seed=77).to_json()
        assert a == b

    def test_exercises_every_ending(self):
        report = fuzz_matches(n_hands=2000, seed=5)
        assert report.fold_wins > 0
        assert report.showdown_wins > 0
        assert report.chops > 0
        assert report.all_in_runouts > 0


class TestChannel:
    def test_lossless_delivery(self):
        channel = SimChannel(ChannelModel(dup_probability=0.5, reorder_window=3, seed=1), 0)
        frames = [{"n": i} for i in range(100)]
        for f in frames:
            channel.send(f)
        seen = channel.drain()
        assert {f["n"] for f in seen} == set(range(100))
        assert len(seen) >= 100  # duplicates only add

    def test_deterministic_schedule(self):
        def run():
            ch = SimChannel(ChannelModel(dup_probability=0.3, reorder_window=4, seed=9), 1)
            order = []
            for i in range(50):
                ch.send({"n": i})
                order.extend(f["n"] for f in ch.deliver_due())
            order.extend(f["n"] for f in ch.drain())
            return order

        assert run() == run()


class TestConvergence:
    def test_zero_fault_channel_converges(self):
        report = converge_test(ChannelModel(), n_hands=20, seed=3)
        assert report.converged
        assert report.violations == []
        assert report.snapshots_recovered == 0

    def test_duplication_and_reorder_converge(self):
        report = converge_test(
            ChannelModel(dup_probability=0.3, reorder_window=4, seed=2),
            n_hands=40,
            seed=8,
        )
        assert report.converged
        assert report.violations == []
        assert report.duplicates_scheduled > 0

    def test_forced_gap_recovers_via_snapshot(self):
        report = converge_test(
            ChannelModel(dup_probability=0.1, reorder_window=2, seed=4),
            n_hands=30,
            seed=21,
            forced_gap=True,
            stall_limit=8,
        )
        assert report.converged
        assert report.snapshots_recovered >= 1
        assert report.violations == []

    def test_report_determinism(self):
        model = ChannelModel(dup_probability=0.2, reorder_window=3, seed=6)
        a = converge_test(model, n_hands=15, seed=42).to_json()
        b = converge_test(model, n_hands=15, seed=42).to_json()
        assert a == b
