"""Heads-up no-limit hold'em: rules engine, replicated sessions, and rigs.

The core is a pure, deterministic engine (``headsup.engine``) with a 7-card
evaluator (``headsup.evaluator``). ``headsup.replication`` layers a
host-authoritative event stream with snapshot recovery on top, served to two
browser or terminal clients by ``headsup.service``/``headsup.server``.
``headsup.simulation`` holds the deterministic verification rigs the
acceptance suite runs.
"""

from .cards import Card, card, cards
from .engine import (
    Action,
    ActionKind,
    ActionSpec,
    DeckMode,
    FoldWin,
    DeclaredWinner,
    GameAnnotations,
    HandState,
    MatchConfig,
    MatchState,
    Settlement,
    ShowdownResult,
    Street,
    advance_street,
    apply_action,
    finish_hand,
    legal_actions,
    new_match,
    replay_hand,
    settle,
    showdown_result,
    stack_report,
    start_hand,
)
from .evaluator import HandCategory, HandRank, evaluate5, evaluate7, showdown

__version__ = "0.1.0"

__all__ = [
    "Action",
    "ActionKind",
    "ActionSpec",
    "Card",
    "DeckMode",
    "DeclaredWinner",
    "FoldWin",
    "GameAnnotations",
    "HandCategory",
    "HandRank",
    "HandState",
    "MatchConfig",
    "MatchState",
    "Settlement",
    "ShowdownResult",
    "Street",
    "advance_street",
    "apply_action",
    "card",
    "cards",
    "evaluate5",
    "evaluate7",
    "finish_hand",
    "legal_actions",
    "new_match",
    "replay_hand",
    "settle",
    "showdown",
    "showdown_result",
    "stack_report",
    "start_hand",
    "__version__",
]
