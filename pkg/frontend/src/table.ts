// Client-side table state: a pure reducer over server frames.
//
// The client holds no rules logic. Buttons mirror the server's legal-action
// list verbatim; chip counts come from the last applied frame, never from
// local prediction. The reducer also enforces the privacy contract: a frame
// carrying the opponent's hole cards before a showdown settlement is a
// protocol violation and throws.

import type {
  ActionKind,
  ActionSpec,
  HandDoc,
  RejectFrame,
  ServerFrame,
  View,
} from "./protocol.js";

export class HoleCardLeak extends Error {}

export interface TableState {
  seat: number | null;
  code: string | null;
  view: View | null;
  lastSeq: number;
  pendingRequestId: string | null; // action panel locked while set
  needsSnapshot: boolean;
  banner: string | null;
  lastReject: RejectFrame | null;
}

export const initialTableState: TableState = {
  seat: null,
  code: null,
  view: null,
  lastSeq: 0,
  pendingRequestId: null,
  needsSnapshot: false,
  banner: null,
  lastReject: null,
};

function assertHandPrivate(hand: HandDoc | null | undefined, seat: number): void {
  if (!hand || !hand.hole_cards) return;
  const revealed = hand.settlement !== null && hand.settlement?.reason === "showdown";
  const opponent = hand.hole_cards[1 - seat];
  if (opponent && !revealed) {
    throw new HoleCardLeak(
      `frame carries opponent hole cards before showdown (seat ${seat})`
    );
  }
}

export function assertFramePrivate(frame: ServerFrame, seat: number): void {
  if ("view" in frame && frame.view) {
    assertHandPrivate(frame.view.hand, seat);
  }
  if ("snapshot" in frame && frame.snapshot) {
    assertHandPrivate(frame.snapshot.hand, seat);
  }
  if (frame.type === "event" && frame.kind === "hand_started") {
    assertHandPrivate(frame.payload["hand"] as HandDoc, seat);
  }
}

export function applyFrame(state: TableState, frame: ServerFrame): TableState {
  const next: TableState = { ...state, lastReject: null };
  if (state.seat !== null) {
    assertFramePrivate(frame, state.seat);
  }

  switch (frame.type) {
    case "created":
    case "joined":
      if (state.seat === null) {
        assertFramePrivate(frame, frame.seat);
      }
      next.seat = frame.seat;
      next.code = frame.code;
      next.view = frame.view;
      next.lastSeq = frame.snapshot.seq;
      next.needsSnapshot = false;
      next.banner = null;
      return next;

    case "snapshot":
      next.view = frame.view;
      next.lastSeq = frame.snapshot.seq;
      next.needsSnapshot = false;
      next.banner = null;
      return next;

    case "event": {
      if (frame.seq <= state.lastSeq) {
        return state; // duplicate delivery
      }
      if (frame.seq > state.lastSeq + 1) {
        // a gap on an ordered transport means we missed something: resync
        next.needsSnapshot = true;
        next.banner = "resyncing";
        return next;
      }
      next.lastSeq = frame.seq;
      if (frame.view) {
        next.view = frame.view;
        next.pendingRequestId = null; // cascade finished: panel unlocks
      }
      if (frame.kind === "winner_declared" && frame.payload["status"] === "mismatch") {
        next.banner = "declarations did not match; declare again";
      }
      if (frame.kind === "hand_settled") {
        next.banner = null;
      }
      return next;
    }

    case "reject":
      next.lastReject = frame;
      next.pendingRequestId = null;
      next.banner = `rejected: ${frame.reason}`;
      if (frame.reason === "stale_seq") {
        next.needsSnapshot = true;
      }
      return next;

    case "pong":
      return state;
  }
}

// -- derived models the renderer binds to ------------------------------------

export const BUTTON_ORDER: ActionKind[] = ["check", "call", "bet", "raise", "fold"];

export interface ButtonModel {
  kind: ActionKind;
  enabled: boolean;
  min: number | null;
  max: number | null;
}

export function buttonPanel(state: TableState): ButtonModel[] {
  const view = state.view;
  const live =
    view !== null &&
    view.your_turn &&
    view.legal_actions !== null &&
    state.pendingRequestId === null;
  const specs = new Map<string, ActionSpec>();
  if (live && view.legal_actions) {
    for (const spec of view.legal_actions) {
      specs.set(spec.kind, spec);
    }
  }
  return BUTTON_ORDER.map((kind) => {
    const spec = specs.get(kind);
    return {
      kind,
      enabled: spec !== undefined,
      min: spec?.min_amount ?? null,
      max: spec?.max_amount ?? null,
    };
  });
}

export function enabledKinds(state: TableState): ActionKind[] {
  return buttonPanel(state)
    .filter((b) => b.enabled)
    .map((b) => b.kind);
}

export function wagerBounds(state: TableState): { min: number; max: number } | null {
  const wager = buttonPanel(state).find(
    (b) => b.enabled && (b.kind === "bet" || b.kind === "raise")
  );
  if (!wager || wager.min === null || wager.max === null) return null;
  return { min: wager.min, max: wager.max };
}

export function validWagerAmount(state: TableState, amount: number): boolean {
  const bounds = wagerBounds(state);
  if (!bounds || !Number.isInteger(amount)) return false;
  return amount >= bounds.min && amount <= bounds.max;
}

export function declarationNeeded(state: TableState): boolean {
  const view = state.view;
  if (!view || !view.awaiting_declaration || state.seat === null) return false;
  return !(String(state.seat) in view.declared);
}

export function lockPanel(state: TableState, requestId: string): TableState {
  return { ...state, pendingRequestId: requestId };
}
