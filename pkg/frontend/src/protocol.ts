// Wire types for the session server's JSON frames.

export type ActionKind = "check" | "call" | "bet" | "raise" | "fold";

export interface ActionSpec {
  kind: ActionKind;
  min_amount: number | null;
  max_amount: number | null;
}

export interface Annotations {
  hands_played: number;
  current_round: string;
  current_dealer: number;
  previous_action: string | null;
  amount_to_call: number;
  waiting_for: number | null;
}

export interface Settlement {
  winner: number | "chop";
  reason: string;
  amount_per_seat: number[];
  net_delta: number[];
}

export interface HandDoc {
  hand_number: number;
  dealer_seat: number;
  small_blind: number;
  big_blind: number;
  deck_mode: "digital" | "physical";
  starting_stacks: number[];
  stacks: number[];
  committed: number[];
  pot: number;
  street: string;
  to_act: number | null;
  last_raise_increment: number;
  terminal: { kind: string; reason?: string; fold_winner?: number | null } | null;
  board: string[];
  annotations: Annotations;
  settlement: Settlement | null;
  hole_cards?: (string[] | null)[] | null;
}

export interface MatchDoc {
  starting_stack: number;
  small_blind: number;
  big_blind: number;
  deck_mode: string;
  stacks: number[];
  hand_number: number;
  dealer_seat: number | null;
}

export interface View {
  seat: number;
  phase: string;
  session_code: string;
  names: Record<string, string>;
  match: MatchDoc;
  hand: HandDoc | null;
  your_turn: boolean;
  legal_actions: ActionSpec[] | null;
  awaiting_declaration: boolean;
  declared: Record<string, number | "chop">;
  match_over: boolean;
}

export interface Snapshot {
  seq: number;
  match: MatchDoc;
  hand: HandDoc | null;
  match_over: boolean;
  state_hash: string;
}

export interface EventFrame {
  type: "event";
  seq: number;
  kind: string;
  payload: Record<string, unknown>;
  state_hash: string;
  view?: View;
}

export interface SeatedFrame {
  type: "created" | "joined";
  code: string;
  seat: number;
  snapshot: Snapshot;
  view: View;
}

export interface SnapshotFrame {
  type: "snapshot";
  snapshot: Snapshot;
  view: View;
}

export interface RejectFrame {
  type: "reject";
  reason: string;
  seq: number;
  detail?: string;
}

export interface PongFrame {
  type: "pong";
}

export type ServerFrame =
  | EventFrame
  | SeatedFrame
  | SnapshotFrame
  | RejectFrame
  | PongFrame;

export type ClientFrame =
  | { type: "create"; name: string; config: Record<string, unknown> }
  | { type: "join"; code: string; name: string }
  | { type: "start_hand"; request_id: string }
  | { type: "action"; kind: ActionKind; amount?: number; request_id: string }
  | { type: "declare_winner"; winner: number | "chop"; request_id: string }
  | { type: "snapshot_request" }
  | { type: "ping" };

let requestCounter = 0;

export function freshRequestId(prefix = "web"): string {
  requestCounter += 1;
  return `${prefix}-${Date.now().toString(36)}-${requestCounter}`;
}
