// DOM rendering: binds TableState to the static markup in index.html.

import type { HandDoc, View } from "./protocol.js";
import { BUTTON_ORDER, ButtonModel, TableState, buttonPanel, wagerBounds } from "./table.js";

const SUIT_GLYPHS: Record<string, string> = { c: "♣", d: "♦", h: "♥", s: "♠" };

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
}

function cardNode(code: string): HTMLElement {
  const node = document.createElement("span");
  const suit = code[1] ?? "";
  node.className = `card suit-${suit}`;
  node.textContent = `${code[0]}${SUIT_GLYPHS[suit] ?? suit}`;
  return node;
}

function renderCards(target: HTMLElement, codes: string[] | null | undefined): void {
  target.replaceChildren();
  if (!codes || codes.length === 0) {
    const hint = document.createElement("span");
    hint.className = "muted";
    hint.textContent = "—";
    target.appendChild(hint);
    return;
  }
  for (const code of codes) target.appendChild(cardNode(code));
}

function renderChipStack(target: HTMLElement, amount: number): void {
  // 2D stand-in for chip stacks: one notch per chip, capped, count above.
  target.replaceChildren();
  const count = document.createElement("div");
  count.className = "chip-count";
  count.textContent = String(amount);
  const stack = document.createElement("div");
  stack.className = "chip-stack";
  const notches = Math.min(12, Math.max(amount > 0 ? 1 : 0, Math.round(Math.log2(amount + 1) * 2)));
  for (let i = 0; i < notches; i++) {
    stack.appendChild(document.createElement("i"));
  }
  target.append(count, stack);
}

function seatName(view: View, seat: number): string {
  return view.names[String(seat)] ?? `seat ${seat}`;
}

function renderAnnotations(view: View, hand: HandDoc | null): void {
  const a = hand?.annotations;
  const rows: [string, string][] = [
    ["hands played", a ? String(a.hands_played) : "0"],
    ["current round", a ? a.current_round : "—"],
    ["current dealer", a ? seatName(view, a.current_dealer) : "—"],
    ["previous action", a?.previous_action ?? "—"],
    ["amount to call", a ? String(a.amount_to_call) : "—"],
    [
      "waiting",
      a?.waiting_for === null || a === undefined
        ? "—"
        : `waiting for ${seatName(view, a!.waiting_for!)}`,
    ],
  ];
  const list = el("annotations");
  list.replaceChildren();
  for (const [label, value] of rows) {
    const item = document.createElement("li");
    item.innerHTML = `<span>${label}</span><strong></strong>`;
    (item.querySelector("strong") as HTMLElement).textContent = value;
    list.appendChild(item);
  }
}

function renderButtons(state: TableState): void {
  const models = new Map(buttonPanel(state).map((b) => [b.kind, b] as [string, ButtonModel]));
  for (const kind of BUTTON_ORDER) {
    const button = el(`btn-${kind}`) as HTMLButtonElement;
    const model = models.get(kind)!;
    button.disabled = !model.enabled;
    if ((kind === "bet" || kind === "raise") && model.enabled) {
      button.title = `${model.min}..${model.max}`;
    } else {
      button.title = "";
    }
  }
  const bounds = wagerBounds(state);
  const amount = el("amount") as HTMLInputElement;
  const minButton = el("btn-min") as HTMLButtonElement;
  const allinButton = el("btn-allin") as HTMLButtonElement;
  amount.disabled = minButton.disabled = allinButton.disabled = bounds === null;
  if (bounds) {
    amount.min = String(bounds.min);
    amount.max = String(bounds.max);
    amount.placeholder = `${bounds.min}..${bounds.max}`;
  } else {
    amount.value = "";
    amount.placeholder = "";
  }
}

function renderDeclarations(state: TableState): void {
  const view = state.view!;
  const panel = el("declare-panel");
  panel.hidden = !view.awaiting_declaration;
  if (!view.awaiting_declaration) return;
  const mine = state.seat !== null && String(state.seat) in view.declared;
  el("declare-status").textContent = mine
    ? "declaration recorded; waiting for the other player"
    : "pick the winner (both players must agree)";
  for (const button of panel.querySelectorAll("button")) {
    (button as HTMLButtonElement).disabled = mine;
  }
}

export function render(state: TableState): void {
  const lobby = el("lobby");
  const table = el("table");
  if (!state.view) {
    lobby.hidden = false;
    table.hidden = true;
    return;
  }
  lobby.hidden = true;
  table.hidden = false;

  const view = state.view;
  const hand = view.hand;
  el("session-code").textContent = view.session_code;
  el("phase").textContent = view.match_over ? "match over" : view.phase.replaceAll("_", " ");
  el("banner").textContent = state.banner ?? "";
  (el("banner")).hidden = !state.banner;

  const stacks = hand ? hand.stacks : view.match.stacks;
  const committed = hand ? hand.committed : [0, 0];
  for (const seat of [0, 1]) {
    const suffix = seat === state.seat ? " (you)" : "";
    el(`name-${seat}`).textContent = seatName(view, seat) + suffix;
    renderChipStack(el(`stack-${seat}`), stacks[seat] ?? 0);
    el(`committed-${seat}`).textContent =
      committed[seat] ? `in front: ${committed[seat]}` : "";
    el(`seat-${seat}`).classList.toggle(
      "to-act",
      hand !== null && hand.to_act === seat
    );
    el(`seat-${seat}`).classList.toggle("dealer", hand !== null && hand.dealer_seat === seat);
  }
  renderChipStack(el("pot"), hand ? hand.pot : 0);
  renderCards(el("board"), hand?.board ?? null);
  const myHole =
    state.seat !== null && hand?.hole_cards ? hand.hole_cards[state.seat] : null;
  renderCards(el("hole"), myHole);
  el("hole-label").textContent =
    hand?.deck_mode === "physical" ? "your cards are on the table" : "your cards";

  renderAnnotations(view, hand);
  renderButtons(state);
  renderDeclarations(state);

  const showStart =
    !view.match_over && (hand === null || hand.settlement !== null);
  (el("btn-start") as HTMLButtonElement).hidden = !showStart;

  const settlement = hand?.settlement;
  if (settlement) {
    const who =
      settlement.winner === "chop"
        ? "split pot"
        : `${seatName(view, settlement.winner as number)} wins`;
    el("banner").hidden = false;
    el("banner").textContent =
      `${who} (${settlement.reason}) — stacks ${view.match.stacks.join(" / ")}`;
  }
}
