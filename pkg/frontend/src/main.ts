// Bootstrap: lobby form, websocket lifecycle, frame loop.

import { ClientFrame, ServerFrame, freshRequestId } from "./protocol.js";
import {
  TableState,
  applyFrame,
  initialTableState,
  lockPanel,
  validWagerAmount,
  wagerBounds,
} from "./table.js";
import { render } from "./render.js";

const HEARTBEAT_MS = 5000;

let state: TableState = initialTableState;
let socket: WebSocket | null = null;
let heartbeat: number | undefined;

function wsUrl(): string {
  const scheme = location.protocol === "https:" ? "wss" : "ws";
  return `${scheme}://${location.host}/ws`;
}

function send(frame: ClientFrame): void {
  if (socket && socket.readyState === WebSocket.OPEN) {
    socket.send(JSON.stringify(frame));
  }
}

function update(next: TableState): void {
  state = next;
  if (state.needsSnapshot) {
    send({ type: "snapshot_request" });
    state = { ...state, needsSnapshot: false, banner: state.banner ?? "resyncing" };
  }
  render(state);
}

function connect(hello: ClientFrame): void {
  socket = new WebSocket(wsUrl());
  socket.onopen = () => {
    send(hello);
    heartbeat = window.setInterval(() => send({ type: "ping" }), HEARTBEAT_MS);
  };
  socket.onmessage = (message) => {
    const frame = JSON.parse(message.data) as ServerFrame;
    try {
      update(applyFrame(state, frame));
    } catch (error) {
      update({ ...state, banner: String(error) });
    }
  };
  socket.onclose = () => {
    window.clearInterval(heartbeat);
    if (state.view) {
      update({ ...state, banner: "connection lost — rejoin with the same name" });
    }
  };
}

function sendAction(kind: "check" | "call" | "bet" | "raise" | "fold"): void {
  if (state.pendingRequestId) return;
  const frame: ClientFrame = { type: "action", kind, request_id: freshRequestId() };
  if (kind === "bet" || kind === "raise") {
    const input = document.getElementById("amount") as HTMLInputElement;
    const amount = Number(input.value);
    if (!validWagerAmount(state, amount)) {
      const bounds = wagerBounds(state);
      update({
        ...state,
        banner: bounds
          ? `amount must be a whole number in ${bounds.min}..${bounds.max}`
          : "no wager is available",
      });
      return;
    }
    frame.amount = amount;
  }
  update(lockPanel(state, frame.request_id));
  send(frame);
}

function wire(): void {
  const byId = (id: string) => document.getElementById(id) as HTMLElement;

  byId("create-form").addEventListener("submit", (submit) => {
    submit.preventDefault();
    const name = (byId("create-name") as HTMLInputElement).value.trim() || "player";
    connect({
      type: "create",
      name,
      config: {
        starting_stack: Number((byId("create-stack") as HTMLInputElement).value) || 100,
        small_blind: Number((byId("create-sb") as HTMLInputElement).value) || 1,
        big_blind: Number((byId("create-bb") as HTMLInputElement).value) || 2,
        deck_mode: (byId("create-deck") as HTMLSelectElement).value,
      },
    });
  });

  byId("join-form").addEventListener("submit", (submit) => {
    submit.preventDefault();
    const code = (byId("join-code") as HTMLInputElement).value.trim().toUpperCase();
    const name = (byId("join-name") as HTMLInputElement).value.trim() || "player";
    if (code.length === 6) connect({ type: "join", code, name });
  });

  for (const kind of ["check", "call", "bet", "raise", "fold"] as const) {
    byId(`btn-${kind}`).addEventListener("click", () => sendAction(kind));
  }
  byId("btn-min").addEventListener("click", () => {
    const bounds = wagerBounds(state);
    if (bounds) (byId("amount") as HTMLInputElement).value = String(bounds.min);
  });
  byId("btn-allin").addEventListener("click", () => {
    const bounds = wagerBounds(state);
    if (bounds) (byId("amount") as HTMLInputElement).value = String(bounds.max);
  });
  byId("btn-start").addEventListener("click", () => {
    send({ type: "start_hand", request_id: freshRequestId() });
  });
  for (const choice of ["0", "1", "chop"] as const) {
    byId(`declare-${choice}`).addEventListener("click", () => {
      const winner = choice === "chop" ? "chop" : Number(choice);
      send({ type: "declare_winner", winner, request_id: freshRequestId() });
    });
  }
  render(state);
}

wire();
