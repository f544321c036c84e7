// DOM wiring for the live game page.

import { GameApi } from "./api.js";
import { drawScene } from "./render.js";
import { GameClient } from "./state.js";

const SERVICE_URL = (window as any).BISHOP_SERVICE_URL ?? "http://localhost:8000";

const canvas = document.getElementById("board") as HTMLCanvasElement;
const input = document.getElementById("utterance") as HTMLInputElement;
const submitBtn = document.getElementById("submit") as HTMLButtonElement;
const confirmBtn = document.getElementById("confirm") as HTMLButtonElement;
const rejectBtn = document.getElementById("reject") as HTMLButtonElement;
const newGameBtn = document.getElementById("new-game") as HTMLButtonElement;
const exportBtn = document.getElementById("export") as HTMLButtonElement;
const scoreEl = document.getElementById("score") as HTMLSpanElement;
const statusEl = document.getElementById("status") as HTMLSpanElement;
const transcriptEl = document.getElementById("transcript") as HTMLUListElement;

const client = new GameClient(new GameApi(SERVICE_URL));

function sync(): void {
  const s = client.state;
  if (s.view) {
    drawScene(canvas.getContext("2d")!, s.view, s.highlighted);
  }
  scoreEl.textContent = `${s.score.correct} / ${s.score.attempts}`;
  statusEl.textContent = s.error ?? (
    s.phase === "pending"
      ? `picked object ${s.highlighted ?? "none"} (${s.consistency}); confirm?`
      : s.phase === "complete" ? "session complete"
      : s.phase === "busy" ? "thinking" : "describe an object");
  submitBtn.disabled = s.phase !== "ready";
  input.disabled = s.phase !== "ready";
  confirmBtn.disabled = s.phase !== "pending";
  rejectBtn.disabled = s.phase !== "pending";
  transcriptEl.replaceChildren(...s.transcript.map((turn) => {
    const li = document.createElement("li");
    li.textContent = `"${turn.utterance}" -> ${turn.chosen} [${turn.outcome}]`;
    return li;
  }));
}

newGameBtn.addEventListener("click", async () => {
  await client.start();
  sync();
  input.focus();
});

submitBtn.addEventListener("click", async () => {
  if (!input.value.trim()) return;
  await client.submit(input.value);
  sync();
});

input.addEventListener("keydown", async (ev) => {
  if (ev.key === "Enter" && !submitBtn.disabled && input.value.trim()) {
    await client.submit(input.value);
    sync();
  }
});

confirmBtn.addEventListener("click", async () => {
  await client.confirm(true);
  input.value = "";
  sync();
  input.focus();
});

rejectBtn.addEventListener("click", async () => {
  await client.reject();
  input.value = "";
  sync();
  input.focus();
});

exportBtn.addEventListener("click", () => {
  const jsonl = client.exportCorpus();
  const blob = new Blob([jsonl], { type: "application/jsonl" });
  const a = document.createElement("a");
  a.href = URL.createObjectURL(blob);
  a.download = "session-corpus.jsonl";
  a.click();
  URL.revokeObjectURL(a.href);
});

window.addEventListener("resize", sync);
sync();
