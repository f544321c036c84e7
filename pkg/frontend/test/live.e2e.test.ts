// Live loop against a real service instance: a scripted five-turn game ends
// with five objects removed and a 5/5 score; a rejected turn leaves the
// scene untouched.

import { spawn, ChildProcess } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { GameApi } from "../src/api.js";
import { GameClient } from "../src/state.js";

const PORT = 8431;
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;

async function waitForHealth(api: GameApi, attempts = 60): Promise<void> {
  for (let i = 0; i < attempts; i++) {
    try {
      await api.health();
      return;
    } catch {
      await new Promise((r) => setTimeout(r, 500));
    }
  }
  throw new Error("service did not come up");
}

beforeAll(async () => {
  server = spawn(
    "python3",
    ["-m", "uvicorn", "bishop.service:app", "--port", String(PORT),
     "--log-level", "warning"],
    { cwd: new URL("../..", import.meta.url).pathname, stdio: "inherit" },
  );
  await waitForHealth(new GameApi(BASE));
}, 60_000);

afterAll(() => {
  server?.kill();
});

describe("live game loop", () => {
  it("plays five confirmed turns and one rejected turn", async () => {
    const client = new GameClient(new GameApi(BASE));
    await client.start(424242, 12);
    expect(client.state.view?.remaining).toBe(12);

    const utterances = [
      "the leftmost cone",
      "the rightmost green cone",
      "the frontmost cone",
      "the backmost purple cone",
      "the one in the middle",
    ];
    const removed: number[] = [];
    for (const text of utterances) {
      await client.submit(text);
      expect(client.state.phase).toBe("pending");
      expect(client.state.highlighted).not.toBeNull();
      removed.push(client.state.highlighted!);
      await client.confirm(true);
      expect(client.state.error).toBeNull();
      const ids = client.state.view!.objects.map((o) => o.id);
      expect(ids).not.toContain(removed[removed.length - 1]);
    }

    expect(client.state.score).toEqual({ correct: 5, attempts: 5 });
    expect(client.state.view?.remaining).toBe(7);
    expect(new Set(removed).size).toBe(5);

    // a rejected turn: scene identical, attempts up, nothing removed
    const before = JSON.stringify(client.state.view);
    await client.submit("the leftmost purple cone");
    expect(client.state.highlighted).not.toBeNull();
    await client.reject();
    expect(JSON.stringify(client.state.view)).toBe(before);
    expect(client.state.score).toEqual({ correct: 5, attempts: 6 });

    // the exported corpus replays the confirmed turns
    const jsonl = client.exportCorpus("live-e2e");
    expect(jsonl.trim().split("\n")).toHaveLength(5);
  }, 60_000);

  it("keeps sessions isolated and reproducible by seed", async () => {
    const api = new GameApi(BASE);
    const a = await api.createSession(99, 6);
    const b = await api.createSession(99, 6);
    expect(a.id).not.toBe(b.id);
    expect(a.scene).toEqual(b.scene);
  });
});
