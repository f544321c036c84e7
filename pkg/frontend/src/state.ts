// Client-side game state: a pure projection of the last server payload plus
// the pending flag. One in-flight request at a time; a submit while a
// selection awaits confirmation is rejected locally.

import { ApiError, GameApi, SceneView, Score } from "./api.js";

export type Phase = "idle" | "ready" | "busy" | "pending" | "complete";

export interface TranscriptLine {
  index: number;
  utterance: string;
  chosen: number | null;
  outcome: "correct" | "rejected";
}

export interface UiState {
  phase: Phase;
  sessionId: string | null;
  seed: number | null;
  view: SceneView | null;
  score: Score;
  highlighted: number | null;
  consistency: string | null;
  transcript: TranscriptLine[];
  error: string | null;
}

export class GameClient {
  readonly state: UiState = {
    phase: "idle",
    sessionId: null,
    seed: null,
    view: null,
    score: { correct: 0, attempts: 0 },
    highlighted: null,
    consistency: null,
    transcript: [],
    error: null,
  };

  private initialView: SceneView | null = null;
  private pendingUtterance: string | null = null;

  constructor(private readonly api: GameApi) {}

  async start(seed?: number, nObjects?: number): Promise<void> {
    this.requirePhase("idle", "ready", "complete");
    this.state.phase = "busy";
    try {
      const created = await this.api.createSession(seed, nObjects);
      this.state.sessionId = created.id;
      this.state.seed = created.seed;
      this.state.view = created.scene;
      this.initialView = created.scene;
      this.state.score = created.score;
      this.state.highlighted = null;
      this.state.consistency = null;
      this.state.transcript = [];
      this.state.error = null;
      this.state.phase = "ready";
    } catch (err) {
      this.state.phase = "idle";
      this.fail(err);
    }
  }

  async submit(utterance: string): Promise<void> {
    this.requirePhase("ready");
    if (!utterance.trim()) {
      throw new Error("utterance is empty");
    }
    this.state.phase = "busy";
    try {
      const resolution = await this.api.submitUtterance(this.sessionId(), utterance);
      this.pendingUtterance = utterance;
      this.state.highlighted = resolution.chosen;
      this.state.consistency = resolution.consistency;
      this.state.error = null;
      this.state.phase = "pending";
    } catch (err) {
      this.state.phase = "ready";
      this.fail(err);
    }
  }

  async confirm(correct: boolean): Promise<void> {
    this.requirePhase("pending");
    this.state.phase = "busy";
    try {
      const result = await this.api.confirm(this.sessionId(), correct);
      this.state.transcript.push({
        index: this.state.transcript.length,
        utterance: this.pendingUtterance ?? "",
        chosen: this.state.highlighted,
        outcome: result.outcome,
      });
      this.pendingUtterance = null;
      this.state.view = result.scene;
      this.state.score = result.score;
      this.state.highlighted = null;
      this.state.consistency = null;
      this.state.error = null;
      this.state.phase = result.scene.remaining === 0 ? "complete" : "ready";
    } catch (err) {
      this.state.phase = "pending";
      this.fail(err);
    }
  }

  reject(): Promise<void> {
    return this.confirm(false);
  }

  async refresh(): Promise<void> {
    const current = await this.api.getScene(this.sessionId());
    this.state.view = current.scene;
    this.state.score = current.score;
    if (!current.pending) {
      this.state.highlighted = null;
      this.state.phase = current.scene.remaining === 0 ? "complete" : "ready";
    }
  }

  /** Corpus JSONL of the confirmed turns, replayable by the evaluation CLI. */
  exportCorpus(sessionName = "ui-session"): string {
    if (!this.initialView || this.state.seed === null) {
      return "";
    }
    const scene = sceneDocumentFromView(this.initialView, this.state.seed);
    const lines: string[] = [];
    let index = 0;
    for (const turn of this.state.transcript) {
      if (turn.outcome !== "correct" || turn.chosen === null) {
        continue;
      }
      lines.push(JSON.stringify({
        session: sessionName,
        index,
        scene,
        utterance: turn.utterance,
        target: turn.chosen,
        tags: [],
      }));
      index += 1;
    }
    return lines.join("\n") + (lines.length ? "\n" : "");
  }

  private sessionId(): string {
    if (!this.state.sessionId) {
      throw new Error("no active session");
    }
    return this.state.sessionId;
  }

  private requirePhase(...allowed: Phase[]): void {
    if (!allowed.includes(this.state.phase)) {
      throw new Error(`not allowed while ${this.state.phase}`);
    }
  }

  private fail(err: unknown): void {
    this.state.error = err instanceof ApiError
      ? `${err.code}: ${err.message}`
      : String(err);
  }
}

/**
 * Rebuild the engine's scene document from a view: each cone polygon's
 * vertex mean is exactly the object's pixel centre, so board coordinates
 * recover as mean / (size - 1).
 */
export function sceneDocumentFromView(view: SceneView, seed: number): object {
  const objects = [...view.objects]
    .sort((a, b) => a.id - b.id)
    .map((obj) => {
      const mx = obj.polygon.reduce((s, p) => s + p[0], 0) / obj.polygon.length;
      const my = obj.polygon.reduce((s, p) => s + p[1], 0) / obj.polygon.length;
      return {
        id: obj.id,
        x: clamp01(mx / (view.board.width - 1)),
        y: clamp01(my / (view.board.height - 1)),
        colour: obj.colour,
      };
    });
  return {
    format: "bishop-scene v1",
    seed,
    width: view.board.width,
    height: view.board.height,
    objects,
  };
}

function clamp01(v: number): number {
  return Math.min(1, Math.max(0, Number(v.toFixed(6))));
}
