// Typed client for the game service. The UI never computes referents; every
// semantic decision comes back from these endpoints.

export interface SceneObjectView {
  id: number;
  colour: string;
  polygon: [number, number][];
}

export interface SceneView {
  board: { width: number; height: number };
  objects: SceneObjectView[];
  remaining: number;
}

export interface Score {
  correct: number;
  attempts: number;
}

export interface CreateSessionResponse {
  id: string;
  seed: number;
  scene: SceneView;
  score: Score;
}

export interface ResolutionView {
  chosen: number | null;
  consistency: string;
  used_random_tiebreak: boolean;
  candidates: { span: [number, number]; category: string; referents: number[] }[];
}

export interface ConfirmResponse {
  scene: SceneView;
  score: Score;
  outcome: "correct" | "rejected";
}

export class ApiError extends Error {
  constructor(readonly status: number, readonly code: string, message: string) {
    super(message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, {
    headers: { "Content-Type": "application/json" },
    ...init,
  });
  if (!response.ok) {
    let code = "http_error";
    let message = `HTTP ${response.status}`;
    try {
      const body = await response.json();
      if (body?.detail?.code) {
        code = body.detail.code;
        message = body.detail.message ?? message;
      }
    } catch {
      // non-JSON error body: keep the generic message
    }
    throw new ApiError(response.status, code, message);
  }
  return response.json() as Promise<T>;
}

export class GameApi {
  constructor(readonly baseUrl: string) {}

  createSession(seed?: number, nObjects?: number): Promise<CreateSessionResponse> {
    return request(`${this.baseUrl}/sessions`, {
      method: "POST",
      body: JSON.stringify({ seed: seed ?? null, n_objects: nObjects ?? null }),
    });
  }

  getScene(sessionId: string): Promise<{ scene: SceneView; score: Score; pending: boolean }> {
    return request(`${this.baseUrl}/sessions/${sessionId}/scene`);
  }

  submitUtterance(sessionId: string, text: string): Promise<ResolutionView> {
    return request(`${this.baseUrl}/sessions/${sessionId}/utterance`, {
      method: "POST",
      body: JSON.stringify({ text }),
    });
  }

  confirm(sessionId: string, correct: boolean, target?: number): Promise<ConfirmResponse> {
    return request(`${this.baseUrl}/sessions/${sessionId}/confirm`, {
      method: "POST",
      body: JSON.stringify({ correct, target: target ?? null }),
    });
  }

  health(): Promise<{ status: string }> {
    return request(`${this.baseUrl}/healthz`);
  }
}
