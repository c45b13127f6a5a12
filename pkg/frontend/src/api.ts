import type {
  OpName,
  PointIn,
  SessionConfig,
  WireFrame,
  WireLeafPoint,
  WireSummary,
} from "./types.js";

/** Error carrying the server's machine-readable code (e.g. "EmptyStack"). */
export class ApiError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(code: string, message: string, status: number) {
    super(message);
    this.code = code;
    this.status = status;
  }
}

async function unwrap<T>(response: Response): Promise<T> {
  if (response.ok) {
    return (await response.json()) as T;
  }
  let code = "HttpError";
  let message = `${response.status}`;
  try {
    const body = (await response.json()) as { error?: { code: string; message: string } };
    if (body.error) {
      code = body.error.code;
      message = body.error.message;
    }
  } catch {
    /* non-JSON error body */
  }
  throw new ApiError(code, message, response.status);
}

/** Thin typed client over the exploration endpoints. */
export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.fetchImpl(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    }).then((r) => unwrap<T>(r));
  }

  private get<T>(path: string): Promise<T> {
    return this.fetchImpl(`${this.baseUrl}${path}`).then((r) => unwrap<T>(r));
  }

  ingestDataset(points: PointIn[]): Promise<{ dataset_id: string; n: number }> {
    return this.post("/datasets", { points });
  }

  createSession(
    datasetId: string,
    config: SessionConfig,
  ): Promise<{ session_id: string; frame: WireFrame }> {
    return this.post("/sessions", { dataset_id: datasetId, ...config });
  }

  applyOp(
    sessionId: string,
    op: OpName,
    target?: number,
    level?: number,
  ): Promise<{ frame: WireFrame }> {
    return this.post(`/sessions/${sessionId}/ops`, { op, target, level });
  }

  getFrame(sessionId: string): Promise<{ frame: WireFrame }> {
    return this.get(`/sessions/${sessionId}/frame`);
  }

  getSummary(tree: string, node: number): Promise<{ node: string; summary: WireSummary }> {
    return this.get(`/nodes/${tree}:${node}/summary`);
  }

  getLeafPoints(
    tree: string,
    node: number,
  ): Promise<{ node: string; points: WireLeafPoint[]; converged: boolean }> {
    return this.get(`/nodes/${tree}:${node}/leaf-points`);
  }
}
