import type { Progress, Task } from "./types.js";

/** Error carrying the server's verbatim message and HTTP status. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

async function parse<T>(response: Response): Promise<T> {
  const body = (await response.json().catch(() => ({}))) as Record<string, unknown>;
  if (!response.ok) {
    const message = typeof body.error === "string" ? body.error : response.statusText;
    throw new ApiError(response.status, message);
  }
  return body as T;
}

/** Thin typed client over the annotation service HTTP API. */
export class ApiClient {
  constructor(
    private readonly token: string,
    private readonly base: string = "",
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private url(path: string): string {
    return `${this.base}${path}?token=${encodeURIComponent(this.token)}`;
  }

  async nextTask(): Promise<Task | null> {
    const body = await parse<{ task: Task | null }>(
      await this.fetchFn(this.url("/api/tasks/next")),
    );
    return body.task;
  }

  async getTask(taskId: string): Promise<Task> {
    const body = await parse<{ task: Task }>(
      await this.fetchFn(this.url(`/api/tasks/${taskId}`)),
    );
    return body.task;
  }

  async progress(): Promise<Progress> {
    return parse<Progress>(await this.fetchFn(this.url("/api/progress")));
  }

  private async post(path: string, payload: unknown): Promise<void> {
    await parse(
      await this.fetchFn(this.url(path), {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(payload),
      }),
    );
  }

  submitPreference(taskId: string, vote: 1 | 2): Promise<void> {
    return this.post(`/api/tasks/${taskId}/preference`, { vote });
  }

  submitQaAnswers(taskId: string, answers: Record<string, string>): Promise<void> {
    return this.post(`/api/tasks/${taskId}/qa_answers`, { answers });
  }

  submitReview(taskId: string, labels: Record<string, string>): Promise<void> {
    return this.post(`/api/tasks/${taskId}/review`, { labels });
  }
}
