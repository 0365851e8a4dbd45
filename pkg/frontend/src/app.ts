import { ApiClient, ApiError } from "./api.js";
import type { Task } from "./types.js";
import { renderAllDone, renderTask } from "./views.js";

/** Session controller: token login, task progression, submission.
 *
 * All state transitions go through the server; a reload reconstructs the
 * same view from GET endpoints. Drafts live only in the DOM.
 */
export class App {
  private client: ApiClient | null = null;
  private current: Task | null = null;

  constructor(
    private readonly mount: HTMLElement,
    private readonly progressMount: HTMLElement,
    private readonly makeClient: (token: string) => ApiClient = (token) => new ApiClient(token),
  ) {}

  async login(token: string): Promise<void> {
    const client = this.makeClient(token.trim());
    await client.progress(); // validates the token before entering the queue
    this.client = client;
    await this.loadNext();
  }

  async loadNext(): Promise<void> {
    if (!this.client) throw new Error("not logged in");
    this.current = await this.client.nextTask();
    await this.refreshProgress();
    this.render();
  }

  private async refreshProgress(): Promise<void> {
    if (!this.client) return;
    const progress = await this.client.progress();
    this.progressMount.textContent = `${progress.done} of ${progress.total} tasks done`;
  }

  private render(): void {
    this.mount.replaceChildren();
    if (this.current === null) {
      this.mount.appendChild(renderAllDone());
      return;
    }
    const task = this.current;
    const view = renderTask(task, {
      preference: async (vote) => {
        await this.submit(() => this.client!.submitPreference(task.task_id, vote));
      },
      qa: async (answers) => {
        await this.submit(() => this.client!.submitQaAnswers(task.task_id, answers));
      },
      review: async (labels) => {
        await this.submit(() => this.client!.submitReview(task.task_id, labels));
      },
    });
    this.mount.appendChild(view);
  }

  private async submit(send: () => Promise<void>): Promise<void> {
    try {
      await send();
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        // someone already closed this task; re-sync with the server
        await this.loadNext();
        throw new Error(`conflict: ${err.message}`);
      }
      throw err;
    }
    await this.loadNext();
  }
}
