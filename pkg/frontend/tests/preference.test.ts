import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import type { PreferenceTask } from "../src/types.js";
import { renderPreference } from "../src/views.js";
import { MockServer } from "./mock_server.js";

const HIDDEN = {
  method_a: "two_stage",
  method_b: "baseline",
  ordering: "B_first" as const,
  summary_a: "The careful two-part explanation.",
  summary_b: "The generic single-prompt text.",
};

function makeServer() {
  const server = new MockServer();
  server.addAnnotator("tok");
  server.addPreferenceTask("tok", "pref-1", HIDDEN);
  return server;
}

async function serveTask(server: MockServer): Promise<PreferenceTask> {
  const client = new ApiClient("tok", "", server.fetch);
  return (await client.nextTask()) as PreferenceTask;
}

function clickRadio(root: HTMLElement, value: string): void {
  const radio = [...root.querySelectorAll<HTMLInputElement>("input[type=radio]")].find(
    (r) => r.value === value,
  )!;
  radio.checked = true;
  radio.dispatchEvent(new Event("change"));
}

describe("preference view", () => {
  let server: MockServer;

  beforeEach(() => {
    server = makeServer();
    document.body.replaceChildren();
  });

  it("shows both summaries in served order under neutral labels", async () => {
    const task = await serveTask(server);
    const view = renderPreference(task, async () => {});
    document.body.appendChild(view);

    const headings = [...view.querySelectorAll("h3")].map((h) => h.textContent);
    expect(headings).toEqual(["Summary 1", "Summary 2"]);
    const texts = [...view.querySelectorAll(".summary-text")].map((p) => p.textContent);
    // B_first ordering: summary_b is served as summary_1
    expect(texts).toEqual([HIDDEN.summary_b, HIDDEN.summary_a]);
  });

  it("renders no method, variant, or model identifiers", async () => {
    const task = await serveTask(server);
    document.body.appendChild(renderPreference(task, async () => {}));
    const dom = document.body.innerHTML;
    for (const needle of ["two_stage", "baseline", "method", "variant", "model"]) {
      expect(dom).not.toContain(needle);
    }
  });

  it("keeps submit disabled until a choice is made", async () => {
    const task = await serveTask(server);
    const view = renderPreference(task, async () => {});
    document.body.appendChild(view);
    const button = view.querySelector<HTMLButtonElement>("button.submit")!;
    expect(button.disabled).toBe(true);
    clickRadio(view, "2");
    expect(button.disabled).toBe(false);
  });

  it("submits the blinded vote and the server unblinds it correctly", async () => {
    const client = new ApiClient("tok", "", server.fetch);
    const task = (await client.nextTask()) as PreferenceTask;
    const view = renderPreference(task, (vote) => client.submitPreference(task.task_id, vote));
    document.body.appendChild(view);

    clickRadio(view, "2");
    view.querySelector<HTMLButtonElement>("button.submit")!.click();
    await new Promise((resolve) => setTimeout(resolve, 0));

    const recorded = server.recordedVotes.get("pref-1")!;
    expect(recorded.vote).toBe(2);
    // B_first: slot 2 held summary_a, so method_a must win
    expect(recorded.winner).toBe("two_stage");
  });

  it("renders done tasks read-only", async () => {
    const client = new ApiClient("tok", "", server.fetch);
    const open = (await client.nextTask()) as PreferenceTask;
    await client.submitPreference(open.task_id, 1);
    const done = (await client.getTask(open.task_id)) as PreferenceTask;

    const view = renderPreference(done, async () => {
      throw new Error("must not submit");
    });
    document.body.appendChild(view);
    expect(view.querySelector("button.submit")).toBeNull();
    expect(view.querySelector(".done-banner")).not.toBeNull();
    const radios = [...view.querySelectorAll<HTMLInputElement>("input[type=radio]")];
    expect(radios.every((r) => r.disabled)).toBe(true);
    expect(radios.find((r) => r.value === "1")!.checked).toBe(true);
  });

  it("surfaces server validation errors verbatim", async () => {
    const task = await serveTask(server);
    const view = renderPreference(task, async () => {
      throw new Error("vote must be 1 or 2");
    });
    document.body.appendChild(view);
    clickRadio(view, "1");
    view.querySelector<HTMLButtonElement>("button.submit")!.click();
    await new Promise((resolve) => setTimeout(resolve, 0));
    expect(view.querySelector(".error-box")!.textContent).toBe("vote must be 1 or 2");
  });
});
