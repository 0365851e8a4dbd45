import type { PreferenceTask, QaTask, ReviewTask, Task } from "./types.js";
import { preferenceReady, qaComplete, reviewComplete } from "./validate.js";

type SubmitHandler<T> = (payload: T) => Promise<void>;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function errorBox(): HTMLElement {
  return el("p", "error-box");
}

function showError(box: HTMLElement, err: unknown): void {
  box.textContent = err instanceof Error ? err.message : String(err);
}

function submitButton(label = "Submit"): HTMLButtonElement {
  const button = el("button", "submit");
  button.type = "button";
  button.textContent = label;
  button.disabled = true;
  return button;
}

function doneBanner(): HTMLElement {
  return el("p", "done-banner", "This task is already submitted and shown read-only.");
}

/** Blinded side-by-side preference vote. */
export function renderPreference(
  task: PreferenceTask,
  onSubmit: SubmitHandler<1 | 2>,
): HTMLElement {
  const root = el("section", "task preference-task");
  root.appendChild(el("h2", undefined, "Which summary is more useful?"));
  root.appendChild(
    el(
      "p",
      "instructions",
      "Read both summaries, then pick the one you find more useful as a lay reader.",
    ),
  );

  let vote: 1 | 2 | null = task.status === "done" ? (task.vote ?? null) : null;
  const button = submitButton("Submit preference");
  const error = errorBox();

  const pair = el("div", "summary-pair");
  for (const slot of [1, 2] as const) {
    const card = el("article", "summary-card");
    card.appendChild(el("h3", undefined, `Summary ${slot}`));
    card.appendChild(el("p", "summary-text", slot === 1 ? task.summary_1 : task.summary_2));
    const choose = el("label", "choice");
    const radio = el("input");
    radio.type = "radio";
    radio.name = `choice-${task.task_id}`;
    radio.value = String(slot);
    radio.disabled = task.status === "done";
    radio.checked = vote === slot;
    radio.addEventListener("change", () => {
      vote = slot;
      button.disabled = !preferenceReady(vote);
    });
    choose.appendChild(radio);
    choose.appendChild(el("span", undefined, `Prefer Summary ${slot}`));
    card.appendChild(choose);
    pair.appendChild(card);
  }
  root.appendChild(pair);

  if (task.status === "done") {
    root.appendChild(doneBanner());
  } else {
    button.addEventListener("click", async () => {
      if (!preferenceReady(vote)) return;
      button.disabled = true;
      try {
        await onSubmit(vote as 1 | 2);
      } catch (err) {
        showError(error, err);
        button.disabled = false;
      }
    });
    root.appendChild(button);
    root.appendChild(error);
  }
  return root;
}

/** Four free-text answers about one summary. */
export function renderQa(
  task: QaTask,
  onSubmit: SubmitHandler<Record<string, string>>,
): HTMLElement {
  const root = el("section", "task qa-task");
  root.appendChild(el("h2", undefined, "Answer from the summary alone"));
  root.appendChild(el("p", "summary-text", task.summary));

  const answers: Record<string, string> = { ...(task.answers ?? {}) };
  const button = submitButton("Submit answers");
  const error = errorBox();
  const refresh = () => {
    button.disabled = !qaComplete(answers, task.questions.length);
  };

  const form = el("div", "qa-form");
  task.questions.forEach((question, index) => {
    const ordinal = String(index + 1);
    const field = el("div", "qa-field");
    const label = el("label", undefined, question);
    const area = el("textarea");
    area.rows = 3;
    area.value = answers[ordinal] ?? "";
    area.disabled = task.status === "done";
    area.addEventListener("input", () => {
      answers[ordinal] = area.value;
      refresh();
    });
    label.appendChild(area);
    field.appendChild(label);
    form.appendChild(field);
  });
  root.appendChild(form);

  if (task.status === "done") {
    root.appendChild(doneBanner());
  } else {
    refresh();
    button.addEventListener("click", async () => {
      if (!qaComplete(answers, task.questions.length)) return;
      button.disabled = true;
      try {
        await onSubmit(answers);
      } catch (err) {
        showError(error, err);
        button.disabled = false;
      }
    });
    root.appendChild(button);
    root.appendChild(error);
  }
  return root;
}

/** Expert agreement labels for each lay answer. */
export function renderReview(
  task: ReviewTask,
  onSubmit: SubmitHandler<Record<string, string>>,
): HTMLElement {
  const root = el("section", "task review-task");
  root.appendChild(el("h2", undefined, "How far do you agree with each answer?"));

  const labels: Record<string, string> = { ...(task.labels ?? {}) };
  const button = submitButton("Submit review");
  const error = errorBox();
  const refresh = () => {
    button.disabled = !reviewComplete(labels, task.items.length, task.label_options);
  };

  task.items.forEach((item, index) => {
    const ordinal = String(index + 1);
    const block = el("div", "review-item");
    block.appendChild(el("h3", undefined, item.question));
    block.appendChild(el("blockquote", "lay-answer", item.answer));
    const scale = el("div", "label-scale");
    for (const option of task.label_options) {
      const wrap = el("label", "choice");
      const radio = el("input");
      radio.type = "radio";
      radio.name = `review-${task.task_id}-${ordinal}`;
      radio.value = option;
      radio.disabled = task.status === "done";
      radio.checked = labels[ordinal] === option;
      radio.addEventListener("change", () => {
        labels[ordinal] = option;
        refresh();
      });
      wrap.appendChild(radio);
      wrap.appendChild(el("span", undefined, option));
      scale.appendChild(wrap);
    }
    block.appendChild(scale);
    root.appendChild(block);
  });

  if (task.status === "done") {
    root.appendChild(doneBanner());
  } else {
    refresh();
    button.addEventListener("click", async () => {
      if (!reviewComplete(labels, task.items.length, task.label_options)) return;
      button.disabled = true;
      try {
        await onSubmit(labels);
      } catch (err) {
        showError(error, err);
        button.disabled = false;
      }
    });
    root.appendChild(button);
    root.appendChild(error);
  }
  return root;
}

export function renderTask(
  task: Task,
  handlers: {
    preference: SubmitHandler<1 | 2>;
    qa: SubmitHandler<Record<string, string>>;
    review: SubmitHandler<Record<string, string>>;
  },
): HTMLElement {
  switch (task.kind) {
    case "preference":
      return renderPreference(task, handlers.preference);
    case "qa":
      return renderQa(task, handlers.qa);
    case "review":
      return renderReview(task, handlers.review);
  }
}

export function renderAllDone(): HTMLElement {
  const root = el("section", "task all-done");
  root.appendChild(el("h2", undefined, "All tasks complete"));
  root.appendChild(el("p", undefined, "Thank you! There is nothing left in your queue."));
  return root;
}
