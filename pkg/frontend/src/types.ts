/** Task payloads exactly as the evaluation service serves them.
 *
 * The client renders only fields present in these payloads; the server
 * never includes method, variant, or model identifiers.
 */

export interface PreferenceTask {
  task_id: string;
  kind: "preference";
  status: "open" | "done";
  summary_1: string;
  summary_2: string;
  vote?: 1 | 2;
}

export interface QaTask {
  task_id: string;
  kind: "qa";
  status: "open" | "done";
  article_id: string;
  summary: string;
  questions: string[];
  answers?: Record<string, string>;
}

export interface ReviewItem {
  question: string;
  answer: string;
}

export interface ReviewTask {
  task_id: string;
  kind: "review";
  status: "open" | "done";
  article_id: string;
  label_options: string[];
  items: ReviewItem[];
  labels?: Record<string, string>;
}

export type Task = PreferenceTask | QaTask | ReviewTask;

export interface Progress {
  done: number;
  total: number;
}
