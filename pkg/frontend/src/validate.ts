/** Pure submit-gating rules; the server re-validates everything. */

export function preferenceReady(vote: 1 | 2 | null): boolean {
  return vote === 1 || vote === 2;
}

/** All four answers present and non-blank. */
export function qaComplete(answers: Record<string, string>, questionCount: number): boolean {
  for (let i = 1; i <= questionCount; i++) {
    const value = answers[String(i)];
    if (!value || !value.trim()) {
      return false;
    }
  }
  return true;
}

/** Every question carries one of the offered labels. */
export function reviewComplete(
  labels: Record<string, string>,
  questionCount: number,
  options: string[],
): boolean {
  for (let i = 1; i <= questionCount; i++) {
    const value = labels[String(i)];
    if (!value || !options.includes(value)) {
      return false;
    }
  }
  return true;
}
