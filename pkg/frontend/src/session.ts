// Annotator session state machine, kept free of DOM so it is testable
// against a mock or a live service.
//
// Submission is keyed by task_id on the server and the queue hands back
// the same pending task until it is submitted, so a page refresh can
// never double-submit: the new session simply re-fetches the same task.

import type { LabelerApi, SessionCounts, SubmissionAck, TaskView } from "./api.js";
import { ApiError } from "./api.js";

export type SessionState = "idle" | "loading" | "labeling" | "done" | "error";

export type FlagName = "non_english" | "too_simple";

export class LabelerSession {
  state: SessionState = "idle";
  current: TaskView | null = null;
  counts: SessionCounts = { pending: 0, submitted: 0, created: 0 };
  selections = new Set<string>();
  nonEnglish = false;
  tooSimple = false;
  lastError: string | null = null;
  lastAck: SubmissionAck | null = null;
  private shownAt = 0;

  constructor(
    private readonly api: LabelerApi,
    readonly annotatorId: string,
    private readonly now: () => number = Date.now,
  ) {}

  /** Fetch the next pending task; resets selections and starts the timer. */
  async loadNext(): Promise<void> {
    this.state = "loading";
    this.lastError = null;
    let response;
    try {
      response = await this.api.nextTask(this.annotatorId);
    } catch (err) {
      this.state = "error";
      this.lastError = err instanceof Error ? err.message : String(err);
      return;
    }
    this.counts = response.counts;
    this.selections = new Set();
    this.nonEnglish = false;
    this.tooSimple = false;
    if (response.task === null) {
      this.state = "done";
      this.current = null;
      return;
    }
    this.current = response.task;
    this.shownAt = this.now();
    this.state = "labeling";
  }

  toggleLabel(category: string): void {
    if (this.state !== "labeling" || !this.current) {
      return;
    }
    if (!this.current.categories.includes(category)) {
      return;
    }
    if (this.selections.has(category)) {
      this.selections.delete(category);
    } else {
      this.selections.add(category);
    }
  }

  toggleFlag(flag: FlagName): void {
    if (this.state !== "labeling") {
      return;
    }
    if (flag === "non_english") {
      this.nonEnglish = !this.nonEnglish;
    } else {
      this.tooSimple = !this.tooSimple;
    }
  }

  /** Mirror of the server rule: labels required unless too_simple is set. */
  canSubmit(): boolean {
    return this.state === "labeling" && (this.selections.size > 0 || this.tooSimple);
  }

  elapsedSeconds(): number {
    return this.state === "labeling" ? Math.max(0, (this.now() - this.shownAt) / 1000) : 0;
  }

  /**
   * Submit the current selections; on acknowledgment advance to the next
   * task, on failure keep the selections so the annotator can retry.
   */
  async submit(): Promise<boolean> {
    if (!this.canSubmit() || !this.current) {
      this.lastError = "select at least one category or mark the file too simple";
      return false;
    }
    const body = {
      annotator_id: this.annotatorId,
      labels: [...this.selections].sort(),
      non_english: this.nonEnglish,
      too_simple: this.tooSimple,
      duration_seconds: this.elapsedSeconds(),
    };
    try {
      this.lastAck = await this.api.submit(this.current.task_id, body);
    } catch (err) {
      if (err instanceof ApiError) {
        this.lastError = err.retryable
          ? `submission failed, retry: ${err.message}`
          : err.message;
      } else {
        this.lastError = String(err);
      }
      return false; // selections intact for retry
    }
    await this.loadNext();
    return true;
  }
}
