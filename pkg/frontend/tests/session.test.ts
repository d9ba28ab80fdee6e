import { beforeEach, describe, expect, it } from "vitest";

import type {
  LabelerApi,
  NextTaskResponse,
  SubmissionAck,
  SubmissionBody,
  TaskView,
} from "../src/api.js";
import { ApiError } from "../src/api.js";
import { LabelerSession } from "../src/session.js";

const CATEGORIES = [
  "Acknowledgment", "Citation", "Installation", "License",
  "Others", "Resource", "Technicality", "Usage",
];

function makeTask(id: string, index: number, total: number): TaskView {
  return {
    task_id: id,
    repo_url: "https://github.com/demo/repo",
    unit_index: index,
    round: 1,
    header_text: `Header ${index}`,
    header_level: 2,
    subtext: `subtext ${index}`,
    position: { done: index, total },
    categories: CATEGORIES,
  };
}

/** In-memory stand-in for the service: same queue + ownership semantics. */
class FakeApi implements LabelerApi {
  tasks: TaskView[];
  submissions = new Map<string, SubmissionBody>();
  failNextSubmit: ApiError | null = null;

  constructor(taskCount: number) {
    this.tasks = Array.from({ length: taskCount }, (_, i) =>
      makeTask(`t${i}`, i, taskCount),
    );
  }

  async nextTask(): Promise<NextTaskResponse> {
    const pending = this.tasks.filter((t) => !this.submissions.has(t.task_id));
    return {
      task: pending[0] ?? null,
      counts: {
        pending: pending.length,
        submitted: this.submissions.size,
        created: this.tasks.length,
      },
    };
  }

  async submit(taskId: string, body: SubmissionBody): Promise<SubmissionAck> {
    if (this.failNextSubmit) {
      const err = this.failNextSubmit;
      this.failNextSubmit = null;
      throw err;
    }
    if (!body.labels.length && !body.too_simple) {
      throw new ApiError("labels must be non-empty unless too_simple is set", 422, false);
    }
    const resubmission = this.submissions.has(taskId);
    this.submissions.set(taskId, body);
    return { task_id: taskId, status: "submitted", resubmission };
  }
}

describe("LabelerSession", () => {
  let api: FakeApi;
  let clockMs: number;
  let session: LabelerSession;

  beforeEach(() => {
    api = new FakeApi(3);
    clockMs = 1_000;
    session = new LabelerSession(api, "alice", () => clockMs);
  });

  it("loads the first pending task with empty selections", async () => {
    await session.loadNext();
    expect(session.state).toBe("labeling");
    expect(session.current?.task_id).toBe("t0");
    expect(session.selections.size).toBe(0);
    expect(session.canSubmit()).toBe(false);
  });

  it("toggle is an involution", async () => {
    await session.loadNext();
    session.toggleLabel("Citation");
    session.toggleLabel("Citation");
    expect(session.selections.size).toBe(0);
  });

  it("multi-selection works", async () => {
    await session.loadNext();
    session.toggleLabel("Installation");
    session.toggleLabel("Usage");
    expect([...session.selections].sort()).toEqual(["Installation", "Usage"]);
    expect(session.canSubmit()).toBe(true);
  });

  it("refuses submission with no labels and no too_simple flag", async () => {
    await session.loadNext();
    expect(session.canSubmit()).toBe(false);
    const ok = await session.submit();
    expect(ok).toBe(false);
    expect(api.submissions.size).toBe(0);
    expect(session.lastError).toBeTruthy();
  });

  it("permits submission with too_simple set and empty labels", async () => {
    await session.loadNext();
    session.toggleFlag("too_simple");
    expect(session.canSubmit()).toBe(true);
    const ok = await session.submit();
    expect(ok).toBe(true);
    expect(api.submissions.get("t0")?.too_simple).toBe(true);
    expect(api.submissions.get("t0")?.labels).toEqual([]);
  });

  it("submit advances to the next task and records duration", async () => {
    await session.loadNext();
    session.toggleLabel("Usage");
    clockMs += 2_500;
    const ok = await session.submit();
    expect(ok).toBe(true);
    expect(api.submissions.get("t0")?.labels).toEqual(["Usage"]);
    expect(api.submissions.get("t0")?.duration_seconds).toBeCloseTo(2.5);
    expect(session.current?.task_id).toBe("t1");
    expect(session.counts.submitted).toBe(1);
  });

  it("duration is bounded by wall time since display", async () => {
    await session.loadNext();
    session.toggleLabel("Usage");
    clockMs += 1_000;
    await session.submit();
    const duration = api.submissions.get("t0")!.duration_seconds;
    expect(duration).toBeGreaterThanOrEqual(0);
    expect(duration).toBeLessThanOrEqual(1.0);
  });

  it("network failure keeps selections for retry", async () => {
    await session.loadNext();
    session.toggleLabel("License");
    session.toggleFlag("non_english");
    api.failNextSubmit = new ApiError("boom", 500, true);
    const ok = await session.submit();
    expect(ok).toBe(false);
    expect(session.state).toBe("labeling");
    expect([...session.selections]).toEqual(["License"]);
    expect(session.nonEnglish).toBe(true);
    const retry = await session.submit();
    expect(retry).toBe(true);
    expect(api.submissions.get("t0")?.non_english).toBe(true);
  });

  it("refresh (new session) refetches the same pending task, no duplicates", async () => {
    await session.loadNext();
    session.toggleLabel("Usage");
    // simulated refresh before submit: fresh session object
    const refreshed = new LabelerSession(api, "alice", () => clockMs);
    await refreshed.loadNext();
    expect(refreshed.current?.task_id).toBe("t0");
    refreshed.toggleLabel("Usage");
    await refreshed.submit();
    expect(api.submissions.size).toBe(1);
  });

  it("drains the queue to the done state", async () => {
    await session.loadNext();
    while (session.state === "labeling") {
      session.toggleLabel("Technicality");
      await session.submit();
    }
    expect(session.state).toBe("done");
    expect(api.submissions.size).toBe(3);
    expect(session.counts.pending).toBe(0);
  });

  it("unreachable service lands in error state with message", async () => {
    const dead: LabelerApi = {
      nextTask: async () => {
        throw new ApiError("service unreachable", 0, true);
      },
      submit: async () => {
        throw new ApiError("service unreachable", 0, true);
      },
    };
    const lost = new LabelerSession(dead, "alice");
    await lost.loadNext();
    expect(lost.state).toBe("error");
    expect(lost.lastError).toContain("unreachable");
  });
});
