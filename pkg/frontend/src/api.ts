// Typed client for the annotation service JSON API.

export interface TaskPosition {
  done: number;
  total: number;
}

export interface TaskView {
  task_id: string;
  repo_url: string;
  unit_index: number;
  round: number;
  header_text: string;
  header_level: number;
  subtext: string;
  position: TaskPosition;
  categories: string[];
}

export interface SessionCounts {
  pending: number;
  submitted: number;
  created: number;
}

export interface NextTaskResponse {
  task: TaskView | null;
  counts: SessionCounts;
}

export interface SubmissionBody {
  annotator_id: string;
  labels: string[];
  non_english: boolean;
  too_simple: boolean;
  duration_seconds: number;
}

export interface SubmissionAck {
  task_id: string;
  status: string;
  resubmission: boolean;
}

export interface LabelerApi {
  nextTask(annotatorId: string): Promise<NextTaskResponse>;
  submit(taskId: string, body: SubmissionBody): Promise<SubmissionAck>;
}

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number,
    readonly retryable: boolean,
  ) {
    super(message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  let res: Response;
  try {
    res = await fetch(url, init);
  } catch (err) {
    throw new ApiError(`service unreachable: ${err}`, 0, true);
  }
  if (!res.ok) {
    const body = await res.json().catch(() => ({ error: `HTTP ${res.status}` }));
    const message = (body as { error?: string }).error ?? `HTTP ${res.status}`;
    throw new ApiError(message, res.status, res.status >= 500);
  }
  return (await res.json()) as T;
}

export class HttpLabelerApi implements LabelerApi {
  constructor(private readonly baseUrl: string = "") {}

  nextTask(annotatorId: string): Promise<NextTaskResponse> {
    return request<NextTaskResponse>(
      `${this.baseUrl}/api/annotators/${encodeURIComponent(annotatorId)}/next`,
    );
  }

  submit(taskId: string, body: SubmissionBody): Promise<SubmissionAck> {
    return request<SubmissionAck>(
      `${this.baseUrl}/api/tasks/${encodeURIComponent(taskId)}/submission`,
      {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
      },
    );
  }
}
