/** Typed client for the analytics API. The dashboard performs no
 * analytics of its own: every number rendered comes from one of these
 * responses. */

import type {
  CompareResponse,
  CoursesResponse,
  CorrelationResponse,
  DropoutResponse,
  ExportFormat,
  ForumResponse,
  FunnelResponse,
  QuizSummaryResponse,
  ReadsSeriesResponse,
  TimelineResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** Exact query string the compare panel sends; tested against the
 * backend's expectations byte for byte. */
export function compareQuery(x: string, y: string): string {
  return `x=${encodeURIComponent(x)}&y=${encodeURIComponent(y)}`;
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly token: string,
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private headers(): Record<string, string> {
    return { Authorization: `Bearer ${this.token}` };
  }

  private async request(path: string): Promise<Response> {
    const response = await this.fetchFn(`${this.baseUrl}/api/v1${path}`, {
      headers: this.headers(),
    });
    if (!response.ok) {
      throw new ApiError(response.status, `${response.status} for ${path}`);
    }
    return response;
  }

  private async get<T>(path: string): Promise<T> {
    const response = await this.request(path);
    return (await response.json()) as T;
  }

  courses(): Promise<CoursesResponse> {
    return this.get("/courses");
  }

  funnel(course: string): Promise<FunnelResponse> {
    return this.get(`/courses/${encodeURIComponent(course)}/funnel`);
  }

  dropout(course: string): Promise<DropoutResponse> {
    return this.get(`/courses/${encodeURIComponent(course)}/dropout`);
  }

  forum(course: string): Promise<ForumResponse> {
    return this.get(`/courses/${encodeURIComponent(course)}/forum`);
  }

  reads(course: string, granularity: "day" | "week"): Promise<ReadsSeriesResponse> {
    return this.get(
      `/courses/${encodeURIComponent(course)}/forum/reads?granularity=${granularity}`,
    );
  }

  timeline(course: string, video: string): Promise<TimelineResponse> {
    return this.get(
      `/courses/${encodeURIComponent(course)}/videos/${encodeURIComponent(video)}/timeline`,
    );
  }

  quizSummary(course: string): Promise<QuizSummaryResponse> {
    return this.get(`/courses/${encodeURIComponent(course)}/quizzes/summary`);
  }

  correlation(course: string): Promise<CorrelationResponse> {
    return this.get(`/courses/${encodeURIComponent(course)}/correlation`);
  }

  compare(course: string, x: string, y: string): Promise<CompareResponse> {
    return this.get(
      `/courses/${encodeURIComponent(course)}/compare?${compareQuery(x, y)}`,
    );
  }

  /** Returns the export body verbatim; the download writes it unchanged. */
  async exportReport(course: string, format: ExportFormat): Promise<string> {
    const response = await this.request(
      `/export?course=${encodeURIComponent(course)}&format=${format}`,
    );
    return response.text();
  }
}
