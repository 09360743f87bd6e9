/** Typed client for the annotation service; fetch is injectable for tests. */

import type {
  AnnotationData,
  CategoryInfo,
  ErrorBody,
  SketchData,
  SketchListEntry,
} from "./model.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiRequestError extends Error {
  constructor(
    public code: string,
    message: string,
    public status: number,
  ) {
    super(message);
  }
}

async function parseError(resp: Response): Promise<ApiRequestError> {
  try {
    const body = (await resp.json()) as ErrorBody;
    return new ApiRequestError(body.error.code, body.error.message, resp.status);
  } catch {
    return new ApiRequestError("http-error", `request failed with status ${resp.status}`, resp.status);
  }
}

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async getJson<T>(path: string): Promise<T> {
    const resp = await this.fetchImpl(this.baseUrl + path);
    if (!resp.ok) {
      throw await parseError(resp);
    }
    return (await resp.json()) as T;
  }

  async getCategories(): Promise<CategoryInfo[]> {
    const body = await this.getJson<{ categories: CategoryInfo[] }>("/categories");
    return body.categories;
  }

  async getSketches(category: string): Promise<SketchListEntry[]> {
    const body = await this.getJson<{ sketches: SketchListEntry[] }>(
      `/categories/${encodeURIComponent(category)}/sketches`,
    );
    return body.sketches;
  }

  async getSketch(sketchId: string): Promise<SketchData> {
    return this.getJson<SketchData>(`/sketches/${encodeURIComponent(sketchId)}`);
  }

  async getAnnotations(sketchId: string): Promise<AnnotationData[]> {
    const body = await this.getJson<{ annotations: AnnotationData[] }>(
      `/sketches/${encodeURIComponent(sketchId)}/annotations`,
    );
    return body.annotations;
  }

  async putAnnotations(
    sketchId: string,
    annotations: AnnotationData[],
  ): Promise<AnnotationData[]> {
    const resp = await this.fetchImpl(
      `${this.baseUrl}/sketches/${encodeURIComponent(sketchId)}/annotations`,
      {
        method: "PUT",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ annotations }),
      },
    );
    if (!resp.ok) {
      throw await parseError(resp);
    }
    const body = (await resp.json()) as { annotations: AnnotationData[] };
    return body.annotations;
  }

  referenceImageUrl(category: string): string {
    return `${this.baseUrl}/categories/${encodeURIComponent(category)}/reference-image`;
  }
}
