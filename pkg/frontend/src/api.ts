/** Typed client for the corpus API with per-endpoint in-flight dedupe. */

import type { AspectView, PersonDetail, PersonRow, RoleAspects } from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly path: string,
  ) {
    super(`API request failed (${status}) for ${path}`);
  }
}

export class ApiClient {
  private inflight = new Map<string, Promise<unknown>>();

  constructor(private readonly baseUrl: string = "") {}

  private get<T>(path: string): Promise<T> {
    const pending = this.inflight.get(path);
    if (pending !== undefined) {
      return pending as Promise<T>;
    }
    const request = fetch(this.baseUrl + path)
      .then((response) => {
        if (!response.ok) {
          throw new ApiError(response.status, path);
        }
        return response.json() as Promise<T>;
      })
      .finally(() => {
        this.inflight.delete(path);
      });
    this.inflight.set(path, request);
    return request;
  }

  persons(): Promise<PersonRow[]> {
    return this.get("/api/persons");
  }

  person(personId: string): Promise<PersonDetail> {
    return this.get(`/api/persons/${encodeURIComponent(personId)}`);
  }

  roleAspects(personId: string, role: string): Promise<RoleAspects> {
    return this.get(
      `/api/persons/${encodeURIComponent(personId)}/roles/${encodeURIComponent(role)}`,
    );
  }

  aspectView(personId: string, role: string, aspect: string): Promise<AspectView> {
    return this.get(
      `/api/persons/${encodeURIComponent(personId)}` +
        `/roles/${encodeURIComponent(role)}` +
        `/aspects/${encodeURIComponent(aspect)}`,
    );
  }
}
