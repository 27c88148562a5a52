/** Thin typed client for the search service; all rendering logic stays in
 * the screens, all transport here. */

import type {
  BookResponse, LoginResponse, MatchesResponse, PageResponse,
  SearchParams, SearchResponse, StatsResponse, StatusResponse,
} from "./models.js";

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let detail = response.statusText;
  try {
    const body = await response.json();
    if (typeof body.detail === "string") detail = body.detail;
  } catch {
    /* non-JSON error body */
  }
  return new ApiError(response.status, detail);
}

export class ApiClient {
  constructor(private base: string = "") {}

  private async get<T>(path: string, signal?: AbortSignal,
                       token?: string): Promise<T> {
    const headers: Record<string, string> = {};
    if (token) headers["Authorization"] = `Bearer ${token}`;
    const response = await fetch(this.base + path, { signal, headers });
    if (!response.ok) throw await parseError(response);
    return response.json() as Promise<T>;
  }

  private async send<T>(method: string, path: string, body?: unknown,
                        token?: string): Promise<T | null> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (token) headers["Authorization"] = `Bearer ${token}`;
    const response = await fetch(this.base + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) throw await parseError(response);
    if (response.status === 204) return null;
    return response.json() as Promise<T>;
  }

  search(params: SearchParams, signal?: AbortSignal): Promise<SearchResponse> {
    const query = new URLSearchParams({ q: params.q });
    if (params.lang) query.set("lang", params.lang);
    if (params.field) query.set("field", params.field);
    if (params.genre) query.set("genre", params.genre);
    if (params.source) query.set("source", params.source);
    if (params.multilingual) query.set("multilingual", "true");
    if (params.page) query.set("page", String(params.page));
    if (params.size) query.set("size", String(params.size));
    return this.get(`/api/search?${query}`, signal);
  }

  stats(): Promise<StatsResponse> {
    return this.get("/api/stats");
  }

  book(bookId: string): Promise<BookResponse> {
    return this.get(`/api/books/${encodeURIComponent(bookId)}`);
  }

  page(bookId: string, pageNo: number): Promise<PageResponse> {
    return this.get(
      `/api/books/${encodeURIComponent(bookId)}/pages/${pageNo}`);
  }

  matches(bookId: string, q: string,
          multilingual = false): Promise<MatchesResponse> {
    const query = new URLSearchParams({ q });
    if (multilingual) query.set("multilingual", "true");
    return this.get(
      `/api/books/${encodeURIComponent(bookId)}/matches?${query}`);
  }

  async hit(bookId: string): Promise<void> {
    await this.send("POST", `/api/books/${encodeURIComponent(bookId)}/hit`);
  }

  login(username: string, password: string): Promise<LoginResponse> {
    return this.send("POST", "/api/admin/login",
                     { username, password }) as Promise<LoginResponse>;
  }

  status(token: string): Promise<StatusResponse> {
    return this.get("/api/admin/status", undefined, token);
  }

  async patchBook(token: string, bookId: string,
                  patch: { abstract?: string; isbn?: string;
                           author?: string }): Promise<void> {
    await this.send("PATCH",
                    `/api/admin/books/${encodeURIComponent(bookId)}`,
                    patch, token);
  }

  async deleteBook(token: string, bookId: string): Promise<void> {
    await this.send("DELETE",
                    `/api/admin/books/${encodeURIComponent(bookId)}`,
                    undefined, token);
  }
}
