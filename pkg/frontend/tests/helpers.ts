/** Fetch stub recording every request; tests route URLs to golden
 * payloads so screens render documented bodies verbatim. */

import { vi } from "vitest";

export interface RecordedCall {
  url: string;
  method: string;
  signal?: AbortSignal | null;
  body?: unknown;
  headers: Record<string, string>;
}

export type Route = (call: RecordedCall) =>
  { status?: number; body?: unknown } | "hang" | undefined;

export class FetchMock {
  calls: RecordedCall[] = [];

  constructor(private route: Route) {}

  install(): void {
    vi.stubGlobal("fetch", (input: string, init?: RequestInit) => {
      const call: RecordedCall = {
        url: String(input),
        method: init?.method ?? "GET",
        signal: init?.signal,
        body: init?.body ? JSON.parse(String(init.body)) : undefined,
        headers: (init?.headers ?? {}) as Record<string, string>,
      };
      this.calls.push(call);
      const matched = this.route(call);
      if (matched === "hang") {
        return new Promise((_resolve, reject) => {
          call.signal?.addEventListener("abort", () =>
            reject(new DOMException("aborted", "AbortError")));
        });
      }
      if (matched === undefined) {
        return Promise.resolve(jsonResponse({ detail: "not found" }, 404));
      }
      const { status = 200, body = null } = matched;
      if (status === 204) {
        return Promise.resolve(new Response(null, { status }));
      }
      return Promise.resolve(jsonResponse(body, status));
    });
  }

  requests(pattern: string | RegExp, method?: string): RecordedCall[] {
    return this.calls.filter((c) =>
      (typeof pattern === "string" ? c.url.includes(pattern)
                                   : pattern.test(c.url)) &&
      (!method || c.method === method));
  }
}

function jsonResponse(body: unknown, status: number): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

export function flush(): Promise<void> {
  // drain the microtask queue a few times so chained awaits settle
  return new Promise((resolve) => setTimeout(resolve, 0));
}
