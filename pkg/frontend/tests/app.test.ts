import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import { bootstrap } from "../src/app.js";
import * as fx from "../fixtures/payloads.mjs";
import { FetchMock, flush, type Route } from "./helpers.js";

function fullRoute(): Route {
  return (call) => {
    if (call.url.includes("/api/stats")) return { body: fx.stats };
    if (call.url.includes("/api/search")) return { body: fx.searchOneHit };
    const page = call.url.match(/\/pages\/(\d+)$/);
    if (page) {
      const body = (fx.pages as Record<string, unknown>)[page[1]];
      return body ? { body } : { status: 404, body: { detail: "nope" } };
    }
    if (call.url.endsWith("/hit")) return { status: 204 };
    if (call.url.includes("/api/books/")) return { body: fx.book };
    return undefined;
  };
}

describe("app routing", () => {
  beforeEach(() => {
    document.body.innerHTML = "";
    window.location.hash = "";
  });
  afterEach(() => {
    vi.unstubAllGlobals();
  });

  it("mounts the search screen by default", async () => {
    new FetchMock(fullRoute()).install();
    const root = document.createElement("div");
    document.body.append(root);
    bootstrap(root, new ApiClient());
    await flush();
    expect(root.querySelector(".search-form")).not.toBeNull();
    expect(root.querySelector(".banner")!.textContent).toContain("books");
  });

  it("deep link restores the reader position", async () => {
    new FetchMock(fullRoute()).install();
    window.location.hash = "#/read/hi-0001/2";
    const root = document.createElement("div");
    document.body.append(root);
    bootstrap(root, new ApiClient());
    await flush();
    await flush();
    expect(root.querySelector(".page-indicator")!.textContent)
      .toBe("Page 2 of 3");
  });

  it("hash navigation reaches the admin screen", async () => {
    new FetchMock(fullRoute()).install();
    const root = document.createElement("div");
    document.body.append(root);
    bootstrap(root, new ApiClient());
    await flush();
    window.location.hash = "#/admin";
    window.dispatchEvent(new Event("hashchange"));
    await flush();
    expect(root.querySelector(".login-form")).not.toBeNull();
  });
});
