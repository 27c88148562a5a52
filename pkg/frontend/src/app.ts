/** Application bootstrap: wires screens to the hash router. */

import { AdminScreen } from "./admin.js";
import { ApiClient } from "./api.js";
import { clear, el } from "./dom.js";
import { closeAllPopups } from "./matches.js";
import { Reader } from "./reader.js";
import { parseRoute, readerHash } from "./router.js";
import { SearchScreen } from "./search.js";

export function bootstrap(root: HTMLElement,
                          api = new ApiClient()): void {
  const nav = el("nav", { class: "top-nav" }, [
    el("a", { href: "#/search", text: "Search" }),
    el("a", { href: "#/admin", text: "Admin" }),
  ]);
  const outlet = el("main", { class: "outlet" });
  root.append(nav, outlet);

  const search = new SearchScreen(outlet, api, (bookId) => {
    window.location.hash = readerHash(bookId, 1);
  });
  const admin = new AdminScreen(outlet, api);
  let readerFor: string | null = null;
  let reader: Reader | null = null;

  async function route(): Promise<void> {
    closeAllPopups();
    const current = parseRoute(window.location.hash);
    if (current.kind === "read") {
      if (readerFor !== current.bookId || !reader) {
        readerFor = current.bookId;
        clear(outlet);
        reader = new Reader(outlet, api, current.bookId, (page) => {
          const wanted = readerHash(current.bookId, page);
          if (window.location.hash !== wanted) {
            history.replaceState(null, "", wanted);
          }
        });
        await reader.open(current.page);
      } else if (reader.currentPage !== current.page) {
        await reader.goto(current.page);
      }
      return;
    }
    readerFor = null;
    reader = null;
    if (current.kind === "admin") {
      admin.render();
    } else {
      await search.render();
    }
  }

  window.addEventListener("hashchange", () => void route());
  void route();
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  bootstrap(document.getElementById("app")!);
}
