/** "See results about" popup: every page holding the query, with one
 * highlight rectangle per matched line drawn over the scan. */

import { ApiClient, ApiError } from "./api.js";
import { el } from "./dom.js";
import type { PageMatch } from "./models.js";
import { applyRect, layoutOverlays, overlayRect } from "./overlay.js";
import { toast } from "./toast.js";

export async function openMatchesPopup(api: ApiClient, bookId: string,
                                       query: string): Promise<void> {
  if (!query.trim()) {
    toast("run a search first");
    return;
  }
  try {
    const response = await api.matches(bookId, query);
    document.querySelector(".matches-popup")?.remove();
    document.body.append(buildPopup(response.matches, query));
  } catch (err) {
    if (err instanceof ApiError) toast(`matches: ${err.message}`);
    else throw err;
  }
}

export function buildPopup(matches: PageMatch[],
                           query: string): HTMLElement {
  const popup = el("div", { class: "matches-popup", role: "dialog" });
  const close = el("button", { class: "close-btn", text: "Close" });
  close.addEventListener("click", () => popup.remove());
  popup.append(
    el("header", {}, [
      el("h2", { text: `Pages containing “${query}”` }),
      close,
    ]),
  );
  if (matches.length === 0) {
    popup.append(el("p", { class: "no-results",
                           text: "No matching pages" }));
    return popup;
  }
  for (const match of matches) {
    popup.append(buildPageThumb(match));
  }
  return popup;
}

export function buildPageThumb(match: PageMatch): HTMLElement {
  const container = el("figure", { class: "page-thumb" });
  container.dataset.pageNo = String(match.page_no);
  const stage = el("div", { class: "page-stage" });
  if (match.image) {
    const img = el("img", { class: "page-image", src: match.image,
                            alt: `page ${match.page_no}` });
    // rectangles track the displayed size of the scan
    img.addEventListener("load", () => {
      const scale = img.naturalWidth > 0
        ? img.clientWidth / img.naturalWidth : 1;
      layoutOverlays(stage, scale);
    });
    stage.append(img);
  }
  for (const line of match.matched_lines) {
    const overlay = el("div", { class: "overlay" });
    overlay.dataset.bbox = JSON.stringify(line.bbox);
    overlay.dataset.lineNo = String(line.line_no);
    overlay.title = line.text;
    applyRect(overlay, overlayRect(line.bbox, 1));
    stage.append(overlay);
  }
  container.append(
    stage,
    el("figcaption", { text: `Page ${match.page_no}` }),
  );
  return container;
}

export function closeAllPopups(): void {
  document.querySelectorAll(".matches-popup").forEach((n) => n.remove());
}
