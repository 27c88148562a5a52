/** "View" reader: paged book reading. Opening a book records exactly one
 * hit; page navigation clamps to [1, page_count] and updates the deep link
 * so a reload restores the position. */

import { ApiClient, ApiError } from "./api.js";
import { clear, el } from "./dom.js";
import { toast } from "./toast.js";

export class Reader {
  private pageCount = 1;
  private current = 1;
  private hitSent = false;

  constructor(private root: HTMLElement, private api: ApiClient,
              private bookId: string,
              private onNavigate: (page: number) => void) {}

  async open(pageNo: number): Promise<void> {
    clear(this.root);
    try {
      const book = await this.api.book(this.bookId);
      this.pageCount = book.page_count;
      if (!this.hitSent) {
        // one hit per reader open, not per page turn
        this.hitSent = true;
        void this.api.hit(this.bookId).catch(() => undefined);
      }
      const header = el("header", { class: "reader-head" }, [
        el("h2", { text: book.title }),
        el("p", { class: "reader-author", text: book.author }),
      ]);
      const prev = el("button", { class: "prev-page", text: "‹ Previous" });
      const next = el("button", { class: "next-page", text: "Next ›" });
      const where = el("span", { class: "page-indicator", text: "" });
      prev.addEventListener("click", () => void this.goto(this.current - 1));
      next.addEventListener("click", () => void this.goto(this.current + 1));
      const stage = el("div", { class: "reader-stage" });
      this.root.append(header,
                       el("nav", { class: "reader-nav" }, [prev, where,
                                                           next]),
                       stage);
      await this.goto(pageNo);
    } catch (err) {
      if (err instanceof ApiError) toast(`book: ${err.message}`);
      else throw err;
    }
  }

  async goto(pageNo: number): Promise<void> {
    const clamped = Math.min(Math.max(pageNo, 1), this.pageCount);
    try {
      const page = await this.api.page(this.bookId, clamped);
      this.current = clamped;
      this.onNavigate(clamped);
      const indicator = this.root.querySelector<HTMLElement>(
        ".page-indicator");
      if (indicator) {
        indicator.textContent = `Page ${clamped} of ${this.pageCount}`;
      }
      const stage = this.root.querySelector<HTMLElement>(".reader-stage")!;
      clear(stage);
      if (page.image) {
        stage.append(el("img", { class: "page-image", src: page.image,
                                 alt: `page ${clamped}` }));
      } else {
        // no scan shipped: fall back to the OCR text lines
        const sheet = el("div", { class: "page-text" });
        for (const line of page.lines) {
          sheet.append(el("p", { class: "ocr-line", text: line.text }));
        }
        stage.append(sheet);
      }
    } catch (err) {
      if (err instanceof ApiError) toast(`page: ${err.message}`);
      else throw err;
    }
  }

  get currentPage(): number {
    return this.current;
  }
}
