/** Home/search screen: filter form, result cards, pagination.
 *
 * The screen renders exactly what the API returns, in the order it returns
 * it; ranking, filtering and highlighting all happen server-side.
 */

import { ApiClient, ApiError } from "./api.js";
import { clear, el } from "./dom.js";
import type { ResultCard, SearchResponse } from "./models.js";
import { openMatchesPopup } from "./matches.js";
import { toast } from "./toast.js";

const LANGUAGE_LABELS: Record<string, string> = {
  hi: "Hindi", ta: "Tamil", te: "Telugu",
};

export class SearchScreen {
  private inflight: AbortController | null = null;
  private lastQuery = "";

  constructor(private root: HTMLElement, private api: ApiClient,
              private onView: (bookId: string) => void) {}

  async render(): Promise<void> {
    clear(this.root);
    const banner = el("p", { class: "banner", text: "" });
    const form = this.buildForm();
    const results = el("div", { class: "results" });
    this.root.append(banner, form, results);
    try {
      const stats = await this.api.stats();
      banner.textContent =
        `Searching ${stats.total_books} books / ${stats.total_pages} pages`;
      this.fillFacets(stats.genres, stats.sources);
    } catch (err) {
      if (err instanceof ApiError) toast(`stats: ${err.message}`);
    }
  }

  private buildForm(): HTMLFormElement {
    const form = el("form", { class: "search-form" });
    const input = el("input", {
      type: "search", name: "q", placeholder: "Search the collection…",
      class: "query-input",
    });
    const error = el("span", { class: "inline-error", text: "" });
    const submit = el("button", { type: "submit", text: "Search" });

    const langGroup = el("fieldset", { class: "primary-filters" }, [
      el("legend", { text: "Language" }),
      ...this.radio("lang", "", "Any", true),
      ...this.radio("lang", "hi", "Hindi"),
      ...this.radio("lang", "ta", "Tamil"),
      ...this.radio("lang", "te", "Telugu"),
    ]);
    const fieldGroup = el("fieldset", { class: "primary-filters" }, [
      el("legend", { text: "Search in" }),
      ...this.radio("field", "content", "Content", true),
      ...this.radio("field", "title", "Title"),
      ...this.radio("field", "isbn", "ISBN"),
      ...this.radio("field", "author", "Author"),
    ]);
    const genre = el("select", { name: "genre", class: "secondary-filter" },
                     [el("option", { value: "", text: "Any genre" })]);
    const source = el("select", { name: "source", class: "secondary-filter" },
                      [el("option", { value: "", text: "Any source" })]);
    const multilingual = el("label", { class: "multilingual" }, [
      el("input", { type: "checkbox", name: "multilingual" }),
      "Search across scripts",
    ]);

    form.append(input, submit, error, langGroup, fieldGroup, genre, source,
                multilingual);
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.submit(1);
    });
    return form;
  }

  private radio(name: string, value: string, label: string,
                checked = false): Node[] {
    const input = el("input", { type: "radio", name, value });
    if (checked) input.checked = true;
    return [el("label", {}, [input, label])];
  }

  private fillFacets(genres: string[], sources: string[]): void {
    const genre = this.root.querySelector<HTMLSelectElement>(
      "select[name=genre]");
    const source = this.root.querySelector<HTMLSelectElement>(
      "select[name=source]");
    for (const value of genres) {
      genre?.append(el("option", { value, text: value }));
    }
    for (const value of sources) {
      source?.append(el("option", { value, text: value }));
    }
  }

  async submit(page: number): Promise<void> {
    const form = this.root.querySelector("form")!;
    const data = new FormData(form);
    const q = String(data.get("q") ?? "").trim();
    const error = form.querySelector<HTMLElement>(".inline-error")!;
    if (!q) {
      error.textContent = "Enter a search term";
      return;
    }
    error.textContent = "";
    this.lastQuery = q;

    // a newer query supersedes whatever is still in flight
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    try {
      const response = await this.api.search({
        q,
        lang: String(data.get("lang") ?? "") || undefined,
        field: String(data.get("field") ?? "") || undefined,
        genre: String(data.get("genre") ?? "") || undefined,
        source: String(data.get("source") ?? "") || undefined,
        multilingual: data.get("multilingual") === "on",
        page,
        size: 10,
      }, controller.signal);
      if (this.inflight === controller) this.showResults(response);
    } catch (err) {
      if (err instanceof DOMException && err.name === "AbortError") return;
      if (err instanceof ApiError) toast(`search: ${err.message}`);
      else throw err;
    }
  }

  private showResults(response: SearchResponse): void {
    const results = this.root.querySelector<HTMLElement>(".results")!;
    clear(results);
    if (response.total_hits === 0) {
      results.append(el("p", { class: "no-results",
                             text: "No results found" }));
      return;
    }
    for (const card of response.results) {
      results.append(this.card(card));
    }
    results.append(this.pagination(response));
  }

  private card(card: ResultCard): HTMLElement {
    const head = el("div", { class: "card-head" }, [
      el("h3", { class: "card-title", text: card.title }),
      el("span", { class: "card-score", text: card.score.toFixed(4) }),
    ]);
    const meta = el("dl", { class: "card-meta" });
    const pairs: [string, string | null][] = [
      ["Author", card.author],
      ["Language", LANGUAGE_LABELS[card.language] ?? card.language],
      ["ISBN", card.isbn],
      ["Genre", card.genre],
      ["Source", card.source],
    ];
    for (const [label, value] of pairs) {
      if (value === null || value === "") continue;
      meta.append(el("dt", { text: label }), el("dd", { text: value }));
    }
    const body: Node[] = [head, meta];
    if (card.cover_image) {
      body.unshift(el("img", { class: "card-cover", src: card.cover_image,
                               alt: "" }));
    }
    if (card.abstract) {
      body.push(el("p", { class: "card-abstract", text: card.abstract }));
    }
    if (card.snippet) {
      body.push(el("p", { class: "card-snippet", text: card.snippet }));
    }
    const view = el("button", { class: "view-btn", text: "View" });
    view.addEventListener("click", () => this.onView(card.book_id));
    const about = el("button", { class: "about-btn",
                                 text: "See results about" });
    about.addEventListener("click", () => {
      void openMatchesPopup(this.api, card.book_id, this.lastQuery);
    });
    body.push(el("div", { class: "card-actions" }, [view, about]));
    const node = el("article", { class: "result-card" }, body);
    node.dataset.bookId = card.book_id;
    return node;
  }

  private pagination(response: SearchResponse): HTMLElement {
    const pages = Math.ceil(response.total_hits / response.page_size);
    const nav = el("nav", { class: "pagination" });
    for (let p = 1; p <= pages; p++) {
      const button = el("button", {
        class: p === response.page ? "page current" : "page",
        text: String(p),
      });
      button.addEventListener("click", () => void this.submit(p));
      nav.append(button);
    }
    return nav;
  }
}
