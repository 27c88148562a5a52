/** Admin screens: login, ingestion status chart, metadata edit/delete.
 *
 * Monitor sessions get disabled edit controls; the server enforces the
 * same rule independently, this is display-level honesty only.
 */

import { ApiClient, ApiError } from "./api.js";
import { clear, el } from "./dom.js";
import type { StatusPoint } from "./models.js";
import { toast } from "./toast.js";

export interface AdminSession {
  token: string;
  role: "editor" | "monitor";
  username: string;
}

export class AdminScreen {
  session: AdminSession | null = null;

  constructor(private root: HTMLElement, private api: ApiClient) {}

  render(): void {
    clear(this.root);
    if (!this.session) {
      this.root.append(this.loginForm());
      return;
    }
    this.root.append(
      el("p", { class: "whoami",
                text: `${this.session.username} (${this.session.role})` }),
      el("section", { class: "status-section" },
         [el("h2", { text: "Database status" }),
          el("div", { class: "status-chart" }),
          el("ul", { class: "dataset-list" })]),
      this.editForm(),
    );
    void this.loadStatus();
  }

  private loginForm(): HTMLElement {
    const form = el("form", { class: "login-form" }, [
      el("h2", { text: "Admin login" }),
      el("input", { name: "username", placeholder: "username" }),
      el("input", { name: "password", type: "password",
                    placeholder: "password" }),
      el("button", { type: "submit", text: "Log in" }),
    ]);
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      const data = new FormData(form);
      void this.login(String(data.get("username") ?? ""),
                      String(data.get("password") ?? ""));
    });
    return form;
  }

  async login(username: string, password: string): Promise<void> {
    try {
      const response = await this.api.login(username, password);
      this.session = { token: response.token, role: response.role,
                       username };
      this.render();
    } catch (err) {
      if (err instanceof ApiError) toast(`login: ${err.message}`);
      else throw err;
    }
  }

  private async loadStatus(): Promise<void> {
    if (!this.session) return;
    try {
      const status = await this.api.status(this.session.token);
      const chart = this.root.querySelector<HTMLElement>(".status-chart")!;
      clear(chart);
      chart.append(renderStatusChart(status.points));
      const list = this.root.querySelector<HTMLElement>(".dataset-list")!;
      clear(list);
      for (const label of status.datasets) {
        list.append(el("li", { text: label }));
      }
    } catch (err) {
      if (err instanceof ApiError) toast(`status: ${err.message}`);
      else throw err;
    }
  }

  private editForm(): HTMLElement {
    const monitor = this.session?.role !== "editor";
    const form = el("form", { class: "edit-form" }, [
      el("h2", { text: "Manual updates" }),
      el("input", { name: "book_id", placeholder: "book id" }),
      el("input", { name: "author", placeholder: "author" }),
      el("input", { name: "isbn", placeholder: "ISBN" }),
      el("textarea", { name: "abstract", placeholder: "abstract" }),
    ]);
    const save = el("button", { type: "submit", class: "save-btn",
                                text: "Save changes" });
    const remove = el("button", { type: "button", class: "delete-btn",
                                  text: "Delete book" });
    if (monitor) {
      save.disabled = true;
      remove.disabled = true;
      form.append(el("p", { class: "role-note",
                            text: "Monitor role: read-only access" }));
    }
    form.append(save, remove);
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.save(form);
    });
    remove.addEventListener("click", () => void this.remove(form));
    return form;
  }

  private patchFrom(form: HTMLFormElement) {
    const data = new FormData(form);
    const patch: { abstract?: string; isbn?: string; author?: string } = {};
    for (const key of ["abstract", "isbn", "author"] as const) {
      const value = String(data.get(key) ?? "").trim();
      if (value) patch[key] = value;
    }
    return { bookId: String(data.get("book_id") ?? "").trim(), patch };
  }

  async save(form: HTMLFormElement): Promise<void> {
    if (!this.session || this.session.role !== "editor") return;
    const { bookId, patch } = this.patchFrom(form);
    if (!bookId || Object.keys(patch).length === 0) {
      toast("enter a book id and at least one field");
      return;
    }
    try {
      await this.api.patchBook(this.session.token, bookId, patch);
      toast(`saved ${bookId}`);
    } catch (err) {
      if (err instanceof ApiError) toast(`save: ${err.message}`);
      else throw err;
    }
  }

  async remove(form: HTMLFormElement): Promise<void> {
    if (!this.session || this.session.role !== "editor") return;
    const { bookId } = this.patchFrom(form);
    if (!bookId) {
      toast("enter a book id");
      return;
    }
    try {
      await this.api.deleteBook(this.session.token, bookId);
      toast(`deleted ${bookId}`);
    } catch (err) {
      if (err instanceof ApiError) toast(`delete: ${err.message}`);
      else throw err;
    }
  }
}

/** Cumulative books/pages over time as a simple inline SVG; one marker per
 * status point. */
export function renderStatusChart(points: StatusPoint[]): SVGSVGElement {
  const svgNS = "http://www.w3.org/2000/svg";
  const svg = document.createElementNS(svgNS, "svg");
  svg.setAttribute("viewBox", "0 0 320 120");
  svg.setAttribute("class", "chart");
  if (points.length === 0) return svg;
  const maxPages = Math.max(...points.map((p) => p.cumulative_pages), 1);
  const maxBooks = Math.max(...points.map((p) => p.cumulative_books), 1);
  const x = (i: number) =>
    points.length === 1 ? 160 : 10 + (i * 300) / (points.length - 1);

  const lines: [keyof StatusPoint, number, string][] = [
    ["cumulative_pages", maxPages, "pages-line"],
    ["cumulative_books", maxBooks, "books-line"],
  ];
  for (const [key, max, cls] of lines) {
    const path = points
      .map((p, i) => `${x(i)},${110 - (Number(p[key]) * 100) / max}`)
      .join(" ");
    const polyline = document.createElementNS(svgNS, "polyline");
    polyline.setAttribute("points", path);
    polyline.setAttribute("class", cls);
    polyline.setAttribute("fill", "none");
    svg.append(polyline);
    points.forEach((p, i) => {
      const dot = document.createElementNS(svgNS, "circle");
      dot.setAttribute("cx", String(x(i)));
      dot.setAttribute("cy", String(110 - (Number(p[key]) * 100) / max));
      dot.setAttribute("r", "3");
      dot.setAttribute("class", `point ${cls}`);
      const title = document.createElementNS(svgNS, "title");
      title.textContent = `${p.dataset_label}: ${p[key]}`;
      dot.append(title);
      svg.append(dot);
    });
  }
  return svg;
}
