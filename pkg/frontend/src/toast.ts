import { el } from "./dom.js";

/** Surface an API failure without disturbing the screen. */
export function toast(message: string): void {
  let host = document.querySelector<HTMLElement>(".toast-host");
  if (!host) {
    host = el("div", { class: "toast-host" });
    document.body.append(host);
  }
  const note = el("div", { class: "toast", role: "alert", text: message });
  host.append(note);
  setTimeout(() => note.remove(), 5000);
}
