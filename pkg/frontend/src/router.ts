/** Hash routing: #/search, #/read/<book>/<page>, #/admin. */

export type Route =
  | { kind: "search" }
  | { kind: "read"; bookId: string; page: number }
  | { kind: "admin" };

export function parseRoute(hash: string): Route {
  const parts = hash.replace(/^#\/?/, "").split("/").filter(Boolean);
  if (parts[0] === "read" && parts[1]) {
    const page = Number(parts[2] ?? "1");
    return { kind: "read", bookId: decodeURIComponent(parts[1]),
             page: Number.isFinite(page) && page >= 1 ? page : 1 };
  }
  if (parts[0] === "admin") return { kind: "admin" };
  return { kind: "search" };
}

export function readerHash(bookId: string, page: number): string {
  return `#/read/${encodeURIComponent(bookId)}/${page}`;
}
