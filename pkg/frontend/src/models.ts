/** API payload shapes, mirrored 1:1 from the HTTP service. */

export interface ResultCard {
  book_id: string;
  title: string;
  author: string;
  language: string;
  isbn: string | null;
  genre: string | null;
  source: string | null;
  abstract: string | null;
  cover_image: string | null;
  score: number;
  snippet: string;
}

export interface SearchResponse {
  total_hits: number;
  page: number;
  page_size: number;
  results: ResultCard[];
}

export interface StatsResponse {
  total_books: number;
  total_pages: number;
  languages: string[];
  genres: string[];
  sources: string[];
}

export interface BookResponse {
  book_id: string;
  title: string;
  author: string;
  language: string;
  isbn: string | null;
  genre: string | null;
  source: string | null;
  abstract: string | null;
  cover_image: string | null;
  page_count: number;
  hits: number;
}

export interface PageLine {
  line_no: number;
  bbox: [number, number, number, number];
  text: string;
}

export interface PageResponse {
  page_no: number;
  page_count: number;
  image: string | null;
  lines: PageLine[];
}

export interface MatchedLine {
  line_no: number;
  bbox: [number, number, number, number];
  spans: [number, number][];
  text: string;
}

export interface PageMatch {
  page_no: number;
  image: string | null;
  matched_lines: MatchedLine[];
}

export interface MatchesResponse {
  book_id: string;
  matches: PageMatch[];
}

export interface LoginResponse {
  token: string;
  role: "editor" | "monitor";
  expires_at: number;
}

export interface StatusPoint {
  timestamp: number;
  cumulative_books: number;
  cumulative_pages: number;
  dataset_label: string;
}

export interface StatusResponse {
  points: StatusPoint[];
  datasets: string[];
}

export interface SearchParams {
  q: string;
  lang?: string;
  field?: string;
  genre?: string;
  source?: string;
  multilingual?: boolean;
  page?: number;
  size?: number;
}
