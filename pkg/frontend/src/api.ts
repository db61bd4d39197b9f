/** Typed client for the read-only analytics API.
 *
 * All statistics come from these payloads verbatim; the dashboard never
 * recomputes them. The fetch function is injectable so tests can serve
 * captured fixture responses and count calls.
 */

export interface BucketPayload {
  granularity: string;
  start: string;
}

export interface TrendPointPayload {
  bucket: BucketPayload;
  docs_with_term: number;
  docs_total: number;
  normalized: number;
}

export interface ScopePayload {
  source: string;
  section: string | null;
}

export interface TrendPayload {
  term: string;
  scope: ScopePayload;
  granularity: string;
  points: TrendPointPayload[];
}

export interface HorizonPayload {
  term: string;
  forum_id: string;
  depth: number;
  granularity: string;
  series: TrendPayload[];
}

export interface TreemapPayload {
  section_id: string;
  name: string;
  own_posts: number;
  subtree_posts: number;
  children: TreemapPayload[];
}

export interface CloudWeight {
  term: string;
  shared_docs: number;
}

export interface CooccurPayload {
  term: string;
  scope: ScopePayload;
  weights: CloudWeight[];
}

export interface NeologismRowPayload {
  term: string;
  doc_count: number;
  first_seen_at: string;
}

export interface NeologismsPayload {
  source: string;
  cutoff: string;
  min_count: number;
  rows: NeologismRowPayload[];
}

export interface GeoPayload {
  counts: Record<string, number>;
}

export interface FitPayload {
  model: string;
  params: Record<string, number>;
  xmin: number;
  ks_distance: number;
  log_likelihood: number;
  n_tail: number;
  converged: boolean;
}

export interface ComparisonPayload {
  model_a: string;
  model_b: string;
  r: number;
  p: number;
}

export interface DistfitPayload {
  ranked: string[];
  groups: string[][];
  fits: Record<string, FitPayload>;
  comparisons: ComparisonPayload[];
  forum_id: string;
  metric: string;
}

export interface SubstanceRowPayload {
  substance: string;
  tweet_count: number;
  post_counts: Record<string, number>;
  shop_ids: number[];
  first_seen_source: string | null;
  first_seen_at: string | null;
}

export interface SubstancesPayload {
  rows: SubstanceRowPayload[];
}

export interface OverlapPairPayload {
  source_a: string;
  source_b: string;
  domains_a: number;
  domains_b: number;
  intersection: string[];
}

export interface OverlapPayload {
  domains: Record<string, string[]>;
  pairs: OverlapPairPayload[];
}

export interface ForumInfoPayload {
  id: string;
  name: string;
  root_section: string;
  sections: number;
  threads: number;
  posts: number;
  users: number;
}

export interface SourcesPayload {
  forums: ForumInfoPayload[];
  tweets: number;
  shops: { shop_id: number; domain: string; snapshots: number; latest_captured_at: string }[];
}

export interface ResponseLike {
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}

export type FetchLike = (url: string) => Promise<ResponseLike>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export type QueryParams = Record<string, string | number | undefined | null>;

export function buildQuery(params: QueryParams = {}): string {
  const search = new URLSearchParams();
  for (const [key, value] of Object.entries(params)) {
    if (value !== undefined && value !== null && value !== "") {
      search.set(key, String(value));
    }
  }
  const qs = search.toString();
  return qs === "" ? "" : `?${qs}`;
}

export class ApiClient {
  constructor(
    private readonly base: string = "/api/v1",
    private readonly fetchFn: FetchLike = (url) => fetch(url),
  ) {}

  private async get<T>(path: string, params: QueryParams = {}): Promise<T> {
    const res = await this.fetchFn(this.base + path + buildQuery(params));
    const body = (await res.json()) as { error?: { code?: string; message?: string } };
    if (!res.ok) {
      const err = body?.error ?? {};
      throw new ApiError(res.status, err.code ?? "unknown", err.message ?? "request failed");
    }
    return body as T;
  }

  sources(): Promise<SourcesPayload> {
    return this.get("/sources");
  }

  treemap(forum: string): Promise<TreemapPayload> {
    return this.get(`/forums/${encodeURIComponent(forum)}/treemap`);
  }

  trend(q: { term: string; source: string; section?: string; bucket?: string }): Promise<TrendPayload> {
    return this.get("/trend", q);
  }

  horizon(q: { term: string; forum: string; depth: number; bucket?: string }): Promise<HorizonPayload> {
    return this.get("/horizon", q);
  }

  cooccur(q: { term: string; source: string; top?: number }): Promise<CooccurPayload> {
    return this.get("/cooccur", q);
  }

  neologisms(q: { source: string; after: string; min_count?: number }): Promise<NeologismsPayload> {
    return this.get("/neologisms", q);
  }

  geo(forum: string): Promise<GeoPayload> {
    return this.get("/geo", { forum });
  }

  distfit(forum: string, metric: string): Promise<DistfitPayload> {
    return this.get("/distfit", { forum, metric });
  }

  substances(): Promise<SubstancesPayload> {
    return this.get("/substances");
  }

  linkOverlap(): Promise<OverlapPayload> {
    return this.get("/links/overlap");
  }
}
