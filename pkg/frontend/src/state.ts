/** Shareable analyst state, serialized into the URL fragment.
 *
 * Every field is always emitted in a fixed order so equal states map to
 * equal fragments, and parse(serialize(s)) reproduces s exactly. Focus
 * path segments are individually percent-encoded before joining, so
 * section ids containing "/" survive the round trip.
 */

export type Granularity = "month" | "week" | "day";

export type ActiveView =
  | "treemap"
  | "trend"
  | "horizon"
  | "cloud"
  | "neologisms"
  | "map"
  | "substances"
  | "distfit";

export interface ViewState {
  readonly view: ActiveView;
  readonly forum: string;
  readonly term: string;
  readonly bucket: Granularity;
  readonly focus: readonly string[];
  readonly cutoff: string; // ISO date for the neologism explorer
}

const VIEWS: readonly ActiveView[] = [
  "treemap",
  "trend",
  "horizon",
  "cloud",
  "neologisms",
  "map",
  "substances",
  "distfit",
];

const GRANULARITIES: readonly Granularity[] = ["month", "week", "day"];

export const DEFAULT_STATE: ViewState = {
  view: "treemap",
  forum: "",
  term: "",
  bucket: "month",
  focus: [],
  cutoff: "2010-01-01",
};

export function serializeState(s: ViewState): string {
  const params = new URLSearchParams();
  params.set("view", s.view);
  params.set("forum", s.forum);
  params.set("term", s.term);
  params.set("bucket", s.bucket);
  params.set("focus", s.focus.map(encodeURIComponent).join("/"));
  params.set("cutoff", s.cutoff);
  return params.toString();
}

export function parseState(fragment: string): ViewState {
  const raw = fragment.startsWith("#") ? fragment.slice(1) : fragment;
  const params = new URLSearchParams(raw);
  const pick = <T extends string>(key: string, allowed: readonly T[], fallback: T): T => {
    const v = params.get(key);
    return v !== null && (allowed as readonly string[]).includes(v) ? (v as T) : fallback;
  };
  const focusRaw = params.get("focus") ?? "";
  return {
    view: pick("view", VIEWS, DEFAULT_STATE.view),
    forum: params.get("forum") ?? DEFAULT_STATE.forum,
    term: params.get("term") ?? DEFAULT_STATE.term,
    bucket: pick("bucket", GRANULARITIES, DEFAULT_STATE.bucket),
    focus: focusRaw === "" ? [] : focusRaw.split("/").map(decodeURIComponent),
    cutoff: /^\d{4}-\d{2}-\d{2}$/.test(params.get("cutoff") ?? "")
      ? (params.get("cutoff") as string)
      : DEFAULT_STATE.cutoff,
  };
}

export function statesEqual(a: ViewState, b: ViewState): boolean {
  return (
    a.view === b.view &&
    a.forum === b.forum &&
    a.term === b.term &&
    a.bucket === b.bucket &&
    a.cutoff === b.cutoff &&
    a.focus.length === b.focus.length &&
    a.focus.every((seg, i) => seg === b.focus[i])
  );
}
