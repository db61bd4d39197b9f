/** Dashboard assembly: DOM skeleton, slot wiring, URL-fragment sync.
 *
 * The persistent top strip always shows the selected term's trend; the
 * main panel shows the active view. Zooming the treemap only re-renders
 * from the cached payload (the tree is already complete), so focus
 * changes cost zero API calls.
 */

import {
  ApiClient,
  ApiError,
  CooccurPayload,
  DistfitPayload,
  GeoPayload,
  HorizonPayload,
  NeologismsPayload,
  SourcesPayload,
  SubstancesPayload,
  TreemapPayload,
  TrendPayload,
} from "./api.js";
import { Controller, Slot } from "./controller.js";
import { clear, el, emptyState } from "./dom.js";
import { renderDistfit } from "./distfit.js";
import { renderGeoMap } from "./geomap.js";
import { renderHorizon } from "./horizon.js";
import { renderNeologisms } from "./neologisms.js";
import { parseState, serializeState, statesEqual, ViewState, ActiveView } from "./state.js";
import { renderSubstances } from "./substances.js";
import { layoutChildren, renderForumOverview, renderTreemap } from "./treemap.js";
import { renderTrend } from "./trend.js";
import { renderWordcloud } from "./wordcloud.js";

export const HORIZON_DEPTH = 2;
export const CLOUD_TOP = 40;

const VIEW_LABELS: Record<ActiveView, string> = {
  treemap: "Treemap",
  trend: "Trend",
  horizon: "Horizon",
  cloud: "Co-occurrence",
  neologisms: "New terms",
  map: "Geography",
  substances: "Substances",
  distfit: "Distribution fit",
};

export interface WindowLike {
  location: { hash: string };
  addEventListener(type: "hashchange", handler: () => void): void;
}

export interface App {
  controller: Controller;
  api: ApiClient;
  root: HTMLElement;
  ready: Promise<void>;
  syncFromHash(): Promise<void>;
}

function focusSection(state: ViewState): string {
  return state.focus.length > 0 ? state.focus[state.focus.length - 1] : "";
}

export function createApp(root: HTMLElement, api: ApiClient, win: WindowLike = window): App {
  clear(root);
  const nav = el("nav", { class: "views" });
  const forumSelect = el("select", { class: "forum-select" }) as HTMLSelectElement;
  const termInput = el("input", {
    type: "search",
    class: "term-search",
    placeholder: "term, e.g. mephedrone",
  }) as HTMLInputElement;
  const trendStrip = el("section", { class: "trend-strip" });
  const main = el("section", { class: "main-panel" });
  root.append(
    el("header", {}, [nav, forumSelect, termInput]),
    trendStrip,
    main,
  );

  let forums: SourcesPayload["forums"] = [];
  let treemapCache: { key: string; payload: TreemapPayload } | null = null;

  const treemapKey = (s: ViewState): string | null =>
    s.view === "treemap" && s.forum !== "" ? `treemap|${s.forum}` : null;

  const drawTreemap = (s: ViewState): void => {
    const key = treemapKey(s);
    if (key !== null && treemapCache !== null && treemapCache.key === key) {
      renderTreemap(main, treemapCache.payload, s.focus, {
        onFocus: (path) => void controller.set({ focus: path }),
      });
    }
  };

  const showError = (target: HTMLElement) => (err: unknown): void => {
    clear(target);
    const message = err instanceof ApiError ? `${err.status} ${err.code}: ${err.message}` : String(err);
    target.append(el("div", { class: "error-state" }, [message]));
  };

  const slots: Slot[] = [
    {
      name: "trend",
      keyFor: (s) =>
        s.term !== "" && s.forum !== ""
          ? `trend|${s.forum}|${s.term}|${s.bucket}|${focusSection(s)}`
          : null,
      fetch: (a, s) =>
        a.trend({
          term: s.term,
          source: s.forum,
          section: focusSection(s) || undefined,
          bucket: s.bucket,
        }),
      apply: (p) => renderTrend(trendStrip, p as TrendPayload),
      empty: () => {
        clear(trendStrip);
        trendStrip.append(emptyState("Search a term to see its trend."));
      },
      applyError: showError(trendStrip),
    },
    {
      name: "treemap",
      keyFor: treemapKey,
      fetch: (a, s) => a.treemap(s.forum),
      apply: (p, s) => {
        treemapCache = { key: treemapKey(s) as string, payload: p as TreemapPayload };
        drawTreemap(s);
      },
      empty: () => {
        treemapCache = null;
      },
      applyError: showError(main),
    },
    {
      name: "overview",
      keyFor: (s) => (s.view === "trend" && forums.length > 0 ? "overview" : null),
      fetch: (a) => Promise.all(forums.map((f) => a.treemap(f.id))),
      apply: (p) =>
        renderForumOverview(main, p as TreemapPayload[], (i) =>
          void controller.set({ view: "treemap", forum: forums[i].id, focus: [] }),
        ),
      applyError: showError(main),
    },
    {
      name: "horizon",
      keyFor: (s) =>
        s.view === "horizon" && s.term !== "" && s.forum !== ""
          ? `horizon|${s.forum}|${s.term}|${s.bucket}`
          : null,
      fetch: (a, s) =>
        a.horizon({ term: s.term, forum: s.forum, depth: HORIZON_DEPTH, bucket: s.bucket }),
      apply: (p) => renderHorizon(main, p as HorizonPayload),
      empty: (s) => {
        if (s.view === "horizon") {
          clear(main);
          main.append(emptyState("Search a term to see per-section intensity."));
        }
      },
      applyError: showError(main),
    },
    {
      name: "cloud",
      keyFor: (s) =>
        s.view === "cloud" && s.term !== "" && s.forum !== ""
          ? `cloud|${s.forum}|${s.term}`
          : null,
      fetch: (a, s) => a.cooccur({ term: s.term, source: s.forum, top: CLOUD_TOP }),
      apply: (p) =>
        renderWordcloud(main, (p as CooccurPayload).weights, (term) => void controller.set({ term })),
      empty: (s) => {
        if (s.view === "cloud") {
          clear(main);
          main.append(emptyState("Search a term to see what co-occurs with it."));
        }
      },
      applyError: showError(main),
    },
    {
      name: "neologisms",
      keyFor: (s) =>
        s.view === "neologisms" && s.forum !== "" ? `neo|${s.forum}|${s.cutoff}` : null,
      fetch: (a, s) => a.neologisms({ source: s.forum, after: s.cutoff }),
      apply: (p) =>
        renderNeologisms(main, p as NeologismsPayload, (iso) => void controller.set({ cutoff: iso })),
      applyError: showError(main),
    },
    {
      name: "map",
      keyFor: (s) => (s.view === "map" && s.forum !== "" ? `geo|${s.forum}` : null),
      fetch: (a, s) => a.geo(s.forum),
      apply: (p) => renderGeoMap(main, p as GeoPayload),
      applyError: showError(main),
    },
    {
      name: "substances",
      keyFor: (s) => (s.view === "substances" ? "substances" : null),
      fetch: (a) => a.substances(),
      apply: (p) =>
        renderSubstances(main, p as SubstancesPayload, (term) =>
          void controller.set({ term, view: "trend" }),
        ),
      applyError: showError(main),
    },
    {
      name: "distfit",
      keyFor: (s) =>
        s.view === "distfit" && s.forum !== "" ? `distfit|${s.forum}|posts_per_user` : null,
      fetch: (a, s) => a.distfit(s.forum, "posts_per_user"),
      apply: (p) => renderDistfit(main, p as DistfitPayload),
      applyError: showError(main),
    },
  ];

  const controller = new Controller(api, slots, parseState(win.location.hash), (s) => {
    const fragment = serializeState(s);
    if (win.location.hash.replace(/^#/, "") !== fragment) {
      win.location.hash = fragment;
    }
    nav.querySelectorAll("button").forEach((b) => {
      b.classList.toggle("active", b.dataset.view === s.view);
    });
    if (forumSelect.value !== s.forum) forumSelect.value = s.forum;
    if (termInput.value !== s.term) termInput.value = s.term;
    drawTreemap(s); // zoom re-renders from cache, no fetch
  });

  (Object.keys(VIEW_LABELS) as ActiveView[]).forEach((view) => {
    nav.append(
      el(
        "button",
        { class: "view-button", "data-view": view, click: () => void controller.set({ view }) },
        [VIEW_LABELS[view]],
      ),
    );
  });
  forumSelect.addEventListener("change", () =>
    void controller.set({ forum: forumSelect.value, focus: [] }),
  );
  termInput.addEventListener("change", () => void controller.set({ term: termInput.value.trim() }));

  const syncFromHash = async (): Promise<void> => {
    const parsed = parseState(win.location.hash);
    if (!statesEqual(parsed, controller.state)) await controller.apply(parsed);
  };
  win.addEventListener("hashchange", () => void syncFromHash());

  const ready = api.sources().then(async (sources) => {
    forums = sources.forums;
    clear(forumSelect);
    for (const forum of forums) {
      forumSelect.append(el("option", { value: forum.id }, [forum.name]));
    }
    const state = controller.state;
    await controller.apply(
      state.forum === "" && forums.length > 0 ? { ...state, forum: forums[0].id } : state,
    );
  });

  return { controller, api, root, ready, syncFromHash };
}

export { layoutChildren };
