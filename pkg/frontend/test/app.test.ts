import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { createApp, WindowLike } from "../src/app.js";
import { parseState, serializeState } from "../src/state.js";

import { fixtureFetch, flush, Route } from "./helpers.js";

import sourcesFixture from "./fixtures/sources.json";
import treemapDf from "./fixtures/treemap_forum-df.json";
import treemapBl from "./fixtures/treemap_forum-bl.json";
import trendMephedrone from "./fixtures/trend_mephedrone_forum-df.json";
import trendSpeed from "./fixtures/trend_speed_forum-df.json";
import trendMdpv from "./fixtures/trend_mdpv_forum-df.json";
import trendMexedrone from "./fixtures/trend_mexedrone_forum-df.json";
import cloudMephedrone from "./fixtures/cooccur_mephedrone_forum-df_top40.json";
import cloudSpeed from "./fixtures/cooccur_speed_forum-df_top40.json";
import horizonMephedrone from "./fixtures/horizon_mephedrone_forum-df_d2.json";
import neologisms from "./fixtures/neologisms_forum-df.json";
import geo from "./fixtures/geo_forum-df.json";
import substances from "./fixtures/substances.json";
import distfit from "./fixtures/distfit_forum-bl_user.json";

interface FakeWindow extends WindowLike {
  handlers: (() => void)[];
}

function fakeWindow(hash = ""): FakeWindow {
  const handlers: (() => void)[] = [];
  return {
    location: { hash },
    addEventListener: (_type, handler) => {
      handlers.push(handler);
    },
    handlers,
  };
}

function apiRoutes(): Route[] {
  return [
    ["/api/v1/sources", sourcesFixture],
    ["/forums/forum-df/treemap", treemapDf],
    ["/forums/forum-bl/treemap", treemapBl],
    [/\/trend\?term=mephedrone/, trendMephedrone],
    [/\/trend\?term=speed/, trendSpeed],
    [/\/trend\?term=mdpv/, trendMdpv],
    [/\/trend\?term=mexedrone/, trendMexedrone],
    [/\/cooccur\?term=mephedrone/, cloudMephedrone],
    [/\/cooccur\?term=speed/, cloudSpeed],
    [/\/horizon\?term=mephedrone/, horizonMephedrone],
    ["/neologisms", neologisms],
    ["/geo", geo],
    ["/substances", substances],
    ["/distfit", distfit],
  ];
}

function boot(hash: string) {
  const rec = fixtureFetch(apiRoutes());
  const win = fakeWindow(hash);
  const root = document.createElement("div");
  const app = createApp(root, new ApiClient("/api/v1", rec.fetch), win);
  return { rec, win, root, app };
}

const CLOUD_HASH =
  "view=cloud&forum=forum-df&term=mephedrone&bucket=month&focus=&cutoff=2010-01-01";

describe("dashboard boot", () => {
  it("boots from the URL fragment and fetches each live panel once", async () => {
    const { rec, root, app } = boot(CLOUD_HASH);
    await app.ready;
    await flush();

    expect(rec.count("/sources")).toBe(1);
    expect(rec.count("/trend")).toBe(1);
    expect(rec.count("/cooccur")).toBe(1);
    expect(rec.count("/treemap")).toBe(0);

    expect(app.controller.state.term).toBe("mephedrone");
    expect(root.querySelectorAll("text.cloud-word").length).toBe(40);
    expect(root.querySelector("p.trend-caption")!.textContent).toContain("mephedrone");

    const select = root.querySelector("select.forum-select") as HTMLSelectElement;
    expect(select.value).toBe("forum-df");
    const input = root.querySelector("input.term-search") as HTMLInputElement;
    expect(input.value).toBe("mephedrone");
  });

  it("defaults the forum to the first source when the fragment has none", async () => {
    const { win, app } = boot("");
    await app.ready;
    await flush();
    expect(app.controller.state.forum).toBe("forum-bl");
    expect(win.location.hash).toBe(serializeState(app.controller.state));
  });
});

describe("wordcloud interaction", () => {
  it("clicking a word updates the ViewState, refetches the trend exactly once, and syncs the URL", async () => {
    const { rec, win, root, app } = boot(CLOUD_HASH);
    await app.ready;
    await flush();
    const trendCallsBefore = rec.count("/trend");
    expect(trendCallsBefore).toBe(1);

    const word = root.querySelector('text.cloud-word[data-term="speed"]');
    expect(word).not.toBeNull();
    word!.dispatchEvent(new MouseEvent("click", { bubbles: true }));
    await flush();

    // ViewState updated
    expect(app.controller.state.term).toBe("speed");
    // exactly one extra trend request, for the clicked term
    expect(rec.count("/trend")).toBe(trendCallsBefore + 1);
    expect(rec.count(/\/trend\?term=speed/)).toBe(1);
    // cloud re-keys on the term; nothing else moves
    expect(rec.count("/cooccur")).toBe(2);
    expect(rec.count("/sources")).toBe(1);
    expect(rec.count("/treemap")).toBe(0);
    // trend strip now shows the clicked term
    expect(root.querySelector("p.trend-caption")!.textContent).toContain("speed");
    // URL fragment follows the state
    expect(win.location.hash).toContain("term=speed");
    expect(win.location.hash).toBe(serializeState(app.controller.state));
  });

  it("clicking the same word again refetches nothing", async () => {
    const { rec, root, app } = boot(CLOUD_HASH);
    await app.ready;
    await flush();
    root
      .querySelector('text.cloud-word[data-term="speed"]')!
      .dispatchEvent(new MouseEvent("click", { bubbles: true }));
    await flush();
    const calls = rec.calls.length;

    // the speed cloud contains mephedrone words too; click "speed" again via input
    const input = root.querySelector("input.term-search") as HTMLInputElement;
    input.value = "speed";
    input.dispatchEvent(new Event("change"));
    await flush();
    expect(rec.calls.length).toBe(calls);
  });
});

describe("treemap interaction", () => {
  const TREEMAP_HASH =
    "view=treemap&forum=forum-df&term=&bucket=month&focus=&cutoff=2010-01-01";

  it("zooms on click and back out via the breadcrumb without any new fetches", async () => {
    const { rec, win, root, app } = boot(TREEMAP_HASH);
    await app.ready;
    await flush();
    expect(rec.count("/treemap")).toBe(1);

    const main = root.querySelector("section.main-panel")!;
    const topCells = () =>
      Array.from(main.querySelectorAll("g.treemap-cell")).map((c) =>
        c.getAttribute("data-section"),
      );
    expect(topCells()).toEqual(["df-chems", "df-community"]);

    main
      .querySelector('g.treemap-cell[data-section="df-chems"]')!
      .dispatchEvent(new MouseEvent("click", { bubbles: true }));
    await flush();

    expect(app.controller.state.focus).toEqual(["df-chems"]);
    expect(topCells()).toEqual(["df-bk", "df-cann"]);
    expect(win.location.hash).toContain("focus=df-chems");
    expect(rec.count("/treemap")).toBe(1); // zoom rendered from cache

    const crumbs = main.querySelectorAll("nav.breadcrumb button");
    expect(crumbs).toHaveLength(2);
    (crumbs[0] as HTMLButtonElement).click();
    await flush();

    expect(app.controller.state.focus).toEqual([]);
    expect(topCells()).toEqual(["df-chems", "df-community"]);
    expect(rec.count("/treemap")).toBe(1); // still only the initial fetch
  });

  it("changing the forum refetches the treemap and resets the focus", async () => {
    const { rec, root, app } = boot(TREEMAP_HASH);
    await app.ready;
    await flush();
    root
      .querySelector('g.treemap-cell[data-section="df-chems"]')!
      .dispatchEvent(new MouseEvent("click", { bubbles: true }));
    await flush();
    expect(app.controller.state.focus).toEqual(["df-chems"]);

    const select = root.querySelector("select.forum-select") as HTMLSelectElement;
    select.value = "forum-bl";
    select.dispatchEvent(new Event("change"));
    await flush();

    expect(app.controller.state.forum).toBe("forum-bl");
    expect(app.controller.state.focus).toEqual([]);
    expect(rec.count("/forums/forum-bl/treemap")).toBe(1);
    const main = root.querySelector("section.main-panel")!;
    expect(
      Array.from(main.querySelectorAll("g.treemap-cell")).map((c) =>
        c.getAttribute("data-section"),
      ),
    ).toEqual(["bl-dd", "bl-rc", "bl-lounge"]);
  });
});

describe("URL synchronization", () => {
  it("applies an externally changed fragment and round-trips it exactly", async () => {
    const { rec, win, root, app } = boot(CLOUD_HASH);
    await app.ready;
    await flush();

    const fragment = "view=map&forum=forum-df&term=mephedrone&bucket=month&focus=&cutoff=2010-01-01";
    win.location.hash = fragment;
    await app.syncFromHash();
    await flush();

    expect(app.controller.state.view).toBe("map");
    expect(serializeState(app.controller.state)).toBe(fragment);
    expect(parseState(win.location.hash)).toEqual(app.controller.state);
    expect(rec.count("/geo")).toBe(1);
    expect(root.querySelector('g.geo-tile[data-country="GB"]')).not.toBeNull();
    // trend key did not move: no refetch on a pure view change
    expect(rec.count("/trend")).toBe(1);
  });

  it("wires the hashchange listener to the same sync", async () => {
    const { win, app } = boot(CLOUD_HASH);
    await app.ready;
    await flush();
    expect(win.handlers).toHaveLength(1);

    win.location.hash =
      "view=substances&forum=forum-df&term=mephedrone&bucket=month&focus=&cutoff=2010-01-01";
    win.handlers[0]();
    await flush();
    expect(app.controller.state.view).toBe("substances");
  });

  it("keeps every view reachable and rendered purely from API payloads", async () => {
    const { rec, root, app } = boot(CLOUD_HASH);
    await app.ready;
    await flush();
    const main = root.querySelector("section.main-panel")!;

    await app.controller.set({ view: "horizon" });
    await flush();
    expect(main.querySelectorAll("g.horizon-row")).toHaveLength(3);

    await app.controller.set({ view: "neologisms" });
    await flush();
    expect(main.querySelectorAll("tr.neologism-row")).toHaveLength(15);

    await app.controller.set({ view: "distfit" });
    await flush();
    expect(main.querySelectorAll("tr.fit-row")).toHaveLength(4);

    await app.controller.set({ view: "substances" });
    await flush();
    expect(main.querySelectorAll("tr.substance-row").length).toBeGreaterThan(0);

    for (const endpoint of ["/horizon", "/neologisms", "/distfit", "/substances"]) {
      expect(rec.count(endpoint)).toBe(1);
    }
  });
});

describe("cross-panel interactions", () => {
  it("clicking a substance row jumps to its trend", async () => {
    const { rec, root, app } = boot(
      "view=substances&forum=forum-df&term=&bucket=month&focus=&cutoff=2010-01-01",
    );
    await app.ready;
    await flush();
    expect(rec.count("/trend")).toBe(0); // no term yet

    root
      .querySelector('tr.substance-row[data-substance="Mexedrone"]')!
      .dispatchEvent(new MouseEvent("click", { bubbles: true }));
    await flush();

    expect(app.controller.state.view).toBe("trend");
    expect(app.controller.state.term).toBe("mexedrone");
    expect(rec.count(/\/trend\?term=mexedrone/)).toBe(1);
    // the trend view's overview strip loads both forums, sized by posts
    const strips = root.querySelectorAll("g.forum-strip");
    expect(strips).toHaveLength(2);
  });

  it("moving the neologism cutoff slider issues exactly one new query", async () => {
    const { rec, root, app } = boot(
      "view=neologisms&forum=forum-df&term=&bucket=month&focus=&cutoff=2010-01-01",
    );
    await app.ready;
    await flush();
    expect(rec.count("/neologisms")).toBe(1);

    const slider = root.querySelector("input.cutoff-slider") as HTMLInputElement;
    slider.value = "1200";
    slider.dispatchEvent(new Event("change"));
    await flush();

    expect(rec.count("/neologisms")).toBe(2);
    const neoCalls = rec.calls.filter((u) => u.includes("/neologisms"));
    expect(neoCalls[neoCalls.length - 1]).toContain("after=" + app.controller.state.cutoff);
  });
});
