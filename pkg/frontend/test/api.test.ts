import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, buildQuery, OverlapPayload } from "../src/api.js";
import { fixtureFetch, responseOf } from "./helpers.js";

import overlapFixture from "./fixtures/links_overlap.json";

describe("buildQuery", () => {
  it("serializes defined params and skips empty ones", () => {
    expect(buildQuery({ term: "mdpv", depth: 2 })).toBe("?term=mdpv&depth=2");
    expect(buildQuery({ term: "x", section: undefined, bucket: null, extra: "" })).toBe(
      "?term=x",
    );
    expect(buildQuery({})).toBe("");
    expect(buildQuery()).toBe("");
  });

  it("escapes reserved characters", () => {
    expect(buildQuery({ term: "a b&c=d" })).toBe("?term=a+b%26c%3Dd");
  });
});

describe("ApiClient URLs", () => {
  it("hits the documented endpoint paths with the right query strings", async () => {
    const rec = fixtureFetch([[/.*/, { ok: true }]]);
    const api = new ApiClient("/api/v1", rec.fetch);

    await api.sources();
    await api.treemap("forum df");
    await api.trend({ term: "mephedrone", source: "forum-df", section: "df-bk", bucket: "month" });
    await api.horizon({ term: "mephedrone", forum: "forum-df", depth: 2 });
    await api.cooccur({ term: "mephedrone", source: "forum-df", top: 40 });
    await api.neologisms({ source: "forum-df", after: "2010-01-01" });
    await api.geo("forum-df");
    await api.distfit("forum-bl", "posts_per_user");
    await api.substances();
    await api.linkOverlap();

    expect(rec.calls).toEqual([
      "/api/v1/sources",
      "/api/v1/forums/forum%20df/treemap",
      "/api/v1/trend?term=mephedrone&source=forum-df&section=df-bk&bucket=month",
      "/api/v1/horizon?term=mephedrone&forum=forum-df&depth=2",
      "/api/v1/cooccur?term=mephedrone&source=forum-df&top=40",
      "/api/v1/neologisms?source=forum-df&after=2010-01-01",
      "/api/v1/geo?forum=forum-df",
      "/api/v1/distfit?forum=forum-bl&metric=posts_per_user",
      "/api/v1/substances",
      "/api/v1/links/overlap",
    ]);
  });

  it("returns the parsed body on success", async () => {
    const rec = fixtureFetch([[/\/geo\b/, { counts: { GB: 40 } }]]);
    const api = new ApiClient("/api/v1", rec.fetch);
    expect(await api.geo("forum-df")).toEqual({ counts: { GB: 40 } });
  });

  it("passes captured payloads through untouched", async () => {
    const rec = fixtureFetch([["/links/overlap", overlapFixture]]);
    const api = new ApiClient("/api/v1", rec.fetch);
    const overlap = (await api.linkOverlap()) as OverlapPayload;
    expect(overlap).toEqual(overlapFixture);
    for (const pair of overlap.pairs) {
      expect(overlap.domains[pair.source_a].length).toBe(pair.domains_a);
      expect(overlap.domains[pair.source_b].length).toBe(pair.domains_b);
    }
  });

  it("throws a typed ApiError built from the error body", async () => {
    const fetchErr = () =>
      Promise.resolve(
        responseOf({ error: { code: "unknown_forum", message: "no such forum" } }, 404),
      );
    const api = new ApiClient("/api/v1", fetchErr);
    const err = await api.treemap("nope").catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    const apiErr = err as ApiError;
    expect(apiErr.status).toBe(404);
    expect(apiErr.code).toBe("unknown_forum");
    expect(apiErr.message).toBe("no such forum");
  });

  it("falls back to a generic ApiError when the error body is malformed", async () => {
    const api = new ApiClient("/api/v1", () => Promise.resolve(responseOf({}, 500)));
    const err = (await api.sources().catch((e: unknown) => e)) as ApiError;
    expect(err.status).toBe(500);
    expect(err.code).toBe("unknown");
  });
});
