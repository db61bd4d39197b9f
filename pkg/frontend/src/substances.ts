/** Monitored-substance summary table, one row per lexicon entry, in API
 * order. Clicking a row selects the substance as the active term. */

import { SubstancesPayload } from "./api.js";
import { clear, el, emptyState } from "./dom.js";

export function renderSubstances(
  container: HTMLElement,
  payload: SubstancesPayload,
  onPick: (term: string) => void,
): void {
  clear(container);
  if (payload.rows.length === 0) {
    container.append(emptyState("No monitored substances matched any source."));
    return;
  }

  const forumIds = Array.from(
    new Set(payload.rows.flatMap((r) => Object.keys(r.post_counts))),
  ).sort();

  const table = el("table", { class: "substances" });
  table.append(
    el("tr", {}, [
      el("th", {}, ["substance"]),
      ...forumIds.map((fid) => el("th", {}, [fid])),
      el("th", {}, ["tweets"]),
      el("th", {}, ["shops"]),
      el("th", {}, ["first seen"]),
    ]),
  );
  for (const row of payload.rows) {
    const first =
      row.first_seen_source === null || row.first_seen_at === null
        ? "never"
        : `${row.first_seen_source} ${row.first_seen_at.slice(0, 10)}`;
    table.append(
      el(
        "tr",
        {
          class: "substance-row",
          "data-substance": row.substance,
          click: () => onPick(row.substance.toLowerCase()),
        },
        [
          el("td", {}, [row.substance]),
          ...forumIds.map((fid) => el("td", {}, [String(row.post_counts[fid] ?? 0)])),
          el("td", {}, [String(row.tweet_count)]),
          el("td", {}, [row.shop_ids.join(", ") || "none"]),
          el("td", {}, [first]),
        ],
      ),
    );
  }
  container.append(table);
}
