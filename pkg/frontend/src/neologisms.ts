/** Neologism explorer: terms first seen after a cutoff day, with a
 * slider that moves the cutoff (each release = one new query upstream). */

import { NeologismsPayload } from "./api.js";
import { clear, el, emptyState } from "./dom.js";

export function renderNeologisms(
  container: HTMLElement,
  payload: NeologismsPayload,
  onCutoff: (isoDate: string) => void,
  sliderRange: { min: string; max: string } = { min: "2008-01-01", max: "2015-12-31" },
): void {
  clear(container);

  const minDay = Date.parse(sliderRange.min);
  const maxDay = Date.parse(sliderRange.max);
  const dayMs = 86_400_000;
  const slider = el("input", {
    type: "range",
    class: "cutoff-slider",
    min: 0,
    max: Math.round((maxDay - minDay) / dayMs),
    value: Math.round((Date.parse(payload.cutoff) - minDay) / dayMs),
  }) as HTMLInputElement;
  slider.addEventListener("change", () => {
    const iso = new Date(minDay + Number(slider.value) * dayMs).toISOString().slice(0, 10);
    onCutoff(iso);
  });
  container.append(
    el("label", { class: "cutoff-label" }, [
      `Terms first seen in ${payload.source} after `,
      el("strong", { class: "cutoff-value" }, [payload.cutoff]),
      slider,
    ]),
  );

  if (payload.rows.length === 0) {
    container.append(
      emptyState(`No new terms after ${payload.cutoff} with at least ${payload.min_count} documents.`),
    );
    return;
  }

  const table = el("table", { class: "neologisms" });
  table.append(
    el("tr", {}, [
      el("th", {}, ["term"]),
      el("th", {}, ["documents"]),
      el("th", {}, ["first seen"]),
    ]),
  );
  for (const row of payload.rows) {
    table.append(
      el("tr", { class: "neologism-row", "data-term": row.term }, [
        el("td", {}, [row.term]),
        el("td", {}, [String(row.doc_count)]),
        el("td", {}, [row.first_seen_at.slice(0, 10)]),
      ]),
    );
  }
  container.append(table);
}
