/** Country distribution as a tile cartogram.
 *
 * One tile per country code, colored by log-scaled user count (raw
 * counts vary over orders of magnitude; a linear scale would show one
 * dark tile and noise). The scale choice is stated on the view itself.
 * The gazetteer's UNKNOWN bucket renders as a separate annotation, not
 * a tile, so the map only shows resolved countries.
 */

import { GeoPayload } from "./api.js";
import { clear, el, emptyState, svg } from "./dom.js";

export function logIntensity(count: number, maxCount: number): number {
  if (count <= 0 || maxCount <= 0) return 0;
  return Math.log1p(count) / Math.log1p(maxCount);
}

export function tileColor(intensity: number): string {
  const lightness = 92 - intensity * 58;
  return `hsl(145, 55%, ${lightness}%)`;
}

export function renderGeoMap(container: HTMLElement, payload: GeoPayload, tile = 64): void {
  clear(container);
  const entries = Object.entries(payload.counts)
    .filter(([code]) => code !== "UNKNOWN")
    .sort((a, b) => b[1] - a[1] || a[0].localeCompare(b[0]));
  if (entries.length === 0) {
    container.append(emptyState("No users with a resolvable location."));
    return;
  }

  const maxCount = entries[0][1];
  const perRow = 8;
  const rows = Math.ceil(entries.length / perRow);
  const chart = svg("svg", {
    class: "geomap",
    viewBox: `0 0 ${perRow * tile} ${rows * tile}`,
    width: perRow * tile,
    height: rows * tile,
  });
  entries.forEach(([code, count], i) => {
    const x = (i % perRow) * tile;
    const y = Math.floor(i / perRow) * tile;
    const intensity = logIntensity(count, maxCount);
    chart.append(
      svg(
        "g",
        { class: "geo-tile", "data-country": code, "data-count": count, "data-intensity": intensity.toFixed(4) },
        [
          svg("rect", {
            x: x + 2,
            y: y + 2,
            width: tile - 4,
            height: tile - 4,
            fill: tileColor(intensity),
            stroke: "#889",
          }),
          svg("text", { x: x + tile / 2, y: y + tile / 2 - 2, "text-anchor": "middle", "font-size": 14 }, [code]),
          svg("text", { x: x + tile / 2, y: y + tile / 2 + 14, "text-anchor": "middle", "font-size": 11 }, [
            String(count),
          ]),
        ],
      ),
    );
  });
  container.append(chart);

  const unknown = payload.counts["UNKNOWN"] ?? 0;
  container.append(
    el("p", { class: "scale-note" }, [
      `Raw user counts on a log color scale (log1p(count)/log1p(max)); ` +
        `${unknown} users had no resolvable location.`,
    ]),
  );
}
