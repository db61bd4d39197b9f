/** Per-section intensity rows: one row per section of the chosen forum
 * depth, one cell per time bucket, darker = higher normalized term
 * frequency. Band thresholds are linear in the chart-wide maximum, so
 * intensity is monotone in the normalized value across all rows.
 */

import { HorizonPayload } from "./api.js";
import { clear, el, emptyState, svg } from "./dom.js";

export const DEFAULT_BANDS = 4;

/** Band index in [0, bands): zero stays lightest, the maximum is darkest. */
export function bandFor(value: number, max: number, bands: number = DEFAULT_BANDS): number {
  if (!(max > 0) || value <= 0) return 0;
  const scaled = Math.floor((value / max) * (bands - 1) * (1 - 1e-12));
  return 1 + Math.min(scaled, bands - 2);
}

export function bandColor(band: number, bands: number = DEFAULT_BANDS): string {
  const intensity = bands <= 1 ? 0 : band / (bands - 1);
  const lightness = 94 - intensity * 64;
  return `hsl(210, 65%, ${lightness}%)`;
}

export function renderHorizon(
  container: HTMLElement,
  payload: HorizonPayload,
  bands: number = DEFAULT_BANDS,
  cellSize = 14,
  labelWidth = 140,
): void {
  clear(container);

  const max = Math.max(
    0,
    ...payload.series.flatMap((s) => s.points.map((p) => p.normalized)),
  );
  const anyHits = payload.series.some((s) => s.points.some((p) => p.docs_with_term > 0));
  if (payload.series.length === 0 || !anyHits) {
    container.append(emptyState(`No mentions of "${payload.term}" in ${payload.forum_id}.`));
    return;
  }

  const cols = Math.max(...payload.series.map((s) => s.points.length));
  const width = labelWidth + cols * cellSize;
  const height = payload.series.length * (cellSize + 4);
  const chart = svg("svg", {
    class: "horizon",
    viewBox: `0 0 ${width} ${height}`,
    width,
    height,
  });

  payload.series.forEach((series, rowIdx) => {
    const y = rowIdx * (cellSize + 4);
    const row = svg("g", {
      class: "horizon-row",
      "data-section": series.scope.section ?? "",
    });
    row.append(
      svg("text", { x: 0, y: y + cellSize - 3, "font-size": 11 }, [
        series.scope.section ?? payload.forum_id,
      ]),
    );
    series.points.forEach((point, colIdx) => {
      const band = bandFor(point.normalized, max, bands);
      row.append(
        svg("rect", {
          class: "horizon-cell",
          x: labelWidth + colIdx * cellSize,
          y,
          width: cellSize - 1,
          height: cellSize,
          fill: bandColor(band, bands),
          "data-band": band,
          "data-bucket": point.bucket.start,
          "data-normalized": point.normalized,
        }),
      );
    });
    chart.append(row);
  });

  container.append(chart);
  container.append(
    el("p", { class: "scale-note" }, [
      `${bands} linear intensity bands over the chart maximum; blank = no mentions.`,
    ]),
  );
}
