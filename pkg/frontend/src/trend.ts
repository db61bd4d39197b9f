/** Term trend: monthly document counts as bars, normalized share as a
 * polyline over the same axis. Renders the API series verbatim. */

import { TrendPayload } from "./api.js";
import { clear, el, emptyState, svg } from "./dom.js";

export function renderTrend(
  container: HTMLElement,
  payload: TrendPayload,
  width = 800,
  height = 160,
): void {
  clear(container);
  const points = payload.points;
  const total = points.reduce((acc, p) => acc + p.docs_with_term, 0);
  if (points.length === 0 || total === 0) {
    container.append(emptyState(`No mentions of "${payload.term}" in ${payload.scope.source}.`));
    return;
  }

  const maxCount = Math.max(...points.map((p) => p.docs_with_term));
  const maxNorm = Math.max(...points.map((p) => p.normalized));
  const barW = width / points.length;
  const chart = svg("svg", {
    class: "trend",
    viewBox: `0 0 ${width} ${height}`,
    width,
    height,
  });

  points.forEach((p, i) => {
    const h = maxCount > 0 ? (p.docs_with_term / maxCount) * (height - 20) : 0;
    chart.append(
      svg("rect", {
        class: "trend-bar",
        x: i * barW,
        y: height - h,
        width: Math.max(0.5, barW - 1),
        height: h,
        fill: "#5dade2",
        "data-bucket": p.bucket.start,
        "data-count": p.docs_with_term,
      }),
    );
  });

  const line = points
    .map((p, i) => {
      const x = i * barW + barW / 2;
      const y = height - (maxNorm > 0 ? (p.normalized / maxNorm) * (height - 20) : 0);
      return `${x.toFixed(1)},${y.toFixed(1)}`;
    })
    .join(" ");
  chart.append(
    svg("polyline", { class: "trend-norm", points: line, fill: "none", stroke: "#1a5276" }),
  );

  container.append(chart);
  const peak = points.reduce((a, b) => (b.docs_with_term > a.docs_with_term ? b : a));
  container.append(
    el("p", { class: "trend-caption" }, [
      `"${payload.term}" in ${payload.scope.section ?? payload.scope.source}: ` +
        `${total} documents, peak ${peak.docs_with_term} in ${peak.bucket.start.slice(0, 7)}.`,
    ]),
  );
}
