/** Co-occurrence wordcloud with a deterministic seeded layout.
 *
 * Font area is proportional to the shared-document weight (size goes as
 * the square root). Words keep their API order (heaviest first) and walk
 * an Archimedean spiral from the canvas center until their bounding box
 * stops colliding; the only randomness is the per-word start angle,
 * drawn from a fixed-seed PRNG, so equal weights render equal clouds.
 */

import { CloudWeight } from "./api.js";
import { clear, emptyState, svg } from "./dom.js";

export interface PlacedWord {
  term: string;
  weight: number;
  x: number;
  y: number;
  fontSize: number;
  boxW: number;
  boxH: number;
}

export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

const MAX_FONT = 44;
const CHAR_WIDTH = 0.62; // bounding-box estimate per character, em units

function boxesOverlap(a: PlacedWord, b: PlacedWord): boolean {
  return (
    Math.abs(a.x - b.x) * 2 < a.boxW + b.boxW && Math.abs(a.y - b.y) * 2 < a.boxH + b.boxH
  );
}

export function layoutCloud(
  weights: readonly CloudWeight[],
  width = 800,
  height = 500,
  seed = 42,
): PlacedWord[] {
  if (weights.length === 0) return [];
  const rng = mulberry32(seed);
  const maxWeight = Math.max(...weights.map((w) => w.shared_docs));
  const placed: PlacedWord[] = [];

  for (const { term, shared_docs } of weights) {
    const fontSize = maxWeight > 0 ? MAX_FONT * Math.sqrt(shared_docs / maxWeight) : 0;
    const word: PlacedWord = {
      term,
      weight: shared_docs,
      x: width / 2,
      y: height / 2,
      fontSize,
      boxW: Math.max(1, fontSize * CHAR_WIDTH * term.length),
      boxH: Math.max(1, fontSize * 1.08),
    };
    const theta0 = rng() * 2 * Math.PI;
    for (let step = 0; step < 4000; step++) {
      const theta = theta0 + step * 0.3;
      const r = 1.8 * step * 0.3;
      word.x = width / 2 + r * Math.cos(theta);
      word.y = height / 2 + 0.62 * r * Math.sin(theta);
      if (placed.every((other) => !boxesOverlap(word, other))) break;
    }
    placed.push(word);
  }
  return placed;
}

export function renderWordcloud(
  container: HTMLElement,
  weights: readonly CloudWeight[],
  onTerm: (term: string) => void,
  width = 800,
  height = 500,
  seed = 42,
): void {
  clear(container);
  if (weights.length === 0) {
    container.append(emptyState("No co-occurring terms."));
    return;
  }
  const chart = svg("svg", {
    class: "wordcloud",
    viewBox: `0 0 ${width} ${height}`,
    width,
    height,
  });
  for (const word of layoutCloud(weights, width, height, seed)) {
    chart.append(
      svg(
        "text",
        {
          class: "cloud-word",
          x: word.x.toFixed(2),
          y: word.y.toFixed(2),
          "font-size": word.fontSize.toFixed(2),
          "text-anchor": "middle",
          "data-term": word.term,
          "data-weight": word.weight,
          click: () => onTerm(word.term),
        },
        [word.term],
      ),
    );
  }
  container.append(chart);
}
