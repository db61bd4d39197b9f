/** Zoomable treemap of posts per forum section.
 *
 * Layout is a weighted binary partition: the child list splits into two
 * runs of roughly equal post weight, the rectangle splits along its
 * longer side in exactly that weight ratio, and each half recurses.
 * Area is therefore proportional to subtree_posts by construction, at
 * every zoom level.
 */

import { TreemapPayload } from "./api.js";
import { clear, el, emptyState, svg } from "./dom.js";

export interface Rect {
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface LaidChild {
  node: TreemapPayload;
  rect: Rect;
}

export function layoutChildren(children: readonly TreemapPayload[], rect: Rect): LaidChild[] {
  const out: LaidChild[] = new Array(children.length);
  const weights = children.map((c) => c.subtree_posts);

  const place = (lo: number, hi: number, r: Rect): void => {
    if (hi - lo === 1) {
      out[lo] = { node: children[lo], rect: r };
      return;
    }
    let total = 0;
    for (let i = lo; i < hi; i++) total += weights[i];

    // split point: first index where the left run reaches half the weight
    let mid = lo + 1;
    if (total > 0) {
      let acc = 0;
      for (let i = lo; i < hi - 1; i++) {
        acc += weights[i];
        mid = i + 1;
        if (acc >= total / 2) break;
      }
    } else {
      mid = lo + Math.max(1, Math.floor((hi - lo) / 2)); // all-zero run: split by count
    }

    let leftWeight = 0;
    for (let i = lo; i < mid; i++) leftWeight += weights[i];
    const frac = total > 0 ? leftWeight / total : (mid - lo) / (hi - lo);

    if (r.w >= r.h) {
      const wLeft = r.w * frac;
      place(lo, mid, { x: r.x, y: r.y, w: wLeft, h: r.h });
      place(mid, hi, { x: r.x + wLeft, y: r.y, w: r.w - wLeft, h: r.h });
    } else {
      const hTop = r.h * frac;
      place(lo, mid, { x: r.x, y: r.y, w: r.w, h: hTop });
      place(mid, hi, { x: r.x, y: r.y + hTop, w: r.w, h: r.h - hTop });
    }
  };

  if (children.length > 0) place(0, children.length, rect);
  return out;
}

/** Walk the focus path (section ids below the root); bad paths fall back to the root. */
export function resolveFocus(
  root: TreemapPayload,
  focus: readonly string[],
): { node: TreemapPayload; path: string[] } {
  let node = root;
  const path: string[] = [];
  for (const id of focus) {
    const child = node.children.find((c) => c.section_id === id);
    if (!child) return { node: root, path: [] };
    node = child;
    path.push(id);
  }
  return { node, path };
}

export interface TreemapCallbacks {
  onFocus(path: string[]): void;
}

const CELL_FILLS = ["#7fb3d5", "#a9cce3", "#aed6f1", "#d4e6f1", "#85c1e9", "#5dade2"];

export function renderTreemap(
  container: HTMLElement,
  root: TreemapPayload,
  focus: readonly string[],
  callbacks: TreemapCallbacks,
  width = 800,
  height = 520,
): void {
  clear(container);
  const { node, path } = resolveFocus(root, focus);

  const crumbs = el("nav", { class: "breadcrumb" });
  const trail = [root, ...path.map((_, i) => resolveFocus(root, path.slice(0, i + 1)).node)];
  trail.forEach((ancestor, i) => {
    crumbs.append(
      el(
        "button",
        {
          class: "crumb",
          "data-section": ancestor.section_id,
          click: () => callbacks.onFocus(path.slice(0, i)),
        },
        [`${ancestor.name} (${ancestor.subtree_posts})`],
      ),
    );
  });
  container.append(crumbs);

  if (node.subtree_posts === 0) {
    container.append(emptyState(`No posts under ${node.name}.`));
    return;
  }
  if (node.children.length === 0) {
    container.append(
      emptyState(`${node.name} has ${node.own_posts} posts and no subsections.`),
    );
    return;
  }

  const chart = svg("svg", {
    class: "treemap",
    viewBox: `0 0 ${width} ${height}`,
    width,
    height,
  });
  const laid = layoutChildren(node.children, { x: 0, y: 0, w: width, h: height });
  laid.forEach(({ node: child, rect }, i) => {
    const cell = svg("g", {
      class: "treemap-cell",
      "data-section": child.section_id,
      "data-posts": child.subtree_posts,
      click: () => callbacks.onFocus([...path, child.section_id]),
    });
    cell.append(
      svg("rect", {
        x: rect.x,
        y: rect.y,
        width: rect.w,
        height: rect.h,
        fill: CELL_FILLS[i % CELL_FILLS.length],
        stroke: "#fff",
      }),
    );
    if (rect.w > 40 && rect.h > 18) {
      cell.append(
        svg(
          "text",
          { x: rect.x + 4, y: rect.y + 14, "font-size": 12 },
          [`${child.name} (${child.subtree_posts})`],
        ),
      );
    }
    chart.append(cell);
  });
  container.append(chart);
}

/** Side-by-side forum overview; widths proportional to total posts. */
export function renderForumOverview(
  container: HTMLElement,
  forums: readonly TreemapPayload[],
  onPick: (index: number) => void,
  width = 800,
  height = 80,
): void {
  clear(container);
  const total = forums.reduce((acc, f) => acc + f.subtree_posts, 0);
  if (total === 0) {
    container.append(emptyState("No posts in any forum."));
    return;
  }
  const chart = svg("svg", {
    class: "forum-overview",
    viewBox: `0 0 ${width} ${height}`,
    width,
    height,
  });
  let x = 0;
  forums.forEach((forum, i) => {
    const w = (width * forum.subtree_posts) / total;
    chart.append(
      svg(
        "g",
        { class: "forum-strip", "data-forum-posts": forum.subtree_posts, click: () => onPick(i) },
        [
          svg("rect", { x, y: 0, width: w, height, fill: CELL_FILLS[i % CELL_FILLS.length] }),
          svg("text", { x: x + 6, y: 20, "font-size": 13 }, [
            `${forum.name} (${forum.subtree_posts})`,
          ]),
        ],
      ),
    );
    x += w;
  });
  container.append(chart);
}
