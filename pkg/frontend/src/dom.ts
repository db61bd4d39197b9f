/** Tiny DOM/SVG builders; no framework, no virtual anything. */

const SVG_NS = "http://www.w3.org/2000/svg";

type Attrs = Record<string, string | number | ((ev: Event) => void)>;

function assign(node: Element, attrs: Attrs): void {
  for (const [k, v] of Object.entries(attrs)) {
    if (typeof v === "function") {
      node.addEventListener(k, v);
    } else {
      node.setAttribute(k, String(v));
    }
  }
}

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Attrs = {},
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  assign(node, attrs);
  for (const c of children) node.append(c);
  return node;
}

export function svg(tag: string, attrs: Attrs = {}, children: (Node | string)[] = []): SVGElement {
  const node = document.createElementNS(SVG_NS, tag) as SVGElement;
  assign(node, attrs);
  for (const c of children) node.append(c);
  return node;
}

export function clear(node: Element): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}

export function emptyState(message: string): HTMLElement {
  return el("div", { class: "empty-state" }, [message]);
}
