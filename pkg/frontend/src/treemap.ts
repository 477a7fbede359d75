/** Squarified treemap layout over the API's weighted directory tree.
 *
 * Pure geometry: node area is proportional to weight within the parent
 * rectangle, and each strip is packed along the short side while packing
 * improves the worst aspect ratio. Rendering to SVG happens separately so
 * the layout itself is unit-testable.
 */

import type { TreemapNode } from "./types.js";

export interface Rect {
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface LaidOutCell extends Rect {
  node: TreemapNode;
}

function worstAspect(areas: number[], stripTotal: number, side: number): number {
  const thickness = stripTotal / side;
  let worst = 1;
  for (const area of areas) {
    const span = area / thickness;
    const ratio = Math.max(thickness / span, span / thickness);
    if (ratio > worst) worst = ratio;
  }
  return worst;
}

/** Lay the children of one node out inside the given rectangle. */
export function layoutChildren(children: TreemapNode[], rect: Rect): LaidOutCell[] {
  const weighted = children.filter((child) => child.weight > 0);
  const total = weighted.reduce((sum, child) => sum + child.weight, 0);
  if (total <= 0 || rect.w <= 0 || rect.h <= 0) return [];

  const scale = (rect.w * rect.h) / total;
  let remaining = weighted.map((node) => ({ node, area: node.weight * scale }));
  const cells: LaidOutCell[] = [];
  let { x, y, w, h } = rect;

  while (remaining.length > 0) {
    const horizontal = h > w; // strip lies along the short side
    const side = horizontal ? w : h;

    const strip = [remaining[0]];
    let stripTotal = remaining[0].area;
    for (let i = 1; i < remaining.length; i++) {
      const candidateAreas = strip.map((s) => s.area).concat(remaining[i].area);
      const current = worstAspect(strip.map((s) => s.area), stripTotal, side);
      const withNext = worstAspect(candidateAreas, stripTotal + remaining[i].area, side);
      if (withNext <= current) {
        strip.push(remaining[i]);
        stripTotal += remaining[i].area;
      } else {
        break;
      }
    }
    remaining = remaining.slice(strip.length);

    const thickness = stripTotal / side;
    let offset = 0;
    for (let i = 0; i < strip.length; i++) {
      const span = i === strip.length - 1 ? side - offset : strip[i].area / thickness;
      cells.push(
        horizontal
          ? { node: strip[i].node, x: x + offset, y, w: span, h: thickness }
          : { node: strip[i].node, x, y: y + offset, w: thickness, h: span },
      );
      offset += span;
    }
    if (horizontal) {
      y += thickness;
      h -= thickness;
    } else {
      x += thickness;
      w -= thickness;
    }
  }
  return cells;
}

/** Walk a path like "src/deep" down from the root; null when absent. */
export function descendInto(root: TreemapNode, path: string): TreemapNode | null {
  if (path === "" || path === root.path) return root;
  let current = root;
  outer: while (current.path !== path) {
    for (const child of current.children) {
      if (path === child.path || path.startsWith(child.path + "/")) {
        current = child;
        continue outer;
      }
    }
    return null;
  }
  return current;
}

const PALETTE = ["#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7"];

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** SVG for one treemap level; cells carry data-path for click-to-descend. */
export function renderTreemapSvg(node: TreemapNode, width: number, height: number): string {
  const cells = layoutChildren(node.children, { x: 0, y: 0, w: width, h: height });
  const parts: string[] = [
    `<svg class="treemap" viewBox="0 0 ${width} ${height}" width="${width}" height="${height}" role="img">`,
  ];
  if (cells.length === 0) {
    parts.push(
      `<text x="${width / 2}" y="${height / 2}" text-anchor="middle" class="empty">no outstanding violations</text>`,
    );
  }
  cells.forEach((cell, i) => {
    const fill = PALETTE[i % PALETTE.length];
    const label = `${cell.node.name} — ${cell.node.weight} pts, ${cell.node.violation_count} open`;
    parts.push(
      `<g class="cell" data-path="${esc(cell.node.path)}">` +
        `<rect x="${cell.x.toFixed(2)}" y="${cell.y.toFixed(2)}" width="${cell.w.toFixed(2)}" height="${cell.h.toFixed(2)}" fill="${fill}">` +
        `<title>${esc(label)}</title></rect>` +
        (cell.w > 40 && cell.h > 14
          ? `<text x="${(cell.x + 4).toFixed(2)}" y="${(cell.y + 13).toFixed(2)}">${esc(cell.node.name)}</text>`
          : "") +
        `</g>`,
    );
  });
  parts.push("</svg>");
  return parts.join("");
}
