import { comparisonStroke, focusFill, labelColor, markerFill, markerStroke } from "./colors.js";
import type { WireFrame, WireLeafPoint, WireSummary } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

/** Uniform layout-to-screen mapping that fits the frame into the viewport. */
export interface ViewTransform {
  scale: number;
  tx: number;
  ty: number;
}

export function makeTransform(frame: WireFrame, width: number, height: number): ViewTransform {
  const xs: number[] = [];
  const ys: number[] = [];
  for (const m of frame.markers) {
    xs.push(m.x - m.radius, m.x + m.radius);
    ys.push(m.y - m.radius, m.y + m.radius);
  }
  for (const p of frame.focus_polygons) {
    for (const [x, y] of p.vertices) {
      xs.push(x);
      ys.push(y);
    }
  }
  if (xs.length === 0) {
    return { scale: 1, tx: width / 2, ty: height / 2 };
  }
  const minX = Math.min(...xs);
  const maxX = Math.max(...xs);
  const minY = Math.min(...ys);
  const maxY = Math.max(...ys);
  const margin = 0.05;
  const spanX = Math.max(maxX - minX, 1e-12);
  const spanY = Math.max(maxY - minY, 1e-12);
  const scale = Math.min(
    (width * (1 - 2 * margin)) / spanX,
    (height * (1 - 2 * margin)) / spanY,
  );
  return {
    scale,
    tx: width / 2 - scale * (minX + maxX) / 2,
    ty: height / 2 - scale * (minY + maxY) / 2,
  };
}

export function toScreen(t: ViewTransform, x: number, y: number): [number, number] {
  return [t.scale * x + t.tx, t.scale * y + t.ty];
}

function el<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  return node;
}

export interface RenderOptions {
  thumbnailMode?: boolean;
}

/** Draw one frame into the SVG root: focus polygons below, markers above,
 * context desaturated, circle area encoding subtree size. */
export function renderFrame(
  svg: SVGSVGElement,
  frame: WireFrame,
  transform: ViewTransform,
  options: RenderOptions = {},
): void {
  svg.replaceChildren();
  svg.setAttribute("data-iteration", String(frame.iteration));
  svg.setAttribute("data-mode", frame.state.mode);

  const polygons = el("g", { class: "focus-polygons" });
  for (const poly of frame.focus_polygons) {
    const points = poly.vertices
      .map(([x, y]) => toScreen(transform, x, y).map((v) => v.toFixed(2)).join(","))
      .join(" ");
    const node = el("polygon", {
      points,
      class: poly.comparison ? "focus-area comparison" : "focus-area",
      fill: focusFill(poly.level),
      "fill-opacity": "0.55",
      stroke: poly.comparison ? comparisonStroke() : "none",
      "stroke-width": poly.comparison ? "2" : "0",
      "stroke-dasharray": poly.comparison ? "6 3" : "",
      "data-node": String(poly.node),
      "data-level": String(poly.level),
      "data-comparison": String(poly.comparison),
    });
    polygons.appendChild(node);
  }
  svg.appendChild(polygons);

  const markers = el("g", { class: "markers" });
  const ordered = [...frame.markers].sort((a, b) => b.count - a.count); // big below
  for (const marker of ordered) {
    const [cx, cy] = toScreen(transform, marker.x, marker.y);
    const r = Math.max(marker.radius * transform.scale, 1.5);
    const summary = frame.summaries?.[String(marker.node)];
    const thumbnail = summary?.representative_thumbnail ?? null;
    const group = el("g", {
      class: marker.in_focus ? "marker in-focus" : "marker context",
      "data-node": String(marker.node),
      "data-point": String(marker.point_id),
      "data-count": String(marker.count),
      "data-level": String(marker.level),
      "data-leaf": String(marker.is_leaf),
      "data-in-focus": String(marker.in_focus),
      "data-r": String(r),
    });
    if (options.thumbnailMode && thumbnail) {
      group.appendChild(
        el("image", {
          href: thumbnail,
          x: (cx - r).toFixed(2),
          y: (cy - r).toFixed(2),
          width: (2 * r).toFixed(2),
          height: (2 * r).toFixed(2),
          class: "marker-thumbnail",
        }),
      );
      group.appendChild(
        el("circle", {
          cx: cx.toFixed(2),
          cy: cy.toFixed(2),
          r: r.toFixed(2),
          fill: "none",
          stroke: markerStroke(marker.in_focus),
          "stroke-width": "1",
        }),
      );
    } else {
      group.appendChild(
        el("circle", {
          cx: cx.toFixed(2),
          cy: cy.toFixed(2),
          r: r.toFixed(2),
          fill: markerFill(marker.in_focus),
          "fill-opacity": marker.in_focus ? "0.9" : "0.55",
          stroke: markerStroke(marker.in_focus),
          "stroke-width": "1",
        }),
      );
    }
    markers.appendChild(group);
  }
  svg.appendChild(markers);
}

/** Overlay the overlap-free projection of a leaf cluster's raw points. */
export function renderLeafPoints(
  svg: SVGSVGElement,
  points: WireLeafPoint[],
  transform: ViewTransform,
): SVGGElement {
  const existing = svg.querySelector("g.leaf-points");
  if (existing) existing.remove();
  const group = el("g", { class: "leaf-points" });
  for (const point of points) {
    const [cx, cy] = toScreen(transform, point.x, point.y);
    group.appendChild(
      el("circle", {
        cx: cx.toFixed(2),
        cy: cy.toFixed(2),
        r: Math.max(point.radius * transform.scale, 1).toFixed(2),
        fill: labelColor(point.label),
        class: "leaf-point",
        "data-point": String(point.id),
        "data-label": point.label,
        "data-thumbnail": point.thumbnail ?? "",
      }),
    );
  }
  svg.appendChild(group);
  return group;
}

/** Histogram + neighbour lists for the hover tooltip. */
export function renderSummary(container: HTMLElement, summary: WireSummary): void {
  container.replaceChildren();
  const rep = document.createElement("div");
  rep.className = "tooltip-representative";
  rep.textContent = `representative: ${summary.representative_id}`;
  if (summary.representative_thumbnail) {
    const img = document.createElement("img");
    img.src = summary.representative_thumbnail;
    img.alt = `representative ${summary.representative_id}`;
    rep.appendChild(img);
  }
  container.appendChild(rep);

  const similar = document.createElement("div");
  similar.className = "tooltip-similar";
  similar.textContent = `most similar: ${summary.most_similar.join(", ")}`;
  container.appendChild(similar);

  const diverse = document.createElement("div");
  diverse.className = "tooltip-diverse";
  diverse.textContent = `similar but diverse: ${summary.diverse.join(", ")}`;
  container.appendChild(diverse);

  const histogram = document.createElement("div");
  histogram.className = "tooltip-histogram";
  const labels = Object.keys(summary.class_histogram).sort();
  const max = Math.max(...labels.map((l) => summary.class_histogram[l]), 1);
  for (const label of labels) {
    const count = summary.class_histogram[label];
    const bar = document.createElement("div");
    bar.className = "histogram-bar";
    bar.dataset.label = label;
    bar.dataset.count = String(count);
    bar.style.height = `${Math.round((count / max) * 40)}px`;
    bar.style.backgroundColor = labelColor(label);
    bar.title = `${label}: ${count}`;
    histogram.appendChild(bar);
  }
  container.appendChild(histogram);
}
