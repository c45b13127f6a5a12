import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { dirname, join } from "node:path";

import { ApiClient } from "../src/api.js";
import { ExplorerView } from "../src/view.js";

const HERE = dirname(fileURLToPath(import.meta.url));

/** Toy-tree build parameters shared by every integration test (the session
 * is cheap: the server caches the tree by fingerprint + config). */
export const TOY_CONFIG = { k: 10.0, alpha: 1, pi: 10 };

export function serverInfo(): { url: string; datasetId: string } {
  return JSON.parse(readFileSync(join(HERE, ".server.json"), "utf-8"));
}

export async function createView(): Promise<ExplorerView> {
  const { url, datasetId } = serverInfo();
  const container = document.createElement("div");
  document.body.appendChild(container);
  const view = new ExplorerView(container, new ApiClient(url));
  await view.init(datasetId, TOY_CONFIG);
  return view;
}

export function click(element: Element, init: MouseEventInit = {}): void {
  element.dispatchEvent(new MouseEvent("click", { bubbles: true, cancelable: true, ...init }));
}

export function hover(element: Element): void {
  element.dispatchEvent(new MouseEvent("mouseover", { bubbles: true, cancelable: true }));
}

export function markers(view: ExplorerView): SVGGElement[] {
  return Array.from(view.svg.querySelectorAll<SVGGElement>("g.marker"));
}

export function markerByNode(view: ExplorerView, node: number): SVGGElement {
  const found = view.svg.querySelector<SVGGElement>(`g.marker[data-node="${node}"]`);
  if (!found) throw new Error(`no marker for node ${node}`);
  return found;
}

export function polygons(view: ExplorerView): SVGPolygonElement[] {
  return Array.from(view.svg.querySelectorAll<SVGPolygonElement>("polygon.focus-area"));
}

export function toolbarButton(view: ExplorerView, action: string): HTMLButtonElement {
  const button = view.toolbar.querySelector<HTMLButtonElement>(`button[data-action="${action}"]`);
  if (!button) throw new Error(`no toolbar button ${action}`);
  return button;
}

/** Largest non-leaf marker of the current frame (a cluster with children to
 * reveal), by wire data. */
export function largestNonLeaf(view: ExplorerView): number {
  const candidates = view.frame!.markers.filter((m) => !m.is_leaf);
  if (candidates.length === 0) throw new Error("frame has no non-leaf marker");
  candidates.sort((a, b) => b.count - a.count || a.node - b.node);
  return candidates[0].node;
}
