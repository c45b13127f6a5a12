import { ApiClient, ApiError } from "./api.js";
import { makeTransform, renderFrame, renderLeafPoints, renderSummary } from "./scene.js";
import type { ViewTransform } from "./scene.js";
import type { SessionConfig, WireFrame } from "./types.js";

/** Gesture map (the documented interaction contract):
 *
 * - click a representative              -> request focus on it; clicking a
 *   context marker from another branch resolves outward first, then focuses
 * - modifier-click (ctrl/meta/shift)    -> open a comparison focus
 * - click a focus polygon               -> resolve the deepest focus
 * - "more detail" / "less detail"      -> global level of detail +- 1
 * - "reset"                            -> resolve everything to the start
 * - "resolve" / "resolve comparison"   -> explicit stack controls
 * - hover a marker                      -> summary tooltip; on a leaf, the
 *   overlap-free point projection; clicking a leaf point opens its content
 *   in a new window
 */
export class ExplorerView {
  readonly svg: SVGSVGElement;
  readonly toolbar: HTMLDivElement;
  readonly tooltip: HTMLDivElement;
  readonly toasts: HTMLDivElement;

  frame: WireFrame | null = null;
  transform: ViewTransform = { scale: 1, tx: 0, ty: 0 };
  sessionId = "";
  hoverTarget: number | null = null;
  thumbnailMode = false;
  globalLevel = 1;

  private opChain: Promise<unknown> = Promise.resolve();

  constructor(
    readonly container: HTMLElement,
    readonly api: ApiClient,
    readonly width = 900,
    readonly height = 600,
  ) {
    this.toolbar = document.createElement("div");
    this.toolbar.className = "explorer-toolbar";
    for (const [action, label] of [
      ["more-detail", "More detail"],
      ["less-detail", "Less detail"],
      ["reset", "Reset"],
      ["resolve", "Resolve focus"],
      ["resolve-comparison", "Resolve comparison"],
      ["thumbnails", "Thumbnails"],
    ] as const) {
      const button = document.createElement("button");
      button.dataset.action = action;
      button.textContent = label;
      button.addEventListener("click", () => this.onToolbar(action));
      this.toolbar.appendChild(button);
    }
    container.appendChild(this.toolbar);

    this.svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    this.svg.setAttribute("width", String(this.width));
    this.svg.setAttribute("height", String(this.height));
    this.svg.setAttribute("class", "explorer-canvas");
    container.appendChild(this.svg);

    this.tooltip = document.createElement("div");
    this.tooltip.className = "explorer-tooltip";
    this.tooltip.style.display = "none";
    container.appendChild(this.tooltip);

    this.toasts = document.createElement("div");
    this.toasts.className = "explorer-toasts";
    container.appendChild(this.toasts);

    this.svg.addEventListener("click", (event) => this.onClick(event));
    this.svg.addEventListener("mouseover", (event) => this.onHover(event));
    this.svg.addEventListener("mouseout", () => this.hideTooltip());
  }

  /** Opens the session; delta is 100 px at this view's scale, converted by
   * the server against the embedding extent. */
  async init(datasetId: string, config: SessionConfig): Promise<void> {
    const body = {
      delta_px: 100,
      viewport_px: Math.min(this.width, this.height),
      ...config,
    };
    const { session_id, frame } = await this.api.createSession(datasetId, body);
    this.sessionId = session_id;
    this.globalLevel = 1;
    this.setFrame(frame);
  }

  setFrame(frame: WireFrame): void {
    this.frame = frame;
    this.transform = makeTransform(frame, this.width, this.height);
    renderFrame(this.svg, frame, this.transform, { thumbnailMode: this.thumbnailMode });
  }

  /** Serialized op application: one in-flight server op at a time. */
  private enqueue<T>(task: () => Promise<T>): Promise<T | undefined> {
    const next = this.opChain.then(task).catch((error: unknown) => {
      this.toast(error);
      return undefined;
    });
    this.opChain = next;
    return next;
  }

  private toast(error: unknown): void {
    const div = document.createElement("div");
    div.className = "toast error";
    if (error instanceof ApiError) {
      div.dataset.code = error.code;
      div.textContent = `${error.code}: ${error.message}`;
    } else {
      div.dataset.code = "ClientError";
      div.textContent = String(error);
    }
    this.toasts.appendChild(div);
  }

  private async op(
    name: "request" | "resolve" | "compare" | "resolve_comparison" | "set_global_level",
    target?: number,
    level?: number,
  ): Promise<void> {
    const { frame } = await this.api.applyOp(this.sessionId, name, target, level);
    this.setFrame(frame);
  }

  /** Focus a node; a context marker outside the current branch is reached
   * by resolving outward until the request is valid (the direct-jump path
   * for changing focus to a different set of points). */
  focusNode(node: number): Promise<unknown> {
    return this.enqueue(async () => {
      for (;;) {
        try {
          await this.op("request", node);
          return;
        } catch (error) {
          const blocked =
            error instanceof ApiError &&
            error.code === "NotAChild" &&
            (this.frame?.state.stack.length ?? 0) > 0;
          if (!blocked) throw error;
          await this.op("resolve");
        }
      }
    });
  }

  compareNode(node: number): Promise<unknown> {
    return this.enqueue(() => this.op("compare", node));
  }

  resolveFocus(): Promise<unknown> {
    return this.enqueue(() => this.op("resolve"));
  }

  resolveComparison(): Promise<unknown> {
    return this.enqueue(() => this.op("resolve_comparison"));
  }

  setGlobalLevel(level: number): Promise<unknown> {
    return this.enqueue(async () => {
      await this.op("set_global_level", undefined, level);
      this.globalLevel = level;
    });
  }

  /** Return to the initial state through successive resolves. */
  reset(): Promise<unknown> {
    return this.enqueue(async () => {
      if (this.frame?.state.comparison != null) {
        await this.op("resolve_comparison");
      }
      while ((this.frame?.state.stack.length ?? 0) > 0) {
        await this.op("resolve");
      }
      if (this.globalLevel !== 1) {
        await this.op("set_global_level", undefined, 1);
        this.globalLevel = 1;
      }
    });
  }

  private onToolbar(action: string): void {
    switch (action) {
      case "more-detail":
        void this.setGlobalLevel(this.globalLevel + 1);
        break;
      case "less-detail":
        void this.setGlobalLevel(Math.max(1, this.globalLevel - 1));
        break;
      case "reset":
        void this.reset();
        break;
      case "resolve":
        void this.resolveFocus();
        break;
      case "resolve-comparison":
        void this.resolveComparison();
        break;
      case "thumbnails":
        this.thumbnailMode = !this.thumbnailMode;
        if (this.frame) this.setFrame(this.frame);
        break;
    }
  }

  private markerNode(target: EventTarget | null): number | null {
    let element = target as Element | null;
    while (element && element !== this.svg) {
      if (element.classList?.contains("marker")) {
        return Number((element as SVGGElement).dataset.node);
      }
      element = element.parentElement;
    }
    return null;
  }

  private onClick(event: MouseEvent): void {
    const element = event.target as Element;
    if (element.classList?.contains("leaf-point")) {
      const thumbnail = element.getAttribute("data-thumbnail");
      if (thumbnail) window.open(thumbnail, "_blank");
      return;
    }
    const node = this.markerNode(event.target);
    if (node != null) {
      if (event.ctrlKey || event.metaKey || event.shiftKey) {
        void this.compareNode(node);
      } else {
        void this.focusNode(node);
      }
      return;
    }
    if (element.classList?.contains("focus-area")) {
      void this.resolveFocus();
    }
  }

  private onHover(event: MouseEvent): void {
    const node = this.markerNode(event.target);
    if (node == null || !this.frame) return;
    this.hoverTarget = node;
    const cached = this.frame.summaries?.[String(node)];
    const marker = this.frame.markers.find((m) => m.node === node);
    const show = (summary: typeof cached) => {
      if (!summary || this.hoverTarget !== node) return;
      renderSummary(this.tooltip, summary);
      this.tooltip.style.display = "block";
      this.tooltip.dataset.node = String(node);
    };
    if (cached) {
      show(cached);
    } else {
      void this.enqueue(async () => {
        const { summary } = await this.api.getSummary(this.frame!.tree, node);
        show(summary);
      });
    }
    if (marker?.is_leaf) {
      void this.enqueue(async () => {
        const { points } = await this.api.getLeafPoints(this.frame!.tree, node);
        if (this.hoverTarget === node) {
          renderLeafPoints(this.svg, points, this.transform);
        }
      });
    }
  }

  private hideTooltip(): void {
    this.hoverTarget = null;
    this.tooltip.style.display = "none";
  }

  /** Wait for every queued gesture to settle (tests and scripted drivers). */
  idle(): Promise<unknown> {
    return this.enqueue(async () => undefined);
  }
}
