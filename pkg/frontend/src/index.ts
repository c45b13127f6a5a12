import { ApiClient } from "./api.js";
import { ExplorerView } from "./view.js";
import type { SessionConfig } from "./types.js";

export { ApiClient, ApiError } from "./api.js";
export { ExplorerView } from "./view.js";
export * from "./types.js";
export {
  makeTransform,
  renderFrame,
  renderLeafPoints,
  renderSummary,
  toScreen,
} from "./scene.js";
export { focusFill, labelColor, markerFill } from "./colors.js";

/** Mount an explorer over an already-ingested dataset. */
export async function mount(
  container: HTMLElement,
  serverUrl: string,
  datasetId: string,
  config: SessionConfig,
): Promise<ExplorerView> {
  const view = new ExplorerView(container, new ApiClient(serverUrl));
  await view.init(datasetId, config);
  return view;
}
