/** Wire formats of the exploration server. */

export interface WireMarker {
  node: number;
  point_id: number;
  x: number;
  y: number;
  radius: number;
  level: number;
  in_focus: boolean;
  count: number;
  is_leaf: boolean;
}

export interface WirePolygon {
  level: number;
  node: number;
  vertices: [number, number][];
  comparison: boolean;
}

export interface WireFocusState {
  stack: number[];
  comparison: number | null;
  mode: "normal" | "comparing";
}

export interface WireSummary {
  representative_id: number;
  representative_thumbnail: string | null;
  most_similar: number[];
  diverse: number[];
  class_histogram: Record<string, number>;
}

export interface WireFrame {
  iteration: number;
  markers: WireMarker[];
  focus_polygons: WirePolygon[];
  state: WireFocusState;
  level_colors: Record<string, number>;
  tree: string;
  summaries?: Record<string, WireSummary>;
}

export interface WireLeafPoint {
  id: number;
  x: number;
  y: number;
  radius: number;
  label: string;
  thumbnail: string | null;
}

export interface SessionConfig {
  k: number;
  alpha?: number;
  pi?: number;
  delta?: number;
  delta_px?: number;
  viewport_px?: number;
}

export type OpName =
  | "request"
  | "resolve"
  | "compare"
  | "resolve_comparison"
  | "set_global_level";

export interface PointIn {
  id: number;
  x: number;
  y: number;
  label: string;
  features?: number[] | null;
  thumbnail?: string | null;
}
