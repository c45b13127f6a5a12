/** Color encodings: an orange saturation ramp for hierarchy depth, muted
 * grays for context, and a categorical hue wheel for class labels. */

const RAMP_STEPS = 8; // distinguishable depth steps before the ramp saturates

/** Fill for a focus polygon at 1-based display level: deeper = more saturated. */
export function focusFill(level: number): string {
  const step = Math.min(Math.max(level, 1), RAMP_STEPS);
  const saturation = 25 + Math.round((step - 1) * (70 / (RAMP_STEPS - 1)));
  const lightness = 88 - step * 4;
  return `hsl(28, ${saturation}%, ${lightness}%)`;
}

export function comparisonStroke(): string {
  return "hsl(28, 90%, 35%)";
}

/** Markers inside the focus keep full color; context is desaturated. */
export function markerFill(inFocus: boolean): string {
  return inFocus ? "hsl(28, 85%, 45%)" : "hsl(0, 0%, 62%)";
}

export function markerStroke(inFocus: boolean): string {
  return inFocus ? "hsl(28, 90%, 25%)" : "hsl(0, 0%, 40%)";
}

/** Stable hue per class label for histogram bars and leaf points. */
export function labelColor(label: string): string {
  let hash = 0;
  for (let i = 0; i < label.length; i++) {
    hash = (hash * 31 + label.charCodeAt(i)) | 0;
  }
  const hue = ((hash % 360) + 360) % 360;
  return `hsl(${hue}, 65%, 50%)`;
}
