/** Screen <-> sketch-canvas coordinate mapping.
 *
 * The sketch canvas is fitted into the view with a uniform scale and
 * centered, so the transform inverts exactly (well within the 0.5px
 * round-trip budget the save path relies on).
 */

import type { Pt } from "./model.js";

export interface ViewTransform {
  scale: number;
  offsetX: number;
  offsetY: number;
}

export function fitTransform(
  canvasW: number,
  canvasH: number,
  viewW: number,
  viewH: number,
): ViewTransform {
  const scale = Math.min(viewW / canvasW, viewH / canvasH);
  return {
    scale,
    offsetX: (viewW - canvasW * scale) / 2,
    offsetY: (viewH - canvasH * scale) / 2,
  };
}

export function toCanvas(t: ViewTransform, p: Pt): Pt {
  return [(p[0] - t.offsetX) / t.scale, (p[1] - t.offsetY) / t.scale];
}

export function toScreen(t: ViewTransform, p: Pt): Pt {
  return [p[0] * t.scale + t.offsetX, p[1] * t.scale + t.offsetY];
}
