/** Draft contour state and the client-side mirror of the server save rules. */

import type { AnnotationData, Pt } from "./model.js";

export interface DraftContour {
  partName: string;
  points: Pt[];
}

/** Drop an explicitly repeated closing vertex; the ring is implicit. */
export function closeRing(points: Pt[]): Pt[] {
  if (points.length >= 2) {
    const first = points[0];
    const last = points[points.length - 1];
    if (first[0] === last[0] && first[1] === last[1]) {
      return points.slice(0, -1);
    }
  }
  return points;
}

export function ringArea(points: Pt[]): number {
  let area = 0;
  for (let i = 0; i < points.length; i++) {
    const a = points[i];
    const b = points[(i + 1) % points.length];
    area += a[0] * b[1] - b[0] * a[1];
  }
  return area / 2;
}

/** Returns an error message, or null when the contour is saveable. */
export function validateContour(
  partName: string | null,
  points: Pt[],
  knownParts: string[],
): string | null {
  if (!partName) {
    return "pick a part name before closing the contour";
  }
  if (!knownParts.includes(partName)) {
    return `unknown part "${partName}"`;
  }
  const ring = closeRing(points);
  if (ring.length < 3) {
    return `a closed contour needs at least 3 points (got ${ring.length})`;
  }
  if (ringArea(ring) === 0) {
    return "contour encloses zero area";
  }
  return null;
}

/** Contours being traced for one sketch, plus the in-progress polyline. */
export class AnnotationDraft {
  contours: DraftContour[] = [];
  current: Pt[] = [];
  currentPart: string | null = null;
  dirty = false;

  constructor(public knownParts: string[]) {}

  /** Seed with the saved annotations fetched from the service. */
  reset(saved: AnnotationData[]): void {
    this.contours = saved.map((a) => ({ partName: a.part_name, points: a.points.slice() }));
    this.current = [];
    this.dirty = false;
  }

  setPart(name: string): void {
    this.currentPart = name;
  }

  addVertex(p: Pt): void {
    this.current.push(p);
    this.dirty = true;
  }

  undoVertex(): void {
    this.current.pop();
  }

  abandonCurrent(): void {
    this.current = [];
  }

  /** Close the in-progress polyline into a contour; error message on failure. */
  closeCurrent(): string | null {
    const problem = validateContour(this.currentPart, this.current, this.knownParts);
    if (problem !== null) {
      return problem;
    }
    this.contours.push({
      partName: this.currentPart as string,
      points: closeRing(this.current),
    });
    this.current = [];
    this.dirty = true;
    return null;
  }

  removeContour(index: number): void {
    this.contours.splice(index, 1);
    this.dirty = true;
  }

  /** Pre-validated payload for PUT; error message when anything is off. */
  validateAll(): string | null {
    for (const contour of this.contours) {
      const problem = validateContour(contour.partName, contour.points, this.knownParts);
      if (problem !== null) {
        return problem;
      }
    }
    return null;
  }

  toPayload(): AnnotationData[] {
    return this.contours.map((c) => ({ part_name: c.partName, points: c.points.slice() }));
  }
}
