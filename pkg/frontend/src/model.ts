/** Payload types exchanged with the annotation service. */

export type Pt = [number, number];

export interface CategoryInfo {
  name: string;
  parts: string[];
  sketch_count: number;
}

export interface SketchListEntry {
  sketch_id: string;
  annotated: boolean;
  stroke_count: number;
}

export interface StrokeData {
  id: number;
  temporal_index: number;
  width: number;
  points: Pt[];
}

export interface SketchData {
  sketch_id: string;
  category: string;
  canvas: [number, number];
  parts: string[];
  strokes: StrokeData[];
}

export interface AnnotationData {
  part_name: string;
  points: Pt[];
}

export interface ErrorBody {
  error: { code: string; message: string };
}
