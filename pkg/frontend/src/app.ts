/** Browser annotation tool: trace closed part contours over a sketch. */

import { ApiClient, ApiRequestError } from "./api.js";
import { AnnotationDraft } from "./draft.js";
import { fitTransform, toCanvas, toScreen, type ViewTransform } from "./mapping.js";
import type { Pt, SketchData } from "./model.js";

const VIEW_W = 560;
const VIEW_H = 560;

const PALETTE = ["#2563eb", "#059669", "#d97706", "#7c3aed", "#db2777", "#0891b2"];

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

class App {
  api = new ApiClient("");
  canvas = el<HTMLCanvasElement>("sketch-canvas");
  status = el<HTMLDivElement>("status");
  categorySelect = el<HTMLSelectElement>("category-select");
  sketchList = el<HTMLUListElement>("sketch-list");
  palette = el<HTMLDivElement>("palette");
  contourList = el<HTMLUListElement>("contour-list");
  referenceImage = el<HTMLImageElement>("reference-image");

  sketch: SketchData | null = null;
  draft: AnnotationDraft | null = null;
  transform: ViewTransform | null = null;

  async start(): Promise<void> {
    this.canvas.width = VIEW_W;
    this.canvas.height = VIEW_H;
    this.canvas.addEventListener("click", (e) => this.onCanvasClick(e));
    this.canvas.addEventListener("dblclick", (e) => {
      e.preventDefault();
      this.closeContour();
    });
    document.addEventListener("keydown", (e) => this.onKey(e));
    el<HTMLButtonElement>("undo-button").addEventListener("click", () => {
      this.draft?.undoVertex();
      this.redraw();
    });
    el<HTMLButtonElement>("close-button").addEventListener("click", () => this.closeContour());
    el<HTMLButtonElement>("save-button").addEventListener("click", () => void this.save());
    window.addEventListener("beforeunload", (e) => {
      if (this.draft?.dirty) e.preventDefault();
    });
    this.categorySelect.addEventListener("change", () => void this.loadCategory());

    const categories = await this.api.getCategories();
    for (const category of categories) {
      const option = document.createElement("option");
      option.value = category.name;
      option.textContent = `${category.name} (${category.sketch_count})`;
      this.categorySelect.appendChild(option);
    }
    if (categories.length > 0) {
      this.categorySelect.value = categories[0].name;
      await this.loadCategory();
    }
  }

  get category(): string {
    return this.categorySelect.value;
  }

  async loadCategory(): Promise<void> {
    if (!this.confirmDiscard()) return;
    const sketches = await this.api.getSketches(this.category);
    this.sketchList.replaceChildren();
    for (const entry of sketches) {
      const item = document.createElement("li");
      const button = document.createElement("button");
      button.textContent = `${entry.sketch_id}${entry.annotated ? " ✓" : ""}`;
      button.addEventListener("click", () => void this.loadSketch(entry.sketch_id));
      item.appendChild(button);
      this.sketchList.appendChild(item);
    }
    this.referenceImage.src = this.api.referenceImageUrl(this.category);
    if (sketches.length > 0) {
      await this.loadSketch(sketches[0].sketch_id);
    }
  }

  async loadSketch(sketchId: string): Promise<void> {
    if (!this.confirmDiscard()) return;
    this.sketch = await this.api.getSketch(sketchId);
    this.transform = fitTransform(
      this.sketch.canvas[0], this.sketch.canvas[1], VIEW_W, VIEW_H);
    this.draft = new AnnotationDraft(this.sketch.parts);
    this.draft.reset(await this.api.getAnnotations(sketchId));
    this.buildPalette();
    this.say(`editing ${sketchId}`);
    this.redraw();
  }

  confirmDiscard(): boolean {
    if (this.draft?.dirty) {
      return window.confirm("discard unsaved contours?");
    }
    return true;
  }

  buildPalette(): void {
    this.palette.replaceChildren();
    if (!this.sketch || !this.draft) return;
    this.sketch.parts.forEach((part, i) => {
      const label = document.createElement("label");
      const radio = document.createElement("input");
      radio.type = "radio";
      radio.name = "part";
      radio.value = part;
      if (i === 0) {
        radio.checked = true;
        this.draft?.setPart(part);
      }
      radio.addEventListener("change", () => this.draft?.setPart(part));
      label.appendChild(radio);
      label.append(` ${part}`);
      label.style.color = PALETTE[i % PALETTE.length];
      this.palette.appendChild(label);
    });
  }

  onCanvasClick(event: MouseEvent): void {
    if (!this.draft || !this.transform) return;
    const rect = this.canvas.getBoundingClientRect();
    const screen: Pt = [event.clientX - rect.left, event.clientY - rect.top];
    this.draft.addVertex(toCanvas(this.transform, screen));
    this.redraw();
  }

  onKey(event: KeyboardEvent): void {
    if (!this.draft) return;
    if (event.key === "Enter") {
      this.closeContour();
    } else if (event.key === "Escape") {
      this.draft.abandonCurrent();
      this.redraw();
    } else if (event.key === "Backspace") {
      this.draft.undoVertex();
      this.redraw();
      event.preventDefault();
    }
  }

  closeContour(): void {
    if (!this.draft) return;
    const problem = this.draft.closeCurrent();
    if (problem !== null) {
      this.say(problem, true);
    } else {
      this.say(`contour #${this.draft.contours.length} closed`);
    }
    this.redraw();
  }

  async save(): Promise<void> {
    if (!this.sketch || !this.draft) return;
    const problem = this.draft.validateAll();
    if (problem !== null) {
      this.say(problem, true);
      return;
    }
    try {
      const saved = await this.api.putAnnotations(
        this.sketch.sketch_id, this.draft.toPayload());
      this.draft.reset(saved);  // redraw the server-validated result
      this.say(`saved ${saved.length} contour(s)`);
    } catch (err) {
      if (err instanceof ApiRequestError) {
        this.say(`save rejected (${err.code}): ${err.message}`, true);
      } else {
        this.say(`save failed: ${String(err)}`, true);
      }
    }
    this.redraw();
  }

  say(message: string, isError = false): void {
    this.status.textContent = message;
    this.status.className = isError ? "status error" : "status";
  }

  redraw(): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx || !this.sketch || !this.transform || !this.draft) return;
    const t = this.transform;
    ctx.clearRect(0, 0, VIEW_W, VIEW_H);
    ctx.fillStyle = "#ffffff";
    ctx.fillRect(0, 0, VIEW_W, VIEW_H);

    ctx.strokeStyle = "#111111";
    for (const stroke of this.sketch.strokes) {
      ctx.lineWidth = Math.max(1, stroke.width * t.scale);
      this.path(ctx, stroke.points, false);
      ctx.stroke();
    }

    this.draft.contours.forEach((contour, i) => {
      const color = this.colorFor(contour.partName);
      ctx.strokeStyle = color;
      ctx.lineWidth = 1.5;
      this.path(ctx, contour.points, true);
      ctx.stroke();
      const anchor = toScreen(t, contour.points[0]);
      ctx.fillStyle = color;
      ctx.font = "12px sans-serif";
      ctx.fillText(`${i + 1}:${contour.partName}`, anchor[0] + 3, anchor[1] - 3);
    });

    if (this.draft.current.length > 0) {
      ctx.strokeStyle = "#dc2626";
      ctx.lineWidth = 1.5;
      this.path(ctx, this.draft.current, false);
      ctx.stroke();
      ctx.fillStyle = "#dc2626";
      for (const p of this.draft.current) {
        const s = toScreen(t, p);
        ctx.beginPath();
        ctx.arc(s[0], s[1], 3, 0, 2 * Math.PI);
        ctx.fill();
      }
    }
    this.renderContourList();
  }

  colorFor(part: string): string {
    const index = this.sketch ? this.sketch.parts.indexOf(part) : 0;
    return PALETTE[(index < 0 ? 0 : index) % PALETTE.length];
  }

  path(ctx: CanvasRenderingContext2D, points: Pt[], close: boolean): void {
    if (!this.transform) return;
    ctx.beginPath();
    points.forEach((p, i) => {
      const s = toScreen(this.transform as ViewTransform, p);
      if (i === 0) ctx.moveTo(s[0], s[1]);
      else ctx.lineTo(s[0], s[1]);
    });
    if (close) ctx.closePath();
  }

  renderContourList(): void {
    this.contourList.replaceChildren();
    this.draft?.contours.forEach((contour, i) => {
      const item = document.createElement("li");
      item.textContent = `${contour.partName} (${contour.points.length} pts) `;
      const remove = document.createElement("button");
      remove.textContent = "remove";
      remove.addEventListener("click", () => {
        this.draft?.removeContour(i);
        this.redraw();
      });
      item.appendChild(remove);
      this.contourList.appendChild(item);
    });
  }
}

new App().start().catch((err) => {
  document.body.textContent = `failed to start: ${String(err)}`;
});
