// Incremental SVG charts keyed by series id. Rendering stays bounded:
// past MAX_RENDERED_POINTS total, every series is decimated by halving.

export const MAX_RENDERED_POINTS = 50_000;

const COLORS = [
  "#4363d8", "#e6194b", "#3cb44b", "#f58231", "#911eb4",
  "#46f0f0", "#f032e6", "#bcf60c", "#fabebe", "#008080",
  "#e6beff", "#9a6324", "#800000", "#aaffc3", "#808000",
];

interface Series {
  points: Array<[number, number]>;
  style: "scatter" | "line" | "bar";
  color: string;
}

export class ChartPane {
  readonly series = new Map<string, Series>();
  private renderQueued = false;

  constructor(
    private readonly svg: SVGSVGElement,
    private readonly legend: HTMLElement,
    private readonly cap: number = MAX_RENDERED_POINTS,
  ) {}

  clear(): void {
    this.series.clear();
    this.render();
  }

  totalPoints(): number {
    let total = 0;
    for (const s of this.series.values()) total += s.points.length;
    return total;
  }

  addPoint(
    id: string,
    x: number,
    y: number,
    style: "scatter" | "line" | "bar",
  ): void {
    let entry = this.series.get(id);
    if (!entry) {
      entry = {
        points: [],
        style,
        color: COLORS[this.series.size % COLORS.length],
      };
      this.series.set(id, entry);
    }
    entry.points.push([x, y]);
    if (this.totalPoints() > this.cap) this.decimate();
    this.scheduleRender();
  }

  /** Drop every second point of every series (keeping the last). */
  private decimate(): void {
    for (const entry of this.series.values()) {
      if (entry.points.length < 4) continue;
      const kept: Array<[number, number]> = [];
      for (let i = 0; i < entry.points.length; i += 2) kept.push(entry.points[i]);
      const last = entry.points[entry.points.length - 1];
      if (kept[kept.length - 1] !== last) kept.push(last);
      entry.points = kept;
    }
  }

  private scheduleRender(): void {
    if (this.renderQueued) return;
    this.renderQueued = true;
    const raf =
      typeof requestAnimationFrame === "function"
        ? requestAnimationFrame
        : (fn: FrameRequestCallback) => setTimeout(() => fn(0), 16);
    raf(() => {
      this.renderQueued = false;
      this.render();
    });
  }

  render(): void {
    const W = 640;
    const H = 360;
    const PAD = 36;
    this.svg.setAttribute("viewBox", `0 0 ${W} ${H}`);
    this.svg.innerHTML = "";
    this.legend.innerHTML = "";
    if (this.series.size === 0) return;

    let minX = Infinity, maxX = -Infinity, minY = Infinity, maxY = -Infinity;
    for (const entry of this.series.values()) {
      for (const [x, y] of entry.points) {
        minX = Math.min(minX, x); maxX = Math.max(maxX, x);
        minY = Math.min(minY, y); maxY = Math.max(maxY, y);
      }
    }
    if (minX === maxX) { minX -= 1; maxX += 1; }
    if (minY === maxY) { minY -= 1; maxY += 1; }
    const sx = (x: number) => PAD + ((x - minX) / (maxX - minX)) * (W - 2 * PAD);
    const sy = (y: number) => H - PAD - ((y - minY) / (maxY - minY)) * (H - 2 * PAD);

    const ns = "http://www.w3.org/2000/svg";
    const axis = document.createElementNS(ns, "path");
    axis.setAttribute(
      "d",
      `M ${PAD} ${PAD} L ${PAD} ${H - PAD} L ${W - PAD} ${H - PAD}`,
    );
    axis.setAttribute("class", "chart-axis");
    this.svg.appendChild(axis);
    for (const [value, x, y, anchor] of [
      [minY, PAD - 4, sy(minY), "end"],
      [maxY, PAD - 4, sy(maxY), "end"],
      [minX, sx(minX), H - PAD + 14, "middle"],
      [maxX, sx(maxX), H - PAD + 14, "middle"],
    ] as Array<[number, number, number, string]>) {
      const label = document.createElementNS(ns, "text");
      label.setAttribute("x", String(x));
      label.setAttribute("y", String(y));
      label.setAttribute("text-anchor", anchor);
      label.setAttribute("class", "chart-tick");
      label.textContent = String(Math.round(value * 100) / 100);
      this.svg.appendChild(label);
    }

    for (const [id, entry] of this.series) {
      if (entry.style === "line") {
        const path = document.createElementNS(ns, "polyline");
        path.setAttribute(
          "points",
          entry.points.map(([x, y]) => `${sx(x)},${sy(y)}`).join(" "),
        );
        path.setAttribute("fill", "none");
        path.setAttribute("stroke", entry.color);
        path.setAttribute("stroke-width", "1.5");
        this.svg.appendChild(path);
      } else if (entry.style === "scatter") {
        for (const [x, y] of entry.points) {
          const dot = document.createElementNS(ns, "circle");
          dot.setAttribute("cx", String(sx(x)));
          dot.setAttribute("cy", String(sy(y)));
          dot.setAttribute("r", "2.5");
          dot.setAttribute("fill", entry.color);
          this.svg.appendChild(dot);
        }
      } else {
        for (const [x, y] of entry.points) {
          const bar = document.createElementNS(ns, "rect");
          const x0 = sx(x);
          const y0 = sy(Math.max(0, minY));
          const y1 = sy(y);
          bar.setAttribute("x", String(x0 - 2));
          bar.setAttribute("y", String(Math.min(y0, y1)));
          bar.setAttribute("width", "4");
          bar.setAttribute("height", String(Math.abs(y0 - y1) || 1));
          bar.setAttribute("fill", entry.color);
          this.svg.appendChild(bar);
        }
      }
      const item = document.createElement("span");
      item.className = "legend-item";
      const swatch = document.createElement("span");
      swatch.className = "legend-swatch";
      swatch.style.background = entry.color;
      item.append(swatch, document.createTextNode(id));
      this.legend.appendChild(item);
    }
  }
}
