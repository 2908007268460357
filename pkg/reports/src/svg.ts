/** Minimal hand-rolled SVG plotting: axes, polylines, error bars, hist bars. */

export interface Margin {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
  "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
];

const esc = (s: string) =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

export class Scale {
  constructor(
    readonly domain: [number, number],
    readonly range: [number, number],
    readonly log = false,
  ) {}

  apply(x: number): number {
    const [d0, d1] = this.domain;
    const [r0, r1] = this.range;
    const t = this.log
      ? (Math.log10(x) - Math.log10(d0)) / (Math.log10(d1) - Math.log10(d0) || 1)
      : (x - d0) / (d1 - d0 || 1);
    return r0 + t * (r1 - r0);
  }

  ticks(count = 5): number[] {
    const [d0, d1] = this.domain;
    if (this.log) {
      const lo = Math.ceil(Math.log10(d0) - 1e-9);
      const hi = Math.floor(Math.log10(d1) + 1e-9);
      const out: number[] = [];
      for (let e = lo; e <= hi; e++) out.push(10 ** e);
      return out.length >= 2 ? out : [d0, d1];
    }
    const span = d1 - d0 || 1;
    const step = 10 ** Math.floor(Math.log10(span / count));
    const mult = span / count / step >= 5 ? 5 : span / count / step >= 2 ? 2 : 1;
    const s = step * mult;
    const out: number[] = [];
    for (let v = Math.ceil(d0 / s) * s; v <= d1 + 1e-12; v += s) out.push(v);
    return out;
  }
}

const fmt = (x: number) =>
  Math.abs(x) >= 10000 || (Math.abs(x) < 0.01 && x !== 0)
    ? x.toExponential(0)
    : String(Math.round(x * 1000) / 1000);

export class SvgCanvas {
  private parts: string[] = [];

  constructor(readonly width: number, readonly height: number) {}

  add(fragment: string): void {
    this.parts.push(fragment);
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, extra = ""): void {
    this.add(`<line x1="${x1.toFixed(2)}" y1="${y1.toFixed(2)}" x2="${x2.toFixed(2)}" ` +
      `y2="${y2.toFixed(2)}" stroke="${stroke}" ${extra}/>`);
  }

  text(x: number, y: number, content: string, extra = ""): void {
    this.add(`<text x="${x.toFixed(2)}" y="${y.toFixed(2)}" font-family="sans-serif" ` +
      `${extra}>${esc(content)}</text>`);
  }

  rect(x: number, y: number, w: number, h: number, fill: string, extra = ""): void {
    this.add(`<rect x="${x.toFixed(2)}" y="${y.toFixed(2)}" width="${Math.max(w, 0).toFixed(2)}" ` +
      `height="${Math.max(h, 0).toFixed(2)}" fill="${fill}" ${extra}/>`);
  }

  circle(cx: number, cy: number, r: number, fill: string): void {
    this.add(`<circle cx="${cx.toFixed(2)}" cy="${cy.toFixed(2)}" r="${r}" fill="${fill}"/>`);
  }

  polyline(points: Array<[number, number]>, stroke: string, cls = "series"): void {
    const pts = points.map(([x, y]) => `${x.toFixed(2)},${y.toFixed(2)}`).join(" ");
    this.add(`<polyline class="${cls}" points="${pts}" fill="none" stroke="${stroke}" stroke-width="1.5"/>`);
  }

  errorBar(x: number, y0: number, y1: number, stroke: string, cap = 3): void {
    this.line(x, y0, x, y1, stroke);
    this.line(x - cap, y0, x + cap, y0, stroke);
    this.line(x - cap, y1, x + cap, y1, stroke);
  }

  xAxis(scale: Scale, y: number, label = ""): void {
    const [r0, r1] = scale.range;
    this.line(r0, y, r1, y, "#333");
    for (const t of scale.ticks()) {
      const x = scale.apply(t);
      this.line(x, y, x, y + 4, "#333");
      this.text(x, y + 16, fmt(t), 'font-size="10" text-anchor="middle"');
    }
    if (label) {
      this.text((r0 + r1) / 2, y + 32, label, 'font-size="11" text-anchor="middle"');
    }
  }

  yAxis(scale: Scale, x: number, label = ""): void {
    const [r0, r1] = scale.range;
    this.line(x, r0, x, r1, "#333");
    for (const t of scale.ticks()) {
      const y = scale.apply(t);
      this.line(x - 4, y, x, y, "#333");
      this.text(x - 6, y + 3, fmt(t), 'font-size="10" text-anchor="end"');
    }
    if (label) {
      const cy = (r0 + r1) / 2;
      this.text(x - 38, cy, label,
        `font-size="11" text-anchor="middle" transform="rotate(-90 ${x - 38} ${cy.toFixed(2)})"`);
    }
  }

  render(): string {
    return `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" ` +
      `height="${this.height}" viewBox="0 0 ${this.width} ${this.height}">\n` +
      `<rect width="${this.width}" height="${this.height}" fill="white"/>\n` +
      this.parts.join("\n") + "\n</svg>\n";
  }
}
