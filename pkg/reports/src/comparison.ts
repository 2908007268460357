import { writeFileSync } from "fs";
import { numeric, readRows, requireColumns, Row, usableRows } from "./csv";
import { PALETTE, Scale, SvgCanvas } from "./svg";

const PANEL_QUANTITIES: Array<[string, string]> = [
  ["size_core", "|core|"],
  ["diam_core", "diam(core)"],
];

function maybeNumeric(row: Row, column: string): number | null {
  const value = row[column];
  return typeof value === "number" && Number.isFinite(value) ? value : null;
}

export interface HistBins {
  edges: number[];
  counts: Map<string, number[]>;
}

export function histogramBins(byModel: Map<string, number[]>, bins = 12): HistBins {
  const all = [...byModel.values()].flat();
  const lo = Math.min(...all);
  const hi = Math.max(...all);
  const span = hi - lo || 1;
  const edges = Array.from({ length: bins + 1 }, (_, i) => lo + (span * i) / bins);
  const counts = new Map<string, number[]>();
  for (const [model, values] of byModel) {
    const c = new Array(bins).fill(0);
    for (const v of values) {
      const idx = Math.min(Math.floor(((v - lo) / span) * bins), bins - 1);
      c[idx] += 1;
    }
    counts.set(model, c);
  }
  return { edges, counts };
}

/** Overlaid per-model histograms of |core| and diam_core, one panel per cell. */
export function plotComparison(csvPath: string, outPath: string,
                               warn: (msg: string) => void = console.warn): void {
  const allRows = readRows(csvPath);
  requireColumns(allRows, ["n", "eps", "model", "size_core", "diam_core"], csvPath);
  // the cell grid spans every trial row; flagged trials only contribute panels
  const gridRows = allRows.filter(
    (r) => !String(r.model).includes(":") && (typeof r.trial !== "number" || r.trial >= 0));
  const trialRows = usableRows(gridRows);
  const cellKeys = [...new Set(gridRows.map((r) => `${numeric(r, "n")}|${numeric(r, "eps")}`))]
    .sort();
  if (cellKeys.length === 0) {
    throw new Error(`no trial rows in ${csvPath}`);
  }
  const models = [...new Set(gridRows.map((r) => String(r.model)))].sort();
  if (models.length < 2) {
    warn(`comparison plot: only one model label (${models.join("") || "none"}); ` +
      "overlay degenerates to a single histogram");
  }
  const colorOf = new Map(models.map((m, i) => [m, PALETTE[i % PALETTE.length]]));

  const panelW = 300;
  const panelH = 220;
  const margin = { top: 34, right: 16, bottom: 44, left: 52 };
  const cols = PANEL_QUANTITIES.length;
  const width = cols * panelW + 20;
  const height = cellKeys.length * panelH + 16;
  const svg = new SvgCanvas(width, height);

  cellKeys.forEach((key, row) => {
    const [n, eps] = key.split("|").map(Number);
    const cellRows = trialRows.filter(
      (r) => numeric(r, "n") === n && numeric(r, "eps") === eps);
    PANEL_QUANTITIES.forEach(([column, label], col) => {
      const x0 = col * panelW + 10;
      const y0 = row * panelH + 8;
      svg.text(x0 + margin.left, y0 + 14,
        `${label} at n=${n}, eps=${eps}`, 'font-size="11" font-weight="bold"');
      const byModel = new Map<string, number[]>();
      for (const m of models) {
        const values = cellRows.filter((r) => r.model === m)
          .map((r) => maybeNumeric(r, column))
          .filter((v): v is number => v !== null);
        if (values.length > 0) {
          byModel.set(m, values);
        }
      }
      if (byModel.size === 0) {
        svg.text(x0 + panelW / 2, y0 + panelH / 2, "(no data for this cell)",
          'font-size="11" text-anchor="middle" fill="#888" class="empty-panel"');
        return;
      }
      const { edges, counts } = histogramBins(byModel);
      const maxCount = Math.max(...[...counts.values()].flat(), 1);
      const x = new Scale([edges[0], edges[edges.length - 1]],
        [x0 + margin.left, x0 + panelW - margin.right]);
      const y = new Scale([0, maxCount * 1.05],
        [y0 + panelH - margin.bottom, y0 + margin.top]);
      svg.xAxis(x, y0 + panelH - margin.bottom, label);
      svg.yAxis(y, x0 + margin.left, "trials");
      let mi = 0;
      for (const [model, c] of counts) {
        const color = colorOf.get(model) ?? PALETTE[0];
        c.forEach((count, b) => {
          if (count > 0) {
            const bx = x.apply(edges[b]);
            const bw = x.apply(edges[b + 1]) - bx;
            svg.rect(bx, y.apply(count), bw, y.apply(0) - y.apply(count), color,
              `fill-opacity="0.45" class="hist hist-${model}"`);
          }
        });
        svg.text(x0 + margin.left + 6, y0 + 26 + 12 * mi, model,
          `font-size="10" fill="${color}"`);
        mi += 1;
      }
    });
  });

  writeFileSync(outPath, svg.render());
}
