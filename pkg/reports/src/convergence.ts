import { writeFileSync } from "fs";
import { mean, numeric, readRows, requireColumns, Row, std, usableRows } from "./csv";
import { PALETTE, Scale, SvgCanvas } from "./svg";

const QUANTITIES: Array<[string, string]> = [
  ["ratio_c1", "diam_C1"],
  ["ratio_core", "diam_core"],
  ["ratio_kernel", "max_kernel"],
];

interface Series {
  label: string;
  color: string;
  points: Array<{ n: number; mean: number; std: number }>;
}

export function buildSeries(rows: Row[]): Series[] {
  const cells = new Map<string, Row[]>();
  for (const row of rows) {
    const key = `${numeric(row, "eps")}|${numeric(row, "n")}`;
    (cells.get(key) ?? cells.set(key, []).get(key)!).push(row);
  }
  const epsValues = [...new Set(rows.map((r) => numeric(r, "eps")))].sort((a, b) => a - b);
  const series: Series[] = [];
  let color = 0;
  for (const eps of epsValues) {
    for (const [column, label] of QUANTITIES) {
      const points: Series["points"] = [];
      const nValues = [...new Set(rows.filter((r) => numeric(r, "eps") === eps)
        .map((r) => numeric(r, "n")))].sort((a, b) => a - b);
      for (const n of nValues) {
        const cell = cells.get(`${eps}|${n}`) ?? [];
        const values = cell.map((r) => numeric(r, column));
        if (values.length > 0) {
          points.push({ n, mean: mean(values), std: std(values) });
        }
      }
      series.push({
        label: `${label} (eps=${eps})`,
        color: PALETTE[color++ % PALETTE.length],
        points,
      });
    }
  }
  return series;
}

/** Measured/predicted ratio vs n (log x): one series per eps and quantity. */
export function plotConvergence(csvPath: string, outPath: string): void {
  const rows = usableRows(readRows(csvPath));
  requireColumns(rows, ["n", "eps", "ratio_c1", "ratio_core", "ratio_kernel"], csvPath);
  if (rows.length === 0) {
    throw new Error(`no usable trial rows in ${csvPath}`);
  }
  const series = buildSeries(rows);
  const width = 640;
  const height = 420;
  const margin = { top: 24, right: 180, bottom: 48, left: 64 };

  const ns = series.flatMap((s) => s.points.map((p) => p.n));
  const ys = series.flatMap((s) => s.points.flatMap((p) => [p.mean - p.std, p.mean + p.std]));
  const xDomain: [number, number] = [Math.min(...ns) / 1.2, Math.max(...ns) * 1.2];
  const yDomain: [number, number] = [
    Math.min(0.9, Math.min(...ys) - 0.05),
    Math.max(1.1, Math.max(...ys) + 0.05),
  ];
  const x = new Scale(xDomain, [margin.left, width - margin.right], true);
  const y = new Scale(yDomain, [height - margin.bottom, margin.top]);

  const svg = new SvgCanvas(width, height);
  svg.xAxis(x, height - margin.bottom, "n (log scale)");
  svg.yAxis(y, margin.left, "measured / predicted");
  // reference line at ratio 1
  svg.line(margin.left, y.apply(1), width - margin.right, y.apply(1), "#999",
    'stroke-dasharray="4 3" class="reference"');

  series.forEach((s, i) => {
    if (s.points.length === 0) {
      return;
    }
    const pts = s.points.map((p) => [x.apply(p.n), y.apply(p.mean)] as [number, number]);
    svg.polyline(pts, s.color);
    s.points.forEach((p, j) => {
      svg.circle(pts[j][0], pts[j][1], 2.5, s.color);
      if (p.std > 0) {
        svg.errorBar(pts[j][0], y.apply(p.mean - p.std), y.apply(p.mean + p.std), s.color);
      }
    });
    const ly = margin.top + 14 * i;
    svg.line(width - margin.right + 8, ly, width - margin.right + 24, ly, s.color);
    svg.text(width - margin.right + 28, ly + 3, s.label, 'font-size="10"');
  });

  writeFileSync(outPath, svg.render());
}
