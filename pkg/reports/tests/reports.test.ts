import { mkdtempSync, readFileSync, statSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { describe, expect, it, vi } from "vitest";

import { plotComparison } from "../src/comparison";
import { plotConvergence } from "../src/convergence";
import { readRows, requireColumns, SchemaError } from "../src/csv";
import { runCli } from "../src/cli";

const FIXTURES = join(__dirname, "fixtures");
const tmp = mkdtempSync(join(tmpdir(), "giantscope-report-"));

function out(name: string): string {
  return join(tmp, name);
}

describe("csv reader", () => {
  it("reads harness rows with types", () => {
    const rows = readRows(join(FIXTURES, "giant_3cells.csv"));
    expect(rows.length).toBe(30);
    expect(typeof rows[0].n).toBe("number");
    expect(typeof rows[0].ratio_c1).toBe("number");
  });

  it("rejects empty files by name", () => {
    const empty = out("empty.csv");
    writeFileSync(empty, "");
    expect(() => readRows(empty)).toThrow(SchemaError);
    expect(() => readRows(empty)).toThrow(/empty CSV file/);
  });

  it("names the missing columns", () => {
    const rows = readRows(join(FIXTURES, "giant_3cells.csv"));
    expect(() => requireColumns(rows, ["ratio_c1", "no_such_column"], "x.csv"))
      .toThrow(/missing column\(s\) in x.csv: no_such_column/);
  });
});

describe("convergence plot", () => {
  it("renders 3 quantities x 1 eps over 3 cells", () => {
    const svgPath = out("conv.svg");
    plotConvergence(join(FIXTURES, "giant_3cells.csv"), svgPath);
    expect(statSync(svgPath).size).toBeGreaterThan(0);
    const svg = readFileSync(svgPath, "utf8");
    expect(svg).toContain("<svg");
    expect((svg.match(/class="series"/g) ?? []).length).toBe(3);
    expect(svg).toContain('class="reference"');
  });

  it("renders a single row without crashing", () => {
    const svgPath = out("conv_one.svg");
    plotConvergence(join(FIXTURES, "giant_one_row.csv"), svgPath);
    expect(statSync(svgPath).size).toBeGreaterThan(0);
  });

  it("puts all-ones ratios on the reference line (data space)", () => {
    const csv = out("ones.csv");
    const header = "kind,n,eps,trial,flag,ratio_c1,ratio_core,ratio_kernel";
    const lines = [header];
    for (const n of [1000, 10000]) {
      for (let t = 0; t < 3; t++) {
        lines.push(`giant,${n},0.1,${t},,1,1,1`);
      }
    }
    writeFileSync(csv, lines.join("\n") + "\n");
    const svgPath = out("ones.svg");
    plotConvergence(csv, svgPath);
    const svg = readFileSync(svgPath, "utf8");
    const refY = /class="reference"/.test(svg)
      ? Number(svg.match(/<line x1="[\d.]+" y1="([\d.]+)"[^>]*class="reference"/)![1])
      : NaN;
    const seriesPoints = [...svg.matchAll(/class="series" points="([^"]+)"/g)]
      .flatMap((m) => m[1].split(" ").map((p) => Number(p.split(",")[1])));
    expect(seriesPoints.length).toBeGreaterThan(0);
    for (const y of seriesPoints) {
      expect(Math.abs(y - refY)).toBeLessThan(0.75);
    }
  });

  it("fails with a named-column error on malformed input", () => {
    const bad = out("bad.csv");
    writeFileSync(bad, "kind,n,eps,trial,flag\ngiant,1000,0.1,0,\n");
    expect(() => plotConvergence(bad, out("bad.svg")))
      .toThrow(/missing column\(s\).*ratio_c1/);
  });
});

describe("comparison plot", () => {
  it("overlays two model histograms per panel", () => {
    const svgPath = out("cmp.svg");
    plotComparison(join(FIXTURES, "compare_direct_young.csv"), svgPath);
    expect(statSync(svgPath).size).toBeGreaterThan(0);
    const svg = readFileSync(svgPath, "utf8");
    expect(svg).toContain('class="hist hist-direct"');
    expect(svg).toContain('class="hist hist-young"');
  });

  it("warns on a single model label", () => {
    const warn = vi.fn();
    const svgPath = out("cmp_single.svg");
    plotComparison(join(FIXTURES, "compare_single_model.csv"), svgPath, warn);
    expect(statSync(svgPath).size).toBeGreaterThan(0);
    expect(warn).toHaveBeenCalledOnce();
    expect(String(warn.mock.calls[0][0])).toMatch(/one model label/);
  });

  it("annotates cells that hold no usable data", () => {
    const csv = out("cmp_empty_cell.csv");
    const header = "kind,n,eps,model,trial,flag,size_c1,size_core,size_kernel,diam_core";
    // second cell exists only through flagged rows: its panels get annotated
    const lines = [header,
      "model_compare,1000,0.2,direct,0,,900,100,12,40",
      "model_compare,1000,0.2,young,0,,950,110,14,42",
      "model_compare,2000,0.2,direct,0,boom,,,,",
    ];
    writeFileSync(csv, lines.join("\n") + "\n");
    const svgPath = out("cmp_empty.svg");
    plotComparison(csv, svgPath);
    const svg = readFileSync(svgPath, "utf8");
    expect((svg.match(/empty-panel/g) ?? []).length).toBe(2);
    expect(svg).toContain("no data for this cell");
  });

  it("fails with a named-column error when model column is absent", () => {
    expect(() => plotComparison(join(FIXTURES, "giant_3cells.csv"), out("x.svg")))
      .toThrow(/missing column\(s\).*model/);
  });
});

describe("cli", () => {
  it("runs both commands end to end", () => {
    expect(runCli(["convergence", "--in", join(FIXTURES, "giant_3cells.csv"),
                   "--out", out("cli_conv.svg")])).toBe(0);
    expect(statSync(out("cli_conv.svg")).size).toBeGreaterThan(0);
    expect(runCli(["comparison", "--in", join(FIXTURES, "compare_direct_young.csv"),
                   "--out", out("cli_cmp.svg")])).toBe(0);
    expect(statSync(out("cli_cmp.svg")).size).toBeGreaterThan(0);
  });

  it("returns 2 on schema errors and usage problems", () => {
    const bad = out("cli_bad.csv");
    writeFileSync(bad, "kind,n\ngiant,5\n");
    expect(runCli(["convergence", "--in", bad, "--out", out("no.svg")])).toBe(2);
    expect(runCli(["convergence"])).toBe(2);
    expect(runCli(["nope", "--in", bad, "--out", out("no.svg")])).toBe(2);
  });
});
