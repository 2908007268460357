#!/usr/bin/env node
import { plotComparison } from "./comparison";
import { plotConvergence } from "./convergence";
import { SchemaError } from "./csv";

const USAGE = "usage: giantscope-report convergence|comparison --in results.csv --out fig.svg";

export function runCli(argv: string[]): number {
  const [command, ...rest] = argv;
  const opts = new Map<string, string>();
  for (let i = 0; i < rest.length; i += 2) {
    if (!rest[i].startsWith("--") || rest[i + 1] === undefined) {
      console.error(USAGE);
      return 2;
    }
    opts.set(rest[i].slice(2), rest[i + 1]);
  }
  const input = opts.get("in");
  const output = opts.get("out");
  if (!command || !input || !output) {
    console.error(USAGE);
    return 2;
  }
  try {
    if (command === "convergence") {
      plotConvergence(input, output);
    } else if (command === "comparison") {
      plotComparison(input, output);
    } else {
      console.error(`unknown command: ${command}\n${USAGE}`);
      return 2;
    }
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${(err as Error).message}`);
      return 2;
    }
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
  console.log(`wrote ${output}`);
  return 0;
}

if (require.main === module) {
  process.exit(runCli(process.argv.slice(2)));
}
