#!/usr/bin/env node
/**
 * charax-plots <kind> --in <csv...> --out <svg>
 *
 * Exit codes mirror the simulator CLI: 0 figure written, 1 input data
 * does not match the artifact schema, 2 usage or configuration error.
 */
import * as fs from "node:fs";
import * as path from "node:path";
import { pathToFileURL } from "node:url";
import yargs from "yargs";

import {
  parseProfileCsv,
  parseScalingCsv,
  parseSeriesCsv,
  parseTransformedCsv,
  SchemaError,
} from "./csv.js";
import {
  FIGURE_KINDS,
  FigureKind,
  loglogScaling,
  normVsTime,
  profileOverlay,
  transformedProfile,
} from "./figures.js";

class UsageError extends Error {}

interface CliArgs {
  kind: FigureKind;
  inputs: string[];
  out: string;
  labels: string[];
  columns: string;
  title?: string;
}

async function parseArgs(argv: string[]): Promise<CliArgs> {
  const parser = yargs(argv)
    .scriptName("charax-plots")
    .usage("$0 <kind> --in <csv...> --out <svg>")
    .command("$0 <kind>", "render one figure from CSV artifacts", (y) =>
      y.positional("kind", {
        describe: "figure kind",
        choices: FIGURE_KINDS,
      }),
    )
    .option("in", {
      type: "string",
      array: true,
      demandOption: true,
      describe: "input CSV artifact(s)",
    })
    .option("out", {
      type: "string",
      demandOption: true,
      describe: "output SVG path",
    })
    .option("label", {
      type: "string",
      array: true,
      default: [] as string[],
      describe: "legend label per input (profile-overlay)",
    })
    .option("columns", {
      type: "string",
      default: "lp1,lp2,lp4,lpinf",
      describe: "comma-separated series columns (norm-vs-time)",
    })
    .option("title", { type: "string", describe: "figure title" })
    .strict()
    .exitProcess(false)
    .fail((msg, err) => {
      throw new UsageError(msg || (err ? err.message : "invalid usage"));
    });
  const parsed = await parser.parse();
  return {
    kind: parsed.kind as FigureKind,
    inputs: parsed.in as string[],
    out: parsed.out as string,
    labels: parsed.label as string[],
    columns: parsed.columns as string,
    title: parsed.title as string | undefined,
  };
}

function readInput(file: string): string {
  try {
    return fs.readFileSync(file, "utf8");
  } catch {
    throw new UsageError(`cannot read input file: ${file}`);
  }
}

function requireSingleInput(args: CliArgs): string {
  if (args.inputs.length !== 1) {
    throw new UsageError(
      `${args.kind} takes exactly one --in file, got ${args.inputs.length}`,
    );
  }
  return readInput(args.inputs[0]);
}

function renderFromArgs(args: CliArgs): string {
  switch (args.kind) {
    case "profile-overlay": {
      if (args.labels.length > 0 && args.labels.length !== args.inputs.length) {
        throw new UsageError(
          `got ${args.labels.length} --label for ${args.inputs.length} --in`,
        );
      }
      const inputs = args.inputs.map((file, i) => ({
        label: args.labels[i] ?? path.basename(file, ".csv"),
        rows: parseProfileCsv(readInput(file)),
      }));
      return args.title !== undefined
        ? profileOverlay(inputs, args.title)
        : profileOverlay(inputs);
    }
    case "transformed-profile": {
      const rows = parseTransformedCsv(requireSingleInput(args));
      return args.title !== undefined
        ? transformedProfile(rows, args.title)
        : transformedProfile(rows);
    }
    case "norm-vs-time": {
      const table = parseSeriesCsv(requireSingleInput(args));
      const columns = args.columns
        .split(",")
        .map((s) => s.trim())
        .filter((s) => s !== "");
      return normVsTime(table, columns, args.title);
    }
    case "loglog-scaling": {
      const rows = parseScalingCsv(requireSingleInput(args));
      return args.title !== undefined
        ? loglogScaling(rows, args.title)
        : loglogScaling(rows);
    }
  }
}

/** Run the CLI without exiting the process; returns the exit code. */
export async function runCli(argv: string[]): Promise<number> {
  let args: CliArgs;
  try {
    args = await parseArgs(argv);
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(`usage error: ${err.message}`);
      return 2;
    }
    throw err;
  }
  try {
    const svg = renderFromArgs(args);
    fs.mkdirSync(path.dirname(path.resolve(args.out)), { recursive: true });
    fs.writeFileSync(args.out, svg, "utf8");
    console.log(`wrote ${args.out}`);
    return 0;
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(`usage error: ${err.message}`);
      return 2;
    }
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
      return 1;
    }
    throw err;
  }
}

const invoked = process.argv[1]
  ? pathToFileURL(process.argv[1]).href
  : undefined;
if (invoked === import.meta.url) {
  runCli(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
