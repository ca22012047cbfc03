// plots CLI: `render --kind {tv,bler,thresholds} --in a.csv [--in b.csv] --out fig.svg`

import { readFileSync, writeFileSync } from "fs";
import { parseCsv } from "./csv.js";
import { buildOption, FigureKind } from "./figures.js";
import { renderSvg } from "./render.js";

interface RenderArgs {
  kind: FigureKind;
  inputs: string[];
  out: string;
  width: number;
  height: number;
}

export function parseArgs(argv: string[]): RenderArgs {
  if (argv[0] !== "render") {
    throw new Error(`unknown subcommand '${argv[0] ?? ""}' (expected: render)`);
  }
  const args: RenderArgs = { kind: "tv", inputs: [], out: "", width: 800, height: 520 };
  let kindSet = false;
  for (let i = 1; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (value === undefined) throw new Error(`missing value for ${flag}`);
    switch (flag) {
      case "--kind":
        if (value !== "tv" && value !== "bler" && value !== "thresholds") {
          throw new Error(`--kind must be tv, bler or thresholds, got '${value}'`);
        }
        args.kind = value;
        kindSet = true;
        break;
      case "--in":
        args.inputs.push(value);
        break;
      case "--out":
        args.out = value;
        break;
      case "--width":
        args.width = Number(value);
        break;
      case "--height":
        args.height = Number(value);
        break;
      default:
        throw new Error(`unknown flag ${flag}`);
    }
  }
  if (!kindSet) throw new Error("--kind is required");
  if (args.inputs.length === 0) throw new Error("at least one --in CSV is required");
  if (!args.out) throw new Error("--out is required");
  if (!args.out.endsWith(".svg")) {
    throw new Error("--out must end in .svg (this renderer emits SVG)");
  }
  return args;
}

export function runRender(args: RenderArgs): void {
  const tables = args.inputs.map((path) => parseCsv(readFileSync(path, "utf8")));
  const option = buildOption(args.kind, tables);
  const svg = renderSvg(option, args.width, args.height);
  writeFileSync(args.out, svg);
}

export function main(argv: string[]): number {
  try {
    runRender(parseArgs(argv));
    return 0;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
