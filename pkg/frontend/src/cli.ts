/**
 * plotgen: render experiment CSV artifacts into figure files.
 *
 *   plotgen --checkpoints <csv> --out <file.svg|file.png> [--kind trajectories|compare]
 *   plotgen --run <csv> --out <file.svg|file.png> [--kind tracking]
 *
 * The figure kind is inferred from which input is given (checkpoints ->
 * trajectories, run -> tracking); pass --kind explicitly to disambiguate or
 * to pick the magnitude-comparison view of a checkpoints file. One output
 * file per invocation. On error nothing is written and the exit code is
 * nonzero.
 */

import { writeFileSync } from "node:fs";

import { readCheckpointCsv, readRunCsv } from "./csv.js";
import { figureCompare, figureTracking, figureTrajectories } from "./figures.js";
import { renderPng } from "./raster.js";
import { renderSvg, Scene } from "./svg.js";

export interface CliOptions {
  checkpoints?: string;
  run?: string;
  out?: string;
  kind?: string;
}

export function parseArgs(argv: string[]): CliOptions {
  const options: CliOptions = {};
  for (let i = 0; i < argv.length; i++) {
    const flag = argv[i];
    const take = (): string => {
      const value = argv[i + 1];
      if (value === undefined) {
        throw new Error(`missing value for ${flag}`);
      }
      i += 1;
      return value;
    };
    switch (flag) {
      case "--checkpoints":
        options.checkpoints = take();
        break;
      case "--run":
        options.run = take();
        break;
      case "--out":
        options.out = take();
        break;
      case "--kind":
        options.kind = take();
        break;
      default:
        throw new Error(`unknown argument ${flag}`);
    }
  }
  return options;
}

export function buildScene(options: CliOptions): Scene {
  const kind =
    options.kind ??
    (options.checkpoints && !options.run
      ? "trajectories"
      : options.run && !options.checkpoints
        ? "tracking"
        : undefined);
  if (!kind) {
    throw new Error("pass --kind when both --checkpoints and --run are given");
  }
  switch (kind) {
    case "trajectories": {
      if (!options.checkpoints) throw new Error("--kind trajectories needs --checkpoints");
      return figureTrajectories(readCheckpointCsv(options.checkpoints));
    }
    case "compare": {
      if (!options.checkpoints) throw new Error("--kind compare needs --checkpoints");
      return figureCompare(readCheckpointCsv(options.checkpoints));
    }
    case "tracking": {
      if (!options.run) throw new Error("--kind tracking needs --run");
      return figureTracking(readRunCsv(options.run));
    }
    default:
      throw new Error(`unknown figure kind '${kind}'`);
  }
}

export function run(argv: string[]): number {
  const options = parseArgs(argv);
  if (!options.out) {
    throw new Error("--out is required");
  }
  if (!options.out.endsWith(".svg") && !options.out.endsWith(".png")) {
    throw new Error("--out must end in .svg or .png");
  }
  const scene = buildScene(options);
  if (options.out.endsWith(".png")) {
    writeFileSync(options.out, renderPng(scene));
  } else {
    writeFileSync(options.out, renderSvg(scene), "utf8");
  }
  console.log(`wrote ${options.out} (${scene.width}x${scene.height})`);
  return 0;
}

const isMain = process.argv[1]?.endsWith("cli.js");
if (isMain) {
  try {
    process.exit(run(process.argv.slice(2)));
  } catch (err) {
    console.error(`plotgen: ${err instanceof Error ? err.message : String(err)}`);
    process.exit(1);
  }
}
