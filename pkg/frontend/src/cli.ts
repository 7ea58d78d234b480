/**
 * plot --in <csv> --kind {snapshot|temporal} --out <image.svg>
 *
 * Exit codes mirror the simulator CLI: 0 success, 2 bad arguments / schema /
 * empty data, 3 I/O failure.  The input file is opened read-only and never
 * modified.
 */

import * as fs from "node:fs";

import { parseResultsCsv, SchemaError } from "./csv.js";
import { FigureKind, renderChart } from "./render.js";

export const EXIT_OK = 0;
export const EXIT_CONFIG = 2;
export const EXIT_IO = 3;

interface Args {
    input: string;
    output: string;
    kind: FigureKind;
}

function parseArgs(argv: string[]): Args {
    let input: string | undefined;
    let output: string | undefined;
    let kind: string | undefined;
    for (let i = 0; i < argv.length; i++) {
        const flag = argv[i];
        const value = argv[i + 1];
        switch (flag) {
            case "--in":
                input = value;
                i++;
                break;
            case "--out":
                output = value;
                i++;
                break;
            case "--kind":
                kind = value;
                i++;
                break;
            default:
                throw new SchemaError(`unknown argument ${JSON.stringify(flag)}`);
        }
    }
    if (!input || !output || !kind) {
        throw new SchemaError("usage: plot --in <csv> --kind {snapshot|temporal} --out <image>");
    }
    if (kind !== "snapshot" && kind !== "temporal") {
        throw new SchemaError(`--kind must be snapshot or temporal, got ${JSON.stringify(kind)}`);
    }
    return { input, output, kind };
}

export function runCli(argv: string[]): number {
    let args: Args;
    try {
        args = parseArgs(argv);
    } catch (err) {
        console.error(`config error: ${(err as Error).message}`);
        return EXIT_CONFIG;
    }

    let text: string;
    try {
        text = fs.readFileSync(args.input, "utf-8");
    } catch (err) {
        console.error(`i/o error: cannot read ${args.input}: ${(err as Error).message}`);
        return EXIT_IO;
    }

    let svg: string;
    try {
        svg = renderChart(parseResultsCsv(text), args.kind);
    } catch (err) {
        if (err instanceof SchemaError) {
            console.error(`config error: ${err.message}`);
            return EXIT_CONFIG;
        }
        throw err;
    }

    try {
        fs.writeFileSync(args.output, svg, "utf-8");
    } catch (err) {
        console.error(`i/o error: cannot write ${args.output}: ${(err as Error).message}`);
        return EXIT_IO;
    }
    return EXIT_OK;
}
