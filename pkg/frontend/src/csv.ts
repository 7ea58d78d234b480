/**
 * Parser for the simulator's result CSV.
 *
 * Schema (UTF-8, comma separated, '.' decimal, one header line):
 * geometry,scheme,fading_block,mean_sum_rate_bps_hz,ci95_half_width,
 * admitted_trials,discarded_trials,feedback_bits
 */

export const CSV_HEADER =
    "geometry,scheme,fading_block,mean_sum_rate_bps_hz,ci95_half_width," +
    "admitted_trials,discarded_trials,feedback_bits";

export interface ResultRow {
    geometry: string;
    scheme: string;
    fadingBlock: number;
    meanSumRate: number;
    ci95HalfWidth: number;
    admittedTrials: number;
    discardedTrials: number;
    feedbackBits: number;
}

/** Raised for header/shape/value problems; maps to the config exit code. */
export class SchemaError extends Error {}

function parseNumber(token: string, field: string, line: number): number {
    const value = Number(token);
    if (token.trim() === "" || !Number.isFinite(value)) {
        throw new SchemaError(`line ${line}: bad ${field} value ${JSON.stringify(token)}`);
    }
    return value;
}

function parseCount(token: string, field: string, line: number): number {
    const value = parseNumber(token, field, line);
    if (!Number.isInteger(value) || value < 0) {
        throw new SchemaError(`line ${line}: ${field} must be a non-negative integer`);
    }
    return value;
}

export function parseResultsCsv(text: string): ResultRow[] {
    const lines = text.split(/\r?\n/).filter((line, i) => line !== "" || i === 0);
    if (lines.length === 0 || lines[0] !== CSV_HEADER) {
        throw new SchemaError(
            `input does not carry the expected result schema header (${CSV_HEADER})`,
        );
    }
    return lines.slice(1).map((line, i) => {
        const lineno = i + 2;
        const parts = line.split(",");
        if (parts.length !== 8) {
            throw new SchemaError(`line ${lineno}: expected 8 fields, got ${parts.length}`);
        }
        return {
            geometry: parts[0],
            scheme: parts[1],
            fadingBlock: parseCount(parts[2], "fading_block", lineno),
            meanSumRate: parseNumber(parts[3], "mean_sum_rate_bps_hz", lineno),
            ci95HalfWidth: parseNumber(parts[4], "ci95_half_width", lineno),
            admittedTrials: parseCount(parts[5], "admitted_trials", lineno),
            discardedTrials: parseCount(parts[6], "discarded_trials", lineno),
            feedbackBits: parseCount(parts[7], "feedback_bits", lineno),
        };
    });
}

/** First-appearance order, which mirrors the emitter's deterministic row order. */
export function distinctInOrder(values: string[]): string[] {
    const seen = new Set<string>();
    const out: string[] = [];
    for (const value of values) {
        if (!seen.has(value)) {
            seen.add(value);
            out.push(value);
        }
    }
    return out;
}
