/**
 * Deterministic SVG charts from parsed result rows.
 *
 * snapshot: mean sum rate per antenna geometry, one marker series per scheme,
 * CI error bars.  temporal: mean sum rate per fading block, one line per
 * scheme with a CI band.  No timestamps or random ids: identical input yields
 * byte-identical SVG.
 */

import { ResultRow, SchemaError, distinctInOrder } from "./csv.js";

export type FigureKind = "snapshot" | "temporal";

export interface RenderOptions {
    xLabel?: string;
    yLabel?: string;
    /** Display names per scheme id; defaults to the raw scheme strings. */
    schemeLabels?: Record<string, string>;
}

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { top: 28, right: 24, bottom: 56, left: 64 };
const PLOT_W = WIDTH - MARGIN.left - MARGIN.right;
const PLOT_H = HEIGHT - MARGIN.top - MARGIN.bottom;

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

function fmt(x: number): string {
    // fixed short form keeps the output stable across platforms
    return Number(x.toFixed(3)).toString();
}

function niceTicks(lo: number, hi: number, count = 6): number[] {
    if (!(hi > lo)) {
        hi = lo + 1;
    }
    const raw = (hi - lo) / count;
    const mag = Math.pow(10, Math.floor(Math.log10(raw)));
    const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => s >= raw) ?? 10 * mag;
    const start = Math.ceil(lo / step) * step;
    const ticks: number[] = [];
    for (let v = start; v <= hi + 1e-9; v += step) {
        ticks.push(Number(v.toFixed(9)));
    }
    return ticks;
}

function yExtent(rows: ResultRow[]): [number, number] {
    let lo = Infinity;
    let hi = -Infinity;
    for (const r of rows) {
        lo = Math.min(lo, r.meanSumRate - r.ci95HalfWidth);
        hi = Math.max(hi, r.meanSumRate + r.ci95HalfWidth);
    }
    const pad = 0.08 * (hi - lo || 1);
    return [lo - pad, hi + pad];
}

function escapeXml(s: string): string {
    return s
        .replace(/&/g, "&amp;")
        .replace(/</g, "&lt;")
        .replace(/>/g, "&gt;")
        .replace(/"/g, "&quot;");
}

interface Frame {
    toY: (v: number) => number;
    body: string[];
}

function axesAndFrame(
    rows: ResultRow[],
    xLabel: string,
    yLabel: string,
    xTickAt: Array<[number, string]>,
): Frame {
    const [yLo, yHi] = yExtent(rows);
    const toY = (v: number) =>
        MARGIN.top + PLOT_H - ((v - yLo) / (yHi - yLo)) * PLOT_H;
    const body: string[] = [];
    body.push(
        `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${PLOT_W}" height="${PLOT_H}" ` +
            `fill="none" stroke="#333" stroke-width="1"/>`,
    );
    for (const tick of niceTicks(yLo, yHi)) {
        const y = toY(tick);
        body.push(
            `<line x1="${MARGIN.left}" x2="${MARGIN.left + PLOT_W}" y1="${fmt(y)}" y2="${fmt(y)}" ` +
                `stroke="#ddd" stroke-width="0.5"/>`,
            `<text x="${MARGIN.left - 8}" y="${fmt(y + 4)}" text-anchor="end" font-size="12">${fmt(tick)}</text>`,
        );
    }
    for (const [x, label] of xTickAt) {
        body.push(
            `<text x="${fmt(x)}" y="${HEIGHT - MARGIN.bottom + 20}" text-anchor="middle" font-size="12">` +
                `${escapeXml(label)}</text>`,
        );
    }
    body.push(
        `<text x="${MARGIN.left + PLOT_W / 2}" y="${HEIGHT - 12}" text-anchor="middle" font-size="13">` +
            `${escapeXml(xLabel)}</text>`,
        `<text x="16" y="${MARGIN.top + PLOT_H / 2}" text-anchor="middle" font-size="13" ` +
            `transform="rotate(-90 16 ${MARGIN.top + PLOT_H / 2})">${escapeXml(yLabel)}</text>`,
    );
    return { toY, body };
}

function legend(schemes: string[], labels: Record<string, string>): string[] {
    const out = [`<g class="legend">`];
    schemes.forEach((scheme, i) => {
        const y = MARGIN.top + 10 + 18 * i;
        const x = MARGIN.left + 12;
        out.push(
            `<rect x="${x}" y="${y - 8}" width="12" height="12" fill="${PALETTE[i % PALETTE.length]}"/>`,
            `<text x="${x + 18}" y="${y + 2}" font-size="12">${escapeXml(labels[scheme] ?? scheme)}</text>`,
        );
    });
    out.push(`</g>`);
    return out;
}

function errorBar(x: number, yLo: number, yHi: number, color: string): string {
    const cap = 5;
    return (
        `<g class="error-bar" stroke="${color}" stroke-width="1.5">` +
        `<line x1="${fmt(x)}" x2="${fmt(x)}" y1="${fmt(yLo)}" y2="${fmt(yHi)}"/>` +
        `<line x1="${fmt(x - cap)}" x2="${fmt(x + cap)}" y1="${fmt(yLo)}" y2="${fmt(yLo)}"/>` +
        `<line x1="${fmt(x - cap)}" x2="${fmt(x + cap)}" y1="${fmt(yHi)}" y2="${fmt(yHi)}"/>` +
        `</g>`
    );
}

function renderSnapshot(rows: ResultRow[], opts: RenderOptions): string[] {
    const geometries = distinctInOrder(rows.map((r) => r.geometry));
    const schemes = distinctInOrder(rows.map((r) => r.scheme));
    const slot = PLOT_W / geometries.length;
    const xTicks: Array<[number, string]> = geometries.map((g, i) => [
        MARGIN.left + slot * (i + 0.5),
        g,
    ]);
    const frame = axesAndFrame(
        rows,
        opts.xLabel ?? "antenna configuration (Nv x Nh)",
        opts.yLabel ?? "sum rate (bps/Hz)",
        xTicks,
    );
    const body = frame.body;
    schemes.forEach((scheme, s) => {
        const color = PALETTE[s % PALETTE.length];
        body.push(`<g class="series" data-kind="snapshot" data-scheme="${escapeXml(scheme)}">`);
        for (const row of rows.filter((r) => r.scheme === scheme)) {
            const gi = geometries.indexOf(row.geometry);
            const x =
                MARGIN.left + slot * (gi + 0.5) + (s - (schemes.length - 1) / 2) * 14;
            const y = frame.toY(row.meanSumRate);
            body.push(
                errorBar(
                    x,
                    frame.toY(row.meanSumRate - row.ci95HalfWidth),
                    frame.toY(row.meanSumRate + row.ci95HalfWidth),
                    color,
                ),
                `<circle class="marker" cx="${fmt(x)}" cy="${fmt(y)}" r="4.5" fill="${color}"/>`,
            );
        }
        body.push(`</g>`);
    });
    body.push(...legend(schemes, opts.schemeLabels ?? {}));
    return body;
}

function renderTemporal(rows: ResultRow[], opts: RenderOptions): string[] {
    const schemes = distinctInOrder(rows.map((r) => r.scheme));
    const blocks = [...new Set(rows.map((r) => r.fadingBlock))].sort((a, b) => a - b);
    const bLo = blocks[0];
    const bHi = blocks[blocks.length - 1];
    const toX = (m: number) =>
        MARGIN.left + (bHi === bLo ? PLOT_W / 2 : ((m - bLo) / (bHi - bLo)) * PLOT_W);
    const xTicks: Array<[number, string]> = blocks.map((m) => [toX(m), String(m)]);
    const frame = axesAndFrame(
        rows,
        opts.xLabel ?? "fading block index m",
        opts.yLabel ?? "sum rate (bps/Hz)",
        xTicks,
    );
    const body = frame.body;
    schemes.forEach((scheme, s) => {
        const color = PALETTE[s % PALETTE.length];
        const series = rows
            .filter((r) => r.scheme === scheme)
            .sort((a, b) => a.fadingBlock - b.fadingBlock);
        body.push(`<g class="series" data-kind="temporal" data-scheme="${escapeXml(scheme)}">`);
        const upper = series.map(
            (r) => `${fmt(toX(r.fadingBlock))},${fmt(frame.toY(r.meanSumRate + r.ci95HalfWidth))}`,
        );
        const lower = series
            .slice()
            .reverse()
            .map(
                (r) =>
                    `${fmt(toX(r.fadingBlock))},${fmt(frame.toY(r.meanSumRate - r.ci95HalfWidth))}`,
            );
        body.push(
            `<polygon class="ci-band" points="${[...upper, ...lower].join(" ")}" ` +
                `fill="${color}" fill-opacity="0.15" stroke="none"/>`,
        );
        const points = series
            .map((r) => `${fmt(toX(r.fadingBlock))},${fmt(frame.toY(r.meanSumRate))}`)
            .join(" ");
        body.push(
            `<polyline class="line" points="${points}" fill="none" stroke="${color}" stroke-width="2"/>`,
        );
        for (const r of series) {
            body.push(
                `<circle class="marker" cx="${fmt(toX(r.fadingBlock))}" ` +
                    `cy="${fmt(frame.toY(r.meanSumRate))}" r="3.5" fill="${color}"/>`,
            );
        }
        body.push(`</g>`);
    });
    body.push(...legend(schemes, opts.schemeLabels ?? {}));
    return body;
}

export function renderChart(
    rows: ResultRow[],
    kind: FigureKind,
    opts: RenderOptions = {},
): string {
    if (rows.length === 0) {
        throw new SchemaError("empty data: the CSV has a header but no rows");
    }
    if (kind === "snapshot" && rows.some((r) => r.fadingBlock !== 0)) {
        throw new SchemaError(
            "kind mismatch: snapshot charts need fading_block = 0 on every row",
        );
    }
    const body = kind === "snapshot" ? renderSnapshot(rows, opts) : renderTemporal(rows, opts);
    return [
        `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
            `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
        `<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>`,
        ...body,
        `</svg>`,
        ``,
    ].join("\n");
}
