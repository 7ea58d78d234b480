import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { CSV_HEADER, distinctInOrder, parseResultsCsv, SchemaError } from "../src/csv.js";

const FIXTURES = join(__dirname, "fixtures");

describe("parseResultsCsv", () => {
    it("parses the snapshot fixture", () => {
        const rows = parseResultsCsv(readFileSync(join(FIXTURES, "fig3_snapshot.csv"), "utf-8"));
        expect(rows).toHaveLength(9);
        expect(rows[0].geometry).toBe("4x8");
        expect(rows[0].scheme).toBe("kronecker");
        expect(rows[0].fadingBlock).toBe(0);
        expect(rows[0].admittedTrials).toBe(2000);
        expect(rows.every((r) => r.ci95HalfWidth >= 0)).toBe(true);
    });

    it("parses the temporal fixture with all six blocks", () => {
        const rows = parseResultsCsv(readFileSync(join(FIXTURES, "fig4_temporal.csv"), "utf-8"));
        expect(rows).toHaveLength(18);
        const blocks = new Set(rows.map((r) => r.fadingBlock));
        expect([...blocks].sort((a, b) => a - b)).toEqual([0, 1, 2, 3, 4, 5]);
    });

    it("keeps full float precision", () => {
        const text = `${CSV_HEADER}\n4x8,blockwise,0,7.123456789012345,0.25,10,1,16\n`;
        expect(parseResultsCsv(text)[0].meanSumRate).toBe(7.123456789012345);
    });

    it("accepts a header-only file as zero rows", () => {
        expect(parseResultsCsv(`${CSV_HEADER}\n`)).toEqual([]);
    });

    it("rejects a foreign header", () => {
        expect(() => parseResultsCsv("a,b,c\n1,2,3\n")).toThrow(SchemaError);
    });

    it("rejects a short row", () => {
        expect(() => parseResultsCsv(`${CSV_HEADER}\n4x8,blockwise,0,7.0\n`)).toThrow(
            SchemaError,
        );
    });

    it("rejects non-numeric counts", () => {
        expect(() =>
            parseResultsCsv(`${CSV_HEADER}\n4x8,blockwise,zero,7.0,0.2,10,0,16\n`),
        ).toThrow(SchemaError);
    });

    it("rejects non-finite means", () => {
        expect(() =>
            parseResultsCsv(`${CSV_HEADER}\n4x8,blockwise,0,Infinity,0.2,10,0,16\n`),
        ).toThrow(SchemaError);
    });
});

describe("distinctInOrder", () => {
    it("preserves first-appearance order", () => {
        expect(distinctInOrder(["b", "a", "b", "c", "a"])).toEqual(["b", "a", "c"]);
    });
});
