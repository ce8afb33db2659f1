import { describe, expect, it } from "vitest";

import { InvalidParams, makeRing2d } from "../src/datasets";

describe("makeRing2d", () => {
    it("collapses to the exact circle as rStd shrinks", () => {
        const pts = makeRing2d(4, 2.0, 1e-9, 1);
        for (const [x, y] of pts) {
            expect(Math.abs(Math.hypot(x, y) - 2.0)).toBeLessThan(1e-6);
        }
    });

    it("sample mean radius is within the CLT bound", () => {
        const n = 4096;
        const rMean = 1.5;
        const rStd = 0.1;
        const pts = makeRing2d(n, rMean, rStd, 11);
        const mean = pts.reduce((acc, [x, y]) => acc + Math.hypot(x, y), 0) / n;
        expect(Math.abs(mean - rMean)).toBeLessThan((3 * rStd) / Math.sqrt(n));
    });

    it("leaves the center empty", () => {
        const pts = makeRing2d(4096, 1.5, 0.1, 3);
        const inside = pts.filter(([x, y]) => Math.hypot(x, y) < 0.75).length;
        expect(inside).toBe(0);
    });

    it("rejects invalid parameters", () => {
        expect(() => makeRing2d(0, 1.5, 0.1, 1)).toThrow(InvalidParams);
        expect(() => makeRing2d(10, 0.2, 0.1, 1)).toThrow(InvalidParams);
        expect(() => makeRing2d(10, 1.5, 0, 1)).toThrow(InvalidParams);
    });
});
