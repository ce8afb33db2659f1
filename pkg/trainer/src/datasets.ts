import * as fs from "fs";

import { Rng } from "./rng";

export class InvalidParams extends Error {}

/**
 * 2-D ring: radius ~ Normal(rMean, rStd), angle uniform. The disk
 * interior is empty, which is the non-simply-connected structure the
 * density regularizer exists for.
 */
export function makeRing2d(n: number, rMean: number, rStd: number, seed: number): number[][] {
    if (n <= 0) throw new InvalidParams(`n must be positive, got ${n}`);
    if (!(rMean > 3 * rStd && rStd > 0)) {
        throw new InvalidParams(
            `need rMean > 3*rStd > 0, got rMean=${rMean} rStd=${rStd}`,
        );
    }
    const rng = new Rng(seed);
    const points: number[][] = [];
    for (let i = 0; i < n; i++) {
        const r = rMean + rStd * rng.gauss();
        const th = rng.uniform(0, 2 * Math.PI);
        points.push([r * Math.cos(th), r * Math.sin(th)]);
    }
    return points;
}

/**
 * Optional MNIST subset. No dataset ships with the repo; callers must
 * point at a local JSON file of {"images": number[][], "labels": ...}
 * with rows already flattened and scaled to [-1, 1].
 */
export function loadMnistSubset(path: string, maxRows: number): number[][] {
    if (!fs.existsSync(path)) {
        throw new InvalidParams(
            `mnist_subset needs a local data file; not found: ${path}`,
        );
    }
    const doc = JSON.parse(fs.readFileSync(path, "utf-8"));
    if (!Array.isArray(doc.images) || doc.images.length === 0) {
        throw new InvalidParams(`${path}: expected a non-empty "images" array`);
    }
    return doc.images.slice(0, maxRows);
}
