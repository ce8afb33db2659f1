import * as fs from "fs";
import * as path from "path";

import { Mlp } from "./net";
import { Rng } from "./rng";

/**
 * Weight-file schema version "1", the contract with the geodint
 * loader. JSON.stringify emits shortest round-trip decimals, so every
 * double survives export/import bit exactly.
 */
export interface WeightFile {
    schema_version: "1";
    d_z: number;
    d_x: number;
    generator: {
        kind: "mlp";
        layers: { weights: number[][]; bias: number[]; activation: string }[];
    };
    metadata: Record<string, unknown>;
}

export function toWeightFile(net: Mlp, metadata: Record<string, unknown>): WeightFile {
    const layers = net.layers.map((l) => ({
        weights: l.weights.map((row) => row.slice()),
        bias: l.bias.slice(),
        activation: l.activation === "logit" ? "identity" : l.activation,
    }));
    return {
        schema_version: "1",
        d_z: net.layers[0].weights[0].length,
        d_x: net.layers[net.layers.length - 1].bias.length,
        generator: { kind: "mlp", layers },
        metadata,
    };
}

export function writeWeightFile(file: WeightFile, outPath: string): void {
    fs.mkdirSync(path.dirname(outPath), { recursive: true });
    fs.writeFileSync(outPath, JSON.stringify(file, null, 2) + "\n");
}

export function readWeightFile(inPath: string): WeightFile {
    return JSON.parse(fs.readFileSync(inPath, "utf-8"));
}

/**
 * Forward-pass fixtures: 100 latent points and their images, recorded
 * at full double precision for the cross-language agreement test.
 */
export function writeFixtures(net: Mlp, seed: number, outPath: string): void {
    const rng = new Rng(seed);
    const dZ = net.layers[0].weights[0].length;
    const z: number[][] = [];
    const x: number[][] = [];
    for (let i = 0; i < 100; i++) {
        const zi: number[] = [];
        for (let j = 0; j < dZ; j++) zi.push(rng.gauss());
        z.push(zi);
        x.push(net.forwardOne(zi));
    }
    fs.mkdirSync(path.dirname(outPath), { recursive: true });
    fs.writeFileSync(outPath, JSON.stringify({ seed, z, x }, null, 2) + "\n");
}
