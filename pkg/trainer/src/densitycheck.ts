import { Mlp } from "./net";
import { Rng } from "./rng";

/**
 * The pullback density surrogate rho(z) = -log p(z) + 1/2 log det(J^T J),
 * evaluated with the trainer's own Jacobian. Used as the self-check
 * that training reproduced the density hole: the latent region mapping
 * into the data hole must have larger rho (lower density) than the
 * region mapping onto the ring.
 */
export function rho(net: Mlp, z: number[]): number {
    const J = net.jacobianOne(z);
    const dZ = z.length;
    // g = J^T J
    const g: number[][] = [];
    for (let i = 0; i < dZ; i++) {
        const row: number[] = [];
        for (let j = 0; j < dZ; j++) {
            let acc = 0;
            for (let k = 0; k < J.length; k++) acc += J[k][i] * J[k][j];
            row.push(acc);
        }
        g.push(row);
    }
    let det: number;
    if (dZ === 2) {
        det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    } else {
        throw new Error("density check only implemented for d_z = 2");
    }
    const ridge = 1e-9 * (g[0][0] + g[1][1]);
    let negLogP = (dZ / 2) * Math.log(2 * Math.PI);
    for (const v of z) negLogP += 0.5 * v * v;
    return negLogP + 0.5 * Math.log(Math.abs(det) + ridge);
}

export interface HoleCheck {
    meanRhoOrigin: number;
    meanRhoRing: number;
    holePresent: boolean;
}

/** Compare mean rho near the latent origin against |z| = 1. */
export function checkDensityHole(net: Mlp, seed: number, samples = 400): HoleCheck {
    const rng = new Rng(seed);
    let sumOrigin = 0;
    let sumRing = 0;
    for (let i = 0; i < samples; i++) {
        const zo = [0.05 * rng.gauss(), 0.05 * rng.gauss()];
        sumOrigin += rho(net, zo);
        const a = rng.uniform(0, 2 * Math.PI);
        sumRing += rho(net, [Math.cos(a), Math.sin(a)]);
    }
    const meanRhoOrigin = sumOrigin / samples;
    const meanRhoRing = sumRing / samples;
    return { meanRhoOrigin, meanRhoRing, holePresent: meanRhoOrigin > meanRhoRing };
}
