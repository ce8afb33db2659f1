import { Adam } from "./adam";
import { Mlp } from "./net";
import { Rng } from "./rng";
import { TrainingDiverged } from "./gan";

export interface VaeResult {
    decoder: Mlp;
    encoder: Mlp;
    steps: number;
    finalElbo: number;
}

/**
 * Small VAE: encoder 2-20-20-(2 mean + 2 logvar), decoder 2-20-20-2
 * with a fixed-variance gaussian likelihood. Only the decoder matters
 * downstream; it plays the same smooth-generator role as the GAN's G.
 */
export function trainVae(
    data: number[][],
    seed: number,
    opts: { steps?: number; batch?: number; lr?: number } = {},
): VaeResult {
    const steps = opts.steps ?? 4000;
    const batch = opts.batch ?? 64;
    const lr = opts.lr ?? 1e-3;
    const dX = data[0].length;
    const dZ = 2;
    const sigma2 = 0.05; // observation variance

    const rng = new Rng(seed);
    const enc = Mlp.init([dX, 20, 20, 2 * dZ], ["tanh", "tanh", "identity"], rng);
    const dec = Mlp.init([dZ, 20, 20, dX], ["tanh", "tanh", "identity"], rng);
    const optE = new Adam(enc.layers, lr);
    const optD = new Adam(dec.layers, lr);

    let elbo = NaN;
    for (let step = 0; step < steps; step++) {
        const xs: number[][] = [];
        for (let i = 0; i < batch; i++) xs.push(data[rng.int(data.length)]);
        const eFwd = enc.forward(xs, true);
        const eps: number[][] = [];
        const zs: number[][] = [];
        for (let s = 0; s < batch; s++) {
            const e: number[] = [];
            const z: number[] = [];
            for (let j = 0; j < dZ; j++) {
                const mean = eFwd.out[s][j];
                const logvar = eFwd.out[s][dZ + j];
                const n = rng.gauss();
                e.push(n);
                z.push(mean + Math.exp(0.5 * logvar) * n);
            }
            eps.push(e);
            zs.push(z);
        }
        const dFwd = dec.forward(zs, true);

        // negative ELBO pieces: reconstruction + KL(q || N(0, I))
        elbo = 0;
        const dRecon: number[][] = [];
        for (let s = 0; s < batch; s++) {
            const dr: number[] = [];
            for (let j = 0; j < dX; j++) {
                const diff = dFwd.out[s][j] - xs[s][j];
                elbo -= (diff * diff) / (2 * sigma2);
                dr.push(diff / sigma2);
            }
            dRecon.push(dr);
        }
        const { grads: gDec, dInput: dZs } = dec.backward(dFwd.cache, dRecon);

        const dEnc: number[][] = [];
        for (let s = 0; s < batch; s++) {
            const row: number[] = [];
            for (let j = 0; j < dZ; j++) {
                const mean = eFwd.out[s][j];
                const logvar = eFwd.out[s][dZ + j];
                elbo -= 0.5 * (Math.exp(logvar) + mean * mean - 1.0 - logvar);
                // dKL/dmean = mean; from recon: dz/dmean = 1
                row.push(dZs[s][j] + mean);
            }
            for (let j = 0; j < dZ; j++) {
                const logvar = eFwd.out[s][dZ + j];
                const dzdlv = 0.5 * Math.exp(0.5 * logvar) * eps[s][j];
                row.push(dZs[s][j] * dzdlv + 0.5 * (Math.exp(logvar) - 1.0));
            }
            dEnc.push(row);
        }
        const gEnc = enc.backward(eFwd.cache, dEnc).grads;
        // dRecon and dEnc hold d(loss)/d(...), loss = -ELBO, so Adam
        // steps on them directly
        optD.step(gDec);
        optE.step(gEnc);
        elbo /= batch;
        if (!Number.isFinite(elbo)) {
            throw new TrainingDiverged(`ELBO became non-finite`, seed, step);
        }
    }
    return { decoder: dec, encoder: enc, steps, finalElbo: elbo };
}
