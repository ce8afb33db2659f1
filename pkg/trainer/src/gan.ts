import { Adam } from "./adam";
import { Mlp, sigmoid } from "./net";
import { Rng } from "./rng";

export class TrainingDiverged extends Error {
    constructor(message: string, public seed: number, public step: number) {
        super(message);
    }
}

export interface GanResult {
    generator: Mlp;
    discriminator: Mlp;
    steps: number;
    finalLossD: number;
    finalLossG: number;
}

export interface GanOptions {
    steps?: number;
    batch?: number;
    lr?: number;
    latentDim?: number;
}

/**
 * Vanilla GAN with the non-saturating generator loss.
 * Generator 2-20-20-2 (tanh hidden, identity output, the smoothness
 * requirement of the geodesic machinery); discriminator 2-32-32-1.
 */
export function trainGan(
    data: number[][],
    seed: number,
    opts: GanOptions = {},
): GanResult {
    const steps = opts.steps ?? 6000;
    const batch = opts.batch ?? 64;
    const lr = opts.lr ?? 1e-3;
    const dZ = opts.latentDim ?? 2;
    const dX = data[0].length;

    const rng = new Rng(seed);
    const G = Mlp.init([dZ, 20, 20, dX], ["tanh", "tanh", "identity"], rng);
    const D = Mlp.init([dX, 32, 32, 1], ["tanh", "tanh", "logit"], rng);
    const optG = new Adam(G.layers, lr);
    const optD = new Adam(D.layers, lr);

    const sampleZ = () => {
        const z: number[][] = [];
        for (let i = 0; i < batch; i++) {
            const row: number[] = [];
            for (let j = 0; j < dZ; j++) row.push(rng.gauss());
            z.push(row);
        }
        return z;
    };

    let lossD = NaN;
    let lossG = NaN;
    for (let step = 0; step < steps; step++) {
        // discriminator: -log sig(D(real)) - log(1 - sig(D(fake)))
        const real: number[][] = [];
        for (let i = 0; i < batch; i++) real.push(data[rng.int(data.length)]);
        const fake = G.forward(sampleZ(), false);

        const fr = D.forward(real, true);
        const ff = D.forward(fake, true);
        lossD = 0;
        const dReal = fr.out.map((row) => {
            const s = sigmoid(row[0]);
            lossD += -Math.log(Math.max(s, 1e-12));
            return [s - 1.0];
        });
        const dFake = ff.out.map((row) => {
            const s = sigmoid(row[0]);
            lossD += -Math.log(Math.max(1 - s, 1e-12));
            return [s];
        });
        lossD /= 2 * batch;
        const gr = D.backward(fr.cache, dReal).grads;
        const gf = D.backward(ff.cache, dFake).grads;
        optD.step(gr.map((g, i) => ({
            weights: g.weights.map((row, o) => row.map((v, k) => v + gf[i].weights[o][k])),
            bias: g.bias.map((v, o) => v + gf[i].bias[o]),
        })));

        // generator: non-saturating -log sig(D(G(z)))
        const z = sampleZ();
        const gFwd = G.forward(z, true);
        const dFwd = D.forward(gFwd.out, true);
        lossG = 0;
        const dOut = dFwd.out.map((row) => {
            const s = sigmoid(row[0]);
            lossG += -Math.log(Math.max(s, 1e-12));
            return [s - 1.0];
        });
        lossG /= batch;
        const { dInput } = D.backward(dFwd.cache, dOut);
        const gG = G.backward(gFwd.cache, dInput).grads;
        optG.step(gG);

        if (!Number.isFinite(lossD) || !Number.isFinite(lossG)) {
            throw new TrainingDiverged(
                `loss became non-finite (D=${lossD}, G=${lossG})`, seed, step,
            );
        }
    }
    return { generator: G, discriminator: D, steps, finalLossD: lossD, finalLossG: lossG };
}
