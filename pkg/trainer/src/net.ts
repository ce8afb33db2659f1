/**
 * Minimal dense feed-forward network with hand-rolled backprop.
 * Everything is number[][] (row major); batches are arrays of vectors.
 */
import { Rng } from "./rng";

export type Activation = "tanh" | "identity" | "logit";

export interface Layer {
    /** weights[out][in] */
    weights: number[][];
    bias: number[];
    activation: Activation;
}

export interface ForwardCache {
    /** post-activation per layer, index 0 is the input batch */
    acts: number[][][];
}

export function zeros(n: number): number[] {
    return new Array(n).fill(0);
}

export function zerosLike(layer: Layer): { weights: number[][]; bias: number[] } {
    return {
        weights: layer.weights.map((row) => zeros(row.length)),
        bias: zeros(layer.bias.length),
    };
}

function applyAct(pre: number, act: Activation): number {
    return act === "tanh" ? Math.tanh(pre) : pre;
}

export class Mlp {
    layers: Layer[];

    constructor(layers: Layer[]) {
        this.layers = layers;
    }

    /** Xavier-uniform initialization, matching fan-in/fan-out scaling. */
    static init(sizes: number[], activations: Activation[], rng: Rng): Mlp {
        const layers: Layer[] = [];
        for (let i = 0; i < sizes.length - 1; i++) {
            const fanIn = sizes[i];
            const fanOut = sizes[i + 1];
            const lim = Math.sqrt(6.0 / (fanIn + fanOut));
            const weights: number[][] = [];
            for (let o = 0; o < fanOut; o++) {
                const row: number[] = [];
                for (let k = 0; k < fanIn; k++) row.push(rng.uniform(-lim, lim));
                weights.push(row);
            }
            layers.push({ weights, bias: zeros(fanOut), activation: activations[i] });
        }
        return new Mlp(layers);
    }

    forwardOne(x: number[]): number[] {
        let h = x;
        for (const layer of this.layers) {
            const out = zeros(layer.bias.length);
            for (let o = 0; o < out.length; o++) {
                let pre = layer.bias[o];
                const row = layer.weights[o];
                for (let k = 0; k < row.length; k++) pre += row[k] * h[k];
                out[o] = applyAct(pre, layer.activation);
            }
            h = out;
        }
        return h;
    }

    forward(batch: number[][], keep: false): number[][];
    forward(batch: number[][], keep: true): { out: number[][]; cache: ForwardCache };
    forward(batch: number[][], keep: boolean): number[][] | { out: number[][]; cache: ForwardCache } {
        const acts: number[][][] = [batch];
        let h = batch;
        for (const layer of this.layers) {
            const next: number[][] = [];
            for (const x of h) {
                const out = zeros(layer.bias.length);
                for (let o = 0; o < out.length; o++) {
                    let pre = layer.bias[o];
                    const row = layer.weights[o];
                    for (let k = 0; k < row.length; k++) pre += row[k] * x[k];
                    out[o] = applyAct(pre, layer.activation);
                }
                next.push(out);
            }
            acts.push(next);
            h = next;
        }
        if (!keep) return h;
        return { out: h, cache: { acts } };
    }

    /**
     * Backprop from dLoss/dOutput. Returns per-layer gradients (averaged
     * over the batch) and dLoss/dInput for chaining through a stacked
     * model (GAN generator through discriminator).
     */
    backward(cache: ForwardCache, dOut: number[][]): {
        grads: { weights: number[][]; bias: number[] }[];
        dInput: number[][];
    } {
        const n = dOut.length;
        let d = dOut.map((row) => row.slice());
        const grads: { weights: number[][]; bias: number[] }[] = [];
        for (let li = this.layers.length - 1; li >= 0; li--) {
            const layer = this.layers[li];
            const post = cache.acts[li + 1];
            const inp = cache.acts[li];
            if (layer.activation === "tanh") {
                for (let s = 0; s < n; s++) {
                    for (let o = 0; o < d[s].length; o++) {
                        d[s][o] *= 1.0 - post[s][o] * post[s][o];
                    }
                }
            }
            const g = zerosLike(layer);
            for (let s = 0; s < n; s++) {
                for (let o = 0; o < layer.bias.length; o++) {
                    const ds = d[s][o] / n;
                    g.bias[o] += ds;
                    const row = g.weights[o];
                    const x = inp[s];
                    for (let k = 0; k < row.length; k++) row[k] += ds * x[k];
                }
            }
            grads.push(g);
            const dPrev: number[][] = [];
            for (let s = 0; s < n; s++) {
                const dp = zeros(layer.weights[0].length);
                for (let o = 0; o < layer.bias.length; o++) {
                    const w = layer.weights[o];
                    const ds = d[s][o];
                    for (let k = 0; k < dp.length; k++) dp[k] += ds * w[k];
                }
                dPrev.push(dp);
            }
            d = dPrev;
        }
        grads.reverse();
        return { grads, dInput: d };
    }

    /** Exact Jacobian d output / d input at a single point (chain rule). */
    jacobianOne(x: number[]): number[][] {
        const dIn = x.length;
        let h = x;
        let M: number[][] = [];
        for (let i = 0; i < dIn; i++) {
            M.push(zeros(dIn).map((_, j) => (i === j ? 1 : 0)));
        }
        for (const layer of this.layers) {
            const dOut = layer.bias.length;
            const out = zeros(dOut);
            const Mnext: number[][] = [];
            for (let o = 0; o < dOut; o++) {
                let pre = layer.bias[o];
                const row = layer.weights[o];
                for (let k = 0; k < row.length; k++) pre += row[k] * h[k];
                const post = applyAct(pre, layer.activation);
                out[o] = post;
                const deriv = layer.activation === "tanh" ? 1.0 - post * post : 1.0;
                const mrow = zeros(dIn);
                for (let k = 0; k < row.length; k++) {
                    const w = row[k];
                    for (let j = 0; j < dIn; j++) mrow[j] += w * M[k][j];
                }
                for (let j = 0; j < dIn; j++) mrow[j] *= deriv;
                Mnext.push(mrow);
            }
            h = out;
            M = Mnext;
        }
        return M;
    }
}

export function sigmoid(x: number): number {
    return 1.0 / (1.0 + Math.exp(-x));
}
