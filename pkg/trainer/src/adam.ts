import { Layer, zerosLike } from "./net";

/** Adam with beta1 = 0.5, the usual GAN setting. */
export class Adam {
    private m: { weights: number[][]; bias: number[] }[];
    private v: { weights: number[][]; bias: number[] }[];
    private t = 0;

    constructor(
        private layers: Layer[],
        private lr: number,
        private b1 = 0.5,
        private b2 = 0.999,
        private eps = 1e-8,
    ) {
        this.m = layers.map(zerosLike);
        this.v = layers.map(zerosLike);
    }

    step(grads: { weights: number[][]; bias: number[] }[]): void {
        this.t += 1;
        const c1 = 1.0 - Math.pow(this.b1, this.t);
        const c2 = 1.0 - Math.pow(this.b2, this.t);
        for (let i = 0; i < this.layers.length; i++) {
            const layer = this.layers[i];
            for (let o = 0; o < layer.bias.length; o++) {
                const wRow = layer.weights[o];
                const gRow = grads[i].weights[o];
                const mRow = this.m[i].weights[o];
                const vRow = this.v[i].weights[o];
                for (let k = 0; k < wRow.length; k++) {
                    mRow[k] = this.b1 * mRow[k] + (1 - this.b1) * gRow[k];
                    vRow[k] = this.b2 * vRow[k] + (1 - this.b2) * gRow[k] * gRow[k];
                    wRow[k] -= (this.lr * (mRow[k] / c1)) / (Math.sqrt(vRow[k] / c2) + this.eps);
                }
                const gb = grads[i].bias[o];
                this.m[i].bias[o] = this.b1 * this.m[i].bias[o] + (1 - this.b1) * gb;
                this.v[i].bias[o] = this.b2 * this.v[i].bias[o] + (1 - this.b2) * gb * gb;
                layer.bias[o] -=
                    (this.lr * (this.m[i].bias[o] / c1)) /
                    (Math.sqrt(this.v[i].bias[o] / c2) + this.eps);
            }
        }
    }
}
