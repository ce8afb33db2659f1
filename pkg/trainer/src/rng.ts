/**
 * Deterministic PRNG so every training run is exactly reproducible from
 * its seed. mulberry32 for uniforms, Box-Muller for gaussians.
 */
export class Rng {
    private state: number;
    private spare: number | null = null;

    constructor(seed: number) {
        this.state = seed >>> 0;
    }

    /** Uniform in [0, 1). */
    next(): number {
        this.state = (this.state + 0x6d2b79f5) >>> 0;
        let t = this.state;
        t = Math.imul(t ^ (t >>> 15), t | 1);
        t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
        return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
    }

    uniform(lo: number, hi: number): number {
        return lo + (hi - lo) * this.next();
    }

    /** Standard normal via Box-Muller, with the spare cached. */
    gauss(): number {
        if (this.spare !== null) {
            const v = this.spare;
            this.spare = null;
            return v;
        }
        let u1 = this.next();
        while (u1 <= 1e-12) u1 = this.next();
        const u2 = this.next();
        const r = Math.sqrt(-2.0 * Math.log(u1));
        this.spare = r * Math.sin(2.0 * Math.PI * u2);
        return r * Math.cos(2.0 * Math.PI * u2);
    }

    int(n: number): number {
        return Math.floor(this.next() * n);
    }
}
