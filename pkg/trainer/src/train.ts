/**
 * Training entry point.
 *
 *   node dist/train.js --dataset ring2d --model gan_2_20_20_2 \
 *       --steps 6000 --seed 2024 --out out/
 *
 * Writes <out>/<model>.weights.json (schema_version "1"),
 * <out>/<model>.fixtures.json (100 forward pairs) and
 * <out>/<model>.log.json (final losses, hole check, full job record).
 */
import * as fs from "fs";
import * as path from "path";

import { checkDensityHole } from "./densitycheck";
import { InvalidParams, loadMnistSubset, makeRing2d } from "./datasets";
import { toWeightFile, writeFixtures, writeWeightFile } from "./export";
import { trainGan } from "./gan";
import { trainVae } from "./vae";

interface TrainJob {
    dataset: "ring2d" | "mnist_subset";
    model: "gan_2_20_20_2" | "vae_small";
    steps: number;
    seed: number;
    out: string;
    mnistPath?: string;
}

function parseArgs(argv: string[]): TrainJob {
    const job: TrainJob = {
        dataset: "ring2d",
        model: "gan_2_20_20_2",
        steps: 6000,
        seed: 2024,
        out: "out",
    };
    for (let i = 0; i < argv.length; i++) {
        const key = argv[i];
        const val = argv[i + 1];
        switch (key) {
            case "--dataset":
                if (val !== "ring2d" && val !== "mnist_subset") {
                    throw new InvalidParams(`unknown dataset ${val}`);
                }
                job.dataset = val; i++; break;
            case "--model":
                if (val !== "gan_2_20_20_2" && val !== "vae_small") {
                    throw new InvalidParams(`unknown model ${val}`);
                }
                job.model = val; i++; break;
            case "--steps":
            case "--epochs":
                job.steps = parseInt(val, 10); i++; break;
            case "--seed":
                job.seed = parseInt(val, 10); i++; break;
            case "--out":
                job.out = val; i++; break;
            case "--mnist-path":
                job.mnistPath = val; i++; break;
            default:
                throw new InvalidParams(`unknown flag ${key}`);
        }
    }
    return job;
}

export function runJob(job: TrainJob): void {
    const data =
        job.dataset === "ring2d"
            ? makeRing2d(2048, 1.5, 0.1, job.seed)
            : loadMnistSubset(job.mnistPath ?? "mnist_subset.json", 2048);

    const base = path.join(job.out, job.model);
    const common = {
        dataset: job.dataset,
        seed: job.seed,
        steps: job.steps,
        activations: "tanh hidden, identity output",
        trainer: "geodint-trainer 0.1.0",
    };

    if (job.model === "gan_2_20_20_2") {
        const result = trainGan(data, job.seed, { steps: job.steps });
        const hole = checkDensityHole(result.generator, job.seed + 1);
        writeWeightFile(
            toWeightFile(result.generator, { ...common, model: "gan_2_20_20_2" }),
            `${base}.weights.json`,
        );
        writeFixtures(result.generator, job.seed + 2, `${base}.fixtures.json`);
        fs.writeFileSync(
            `${base}.log.json`,
            JSON.stringify(
                { job: { ...job }, finalLossD: result.finalLossD,
                  finalLossG: result.finalLossG, holeCheck: hole }, null, 2) + "\n",
        );
        console.log(
            `gan: D=${result.finalLossD.toFixed(4)} G=${result.finalLossG.toFixed(4)} ` +
            `hole rho(origin)=${hole.meanRhoOrigin.toFixed(3)} ` +
            `rho(|z|=1)=${hole.meanRhoRing.toFixed(3)} present=${hole.holePresent}`,
        );
        if (!hole.holePresent) {
            console.error("warning: density hole not reproduced; try another seed");
            process.exitCode = 1;
        }
    } else {
        const result = trainVae(data, job.seed, { steps: job.steps });
        writeWeightFile(
            toWeightFile(result.decoder, { ...common, model: "vae_small" }),
            `${base}.weights.json`,
        );
        writeFixtures(result.decoder, job.seed + 2, `${base}.fixtures.json`);
        fs.writeFileSync(
            `${base}.log.json`,
            JSON.stringify({ job: { ...job }, finalElbo: result.finalElbo }, null, 2) + "\n",
        );
        console.log(`vae: ELBO=${result.finalElbo.toFixed(4)}`);
    }
}

if (require.main === module) {
    runJob(parseArgs(process.argv.slice(2)));
}
