import * as fs from "fs";
import * as os from "os";
import * as path from "path";

import { describe, expect, it } from "vitest";

import { readWeightFile, toWeightFile, writeFixtures, writeWeightFile } from "../src/export";
import { Mlp } from "../src/net";
import { Rng } from "../src/rng";

function tmpDir(): string {
    return fs.mkdtempSync(path.join(os.tmpdir(), "trainer-test-"));
}

describe("weight file export", () => {
    it("round trips every parameter bit exactly", () => {
        const rng = new Rng(13);
        const net = Mlp.init([2, 20, 20, 2], ["tanh", "tanh", "identity"], rng);
        const dir = tmpDir();
        const p = path.join(dir, "g.weights.json");
        writeWeightFile(toWeightFile(net, { note: "roundtrip" }), p);
        const loaded = readWeightFile(p);
        expect(loaded.schema_version).toBe("1");
        expect(loaded.d_z).toBe(2);
        expect(loaded.d_x).toBe(2);
        for (let li = 0; li < net.layers.length; li++) {
            expect(loaded.generator.layers[li].weights).toEqual(net.layers[li].weights);
            expect(loaded.generator.layers[li].bias).toEqual(net.layers[li].bias);
        }
    });

    it("maps the logit head to identity on export", () => {
        const rng = new Rng(13);
        const net = Mlp.init([2, 4, 1], ["tanh", "logit"], rng);
        const file = toWeightFile(net, {});
        expect(file.generator.layers[1].activation).toBe("identity");
    });

    it("fixtures agree with the network forward pass", () => {
        const rng = new Rng(17);
        const net = Mlp.init([2, 20, 20, 2], ["tanh", "tanh", "identity"], rng);
        const dir = tmpDir();
        const p = path.join(dir, "g.fixtures.json");
        writeFixtures(net, 99, p);
        const doc = JSON.parse(fs.readFileSync(p, "utf-8"));
        expect(doc.z.length).toBe(100);
        for (let i = 0; i < 100; i++) {
            const out = net.forwardOne(doc.z[i]);
            for (let j = 0; j < out.length; j++) {
                expect(doc.x[i][j]).toBe(out[j]);
            }
        }
    });
});
