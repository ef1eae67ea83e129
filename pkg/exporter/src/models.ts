import fs from "node:fs";
import path from "node:path";
import * as tf from "@tensorflow/tfjs";
import type { DecodedImage } from "./images.js";

export interface PreprocessOptions {
  /** Side length images are resized to before inference. */
  inputSize: number;
  /** "scale" maps bytes to [0,1]; "center" maps to [-1,1]. */
  normalize: "scale" | "center";
}

export interface ScoringModel {
  readonly kind: string;
  /** Probability of class 1 for one image. */
  score(stem: string, image: DecodedImage): Promise<number>;
  dispose(): void;
}

function checkProbability(value: number, context: string): number {
  if (!Number.isFinite(value) || value < 0 || value > 1) {
    throw new Error(`${context} produced a score outside [0, 1]: ${value}`);
  }
  return value;
}

class StubModel implements ScoringModel {
  readonly kind = "stub";

  constructor(private readonly scores: Record<string, number>) {}

  async score(stem: string): Promise<number> {
    const value = this.scores[stem];
    if (value === undefined) {
      throw new Error(`stub model has no score for sample '${stem}'`);
    }
    return checkProbability(value, `stub model (sample '${stem}')`);
  }

  dispose(): void {}
}

class ConstantModel implements ScoringModel {
  readonly kind = "constant";

  constructor(private readonly value: number) {
    checkProbability(value, "constant model");
  }

  async score(): Promise<number> {
    return this.value;
  }

  dispose(): void {}
}

/** tf.io handler that loads model.json plus its weight shards from disk. */
function fileLoadHandler(modelJsonPath: string): tf.io.IOHandler {
  return {
    load: async () => {
      const dir = path.dirname(modelJsonPath);
      const manifest = JSON.parse(fs.readFileSync(modelJsonPath, "utf-8"));
      const weightSpecs: tf.io.WeightsManifestEntry[] = [];
      const buffers: Buffer[] = [];
      for (const group of manifest.weightsManifest ?? []) {
        weightSpecs.push(...group.weights);
        for (const shard of group.paths) {
          buffers.push(fs.readFileSync(path.join(dir, shard)));
        }
      }
      const weightData = Buffer.concat(buffers);
      return {
        modelTopology: manifest.modelTopology,
        format: manifest.format,
        generatedBy: manifest.generatedBy,
        convertedBy: manifest.convertedBy,
        weightSpecs,
        weightData: weightData.buffer.slice(
          weightData.byteOffset,
          weightData.byteOffset + weightData.byteLength
        ),
      };
    },
  };
}

class TfjsModel implements ScoringModel {
  readonly kind = "tfjs";

  constructor(
    private readonly model: tf.LayersModel | tf.GraphModel,
    private readonly options: PreprocessOptions
  ) {}

  async score(stem: string, image: DecodedImage): Promise<number> {
    const { inputSize, normalize } = this.options;
    const input = tf.tidy(() => {
      let t = tf
        .tensor3d(image.data, [image.height, image.width, 3], "float32");
      t = normalize === "center" ? t.div(127.5).sub(1.0) : t.div(255.0);
      const resized = tf.image.resizeBilinear(t as tf.Tensor3D, [inputSize, inputSize]);
      return resized.expandDims(0);
    });
    try {
      const output = this.model.predict(input) as tf.Tensor;
      const values = await output.data();
      output.dispose();
      if (values.length === 1) {
        return checkProbability(
          values[0],
          `model output for '${stem}' (expected a sigmoid probability head)`
        );
      }
      if (values.length === 2) {
        // two-logit head: softmax and take the class-1 probability
        const [a, b] = [values[0], values[1]];
        const max = Math.max(a, b);
        const ea = Math.exp(a - max);
        const eb = Math.exp(b - max);
        return eb / (ea + eb);
      }
      throw new Error(
        `model output for '${stem}' has ${values.length} values; expected 1 or 2`
      );
    } finally {
      input.dispose();
    }
  }

  dispose(): void {
    this.model.dispose();
  }
}

/**
 * Load a scoring model from a reference:
 *  - a JSON file with {"kind": "stub", "scores": {...}} or
 *    {"kind": "constant", "value": x} (test/debug models), or
 *  - a tfjs model.json (layers or graph format) with weight shards
 *    alongside it.
 */
export async function loadModel(
  ref: string,
  options: PreprocessOptions
): Promise<ScoringModel> {
  if (!fs.existsSync(ref)) {
    throw new Error(`model reference not found: ${ref}`);
  }
  const parsed = JSON.parse(fs.readFileSync(ref, "utf-8"));
  if (parsed.kind === "stub") {
    if (typeof parsed.scores !== "object" || parsed.scores === null) {
      throw new Error(`stub model ${ref} must carry a 'scores' object`);
    }
    return new StubModel(parsed.scores);
  }
  if (parsed.kind === "constant") {
    if (typeof parsed.value !== "number") {
      throw new Error(`constant model ${ref} must carry a numeric 'value'`);
    }
    return new ConstantModel(parsed.value);
  }
  if (parsed.modelTopology !== undefined) {
    const handler = fileLoadHandler(ref);
    const model =
      parsed.format === "graph-model"
        ? await tf.loadGraphModel(handler)
        : await tf.loadLayersModel(handler);
    return new TfjsModel(model, options);
  }
  throw new Error(
    `unrecognized model reference ${ref}: expected a stub/constant JSON or a tfjs model.json`
  );
}
