import fs from "node:fs";
import path from "node:path";
import { checkStems, decodeImage, imageStem, listImageFiles } from "./images.js";
import { loadModel, type PreprocessOptions } from "./models.js";

export interface ExportJob {
  modelRef: string;
  imagesDir: string;
  outPath: string;
  modelId: string;
  inputSize?: number;
  normalize?: "scale" | "center";
}

export interface SkippedImage {
  file: string;
  reason: string;
}

export interface ExportResult {
  outPath: string;
  rows: Array<{ id: string; score: number }>;
  skipped: SkippedImage[];
}

function checkModelId(modelId: string): string {
  if (!/^[^\s,]+$/.test(modelId)) {
    throw new Error(`invalid model id: ${JSON.stringify(modelId)}`);
  }
  return modelId;
}

export function formatPredictionFile(modelId: string, rows: ExportResult["rows"]): string {
  const lines = [`# model: ${modelId}`, "sample_id,score"];
  for (const row of rows) {
    lines.push(`${row.id},${String(row.score)}`);
  }
  return lines.join("\n") + "\n";
}

function atomicWrite(outPath: string, content: string): void {
  fs.mkdirSync(path.dirname(path.resolve(outPath)), { recursive: true });
  const tmp = `${outPath}.${process.pid}.tmp`;
  fs.writeFileSync(tmp, content, "utf-8");
  fs.renameSync(tmp, outPath);
}

/**
 * Run one model over every image of a directory and write a prediction file
 * in the evaluation toolkit's format (one `<stem>,<probability>` row per
 * image, sorted by stem).
 *
 * Undecodable images are skipped with a warning collected in the result;
 * callers running in strict mode turn a non-empty skip list into a nonzero
 * exit so downstream alignment catches the gap. Model errors (missing stub
 * entries, non-probability outputs) are fatal.
 */
export async function exportPredictions(
  job: ExportJob,
  warn: (message: string) => void = (m) => console.warn(m)
): Promise<ExportResult> {
  const modelId = checkModelId(job.modelId);
  const options: PreprocessOptions = {
    inputSize: job.inputSize ?? 224,
    normalize: job.normalize ?? "scale",
  };
  const files = listImageFiles(job.imagesDir);
  if (files.length === 0) {
    throw new Error(`no images (.png/.jpg/.jpeg) found in ${job.imagesDir}`);
  }
  checkStems(files);

  const model = await loadModel(job.modelRef, options);
  const rows: ExportResult["rows"] = [];
  const skipped: SkippedImage[] = [];
  try {
    for (const file of files) {
      const stem = imageStem(file);
      let image;
      try {
        image = decodeImage(file);
      } catch (error) {
        const reason = error instanceof Error ? error.message : String(error);
        skipped.push({ file, reason });
        warn(`warning: skipping unreadable image ${file}: ${reason}`);
        continue;
      }
      rows.push({ id: stem, score: await model.score(stem, image) });
    }
  } finally {
    model.dispose();
  }
  if (rows.length === 0) {
    throw new Error("every image failed to decode; nothing to export");
  }
  rows.sort((a, b) => (a.id < b.id ? -1 : a.id > b.id ? 1 : 0));
  atomicWrite(job.outPath, formatPredictionFile(modelId, rows));
  return { outPath: job.outPath, rows, skipped };
}
