import fs from "node:fs";
import os from "node:os";
import path from "node:path";
import { PNG } from "pngjs";
import jpeg from "jpeg-js";

export function makeTempDir(prefix: string): string {
  return fs.mkdtempSync(path.join(os.tmpdir(), prefix));
}

export function writePng(
  file: string,
  width: number,
  height: number,
  rgb: [number, number, number]
): void {
  const png = new PNG({ width, height });
  for (let i = 0; i < width * height; i++) {
    png.data[i * 4] = rgb[0];
    png.data[i * 4 + 1] = rgb[1];
    png.data[i * 4 + 2] = rgb[2];
    png.data[i * 4 + 3] = 255;
  }
  fs.writeFileSync(file, PNG.sync.write(png));
}

export function writeJpeg(
  file: string,
  width: number,
  height: number,
  rgb: [number, number, number]
): void {
  const data = Buffer.alloc(width * height * 4);
  for (let i = 0; i < width * height; i++) {
    data[i * 4] = rgb[0];
    data[i * 4 + 1] = rgb[1];
    data[i * 4 + 2] = rgb[2];
    data[i * 4 + 3] = 255;
  }
  fs.writeFileSync(file, jpeg.encode({ data, width, height }, 95).data);
}

export function writeStubModel(file: string, scores: Record<string, number>): void {
  fs.writeFileSync(file, JSON.stringify({ kind: "stub", scores }));
}

export function writeConstantModel(file: string, value: number): void {
  fs.writeFileSync(file, JSON.stringify({ kind: "constant", value }));
}
