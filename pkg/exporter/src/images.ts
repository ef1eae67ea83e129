import fs from "node:fs";
import path from "node:path";
import { PNG } from "pngjs";
import jpeg from "jpeg-js";

export interface DecodedImage {
  width: number;
  height: number;
  /** RGB bytes, row-major, alpha stripped. */
  data: Uint8Array;
}

const IMAGE_EXTENSIONS = new Set([".png", ".jpg", ".jpeg"]);

/** Image files of a directory, sorted by name for deterministic output. */
export function listImageFiles(dir: string): string[] {
  const entries = fs.readdirSync(dir, { withFileTypes: true });
  return entries
    .filter((e) => e.isFile() && IMAGE_EXTENSIONS.has(path.extname(e.name).toLowerCase()))
    .map((e) => path.join(dir, e.name))
    .sort();
}

/** Sample id for an image file: its stem (file name without extension). */
export function imageStem(file: string): string {
  return path.basename(file, path.extname(file));
}

export function checkStems(files: string[]): void {
  const seen = new Map<string, string>();
  for (const file of files) {
    const stem = imageStem(file);
    if (!/^[^\s,]+$/.test(stem)) {
      throw new Error(`image stem is not a valid sample id: ${JSON.stringify(stem)}`);
    }
    const previous = seen.get(stem);
    if (previous !== undefined) {
      throw new Error(`non-unique image stems: ${previous} and ${file} both map to '${stem}'`);
    }
    seen.set(stem, file);
  }
}

function stripAlpha(rgba: Uint8Array, pixels: number): Uint8Array {
  const rgb = new Uint8Array(pixels * 3);
  for (let i = 0; i < pixels; i++) {
    rgb[i * 3] = rgba[i * 4];
    rgb[i * 3 + 1] = rgba[i * 4 + 1];
    rgb[i * 3 + 2] = rgba[i * 4 + 2];
  }
  return rgb;
}

export function decodeImage(file: string): DecodedImage {
  const buffer = fs.readFileSync(file);
  const ext = path.extname(file).toLowerCase();
  if (ext === ".png") {
    const png = PNG.sync.read(buffer);
    return {
      width: png.width,
      height: png.height,
      data: stripAlpha(new Uint8Array(png.data), png.width * png.height),
    };
  }
  const image = jpeg.decode(buffer, { useTArray: true, formatAsRGBA: true });
  return {
    width: image.width,
    height: image.height,
    data: stripAlpha(image.data, image.width * image.height),
  };
}
