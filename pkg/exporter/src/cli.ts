#!/usr/bin/env node
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { exportPredictions } from "./export.js";

async function main(): Promise<void> {
  await yargs(hideBin(process.argv))
    .command(
      "export",
      "Run a model over an image directory and write a prediction file",
      (args) =>
        args
          .option("model", {
            type: "string",
            demandOption: true,
            describe: "tfjs model.json path, or a stub/constant JSON",
          })
          .option("images", {
            type: "string",
            demandOption: true,
            describe: "directory of .png/.jpg/.jpeg images (stems become sample ids)",
          })
          .option("model-id", {
            type: "string",
            demandOption: true,
            describe: "model id written into the '# model:' comment",
          })
          .option("out", {
            type: "string",
            demandOption: true,
            describe: "output prediction file path",
          })
          .option("input-size", {
            type: "number",
            default: 224,
            describe: "inference input side length (tfjs models only)",
          })
          .option("normalize", {
            choices: ["scale", "center"] as const,
            default: "scale" as const,
            describe: "scale: bytes to [0,1]; center: bytes to [-1,1]",
          })
          .option("strict", {
            type: "boolean",
            default: true,
            describe: "exit nonzero when any image was skipped",
          }),
      async (argv) => {
        const result = await exportPredictions({
          modelRef: argv.model,
          imagesDir: argv.images,
          outPath: argv.out,
          modelId: argv["model-id"],
          inputSize: argv["input-size"],
          normalize: argv.normalize,
        });
        console.log(`wrote ${result.outPath} (${result.rows.length} rows)`);
        if (result.skipped.length > 0) {
          console.error(`${result.skipped.length} image(s) skipped`);
          if (argv.strict) {
            process.exitCode = 1;
          }
        }
      }
    )
    .demandCommand(1)
    .strict()
    .fail((message, error) => {
      console.error(`error: ${error?.message ?? message}`);
      process.exit(2);
    })
    .parseAsync();
}

main().catch((error: unknown) => {
  console.error(`error: ${error instanceof Error ? error.message : String(error)}`);
  process.exitCode = 1;
});
