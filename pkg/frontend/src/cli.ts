#!/usr/bin/env node
/** Command line: export per-layer hidden states for a parallel corpus.
 *
 *   embalign-bridge export --model ID --layer I --src F --tgt F --out F
 *                          [--backend transformers|test]
 *                          [--max-len N] [--batch-size N]
 *
 * Exit codes: 0 success, 2 validation/usage error, 1 runtime error.
 */

import { TestBackend } from './backends/test.js';
import { TransformersBackend } from './backends/transformers.js';
import { exportEmbeddings } from './export.js';
import { BridgeError, DEFAULT_BATCH_SIZE, DEFAULT_MAX_LENGTH, EncoderBackend } from './types.js';

const USAGE = `usage: embalign-bridge export --model ID --layer I --src FILE --tgt FILE --out FILE
                       [--backend transformers|test] [--max-len N] [--batch-size N]

Writes FILE (binary embedding records), FILE.src.map / FILE.tgt.map
(word index per subword row, one line per retained pair) and FILE.skip
(indices of pairs skipped for exceeding --max-len).`;

interface Args {
  model: string;
  layer: number;
  src: string;
  tgt: string;
  out: string;
  backend: string;
  maxLen: number;
  batchSize: number;
}

function parseArgs(argv: string[]): Args {
  if (argv[0] !== 'export') {
    throw new BridgeError(`unknown command ${JSON.stringify(argv[0])}\n${USAGE}`);
  }
  const values: Record<string, string> = {};
  for (let k = 1; k < argv.length; k += 2) {
    const flag = argv[k];
    if (!flag.startsWith('--') || k + 1 >= argv.length) {
      throw new BridgeError(`malformed arguments near ${flag}\n${USAGE}`);
    }
    values[flag.slice(2)] = argv[k + 1];
  }
  const required = ['model', 'layer', 'src', 'tgt', 'out'];
  for (const name of required) {
    if (!(name in values)) {
      throw new BridgeError(`missing --${name}\n${USAGE}`);
    }
  }
  const integer = (name: string, fallback: number): number => {
    if (!(name in values)) return fallback;
    const parsed = Number(values[name]);
    if (!Number.isInteger(parsed)) {
      throw new BridgeError(`--${name} must be an integer, got ${values[name]}`);
    }
    return parsed;
  };
  const backend = values.backend ?? 'transformers';
  if (backend !== 'transformers' && backend !== 'test') {
    throw new BridgeError(`--backend must be 'transformers' or 'test', got ${backend}`);
  }
  return {
    model: values.model,
    layer: integer('layer', NaN),
    src: values.src,
    tgt: values.tgt,
    out: values.out,
    backend,
    maxLen: integer('max-len', DEFAULT_MAX_LENGTH),
    batchSize: integer('batch-size', DEFAULT_BATCH_SIZE),
  };
}

export async function main(argv: string[]): Promise<number> {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    return 2;
  }
  try {
    let backend: EncoderBackend;
    if (args.backend === 'test') {
      backend = new TestBackend();
    } else {
      const real = new TransformersBackend(args.model);
      await real.init();
      backend = real;
    }
    const result = await exportEmbeddings(
      { src: args.src, tgt: args.tgt, out: args.out },
      { model: args.model, layer: args.layer, maxLength: args.maxLen, batchSize: args.batchSize },
      backend,
    );
    console.error(
      `wrote ${result.records} record(s) to ${result.outPath} ` +
        `(+ ${result.srcMapPath}, ${result.tgtMapPath}, ${result.skipPath})`,
    );
    return 0;
  } catch (err) {
    if (err instanceof BridgeError) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    console.error(`error: ${err instanceof Error ? err.message : String(err)}`);
    return 1;
  }
}

const entry = process.argv[1];
if (entry && (entry.endsWith('cli.js') || entry.endsWith('embalign-bridge'))) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
