/** Orchestration: read the parallel corpus, encode both sides with the
 *  shared backend (sentences encoded independently), and write the binary
 *  record file plus subword-map sidecars and the skip list. */

import { promises as fs } from 'node:fs';

import { EmbeddingRecord, serializeRecords } from './recordfile.js';
import { formatSkipList, formatSubwordMaps } from './sidecar.js';
import { BridgeConfig, BridgeError, EncoderBackend, SentenceEncoding, validateConfig } from './types.js';

export interface ExportPaths {
  src: string;
  tgt: string;
  out: string;
}

export interface ExportResult {
  records: number;
  skipped: number[];
  outPath: string;
  srcMapPath: string;
  tgtMapPath: string;
  skipPath: string;
}

export async function readCorpusSide(path: string): Promise<string[][]> {
  const text = await fs.readFile(path, 'utf-8');
  const lines = text.split('\n');
  if (lines.length && lines[lines.length - 1] === '') lines.pop();
  return lines.map((line, k) => {
    const words = line.split(/\s+/).filter(Boolean);
    if (words.length === 0) {
      throw new BridgeError(`empty line ${k + 1} in ${path}`);
    }
    return words;
  });
}

async function encodeAll(
  backend: EncoderBackend,
  sentences: string[][],
  layer: number,
  batchSize: number,
): Promise<SentenceEncoding[]> {
  const out: SentenceEncoding[] = [];
  for (let start = 0; start < sentences.length; start += batchSize) {
    const batch = sentences.slice(start, start + batchSize);
    out.push(...(await backend.encodeBatch(batch, layer)));
  }
  return out;
}

export async function exportEmbeddings(
  paths: ExportPaths,
  cfg: BridgeConfig,
  backend: EncoderBackend,
): Promise<ExportResult> {
  validateConfig(cfg, backend.depth());
  const srcSentences = await readCorpusSide(paths.src);
  const tgtSentences = await readCorpusSide(paths.tgt);
  if (srcSentences.length !== tgtSentences.length) {
    throw new BridgeError(
      `line count mismatch: ${paths.src} has ${srcSentences.length}, ` +
        `${paths.tgt} has ${tgtSentences.length}`,
    );
  }

  const src = await encodeAll(backend, srcSentences, cfg.layer, cfg.batchSize);
  const tgt = await encodeAll(backend, tgtSentences, cfg.layer, cfg.batchSize);

  const dim = backend.hiddenSize();
  const records: EmbeddingRecord[] = [];
  const srcMaps: number[][] = [];
  const tgtMaps: number[][] = [];
  const skipped: number[] = [];
  for (let k = 0; k < src.length; k++) {
    if (
      src[k].lengthWithSpecials > cfg.maxLength ||
      tgt[k].lengthWithSpecials > cfg.maxLength
    ) {
      skipped.push(k);
      continue;
    }
    records.push({
      src: src[k].rows,
      srcCount: src[k].subwordCount,
      tgt: tgt[k].rows,
      tgtCount: tgt[k].subwordCount,
    });
    srcMaps.push(src[k].wordOfSubword);
    tgtMaps.push(tgt[k].wordOfSubword);
  }

  const result: ExportResult = {
    records: records.length,
    skipped,
    outPath: paths.out,
    srcMapPath: `${paths.out}.src.map`,
    tgtMapPath: `${paths.out}.tgt.map`,
    skipPath: `${paths.out}.skip`,
  };
  await fs.writeFile(result.outPath, serializeRecords(dim, records));
  await fs.writeFile(result.srcMapPath, formatSubwordMaps(srcMaps), 'utf-8');
  await fs.writeFile(result.tgtMapPath, formatSubwordMaps(tgtMaps), 'utf-8');
  await fs.writeFile(result.skipPath, formatSkipList(skipped), 'utf-8');
  if (skipped.length > 0) {
    console.error(
      `skipped ${skipped.length} pair(s) over ${cfg.maxLength} subwords: ${skipped.join(', ')}`,
    );
  }
  return result;
}
