/** Shared contracts for the embedding-export bridge. */

export interface BridgeConfig {
  /** Model identifier (hub id or local path), or a backend-specific name. */
  model: string;
  /** Hidden-state layer to export; 0 is the embedding layer output. */
  layer: number;
  /** Sentence pairs whose either side exceeds this subword count
   *  (special markers included) are skipped and logged. */
  maxLength: number;
  /** Sentences encoded per backend call. */
  batchSize: number;
}

export const DEFAULT_MAX_LENGTH = 128;
export const DEFAULT_BATCH_SIZE = 8;

/** One encoded sentence: per-subword hidden rows of the requested layer,
 *  special markers already dropped, plus the originating word index of
 *  every retained subword. */
export interface SentenceEncoding {
  /** Row-major (subwordCount x hiddenSize) hidden states. */
  rows: Float32Array;
  subwordCount: number;
  /** Word index per retained subword; same length as subwordCount. */
  wordOfSubword: number[];
  /** Total subword count including special markers, for length checks. */
  lengthWithSpecials: number;
}

export interface EncoderBackend {
  /** Number of transformer layers; valid layer indices are 0..depth. */
  depth(): number;
  hiddenSize(): number;
  /** Encode whitespace-tokenized sentences; deterministic in eval mode. */
  encodeBatch(sentences: string[][], layer: number): Promise<SentenceEncoding[]>;
}

export class BridgeError extends Error {}

export function validateConfig(cfg: BridgeConfig, backendDepth: number): void {
  if (!Number.isInteger(cfg.layer) || cfg.layer < 0 || cfg.layer > backendDepth) {
    throw new BridgeError(
      `layer ${cfg.layer} outside the model's depth (valid: 0..${backendDepth})`,
    );
  }
  if (!Number.isInteger(cfg.maxLength) || cfg.maxLength < 1) {
    throw new BridgeError(`maxLength must be a positive integer, got ${cfg.maxLength}`);
  }
  if (!Number.isInteger(cfg.batchSize) || cfg.batchSize < 1) {
    throw new BridgeError(`batchSize must be a positive integer, got ${cfg.batchSize}`);
  }
}
