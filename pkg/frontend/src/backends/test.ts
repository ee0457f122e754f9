/** Deterministic offline backend.
 *
 * Stands in for a pretrained encoder where no model hub is reachable:
 * a fixed-depth "model" whose hidden states are seeded hashes of the
 * subword, its left neighbor (so values are context-sensitive), the
 * layer index, and the dimension. Tokenization is a simple fixed-width
 * piece split with begin/end markers, exercising the special-token
 * dropping and word-map bookkeeping of the real path.
 */

import { EncoderBackend, SentenceEncoding } from '../types.js';

const DEPTH = 4;
const HIDDEN = 16;
const PIECE = 4;

function fnv1a(text: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193);
  }
  return hash >>> 0;
}

function mulberry32(seed: number): number {
  let t = (seed + 0x6d2b79f5) >>> 0;
  t = Math.imul(t ^ (t >>> 15), t | 1);
  t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
  return (((t ^ (t >>> 14)) >>> 0) / 4294967296) * 2 - 1;
}

export function splitPieces(word: string): string[] {
  const pieces: string[] = [];
  for (let k = 0; k < word.length; k += PIECE) {
    pieces.push(word.slice(k, k + PIECE));
  }
  return pieces.length ? pieces : [word];
}

export class TestBackend implements EncoderBackend {
  depth(): number {
    return DEPTH;
  }

  hiddenSize(): number {
    return HIDDEN;
  }

  async encodeBatch(sentences: string[][], layer: number): Promise<SentenceEncoding[]> {
    return sentences.map((words) => this.encodeOne(words, layer));
  }

  private encodeOne(words: string[], layer: number): SentenceEncoding {
    const pieces: string[] = [];
    const wordOfSubword: number[] = [];
    words.forEach((word, w) => {
      for (const piece of splitPieces(word)) {
        pieces.push(piece);
        wordOfSubword.push(w);
      }
    });
    const rows = new Float32Array(pieces.length * HIDDEN);
    for (let p = 0; p < pieces.length; p++) {
      const self = fnv1a(pieces[p]);
      const left = p > 0 ? fnv1a(pieces[p - 1]) : 0x517cc1b7;
      for (let d = 0; d < HIDDEN; d++) {
        const seed = (self ^ Math.imul(left, 31) ^ Math.imul(layer + 1, 0x9e3779b9) ^ Math.imul(d + 1, 7919)) >>> 0;
        rows[p * HIDDEN + d] = mulberry32(seed);
      }
    }
    return {
      rows,
      subwordCount: pieces.length,
      wordOfSubword,
      // begin/end markers are implicit here; they count toward the
      // length limit exactly as the real tokenizer's specials do
      lengthWithSpecials: pieces.length + 2,
    };
  }
}
