/** Binary embedding-record format shared with the Python toolkit.
 *
 * Layout (u32 and f32 both little-endian):
 *   magic "ALNEMB1\0" | u32 dim | records...
 * each record:
 *   u32 srcSubwordCount | u32 tgtSubwordCount | src rows | tgt rows
 */

import { BridgeError } from './types.js';

export const MAGIC = Buffer.from('ALNEMB1\0', 'latin1');

export interface EmbeddingRecord {
  src: Float32Array; // row-major (srcCount x dim)
  srcCount: number;
  tgt: Float32Array;
  tgtCount: number;
}

function assertFinite(rows: Float32Array, where: string): void {
  for (let k = 0; k < rows.length; k++) {
    if (!Number.isFinite(rows[k])) {
      throw new BridgeError(`non-finite value in ${where}`);
    }
  }
}

export function serializeRecords(dim: number, records: EmbeddingRecord[]): Buffer {
  if (!Number.isInteger(dim) || dim < 1) {
    throw new BridgeError(`dim must be a positive integer, got ${dim}`);
  }
  const chunks: Buffer[] = [MAGIC];
  const dimBuf = Buffer.alloc(4);
  dimBuf.writeUInt32LE(dim, 0);
  chunks.push(dimBuf);
  records.forEach((record, index) => {
    if (record.src.length !== record.srcCount * dim || record.tgt.length !== record.tgtCount * dim) {
      throw new BridgeError(`record ${index} row data does not match its counts`);
    }
    if (record.srcCount < 1 || record.tgtCount < 1) {
      throw new BridgeError(`record ${index} has an empty side`);
    }
    assertFinite(record.src, `record ${index} (source)`);
    assertFinite(record.tgt, `record ${index} (target)`);
    const head = Buffer.alloc(8);
    head.writeUInt32LE(record.srcCount, 0);
    head.writeUInt32LE(record.tgtCount, 4);
    chunks.push(head);
    for (const rows of [record.src, record.tgt]) {
      const buf = Buffer.alloc(rows.length * 4);
      for (let k = 0; k < rows.length; k++) {
        buf.writeFloatLE(rows[k], k * 4);
      }
      chunks.push(buf);
    }
  });
  return Buffer.concat(chunks);
}

/** Reader used for self-validation and tests; mirrors the Python reader's
 *  checks (magic, counts, finiteness, truncation with record index). */
export function parseRecords(data: Buffer): { dim: number; records: EmbeddingRecord[] } {
  if (data.subarray(0, MAGIC.length).compare(MAGIC) !== 0) {
    throw new BridgeError(`bad magic ${JSON.stringify(data.subarray(0, 8).toString('latin1'))}`);
  }
  let offset = MAGIC.length;
  const need = (n: number, what: string, record: number | null) => {
    if (offset + n > data.length) {
      const where = record === null ? '' : ` in record ${record}`;
      throw new BridgeError(`truncated embedding file: expected ${what}${where}`);
    }
  };
  need(4, 'dim', null);
  const dim = data.readUInt32LE(offset);
  offset += 4;
  if (dim < 1) throw new BridgeError(`dim must be >= 1, got ${dim}`);
  const records: EmbeddingRecord[] = [];
  let index = 0;
  while (offset < data.length) {
    need(8, 'counts', index);
    const srcCount = data.readUInt32LE(offset);
    const tgtCount = data.readUInt32LE(offset + 4);
    offset += 8;
    if (srcCount < 1 || tgtCount < 1) {
      throw new BridgeError(`record ${index} advertises an empty side`);
    }
    const readRows = (count: number, side: string): Float32Array => {
      need(count * dim * 4, `${count}x${dim} ${side} rows`, index);
      const rows = new Float32Array(count * dim);
      for (let k = 0; k < rows.length; k++) {
        rows[k] = data.readFloatLE(offset + k * 4);
        if (!Number.isFinite(rows[k])) {
          throw new BridgeError(`non-finite value in record ${index} (${side})`);
        }
      }
      offset += count * dim * 4;
      return rows;
    };
    const src = readRows(srcCount, 'source');
    const tgt = readRows(tgtCount, 'target');
    records.push({ src, srcCount, tgt, tgtCount });
    index += 1;
  }
  return { dim, records };
}
