/** Sidecar files accompanying an exported embedding-record file:
 *  subword maps (one line per retained sentence pair, whitespace-separated
 *  word indices, one per subword row) and the skip list (one skipped
 *  corpus index per line). */

export function formatSubwordMaps(maps: number[][]): string {
  return maps.map((owners) => owners.join(' ') + '\n').join('');
}

export function formatSkipList(indices: number[]): string {
  return indices.map((i) => `${i}\n`).join('');
}

export function parseSubwordMaps(text: string): number[][] {
  const lines = text.split('\n');
  if (lines.length && lines[lines.length - 1] === '') lines.pop();
  return lines.map((line) => line.split(/\s+/).filter(Boolean).map(Number));
}
