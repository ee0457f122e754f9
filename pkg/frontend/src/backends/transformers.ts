/** Pretrained-model backend on top of transformers.js.
 *
 * The package is loaded lazily through a dynamic import so the bridge
 * builds and tests without it; install `@huggingface/transformers` (and
 * have the model cached or a hub connection) to use this backend.
 *
 * Subword bookkeeping: every whitespace word is tokenized separately
 * without special markers, so each subword's originating word index is
 * known exactly; the model input is the flattened id sequence wrapped in
 * the tokenizer's special-token template. Hidden states of the requested
 * layer are read from the `hidden_states` outputs when the ONNX export
 * provides them; otherwise only the final layer (`last_hidden_state`) is
 * available and other layer indices are rejected.
 */

import { BridgeError, EncoderBackend, SentenceEncoding } from '../types.js';

const PACKAGE_NAME = '@huggingface/transformers';

interface LoadedModel {
  tokenizer: any;
  model: any;
  depth: number;
  hiddenSize: number;
  specialsBefore: number[];
  specialsAfter: number[];
}

async function loadPackage(): Promise<any> {
  try {
    // variable specifier keeps TypeScript from requiring the package
    const name = PACKAGE_NAME;
    return await import(name);
  } catch {
    throw new BridgeError(
      `backend 'transformers' needs the optional dependency ${PACKAGE_NAME}; ` +
        `install it or use --backend test`,
    );
  }
}

export class TransformersBackend implements EncoderBackend {
  private loaded: LoadedModel | null = null;

  constructor(private modelId: string) {}

  async init(): Promise<void> {
    if (this.loaded) return;
    const tf = await loadPackage();
    const tokenizer = await tf.AutoTokenizer.from_pretrained(this.modelId);
    const model = await tf.AutoModel.from_pretrained(this.modelId, {
      output_hidden_states: true,
    });
    const config = model.config ?? {};
    const depth = config.num_hidden_layers ?? config.n_layers ?? config.num_layers;
    if (!Number.isInteger(depth) || depth < 1) {
      throw new BridgeError(`cannot determine layer depth of ${this.modelId}`);
    }
    const hiddenSize = config.hidden_size ?? config.d_model ?? config.dim;
    if (!Number.isInteger(hiddenSize) || hiddenSize < 1) {
      throw new BridgeError(`cannot determine hidden size of ${this.modelId}`);
    }
    // special-token template discovered by encoding the empty string
    const template: number[] = Array.from(await this.encodeIds(tokenizer, '', true));
    const specialsBefore = template.slice(0, Math.ceil(template.length / 2));
    const specialsAfter = template.slice(Math.ceil(template.length / 2));
    this.loaded = { tokenizer, model, depth, hiddenSize, specialsBefore, specialsAfter };
  }

  private async encodeIds(tokenizer: any, text: string, specials: boolean): Promise<number[]> {
    const out = await tokenizer(text, { add_special_tokens: specials });
    const ids = out.input_ids.data ?? out.input_ids;
    return Array.from(ids, (v: any) => Number(v));
  }

  private require(): LoadedModel {
    if (!this.loaded) {
      throw new BridgeError('TransformersBackend.init() must run before use');
    }
    return this.loaded;
  }

  depth(): number {
    return this.require().depth;
  }

  hiddenSize(): number {
    return this.require().hiddenSize;
  }

  async encodeBatch(sentences: string[][], layer: number): Promise<SentenceEncoding[]> {
    const out: SentenceEncoding[] = [];
    for (const words of sentences) {
      out.push(await this.encodeOne(words, layer));
    }
    return out;
  }

  private async encodeOne(words: string[], layer: number): Promise<SentenceEncoding> {
    const { tokenizer, model, depth, hiddenSize, specialsBefore, specialsAfter } = this.require();
    const wordOfSubword: number[] = [];
    const bodyIds: number[] = [];
    for (let w = 0; w < words.length; w++) {
      const ids = await this.encodeIds(tokenizer, words[w], false);
      for (const id of ids) {
        bodyIds.push(id);
        wordOfSubword.push(w);
      }
    }
    const inputIds = [...specialsBefore, ...bodyIds, ...specialsAfter];
    const tf = await loadPackage();
    const ids = new tf.Tensor(
      'int64',
      BigInt64Array.from(inputIds.map((v) => BigInt(v))),
      [1, inputIds.length],
    );
    const mask = new tf.Tensor(
      'int64',
      BigInt64Array.from(inputIds.map(() => 1n)),
      [1, inputIds.length],
    );
    const outputs = await model({ input_ids: ids, attention_mask: mask });

    let hidden: any;
    if (outputs.hidden_states && outputs.hidden_states[layer]) {
      hidden = outputs.hidden_states[layer];
    } else if (outputs[`hidden_states.${layer}`]) {
      hidden = outputs[`hidden_states.${layer}`];
    } else if (layer === depth && outputs.last_hidden_state) {
      hidden = outputs.last_hidden_state;
    } else {
      throw new BridgeError(
        `model export exposes no hidden states for layer ${layer}; ` +
          `only the final layer (${depth}) is available`,
      );
    }
    const data: Float32Array = Float32Array.from(hidden.data);
    const rows = new Float32Array(bodyIds.length * hiddenSize);
    // drop the leading/trailing special markers
    const start = specialsBefore.length * hiddenSize;
    rows.set(data.subarray(start, start + rows.length));
    return {
      rows,
      subwordCount: bodyIds.length,
      wordOfSubword,
      lengthWithSpecials: inputIds.length,
    };
  }
}
