/* tslint:disable */
/* eslint-disable */

/**
 * Names accepted by the other exports, as a JSON array.
 */
export function builtin_codes(): string;

/**
 * Sends the all-zero word over AWGN at `snr_db` and decodes it exactly.
 */
export function decode_frame(code_name: string, snr_db: number, seed: bigint): string;

/**
 * Frame error rate and mean node count at each SNR, `frames` frames per point.
 */
export function fer_sweep(code_name: string, snr_db: Float64Array, frames: number, seed: bigint): string;

/**
 * Minimum distance with a witness codeword.
 */
export function min_distance(code_name: string, fix_first_bit: boolean): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly builtin_codes: () => [number, number];
    readonly decode_frame: (a: number, b: number, c: number, d: bigint) => [number, number, number, number];
    readonly fer_sweep: (a: number, b: number, c: number, d: number, e: number, f: bigint) => [number, number, number, number];
    readonly min_distance: (a: number, b: number, c: number) => [number, number, number, number];
    readonly __externref_table_alloc: () => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
