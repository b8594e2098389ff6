/* tslint:disable */
/* eslint-disable */
/**
 * `(1/N) log Z` for one Gaussian disorder sample, on `points` values of `h`
 * evenly spaced in `[0, h_max]`. Returns `h` and `f` interleaved.
 */
export function free_energy_scan(alpha: number, lambda: number, h_max: number, n: number, points: number, seed: bigint): Float64Array;
/**
 * Excursions of the α-stable regenerative set on `[0, t]` with gaps shorter
 * than `eta` swept into drift. Returns `(left, right, sign)` triples.
 */
export function regenerative_set(alpha: number, t: number, eta: number, seed: bigint): Float64Array;
/**
 * `U(ℓ)·ℓ^{1−α}·L(ℓ)·π/(α sin πα)` at `points` log-spaced ℓ up to `n`, for the
 * constant-L law. Returns `ℓ` and the ratio interleaved.
 */
export function renewal_ratio(alpha: number, n: number, points: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
  readonly memory: WebAssembly.Memory;
  readonly free_energy_scan: (a: number, b: number, c: number, d: number, e: number, f: bigint) => [number, number, number, number];
  readonly regenerative_set: (a: number, b: number, c: number, d: bigint) => [number, number, number, number];
  readonly renewal_ratio: (a: number, b: number, c: number) => [number, number, number, number];
  readonly __wbindgen_export_0: WebAssembly.Table;
  readonly __externref_table_dealloc: (a: number) => void;
  readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
