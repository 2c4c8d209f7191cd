/* tslint:disable */
/* eslint-disable */

/**
 * Coupling tail on the lamplighter preset at `n = 4, 8, ..., 2^max_log`.
 * Rows of `[n, p_hat, stderr, exact]`.
 */
export function coupling_tail(trials: number, seed: number, max_log: number): Float64Array;

/**
 * Exact total variation between `n` and `n + ⌈δn⌉` steps of the lazy
 * lamplighter walk with lamps `Z/q`, `δ = 1/4`. Rows of `[n, m, tv]`.
 */
export function plateau_series(q: number, n_max: number): Float64Array;

/**
 * The harmonic function on the Sym(Z)⋊Z Schreier graph at `-radius..=radius`.
 */
export function symz_profile(radius: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly coupling_tail: (a: number, b: number, c: number) => [number, number, number, number];
    readonly plateau_series: (a: number, b: number) => [number, number, number, number];
    readonly symz_profile: (a: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
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
