/* tslint:disable */
/* eslint-disable */

/**
 * `[Ω₀, s₀, Ω₁, s₁, …]`: steady σ_ZZ/(N/2) of the differential mode under
 * coloured CSL noise, over `n` log-spaced cutoffs in [lo, hi] rad/s.
 */
export function coloured_scan(preset: string, lambda: number, r_csl: number, lo: number, hi: number, n: number): Float64Array;

/**
 * `[r₀, λ₀, r₁, λ₁, …]` over `n` log-spaced collapse lengths in [lo, hi].
 * `witness` is `"squeeze"` or `"entangle"`.
 */
export function exclusion_curve(preset: string, witness: string, lo: number, hi: number, n: number): Float64Array;

/**
 * Names of the built-in presets.
 */
export function preset_names(): string[];

/**
 * `[t₀, ν₀, t₁, ν₁, …]`: smallest eigenvalue of the differential-mode
 * covariance divided by N/2, from the thermal state up to `t_end`.
 */
export function squeezing_trace(preset: string, lambda: number, r_csl: number, t_end: number, n: number): Float64Array;

/**
 * σ_ZZ/(N/2) for the same collapse parameters with white noise, the
 * Ω → ∞ limit of [`coloured_scan`].
 */
export function white_steady_ratio(preset: string, lambda: number, r_csl: number): number;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly coloured_scan: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly exclusion_curve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly preset_names: () => [number, number];
    readonly squeezing_trace: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly white_steady_ratio: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_drop_slice: (a: number, b: number) => void;
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
