/* tslint:disable */
/* eslint-disable */

/**
 * Blow-up profile `h ↦ λ(u(t̂ + h/λ²) - u(t̂))` on `samples + 1` equispaced
 * `h ∈ [-1, 1]`, as `[h, lo, hi, ...]` with certified lower and upper
 * bounds.
 */
export function blowup_curve(t_hat: string, lambda: string, samples: number): Float64Array;

/**
 * Text rendering of the enclosure of `u(t)`.
 */
export function eval_u(t: string, depth: number): string;

/**
 * Vertices of `u_n` as `[t0, u0, t1, u1, ...]`.
 */
export function iterate_points(level: number): Float64Array;

/**
 * Images of the unit square as `[x0, x1, y0, y1, ...]`, where `y0`, `y1`
 * are the images of the bottom and top edges.
 */
export function square_images(depth: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly blowup_curve: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly eval_u: (a: number, b: number, c: number) => [number, number, number, number];
    readonly iterate_points: (a: number) => [number, number, number, number];
    readonly square_images: (a: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
