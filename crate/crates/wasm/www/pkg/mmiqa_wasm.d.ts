/* tslint:disable */
/* eslint-disable */

/**
 * Synthetic test scene as RGBA.
 */
export function demoScene(seed: number, width: number, height: number): Uint8Array;

/**
 * Applies one distortion and returns the new RGBA buffer.
 */
export function distortRgba(rgba: Uint8Array, width: number, height: number, family: string, level: number, seed: number): Uint8Array;

/**
 * Severity grid of a family, for populating controls.
 */
export function familyLevels(family: string): Float64Array;

/**
 * Quality breakdown of an RGBA buffer as JSON.
 */
export function scoreRgba(rgba: Uint8Array, width: number, height: number): string;

/**
 * Q and the family's own cue across its severity grid, clean first.
 */
export function severitySweep(rgba: Uint8Array, width: number, height: number, family: string, seed: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly demoScene: (a: number, b: number, c: number) => [number, number];
    readonly distortRgba: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number, number];
    readonly familyLevels: (a: number, b: number) => [number, number, number, number];
    readonly scoreRgba: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly severitySweep: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
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
