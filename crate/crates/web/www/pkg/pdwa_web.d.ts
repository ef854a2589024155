/* tslint:disable */
/* eslint-disable */

/**
 * Minimal automaton for `formula`: state count, tracks, a witness, size
 * bounds, DOT and JSON.
 */
export function build(formula: string, base: number): string;

/**
 * Quantifier-free equivalent, plus the truth value when `formula` is a
 * sentence. `engine` is `automata` or `qe_then_automata`.
 */
export function decideFormula(formula: string, base: number, engine: string): string;

/**
 * Membership over `[-radius, radius]^k` for a formula with `k ≤ 2` free
 * variables.
 */
export function solutionGrid(formula: string, base: number, radius: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly build: (a: number, b: number, c: number) => [number, number];
    readonly decideFormula: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly solutionGrid: (a: number, b: number, c: number, d: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
