/* tslint:disable */
/* eslint-disable */

export class Constants {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    alpha: number;
    critical_exponent: number;
    gamma_bar: number;
    gamma: number;
    lambda_max: number;
    lambda: number;
    m_left: number;
    m_right: number;
    normalization: number;
}

export class Curves {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly j: Float64Array;
    readonly m: Float64Array;
    readonly p: Float64Array;
    consistent: boolean;
}

export class Profile {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    blowup_fit: number;
    gamma: number;
    readonly r: Float64Array;
    readonly u: Float64Array;
}

/**
 * Λ and friends for λ = `lambda_frac`·Λ, with `lambda_frac` in (0, 1].
 */
export function constants(n: number, s: number, lambda_frac: number): Constants;

/**
 * J_s(m) and P_s(m) on `points` equispaced m in [m_left, m_right).
 */
export function curves(n: number, s: number, points: number): Curves;

/**
 * Solves the radial problem with f ≡ 1 and λ = `lambda_frac`·Λ below Λ on a graded mesh.
 */
export function solve_profile(n: number, s: number, lambda_frac: number, elements: number): Profile;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_constants_free: (a: number, b: number) => void;
    readonly __wbg_curves_free: (a: number, b: number) => void;
    readonly __wbg_get_constants_alpha: (a: number) => number;
    readonly __wbg_get_constants_critical_exponent: (a: number) => number;
    readonly __wbg_get_constants_gamma: (a: number) => number;
    readonly __wbg_get_constants_gamma_bar: (a: number) => number;
    readonly __wbg_get_constants_lambda: (a: number) => number;
    readonly __wbg_get_constants_lambda_max: (a: number) => number;
    readonly __wbg_get_constants_m_left: (a: number) => number;
    readonly __wbg_get_constants_m_right: (a: number) => number;
    readonly __wbg_get_constants_normalization: (a: number) => number;
    readonly __wbg_get_curves_consistent: (a: number) => number;
    readonly __wbg_get_profile_blowup_fit: (a: number) => number;
    readonly __wbg_get_profile_gamma: (a: number) => number;
    readonly __wbg_profile_free: (a: number, b: number) => void;
    readonly __wbg_set_constants_alpha: (a: number, b: number) => void;
    readonly __wbg_set_constants_critical_exponent: (a: number, b: number) => void;
    readonly __wbg_set_constants_gamma: (a: number, b: number) => void;
    readonly __wbg_set_constants_gamma_bar: (a: number, b: number) => void;
    readonly __wbg_set_constants_lambda: (a: number, b: number) => void;
    readonly __wbg_set_constants_lambda_max: (a: number, b: number) => void;
    readonly __wbg_set_constants_m_left: (a: number, b: number) => void;
    readonly __wbg_set_constants_m_right: (a: number, b: number) => void;
    readonly __wbg_set_constants_normalization: (a: number, b: number) => void;
    readonly __wbg_set_curves_consistent: (a: number, b: number) => void;
    readonly __wbg_set_profile_blowup_fit: (a: number, b: number) => void;
    readonly __wbg_set_profile_gamma: (a: number, b: number) => void;
    readonly constants: (a: number, b: number, c: number) => [number, number, number];
    readonly curves: (a: number, b: number, c: number) => [number, number, number];
    readonly curves_j: (a: number) => [number, number];
    readonly curves_m: (a: number) => [number, number];
    readonly curves_p: (a: number) => [number, number];
    readonly profile_r: (a: number) => [number, number];
    readonly profile_u: (a: number) => [number, number];
    readonly solve_profile: (a: number, b: number, c: number, d: number) => [number, number, number];
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
