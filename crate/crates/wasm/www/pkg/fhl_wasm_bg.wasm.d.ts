/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_constants_free: (a: number, b: number) => void;
export const __wbg_curves_free: (a: number, b: number) => void;
export const __wbg_get_constants_alpha: (a: number) => number;
export const __wbg_get_constants_critical_exponent: (a: number) => number;
export const __wbg_get_constants_gamma: (a: number) => number;
export const __wbg_get_constants_gamma_bar: (a: number) => number;
export const __wbg_get_constants_lambda: (a: number) => number;
export const __wbg_get_constants_lambda_max: (a: number) => number;
export const __wbg_get_constants_m_left: (a: number) => number;
export const __wbg_get_constants_m_right: (a: number) => number;
export const __wbg_get_constants_normalization: (a: number) => number;
export const __wbg_get_curves_consistent: (a: number) => number;
export const __wbg_get_profile_blowup_fit: (a: number) => number;
export const __wbg_get_profile_gamma: (a: number) => number;
export const __wbg_profile_free: (a: number, b: number) => void;
export const __wbg_set_constants_alpha: (a: number, b: number) => void;
export const __wbg_set_constants_critical_exponent: (a: number, b: number) => void;
export const __wbg_set_constants_gamma: (a: number, b: number) => void;
export const __wbg_set_constants_gamma_bar: (a: number, b: number) => void;
export const __wbg_set_constants_lambda: (a: number, b: number) => void;
export const __wbg_set_constants_lambda_max: (a: number, b: number) => void;
export const __wbg_set_constants_m_left: (a: number, b: number) => void;
export const __wbg_set_constants_m_right: (a: number, b: number) => void;
export const __wbg_set_constants_normalization: (a: number, b: number) => void;
export const __wbg_set_curves_consistent: (a: number, b: number) => void;
export const __wbg_set_profile_blowup_fit: (a: number, b: number) => void;
export const __wbg_set_profile_gamma: (a: number, b: number) => void;
export const constants: (a: number, b: number, c: number) => [number, number, number];
export const curves: (a: number, b: number, c: number) => [number, number, number];
export const curves_j: (a: number) => [number, number];
export const curves_m: (a: number) => [number, number];
export const curves_p: (a: number) => [number, number];
export const profile_r: (a: number) => [number, number];
export const profile_u: (a: number) => [number, number];
export const solve_profile: (a: number, b: number, c: number, d: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
