/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const free_energy_scan: (a: number, b: number, c: number, d: number, e: number, f: bigint) => [number, number, number, number];
export const regenerative_set: (a: number, b: number, c: number, d: bigint) => [number, number, number, number];
export const renewal_ratio: (a: number, b: number, c: number) => [number, number, number, number];
export const __wbindgen_export_0: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
