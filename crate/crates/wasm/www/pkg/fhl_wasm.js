/* @ts-self-types="./fhl_wasm.d.ts" */

export class Constants {
    static __wrap(ptr) {
        const obj = Object.create(Constants.prototype);
        obj.__wbg_ptr = ptr;
        ConstantsFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        ConstantsFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_constants_free(ptr, 0);
    }
    /**
     * @returns {number}
     */
    get alpha() {
        const ret = wasm.__wbg_get_constants_alpha(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get critical_exponent() {
        const ret = wasm.__wbg_get_constants_critical_exponent(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get gamma_bar() {
        const ret = wasm.__wbg_get_constants_gamma_bar(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get gamma() {
        const ret = wasm.__wbg_get_constants_gamma(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get lambda_max() {
        const ret = wasm.__wbg_get_constants_lambda_max(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get lambda() {
        const ret = wasm.__wbg_get_constants_lambda(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get m_left() {
        const ret = wasm.__wbg_get_constants_m_left(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get m_right() {
        const ret = wasm.__wbg_get_constants_m_right(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get normalization() {
        const ret = wasm.__wbg_get_constants_normalization(this.__wbg_ptr);
        return ret;
    }
    /**
     * @param {number} arg0
     */
    set alpha(arg0) {
        wasm.__wbg_set_constants_alpha(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set critical_exponent(arg0) {
        wasm.__wbg_set_constants_critical_exponent(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set gamma_bar(arg0) {
        wasm.__wbg_set_constants_gamma_bar(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set gamma(arg0) {
        wasm.__wbg_set_constants_gamma(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set lambda_max(arg0) {
        wasm.__wbg_set_constants_lambda_max(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set lambda(arg0) {
        wasm.__wbg_set_constants_lambda(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set m_left(arg0) {
        wasm.__wbg_set_constants_m_left(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set m_right(arg0) {
        wasm.__wbg_set_constants_m_right(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set normalization(arg0) {
        wasm.__wbg_set_constants_normalization(this.__wbg_ptr, arg0);
    }
}
if (Symbol.dispose) Constants.prototype[Symbol.dispose] = Constants.prototype.free;

export class Curves {
    static __wrap(ptr) {
        const obj = Object.create(Curves.prototype);
        obj.__wbg_ptr = ptr;
        CurvesFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        CurvesFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_curves_free(ptr, 0);
    }
    /**
     * @returns {Float64Array}
     */
    get j() {
        const ret = wasm.curves_j(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    get m() {
        const ret = wasm.curves_m(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    get p() {
        const ret = wasm.curves_p(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {boolean}
     */
    get consistent() {
        const ret = wasm.__wbg_get_curves_consistent(this.__wbg_ptr);
        return ret !== 0;
    }
    /**
     * @param {boolean} arg0
     */
    set consistent(arg0) {
        wasm.__wbg_set_curves_consistent(this.__wbg_ptr, arg0);
    }
}
if (Symbol.dispose) Curves.prototype[Symbol.dispose] = Curves.prototype.free;

export class Profile {
    static __wrap(ptr) {
        const obj = Object.create(Profile.prototype);
        obj.__wbg_ptr = ptr;
        ProfileFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        ProfileFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_profile_free(ptr, 0);
    }
    /**
     * @returns {number}
     */
    get blowup_fit() {
        const ret = wasm.__wbg_get_profile_blowup_fit(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get gamma() {
        const ret = wasm.__wbg_get_profile_gamma(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {Float64Array}
     */
    get r() {
        const ret = wasm.profile_r(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    get u() {
        const ret = wasm.profile_u(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @param {number} arg0
     */
    set blowup_fit(arg0) {
        wasm.__wbg_set_profile_blowup_fit(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set gamma(arg0) {
        wasm.__wbg_set_profile_gamma(this.__wbg_ptr, arg0);
    }
}
if (Symbol.dispose) Profile.prototype[Symbol.dispose] = Profile.prototype.free;

/**
 * Λ and friends for λ = `lambda_frac`·Λ, with `lambda_frac` in (0, 1].
 * @param {number} n
 * @param {number} s
 * @param {number} lambda_frac
 * @returns {Constants}
 */
export function constants(n, s, lambda_frac) {
    const ret = wasm.constants(n, s, lambda_frac);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return Constants.__wrap(ret[0]);
}

/**
 * J_s(m) and P_s(m) on `points` equispaced m in [m_left, m_right).
 * @param {number} n
 * @param {number} s
 * @param {number} points
 * @returns {Curves}
 */
export function curves(n, s, points) {
    const ret = wasm.curves(n, s, points);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return Curves.__wrap(ret[0]);
}

/**
 * Solves the radial problem with f ≡ 1 and λ = `lambda_frac`·Λ below Λ on a graded mesh.
 * @param {number} n
 * @param {number} s
 * @param {number} lambda_frac
 * @param {number} elements
 * @returns {Profile}
 */
export function solve_profile(n, s, lambda_frac, elements) {
    const ret = wasm.solve_profile(n, s, lambda_frac, elements);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return Profile.__wrap(ret[0]);
}
function __wbg_get_imports() {
    const import0 = {
        __proto__: null,
        __wbg_Error_30c8987f7c2ed4e2: function(arg0, arg1) {
            const ret = Error(getStringFromWasm0(arg0, arg1));
            return ret;
        },
        __wbg___wbindgen_throw_41e9ee4f547fc59a: function(arg0, arg1) {
            throw new Error(getStringFromWasm0(arg0, arg1));
        },
        __wbindgen_init_externref_table: function() {
            const table = wasm.__wbindgen_externrefs;
            const offset = table.grow(4);
            table.set(0, undefined);
            table.set(offset + 0, undefined);
            table.set(offset + 1, null);
            table.set(offset + 2, true);
            table.set(offset + 3, false);
        },
    };
    return {
        __proto__: null,
        "./fhl_wasm_bg.js": import0,
    };
}

const ConstantsFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_constants_free(ptr, 1));
const CurvesFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_curves_free(ptr, 1));
const ProfileFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_profile_free(ptr, 1));

function getArrayF64FromWasm0(ptr, len) {
    ptr = ptr >>> 0;
    return getFloat64ArrayMemory0().subarray(ptr / 8, ptr / 8 + len);
}

let cachedFloat64ArrayMemory0 = null;
function getFloat64ArrayMemory0() {
    if (cachedFloat64ArrayMemory0 === null || cachedFloat64ArrayMemory0.byteLength === 0) {
        cachedFloat64ArrayMemory0 = new Float64Array(wasm.memory.buffer);
    }
    return cachedFloat64ArrayMemory0;
}

function getStringFromWasm0(ptr, len) {
    return decodeText(ptr >>> 0, len);
}

let cachedUint8ArrayMemory0 = null;
function getUint8ArrayMemory0() {
    if (cachedUint8ArrayMemory0 === null || cachedUint8ArrayMemory0.byteLength === 0) {
        cachedUint8ArrayMemory0 = new Uint8Array(wasm.memory.buffer);
    }
    return cachedUint8ArrayMemory0;
}

function takeFromExternrefTable0(idx) {
    const value = wasm.__wbindgen_externrefs.get(idx);
    wasm.__externref_table_dealloc(idx);
    return value;
}

let cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
cachedTextDecoder.decode();
const MAX_SAFARI_DECODE_BYTES = 2146435072;
let numBytesDecoded = 0;
function decodeText(ptr, len) {
    numBytesDecoded += len;
    if (numBytesDecoded >= MAX_SAFARI_DECODE_BYTES) {
        cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
        cachedTextDecoder.decode();
        numBytesDecoded = len;
    }
    return cachedTextDecoder.decode(getUint8ArrayMemory0().subarray(ptr, ptr + len));
}

let wasmModule, wasmInstance, wasm;
function __wbg_finalize_init(instance, module) {
    wasmInstance = instance;
    wasm = instance.exports;
    wasmModule = module;
    cachedFloat64ArrayMemory0 = null;
    cachedUint8ArrayMemory0 = null;
    wasm.__wbindgen_start();
    return wasm;
}

async function __wbg_load(module, imports) {
    if (typeof Response === 'function' && module instanceof Response) {
        if (!module.ok) {
            throw new Error(`failed to fetch Wasm: ${module.status} ${module.statusText} fetching '${module.url}'`);
        }

        if (typeof WebAssembly.instantiateStreaming === 'function') {
            try {
                return await WebAssembly.instantiateStreaming(module, imports);
            } catch (e) {
                const validResponse = expectedResponseType(module.type);

                if (validResponse && module.headers.get('Content-Type') !== 'application/wasm') {
                    console.warn("`WebAssembly.instantiateStreaming` failed because your server does not serve Wasm with `application/wasm` MIME type. Falling back to `WebAssembly.instantiate` which is slower. Original error:\n", e);

                } else { throw e; }
            }
        }

        const bytes = await module.arrayBuffer();
        return await WebAssembly.instantiate(bytes, imports);
    } else {
        const instance = await WebAssembly.instantiate(module, imports);

        if (instance instanceof WebAssembly.Instance) {
            return { instance, module };
        } else {
            return instance;
        }
    }

    function expectedResponseType(type) {
        switch (type) {
            case 'basic': case 'cors': case 'default': return true;
        }
        return false;
    }
}

function initSync(module) {
    if (wasm !== undefined) return wasm;


    if (module !== undefined) {
        if (Object.getPrototypeOf(module) === Object.prototype) {
            ({module} = module)
        } else {
            console.warn('using deprecated parameters for `initSync()`; pass a single object instead')
        }
    }

    const imports = __wbg_get_imports();
    if (!(module instanceof WebAssembly.Module)) {
        module = new WebAssembly.Module(module);
    }
    const instance = new WebAssembly.Instance(module, imports);
    return __wbg_finalize_init(instance, module);
}

async function __wbg_init(module_or_path) {
    if (wasm !== undefined) return wasm;


    if (module_or_path !== undefined) {
        if (Object.getPrototypeOf(module_or_path) === Object.prototype) {
            ({module_or_path} = module_or_path)
        } else {
            console.warn('using deprecated parameters for the initialization function; pass a single object instead')
        }
    }

    if (module_or_path === undefined) {
        module_or_path = new URL('fhl_wasm_bg.wasm', import.meta.url);
    }
    const imports = __wbg_get_imports();

    if (typeof module_or_path === 'string' || (typeof Request === 'function' && module_or_path instanceof Request) || (typeof URL === 'function' && module_or_path instanceof URL)) {
        module_or_path = fetch(module_or_path);
    }

    const { instance, module } = await __wbg_load(await module_or_path, imports);

    return __wbg_finalize_init(instance, module);
}

export { initSync, __wbg_init as default };
