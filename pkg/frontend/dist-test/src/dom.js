"use strict";
/**
 * Browser probe backend.
 *
 * One element per resource: <img> for images, <link> for stylesheets,
 * <script> for scripts. Style directives are verified on short-lived
 * probe elements read through getComputedStyle; each probe element is
 * removed before the next is created, and the carrier element is removed
 * once all subfeatures are checked, so the page never accumulates DOM
 * weight during a scan.
 */
Object.defineProperty(exports, "__esModule", { value: true });
exports.DomExecutor = void 0;
const canonical_1 = require("./canonical");
const sha256_1 = require("./sha256");
const types_1 = require("./types");
class DomExecutor {
    constructor(doc, win) {
        this.doc = doc;
        this.win = win;
    }
    waitForLoad(element, timeoutMs) {
        return new Promise((resolve) => {
            let settled = false;
            const finish = (outcome) => {
                if (!settled) {
                    settled = true;
                    this.win.clearTimeout(timer);
                    resolve(outcome);
                }
            };
            const timer = this.win.setTimeout(() => finish("timeout"), timeoutMs);
            element.onload = () => finish("load");
            element.onerror = () => finish("error");
        });
    }
    async discover(target, probePath, timeoutMs) {
        // pingjs-style: any load event, success or error, before the timeout
        // means something answered on that host:port
        const img = this.doc.createElement("img");
        const loading = this.waitForLoad(img, timeoutMs);
        img.src = `${(0, types_1.targetOrigin)(target)}${probePath}`;
        const outcome = await loading;
        img.removeAttribute("src");
        return outcome !== "timeout";
    }
    async execute(target, check, timeoutMs) {
        const url = `${(0, types_1.targetOrigin)(target)}/${check.path}`;
        if (check.type === "image") {
            return this.executeImage(url, check, timeoutMs);
        }
        if (check.type === "css") {
            return this.executeCss(url, check, timeoutMs);
        }
        return this.executeJs(url, check, timeoutMs);
    }
    async executeImage(url, check, timeoutMs) {
        const img = this.doc.createElement("img");
        const loading = this.waitForLoad(img, timeoutMs);
        img.src = url;
        const outcome = await loading;
        const observation = { loaded: outcome === "load", observations: [] };
        for (const _ of check.checks) {
            observation.observations.push(outcome === "load"
                ? { kind: "image", width: img.naturalWidth, height: img.naturalHeight }
                : { kind: "unavailable" });
        }
        img.removeAttribute("src");
        return observation;
    }
    async executeCss(url, check, timeoutMs) {
        const link = this.doc.createElement("link");
        link.rel = "stylesheet";
        const loading = this.waitForLoad(link, timeoutMs);
        link.href = url;
        this.doc.head.appendChild(link);
        const outcome = await loading;
        const observation = { loaded: outcome === "load", observations: [] };
        try {
            for (const sub of check.checks) {
                if (outcome !== "load" || sub.kind !== "css_directive") {
                    observation.observations.push({ kind: "unavailable" });
                    continue;
                }
                observation.observations.push(this.probeDirective(sub));
            }
        }
        finally {
            link.remove();
        }
        return observation;
    }
    probeDirective(sub) {
        const el = this.doc.createElement(sub.element_type);
        if (sub.selector_kind === "id") {
            el.id = sub.selector_name;
        }
        else if (sub.selector_kind === "class") {
            el.className = sub.selector_name;
        }
        this.doc.body.appendChild(el);
        try {
            const style = this.win.getComputedStyle(el);
            return { kind: "css", value: style.getPropertyValue(sub.property) };
        }
        finally {
            // a fresh probe element per directive keeps the page light
            el.remove();
        }
    }
    async executeJs(url, check, timeoutMs) {
        const script = this.doc.createElement("script");
        const loading = this.waitForLoad(script, timeoutMs);
        script.src = url;
        this.doc.head.appendChild(script);
        const outcome = await loading;
        const observation = { loaded: outcome === "load", observations: [] };
        try {
            for (const sub of check.checks) {
                if (outcome !== "load" || sub.kind !== "js_symbol") {
                    observation.observations.push({ kind: "unavailable" });
                    continue;
                }
                observation.observations.push(this.probeSymbol(sub.name));
            }
        }
        finally {
            // note: removing the element does not undo executed globals; name
            // collisions across probed files are normalized out upstream
            script.remove();
        }
        return observation;
    }
    probeSymbol(name) {
        const scope = this.win;
        if (!(name in scope)) {
            return {
                kind: "js", present: false, isFunction: false,
                canonicalValue: null, sourceHash: null,
            };
        }
        const value = scope[name];
        const isFunction = typeof value === "function";
        return {
            kind: "js",
            present: true,
            isFunction,
            canonicalValue: isFunction ? null : (0, canonical_1.canonicalJsValue)(value),
            sourceHash: isFunction ? (0, sha256_1.sha256Hex)(String(value)) : null,
        };
    }
}
exports.DomExecutor = DomExecutor;
