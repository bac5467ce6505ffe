"use strict";
/** Subfeature comparison against executor observations. */
Object.defineProperty(exports, "__esModule", { value: true });
exports.compareSubfeature = compareSubfeature;
exports.checkOutcome = checkOutcome;
const canonical_1 = require("./canonical");
function compareSubfeature(sub, obs) {
    if (obs.kind === "unavailable") {
        return "mismatch";
    }
    if (sub.kind === "image_dimension") {
        if (obs.kind !== "image") {
            return "mismatch";
        }
        return obs.width === sub.width && obs.height === sub.height
            ? "match"
            : "mismatch";
    }
    if (sub.kind === "css_directive") {
        if (obs.kind !== "css" || obs.value == null || obs.value === "") {
            return "mismatch";
        }
        if (obs.value === sub.expected_value) {
            return "match";
        }
        // engines serialize computed values with formatting differences;
        // canonicalizing the observed value resolves those
        const canonical = (0, canonical_1.canonicalCssValue)(sub.property, obs.value);
        return canonical === sub.expected_value ? "match" : "mismatch";
    }
    if (obs.kind !== "js" || !obs.present) {
        return "mismatch";
    }
    const wantsFunction = sub.symbol_kind === "function";
    if (obs.isFunction !== wantsFunction) {
        return "mismatch";
    }
    if (sub.expected_value !== undefined && obs.canonicalValue !== sub.expected_value) {
        return "mismatch";
    }
    if (sub.source_hash !== undefined && obs.sourceHash !== sub.source_hash) {
        return "mismatch";
    }
    return "match";
}
/** A check matches when the resource loaded and every subfeature holds. */
function checkOutcome(checks, observation) {
    if (!observation.loaded) {
        return "mismatch";
    }
    for (let i = 0; i < checks.length; i++) {
        const obs = observation.observations[i] ?? { kind: "unavailable" };
        if (compareSubfeature(checks[i], obs) === "mismatch") {
            return "mismatch";
        }
    }
    return "match";
}
