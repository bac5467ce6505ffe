/** Subfeature comparison against executor observations. */

import { canonicalCssValue } from "./canonical";
import { CheckObservation, Outcome, SubfeatureJson, SubObservation } from "./types";

export function compareSubfeature(
  sub: SubfeatureJson,
  obs: SubObservation,
): Outcome {
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
    const canonical = canonicalCssValue(sub.property, obs.value);
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
export function checkOutcome(
  checks: SubfeatureJson[],
  observation: CheckObservation,
): Outcome {
  if (!observation.loaded) {
    return "mismatch";
  }
  for (let i = 0; i < checks.length; i++) {
    const obs = observation.observations[i] ?? { kind: "unavailable" as const };
    if (compareSubfeature(checks[i], obs) === "mismatch") {
      return "mismatch";
    }
  }
  return "match";
}
