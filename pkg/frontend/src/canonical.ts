/**
 * Canonical value forms, mirroring the extraction toolchain exactly.
 * Engines serialize computed styles and primitive values with small
 * formatting differences; funnelling both sides through one
 * canonicalization keeps those differences from looking like mismatches.
 */

const NAMED_COLORS: Record<string, [number, number, number]> = {
  black: [0, 0, 0],
  silver: [192, 192, 192],
  gray: [128, 128, 128],
  white: [255, 255, 255],
  maroon: [128, 0, 0],
  red: [255, 0, 0],
  purple: [128, 0, 128],
  fuchsia: [255, 0, 255],
  magenta: [255, 0, 255],
  green: [0, 128, 0],
  lime: [0, 255, 0],
  olive: [128, 128, 0],
  yellow: [255, 255, 0],
  navy: [0, 0, 128],
  blue: [0, 0, 255],
  teal: [0, 128, 128],
  aqua: [0, 255, 255],
  cyan: [0, 255, 255],
  orange: [255, 165, 0],
};

const COLOR_PROPS = new Set(["color", "background-color"]);
const LENGTH_PROPS = new Set([
  "margin-top", "margin-left", "padding-top", "padding-left",
  "width", "height", "font-size", "border-top-width", "line-height",
]);
const NUMBER_PROPS = new Set(["opacity", "z-index"]);
const KEYWORD_PROPS = new Set(["display", "position", "float", "text-align"]);

const HEX_RE = /^#([0-9a-fA-F]{3,8})$/;
const RGB_RE = /^rgba?\(\s*(\d{1,3})\s*,\s*(\d{1,3})\s*,\s*(\d{1,3})\s*(?:,\s*([0-9.]+)\s*)?\)$/i;
const PX_RE = /^([+-]?(?:\d+\.?\d*|\.\d+))px$/i;
const NUMBER_RE = /^[+-]?(?:\d+\.?\d*|\.\d+)$/;
const KEYWORD_RE = /^[A-Za-z-]+$/;

export function shortestNumber(x: number): string {
  if (Number.isInteger(x) && Math.abs(x) < 1e15) {
    return String(x);
  }
  return String(x);
}

function canonicalColor(value: string): string | null {
  const hex = HEX_RE.exec(value);
  if (hex) {
    let digits = hex[1];
    if (digits.length === 3 || digits.length === 4) {
      digits = digits.split("").map((c) => c + c).join("");
    }
    if (digits.length === 6 || digits.length === 8) {
      const r = parseInt(digits.slice(0, 2), 16);
      const g = parseInt(digits.slice(2, 4), 16);
      const b = parseInt(digits.slice(4, 6), 16);
      if (digits.length === 6) {
        return `rgb(${r}, ${g}, ${b})`;
      }
      const a = parseInt(digits.slice(6, 8), 16);
      if (a === 255) {
        return `rgb(${r}, ${g}, ${b})`;
      }
      return `rgba(${r}, ${g}, ${b}, ${shortestNumber(Math.round((a / 255) * 1000) / 1000)})`;
    }
    return null;
  }
  const rgb = RGB_RE.exec(value);
  if (rgb) {
    const [r, g, b] = [rgb[1], rgb[2], rgb[3]].map((x) => parseInt(x, 10));
    if (Math.max(r, g, b) > 255) {
      return null;
    }
    const alpha = rgb[4];
    if (alpha === undefined || parseFloat(alpha) === 1) {
      return `rgb(${r}, ${g}, ${b})`;
    }
    return `rgba(${r}, ${g}, ${b}, ${shortestNumber(parseFloat(alpha))})`;
  }
  const low = value.toLowerCase();
  if (low === "transparent") {
    return "rgba(0, 0, 0, 0)";
  }
  if (low in NAMED_COLORS) {
    const [r, g, b] = NAMED_COLORS[low];
    return `rgb(${r}, ${g}, ${b})`;
  }
  if (KEYWORD_RE.test(value)) {
    return low;
  }
  return null;
}

export function canonicalCssValue(property: string, raw: string): string | null {
  let value = raw.trim();
  if (value.toLowerCase().endsWith("!important")) {
    value = value.slice(0, -"!important".length).trimEnd();
    value = value.replace(/!$/, "").trimEnd();
  }
  if (!value) {
    return null;
  }
  if (COLOR_PROPS.has(property)) {
    return canonicalColor(value);
  }
  if (LENGTH_PROPS.has(property)) {
    const px = PX_RE.exec(value);
    if (px) {
      return `${shortestNumber(parseFloat(px[1]))}px`;
    }
    if (value === "0") {
      return "0px";
    }
    if (KEYWORD_RE.test(value)) {
      return value.toLowerCase();
    }
    return null;
  }
  if (NUMBER_PROPS.has(property)) {
    if (NUMBER_RE.test(value)) {
      return shortestNumber(parseFloat(value));
    }
    if (KEYWORD_RE.test(value)) {
      return value.toLowerCase();
    }
    return null;
  }
  if (KEYWORD_PROPS.has(property)) {
    return KEYWORD_RE.test(value) ? value.toLowerCase() : null;
  }
  return null;
}

export function canonicalStringLiteral(content: string): string {
  let out = "'";
  for (const c of content) {
    if (c === "\\" || c === "'") {
      out += "\\" + c;
    } else if (c === "\n") {
      out += "\\n";
    } else if (c === "\r") {
      out += "\\r";
    } else if (c === "\t") {
      out += "\\t";
    } else {
      out += c;
    }
  }
  return out + "'";
}

/** Canonical literal form of a live value, or null when not a literal. */
export function canonicalJsValue(value: unknown): string | null {
  if (typeof value === "string") {
    return canonicalStringLiteral(value);
  }
  if (typeof value === "number" && Number.isFinite(value)) {
    return shortestNumber(value);
  }
  if (typeof value === "boolean") {
    return value ? "true" : "false";
  }
  return null;
}
