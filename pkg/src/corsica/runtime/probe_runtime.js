"use strict";
(() => {
  // src/canonical.ts
  var NAMED_COLORS = {
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
    orange: [255, 165, 0]
  };
  var COLOR_PROPS = /* @__PURE__ */ new Set(["color", "background-color"]);
  var LENGTH_PROPS = /* @__PURE__ */ new Set([
    "margin-top",
    "margin-left",
    "padding-top",
    "padding-left",
    "width",
    "height",
    "font-size",
    "border-top-width",
    "line-height"
  ]);
  var NUMBER_PROPS = /* @__PURE__ */ new Set(["opacity", "z-index"]);
  var KEYWORD_PROPS = /* @__PURE__ */ new Set(["display", "position", "float", "text-align"]);
  var HEX_RE = /^#([0-9a-fA-F]{3,8})$/;
  var RGB_RE = /^rgba?\(\s*(\d{1,3})\s*,\s*(\d{1,3})\s*,\s*(\d{1,3})\s*(?:,\s*([0-9.]+)\s*)?\)$/i;
  var PX_RE = /^([+-]?(?:\d+\.?\d*|\.\d+))px$/i;
  var NUMBER_RE = /^[+-]?(?:\d+\.?\d*|\.\d+)$/;
  var KEYWORD_RE = /^[A-Za-z-]+$/;
  function shortestNumber(x) {
    if (Number.isInteger(x) && Math.abs(x) < 1e15) {
      return String(x);
    }
    return String(x);
  }
  function canonicalColor(value) {
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
        return `rgba(${r}, ${g}, ${b}, ${shortestNumber(Math.round(a / 255 * 1e3) / 1e3)})`;
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
      if (alpha === void 0 || parseFloat(alpha) === 1) {
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
  function canonicalCssValue(property, raw) {
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
  function canonicalStringLiteral(content) {
    let out = "'";
    for (const c of content) {
      if (c === "\\" || c === "'") {
        out += "\\" + c;
      } else if (c === "\n") {
        out += "\\n";
      } else if (c === "\r") {
        out += "\\r";
      } else if (c === "	") {
        out += "\\t";
      } else {
        out += c;
      }
    }
    return out + "'";
  }
  function canonicalJsValue(value) {
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

  // src/sha256.ts
  var K = new Uint32Array([
    1116352408,
    1899447441,
    3049323471,
    3921009573,
    961987163,
    1508970993,
    2453635748,
    2870763221,
    3624381080,
    310598401,
    607225278,
    1426881987,
    1925078388,
    2162078206,
    2614888103,
    3248222580,
    3835390401,
    4022224774,
    264347078,
    604807628,
    770255983,
    1249150122,
    1555081692,
    1996064986,
    2554220882,
    2821834349,
    2952996808,
    3210313671,
    3336571891,
    3584528711,
    113926993,
    338241895,
    666307205,
    773529912,
    1294757372,
    1396182291,
    1695183700,
    1986661051,
    2177026350,
    2456956037,
    2730485921,
    2820302411,
    3259730800,
    3345764771,
    3516065817,
    3600352804,
    4094571909,
    275423344,
    430227734,
    506948616,
    659060556,
    883997877,
    958139571,
    1322822218,
    1537002063,
    1747873779,
    1955562222,
    2024104815,
    2227730452,
    2361852424,
    2428436474,
    2756734187,
    3204031479,
    3329325298
  ]);
  function utf8Bytes(text) {
    if (typeof TextEncoder !== "undefined") {
      return new TextEncoder().encode(text);
    }
    const out = [];
    for (let i = 0; i < text.length; i++) {
      let code = text.codePointAt(i);
      if (code > 65535) {
        i++;
      }
      if (code < 128) {
        out.push(code);
      } else if (code < 2048) {
        out.push(192 | code >> 6, 128 | code & 63);
      } else if (code < 65536) {
        out.push(224 | code >> 12, 128 | code >> 6 & 63, 128 | code & 63);
      } else {
        out.push(
          240 | code >> 18,
          128 | code >> 12 & 63,
          128 | code >> 6 & 63,
          128 | code & 63
        );
      }
    }
    return Uint8Array.from(out);
  }
  function rotr(x, n) {
    return x >>> n | x << 32 - n;
  }
  function sha256Hex(text) {
    const data = utf8Bytes(text);
    const bitLength = data.length * 8;
    const paddedLength = (data.length + 8 >> 6) + 1 << 6;
    const buffer = new Uint8Array(paddedLength);
    buffer.set(data);
    buffer[data.length] = 128;
    const view = new DataView(buffer.buffer);
    view.setUint32(paddedLength - 8, Math.floor(bitLength / 4294967296));
    view.setUint32(paddedLength - 4, bitLength >>> 0);
    const h = new Uint32Array([
      1779033703,
      3144134277,
      1013904242,
      2773480762,
      1359893119,
      2600822924,
      528734635,
      1541459225
    ]);
    const w = new Uint32Array(64);
    for (let offset = 0; offset < paddedLength; offset += 64) {
      for (let i = 0; i < 16; i++) {
        w[i] = view.getUint32(offset + i * 4);
      }
      for (let i = 16; i < 64; i++) {
        const s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ w[i - 15] >>> 3;
        const s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ w[i - 2] >>> 10;
        w[i] = w[i - 16] + s0 + w[i - 7] + s1 >>> 0;
      }
      let [a, b, c, d, e, f, g, hh] = h;
      for (let i = 0; i < 64; i++) {
        const s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
        const ch = e & f ^ ~e & g;
        const temp1 = hh + s1 + ch + K[i] + w[i] >>> 0;
        const s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
        const maj = a & b ^ a & c ^ b & c;
        const temp2 = s0 + maj >>> 0;
        hh = g;
        g = f;
        f = e;
        e = d + temp1 >>> 0;
        d = c;
        c = b;
        b = a;
        a = temp1 + temp2 >>> 0;
      }
      h[0] = h[0] + a >>> 0;
      h[1] = h[1] + b >>> 0;
      h[2] = h[2] + c >>> 0;
      h[3] = h[3] + d >>> 0;
      h[4] = h[4] + e >>> 0;
      h[5] = h[5] + f >>> 0;
      h[6] = h[6] + g >>> 0;
      h[7] = h[7] + hh >>> 0;
    }
    return Array.from(h, (x) => x.toString(16).padStart(8, "0")).join("");
  }

  // src/types.ts
  function isLeaf(node) {
    return node.cluster !== void 0;
  }
  function targetOrigin(target) {
    return `${target.scheme}://${target.host}:${target.port}`;
  }

  // src/dom.ts
  var DomExecutor = class {
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
      const img = this.doc.createElement("img");
      const loading = this.waitForLoad(img, timeoutMs);
      img.src = `${targetOrigin(target)}${probePath}`;
      const outcome = await loading;
      img.removeAttribute("src");
      return outcome !== "timeout";
    }
    async execute(target, check, timeoutMs) {
      const url = `${targetOrigin(target)}/${check.path}`;
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
        observation.observations.push(
          outcome === "load" ? { kind: "image", width: img.naturalWidth, height: img.naturalHeight } : { kind: "unavailable" }
        );
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
      } finally {
        link.remove();
      }
      return observation;
    }
    probeDirective(sub) {
      const el = this.doc.createElement(sub.element_type);
      if (sub.selector_kind === "id") {
        el.id = sub.selector_name;
      } else if (sub.selector_kind === "class") {
        el.className = sub.selector_name;
      }
      this.doc.body.appendChild(el);
      try {
        const style = this.win.getComputedStyle(el);
        return { kind: "css", value: style.getPropertyValue(sub.property) };
      } finally {
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
      } finally {
        script.remove();
      }
      return observation;
    }
    probeSymbol(name) {
      const scope = this.win;
      if (!(name in scope)) {
        return {
          kind: "js",
          present: false,
          isFunction: false,
          canonicalValue: null,
          sourceHash: null
        };
      }
      const value = scope[name];
      const isFunction = typeof value === "function";
      return {
        kind: "js",
        present: true,
        isFunction,
        canonicalValue: isFunction ? null : canonicalJsValue(value),
        sourceHash: isFunction ? sha256Hex(String(value)) : null
      };
    }
  };

  // src/report.ts
  async function postReport(url, report, fetchFn) {
    const body = JSON.stringify(report);
    for (let attempt = 0; attempt < 2; attempt++) {
      try {
        const response = await fetchFn(url, {
          method: "POST",
          headers: { "Content-Type": "application/json" },
          body
        });
        if (response.ok) {
          return true;
        }
      } catch {
      }
    }
    return false;
  }
  function renderFallback(doc, report) {
    const container = doc.getElementById("probe-status") ?? doc.body;
    container.textContent = "report delivery failed; results below";
    const pre = doc.createElement("pre");
    pre.textContent = JSON.stringify(report, null, 2);
    container.appendChild(pre);
  }

  // src/compare.ts
  function compareSubfeature(sub, obs) {
    if (obs.kind === "unavailable") {
      return "mismatch";
    }
    if (sub.kind === "image_dimension") {
      if (obs.kind !== "image") {
        return "mismatch";
      }
      return obs.width === sub.width && obs.height === sub.height ? "match" : "mismatch";
    }
    if (sub.kind === "css_directive") {
      if (obs.kind !== "css" || obs.value == null || obs.value === "") {
        return "mismatch";
      }
      if (obs.value === sub.expected_value) {
        return "match";
      }
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
    if (sub.expected_value !== void 0 && obs.canonicalValue !== sub.expected_value) {
      return "mismatch";
    }
    if (sub.source_hash !== void 0 && obs.sourceHash !== sub.source_hash) {
      return "mismatch";
    }
    return "match";
  }
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

  // src/walk.ts
  var REPORT_SCHEMA_VERSION = 1;
  var DIVERGENCE_SCHEMA_VERSION = 1;
  var Semaphore = class {
    constructor(limit) {
      this.waiters = [];
      this.available = Math.max(1, limit);
    }
    async acquire() {
      if (this.available > 0) {
        this.available--;
        return;
      }
      await new Promise((resolve) => this.waiters.push(resolve));
    }
    release() {
      const next = this.waiters.shift();
      if (next) {
        next();
      } else {
        this.available++;
      }
    }
    async run(fn) {
      await this.acquire();
      try {
        return await fn();
      } finally {
        this.release();
      }
    }
  };
  async function probeTarget(target, plan, executor, gate, options) {
    const result = {
      host: target.host,
      port: target.port,
      scheme: target.scheme,
      alive: false,
      path_taken: [],
      cluster: [],
      requests_used: 0,
      errors: [],
      caveat: false
    };
    let alive = false;
    try {
      alive = await gate.run(
        () => executor.discover(target, plan.discovery.probe_path, plan.discovery.timeout_ms)
      );
    } catch (err) {
      result.errors.push(`discovery failed: ${String(err)}`);
      return result;
    }
    if (!alive) {
      result.errors.push(
        `discovery probe ${plan.discovery.probe_path} timed out after ${plan.discovery.timeout_ms} ms`
      );
      return result;
    }
    result.alive = true;
    const timeout = plan.limits.per_check_timeout_ms;
    let node = plan.tree.root;
    while (!isLeaf(node)) {
      const check = node.check;
      let outcome = "mismatch";
      try {
        const observation = await gate.run(
          () => executor.execute(target, check, timeout)
        );
        outcome = checkOutcome(check.checks, observation);
      } catch (err) {
        result.errors.push(`check ${check.path} failed: ${String(err)}`);
      }
      result.path_taken.push([check.path, outcome]);
      node = outcome === "match" ? node.match : node.mismatch;
    }
    result.cluster = node.cluster.slice();
    result.requests_used = result.path_taken.length;
    if (options.confirmLeaves !== false && node.confirm) {
      for (const confirm of node.confirm) {
        let outcome = "mismatch";
        try {
          const observation = await gate.run(
            () => executor.execute(target, confirm, timeout)
          );
          outcome = checkOutcome(confirm.checks, observation);
        } catch (err) {
          result.errors.push(`confirm ${confirm.path} failed: ${String(err)}`);
        }
        if (outcome === "mismatch") {
          result.caveat = true;
          break;
        }
      }
    }
    return result;
  }
  async function runPlan(plan, executor, options = {}) {
    if (plan.schema_version !== 1) {
      throw new Error(`unsupported plan schema_version: ${plan.schema_version}`);
    }
    const gate = new Semaphore(plan.limits.max_parallel_checks);
    const results = await Promise.all(
      plan.targets.map(
        (target) => probeTarget(target, plan, executor, gate, options)
      )
    );
    return {
      schema_version: REPORT_SCHEMA_VERSION,
      counts_discovery: false,
      targets: results
    };
  }
  async function calibrate(serviceToken, target, checks, executor, timeoutMs) {
    const divergent = [];
    for (const check of checks) {
      const observation = await executor.execute(target, check, timeoutMs);
      check.checks.forEach((sub, i) => {
        const obs = observation.observations[i] ?? { kind: "unavailable" };
        if (!observation.loaded || checkOutcome([sub], { loaded: observation.loaded, observations: [obs] }) === "mismatch") {
          divergent.push({ service: serviceToken, path: check.path, subfeature: sub });
        }
      });
    }
    return { schema_version: DIVERGENCE_SCHEMA_VERSION, divergent };
  }
  function validateReport(report) {
    if (report.schema_version !== REPORT_SCHEMA_VERSION) {
      throw new Error(`bad report schema_version: ${report.schema_version}`);
    }
    for (const entry of report.targets) {
      const expected = entry.path_taken.length + (report.counts_discovery ? 1 : 0);
      if (entry.requests_used !== expected) {
        throw new Error(
          `requests_used=${entry.requests_used} inconsistent with ${entry.path_taken.length} hops`
        );
      }
      for (const [, outcome] of entry.path_taken) {
        if (outcome !== "match" && outcome !== "mismatch") {
          throw new Error(`bad outcome: ${outcome}`);
        }
      }
    }
  }

  // src/main.ts
  async function start() {
    const win = window;
    const plan = win.PROBE_PLAN;
    const reportUrl = win.REPORT_URL;
    if (!plan || !reportUrl) {
      return;
    }
    const status = document.getElementById("probe-status");
    const executor = new DomExecutor(document, win);
    const report = await runPlan(plan, executor);
    validateReport(report);
    const delivered = await postReport(
      reportUrl,
      report,
      (url, init) => win.fetch(url, init)
    );
    if (!delivered) {
      renderFallback(document, report);
    } else if (status) {
      status.textContent = "done";
    }
  }
  if (typeof window !== "undefined" && typeof document !== "undefined") {
    window.CORSICA_RUNTIME = {
      runPlan,
      calibrate,
      validateReport,
      makeDomExecutor: () => new DomExecutor(document, window)
    };
    if (document.readyState === "loading") {
      document.addEventListener("DOMContentLoaded", () => void start());
    } else {
      void start();
    }
  }
})();
