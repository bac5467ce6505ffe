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

import { canonicalJsValue } from "./canonical";
import { sha256Hex } from "./sha256";
import {
  CheckExecutor,
  CheckJson,
  CheckObservation,
  SubfeatureJson,
  SubObservation,
  TargetJson,
  targetOrigin,
} from "./types";

type LoadResult = "load" | "error" | "timeout";

export class DomExecutor implements CheckExecutor {
  constructor(
    private readonly doc: Document,
    private readonly win: Window & typeof globalThis,
  ) {}

  private waitForLoad(
    element: HTMLElement & { onload: unknown; onerror: unknown },
    timeoutMs: number,
  ): Promise<LoadResult> {
    return new Promise((resolve) => {
      let settled = false;
      const finish = (outcome: LoadResult) => {
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

  async discover(
    target: TargetJson,
    probePath: string,
    timeoutMs: number,
  ): Promise<boolean> {
    // pingjs-style: any load event, success or error, before the timeout
    // means something answered on that host:port
    const img = this.doc.createElement("img") as HTMLImageElement;
    const loading = this.waitForLoad(img, timeoutMs);
    img.src = `${targetOrigin(target)}${probePath}`;
    const outcome = await loading;
    img.removeAttribute("src");
    return outcome !== "timeout";
  }

  async execute(
    target: TargetJson,
    check: CheckJson,
    timeoutMs: number,
  ): Promise<CheckObservation> {
    const url = `${targetOrigin(target)}/${check.path}`;
    if (check.type === "image") {
      return this.executeImage(url, check, timeoutMs);
    }
    if (check.type === "css") {
      return this.executeCss(url, check, timeoutMs);
    }
    return this.executeJs(url, check, timeoutMs);
  }

  private async executeImage(
    url: string,
    check: CheckJson,
    timeoutMs: number,
  ): Promise<CheckObservation> {
    const img = this.doc.createElement("img") as HTMLImageElement;
    const loading = this.waitForLoad(img, timeoutMs);
    img.src = url;
    const outcome = await loading;
    const observation: CheckObservation = { loaded: outcome === "load", observations: [] };
    for (const _ of check.checks) {
      observation.observations.push(
        outcome === "load"
          ? { kind: "image", width: img.naturalWidth, height: img.naturalHeight }
          : { kind: "unavailable" },
      );
    }
    img.removeAttribute("src");
    return observation;
  }

  private async executeCss(
    url: string,
    check: CheckJson,
    timeoutMs: number,
  ): Promise<CheckObservation> {
    const link = this.doc.createElement("link") as HTMLLinkElement;
    link.rel = "stylesheet";
    const loading = this.waitForLoad(link as never, timeoutMs);
    link.href = url;
    this.doc.head.appendChild(link);
    const outcome = await loading;
    const observation: CheckObservation = { loaded: outcome === "load", observations: [] };
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

  private probeDirective(sub: SubfeatureJson & { kind: "css_directive" }): SubObservation {
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
      // a fresh probe element per directive keeps the page light
      el.remove();
    }
  }

  private async executeJs(
    url: string,
    check: CheckJson,
    timeoutMs: number,
  ): Promise<CheckObservation> {
    const script = this.doc.createElement("script") as HTMLScriptElement;
    const loading = this.waitForLoad(script as never, timeoutMs);
    script.src = url;
    this.doc.head.appendChild(script);
    const outcome = await loading;
    const observation: CheckObservation = { loaded: outcome === "load", observations: [] };
    try {
      for (const sub of check.checks) {
        if (outcome !== "load" || sub.kind !== "js_symbol") {
          observation.observations.push({ kind: "unavailable" });
          continue;
        }
        observation.observations.push(this.probeSymbol(sub.name));
      }
    } finally {
      // note: removing the element does not undo executed globals; name
      // collisions across probed files are normalized out upstream
      script.remove();
    }
    return observation;
  }

  private probeSymbol(name: string): SubObservation {
    const scope = this.win as unknown as Record<string, unknown>;
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
      canonicalValue: isFunction ? null : canonicalJsValue(value),
      sourceHash: isFunction ? sha256Hex(String(value)) : null,
    };
  }
}
