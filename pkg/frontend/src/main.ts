/** Browser entry point: reads the embedded plan, scans, reports. */

import { DomExecutor } from "./dom";
import { postReport, renderFallback } from "./report";
import { PlanJson } from "./types";
import { calibrate, runPlan, validateReport } from "./walk";

declare global {
  interface Window {
    PROBE_PLAN?: PlanJson;
    REPORT_URL?: string;
    CORSICA_RUNTIME?: unknown;
  }
}

async function start(): Promise<void> {
  const win = window as Window & typeof globalThis;
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
    (url, init) => win.fetch(url, init),
  );
  if (!delivered) {
    renderFallback(document, report);
  } else if (status) {
    status.textContent = "done";
  }
}

if (typeof window !== "undefined" && typeof document !== "undefined") {
  // operator pages (e.g. the normalization loop) can drive the runtime
  // directly instead of relying on an embedded plan
  window.CORSICA_RUNTIME = {
    runPlan,
    calibrate,
    validateReport,
    makeDomExecutor: () =>
      new DomExecutor(document, window as Window & typeof globalThis),
  };
  if (document.readyState === "loading") {
    document.addEventListener("DOMContentLoaded", () => void start());
  } else {
    void start();
  }
}
