"use strict";
/** Browser entry point: reads the embedded plan, scans, reports. */
Object.defineProperty(exports, "__esModule", { value: true });
const dom_1 = require("./dom");
const report_1 = require("./report");
const walk_1 = require("./walk");
async function start() {
    const win = window;
    const plan = win.PROBE_PLAN;
    const reportUrl = win.REPORT_URL;
    if (!plan || !reportUrl) {
        return;
    }
    const status = document.getElementById("probe-status");
    const executor = new dom_1.DomExecutor(document, win);
    const report = await (0, walk_1.runPlan)(plan, executor);
    (0, walk_1.validateReport)(report);
    const delivered = await (0, report_1.postReport)(reportUrl, report, (url, init) => win.fetch(url, init));
    if (!delivered) {
        (0, report_1.renderFallback)(document, report);
    }
    else if (status) {
        status.textContent = "done";
    }
}
if (typeof window !== "undefined" && typeof document !== "undefined") {
    // operator pages (e.g. the normalization loop) can drive the runtime
    // directly instead of relying on an embedded plan
    window.CORSICA_RUNTIME = {
        runPlan: walk_1.runPlan,
        calibrate: walk_1.calibrate,
        validateReport: walk_1.validateReport,
        makeDomExecutor: () => new dom_1.DomExecutor(document, window),
    };
    if (document.readyState === "loading") {
        document.addEventListener("DOMContentLoaded", () => void start());
    }
    else {
        void start();
    }
}
