"use strict";
/** Report delivery: one POST, one retry, then an in-page fallback. */
Object.defineProperty(exports, "__esModule", { value: true });
exports.postReport = postReport;
exports.renderFallback = renderFallback;
async function postReport(url, report, fetchFn) {
    const body = JSON.stringify(report);
    for (let attempt = 0; attempt < 2; attempt++) {
        try {
            const response = await fetchFn(url, {
                method: "POST",
                headers: { "Content-Type": "application/json" },
                body,
            });
            if (response.ok) {
                return true;
            }
        }
        catch {
            // fall through to retry, then to the fallback
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
