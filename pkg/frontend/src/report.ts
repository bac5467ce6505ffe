/** Report delivery: one POST, one retry, then an in-page fallback. */

import { ReportJson } from "./types";

export type FetchLike = (
  url: string,
  init: { method: string; headers: Record<string, string>; body: string },
) => Promise<{ ok: boolean }>;

export async function postReport(
  url: string,
  report: ReportJson,
  fetchFn: FetchLike,
): Promise<boolean> {
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
    } catch {
      // fall through to retry, then to the fallback
    }
  }
  return false;
}

export function renderFallback(doc: Document, report: ReportJson): void {
  const container = doc.getElementById("probe-status") ?? doc.body;
  container.textContent = "report delivery failed; results below";
  const pre = doc.createElement("pre");
  pre.textContent = JSON.stringify(report, null, 2);
  container.appendChild(pre);
}
