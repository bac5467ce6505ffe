/**
 * Plan execution: host discovery, tree walking, report assembly.
 * Everything network-shaped is behind CheckExecutor so the walk runs
 * identically in a browser and under test harnesses.
 */

import { checkOutcome } from "./compare";
import {
  CheckExecutor,
  CheckJson,
  DivergenceEntry,
  DivergenceReport,
  isLeaf,
  Outcome,
  PlanJson,
  ReportJson,
  SubfeatureJson,
  TargetJson,
  TargetResultJson,
} from "./types";

export const REPORT_SCHEMA_VERSION = 1;
export const DIVERGENCE_SCHEMA_VERSION = 1;

/** Counting semaphore bounding in-flight resource loads. */
export class Semaphore {
  private available: number;
  private waiters: (() => void)[] = [];

  constructor(limit: number) {
    this.available = Math.max(1, limit);
  }

  async acquire(): Promise<void> {
    if (this.available > 0) {
      this.available--;
      return;
    }
    await new Promise<void>((resolve) => this.waiters.push(resolve));
  }

  release(): void {
    const next = this.waiters.shift();
    if (next) {
      next();
    } else {
      this.available++;
    }
  }

  async run<T>(fn: () => Promise<T>): Promise<T> {
    await this.acquire();
    try {
      return await fn();
    } finally {
      this.release();
    }
  }
}

export interface RunOptions {
  /** replay leaf confirmation checks to set the caveat flag */
  confirmLeaves?: boolean;
}

async function probeTarget(
  target: TargetJson,
  plan: PlanJson,
  executor: CheckExecutor,
  gate: Semaphore,
  options: RunOptions,
): Promise<TargetResultJson> {
  const result: TargetResultJson = {
    host: target.host,
    port: target.port,
    scheme: target.scheme,
    alive: false,
    path_taken: [],
    cluster: [],
    requests_used: 0,
    errors: [],
    caveat: false,
  };
  let alive = false;
  try {
    alive = await gate.run(() =>
      executor.discover(target, plan.discovery.probe_path, plan.discovery.timeout_ms),
    );
  } catch (err) {
    result.errors.push(`discovery failed: ${String(err)}`);
    return result;
  }
  if (!alive) {
    result.errors.push(
      `discovery probe ${plan.discovery.probe_path} timed out after ` +
        `${plan.discovery.timeout_ms} ms`,
    );
    return result;
  }
  result.alive = true;

  const timeout = plan.limits.per_check_timeout_ms;
  let node = plan.tree.root;
  while (!isLeaf(node)) {
    const check = node.check;
    let outcome: Outcome = "mismatch";
    try {
      const observation = await gate.run(() =>
        executor.execute(target, check, timeout),
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
    // extra verification traffic; deliberately not counted as requests
    for (const confirm of node.confirm) {
      let outcome: Outcome = "mismatch";
      try {
        const observation = await gate.run(() =>
          executor.execute(target, confirm, timeout),
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

export async function runPlan(
  plan: PlanJson,
  executor: CheckExecutor,
  options: RunOptions = {},
): Promise<ReportJson> {
  if (plan.schema_version !== 1) {
    throw new Error(`unsupported plan schema_version: ${plan.schema_version}`);
  }
  const gate = new Semaphore(plan.limits.max_parallel_checks);
  const results = await Promise.all(
    plan.targets.map((target) =>
      probeTarget(target, plan, executor, gate, options),
    ),
  );
  return {
    schema_version: REPORT_SCHEMA_VERSION,
    counts_discovery: false,
    targets: results,
  };
}

/**
 * Calibration mode: probe a known-good origin with its own extracted
 * subfeatures; whatever fails to verify there is engine-divergent and
 * goes into the normalization report.
 */
export async function calibrate(
  serviceToken: string,
  target: TargetJson,
  checks: CheckJson[],
  executor: CheckExecutor,
  timeoutMs: number,
): Promise<DivergenceReport> {
  const divergent: DivergenceEntry[] = [];
  for (const check of checks) {
    const observation = await executor.execute(target, check, timeoutMs);
    check.checks.forEach((sub: SubfeatureJson, i: number) => {
      const obs = observation.observations[i] ?? { kind: "unavailable" as const };
      if (!observation.loaded ||
          checkOutcome([sub], { loaded: observation.loaded, observations: [obs] }) === "mismatch") {
        divergent.push({ service: serviceToken, path: check.path, subfeature: sub });
      }
    });
  }
  return { schema_version: DIVERGENCE_SCHEMA_VERSION, divergent };
}

/** Structural validation mirroring the toolchain's report parser. */
export function validateReport(report: ReportJson): void {
  if (report.schema_version !== REPORT_SCHEMA_VERSION) {
    throw new Error(`bad report schema_version: ${report.schema_version}`);
  }
  for (const entry of report.targets) {
    const expected = entry.path_taken.length + (report.counts_discovery ? 1 : 0);
    if (entry.requests_used !== expected) {
      throw new Error(
        `requests_used=${entry.requests_used} inconsistent with ` +
          `${entry.path_taken.length} hops`,
      );
    }
    for (const [, outcome] of entry.path_taken) {
      if (outcome !== "match" && outcome !== "mismatch") {
        throw new Error(`bad outcome: ${outcome}`);
      }
    }
  }
}
