import assert from "node:assert/strict";
import { test } from "node:test";

import {
  CheckExecutor,
  CheckJson,
  CheckObservation,
  PlanJson,
  TargetJson,
} from "../src/types";
import { calibrate, runPlan, Semaphore, validateReport } from "../src/walk";
import { FixtureNetwork, TableExecutor } from "./tableexec";

const NETWORK: FixtureNetwork = {
  "10.0.0.1:80": {
    "a/logo.png": { type: "image", width: 10, height: 20 },
    "a/app.js": {
      type: "js",
      symbols: [{ name: "V", kind: "variable", value: "'1'", source_hash: null }],
    },
  },
  "10.0.0.2:80": {
    "b/style.css": {
      type: "css",
      directives: [{
        selector_kind: "id", selector_name: "hdr",
        property: "color", value: "rgb(1, 2, 3)",
      }],
    },
  },
};

const LOGO_CHECK: CheckJson = {
  path: "a/logo.png",
  type: "image",
  checks: [{ kind: "image_dimension", width: 10, height: 20 }],
};

function makePlan(): PlanJson {
  return {
    schema_version: 1,
    targets: [
      { host: "10.0.0.1", port: 80, scheme: "http" },
      { host: "10.0.0.2", port: 80, scheme: "http" },
      { host: "10.0.0.99", port: 80, scheme: "http" },
    ],
    discovery: { timeout_ms: 100, probe_path: "/favicon.ico" },
    limits: { max_parallel_checks: 4, per_check_timeout_ms: 100 },
    tree: {
      schema_version: 1,
      config: { max_subfeatures: 5, max_depth: 32 },
      root: {
        check: LOGO_CHECK,
        match: {
          cluster: ["acme:a:1.0"],
          confirm: [LOGO_CHECK],
        },
        mismatch: {
          check: {
            path: "b/style.css",
            type: "css",
            checks: [{
              kind: "css_directive", selector_kind: "id", selector_name: "hdr",
              element_type: "div", property: "color",
              expected_value: "rgb(1, 2, 3)",
            }],
          },
          match: { cluster: ["acme:b:1.0"] },
          mismatch: { cluster: ["acme:a:0.9", "acme:b:0.9"] },
        },
      },
    },
  };
}

test("walks each target to the right leaf", async () => {
  const report = await runPlan(makePlan(), new TableExecutor(NETWORK));
  validateReport(report);
  const [a, b, dead] = report.targets;

  assert.equal(a.alive, true);
  assert.deepEqual(a.cluster, ["acme:a:1.0"]);
  assert.deepEqual(a.path_taken, [["a/logo.png", "match"]]);
  assert.equal(a.requests_used, 1);
  assert.equal(a.caveat, false);

  assert.equal(b.alive, true);
  assert.deepEqual(b.cluster, ["acme:b:1.0"]);
  assert.deepEqual(b.path_taken, [
    ["a/logo.png", "mismatch"],
    ["b/style.css", "match"],
  ]);
  assert.equal(b.requests_used, 2);

  assert.equal(dead.alive, false);
  assert.equal(dead.requests_used, 0);
  assert.ok(dead.errors.length > 0);
});

test("caveat fires when leaf confirmation fails", async () => {
  // an impostor serving the logo with other dimensions than the cluster's
  const network: FixtureNetwork = {
    "10.0.0.1:80": {
      "a/logo.png": { type: "image", width: 10, height: 21 },
      "b/style.css": NETWORK["10.0.0.2:80"]["b/style.css"],
    },
  };
  const plan = makePlan();
  plan.targets = [{ host: "10.0.0.1", port: 80, scheme: "http" }];
  const report = await runPlan(plan, new TableExecutor(network));
  const result = report.targets[0];
  assert.deepEqual(result.cluster, ["acme:b:1.0"]);
  assert.equal(result.caveat, false); // that leaf carries no confirm list

  // now hit the confirming leaf with a tampered file
  const plan2 = makePlan();
  plan2.targets = [{ host: "10.0.0.1", port: 80, scheme: "http" }];
  (plan2.tree.root as { match: { confirm: CheckJson[] } }).match.confirm = [{
    path: "a/app.js",
    type: "js",
    checks: [{
      kind: "js_symbol", name: "V", symbol_kind: "variable",
      expected_value: "'2'",
    }],
  }];
  const report2 = await runPlan(plan2, new TableExecutor(NETWORK));
  assert.equal(report2.targets[0].caveat, true);
});

test("report of an empty plan posts cleanly", async () => {
  const plan = makePlan();
  plan.targets = [];
  const report = await runPlan(plan, new TableExecutor(NETWORK));
  validateReport(report);
  assert.deepEqual(report.targets, []);
});

test("semaphore bounds concurrent checks", async () => {
  let inFlight = 0;
  let peak = 0;

  class SlowExecutor implements CheckExecutor {
    async discover(): Promise<boolean> {
      return true;
    }

    async execute(
      _target: TargetJson,
      check: CheckJson,
    ): Promise<CheckObservation> {
      inFlight++;
      peak = Math.max(peak, inFlight);
      await new Promise((resolve) => setTimeout(resolve, 5));
      inFlight--;
      return {
        loaded: true,
        observations: check.checks.map(() => ({
          kind: "image" as const, width: 10, height: 20,
        })),
      };
    }
  }

  const plan = makePlan();
  plan.limits.max_parallel_checks = 2;
  plan.targets = Array.from({ length: 8 }, (_, i) => ({
    host: `10.1.0.${i}`, port: 80, scheme: "http",
  }));
  const report = await runPlan(plan, new SlowExecutor(), { confirmLeaves: false });
  validateReport(report);
  assert.ok(peak <= 2, `peak concurrency ${peak}`);
});

test("semaphore releases on failure", async () => {
  const gate = new Semaphore(1);
  await assert.rejects(gate.run(async () => {
    throw new Error("boom");
  }));
  // still usable afterwards
  const value = await gate.run(async () => 7);
  assert.equal(value, 7);
});

test("executor failures record errors and walk the mismatch branch", async () => {
  class FailingExecutor extends TableExecutor {
    override async execute(): Promise<CheckObservation> {
      throw new Error("network exploded");
    }
  }
  const plan = makePlan();
  plan.targets = [{ host: "10.0.0.1", port: 80, scheme: "http" }];
  const report = await runPlan(plan, new FailingExecutor(NETWORK));
  const result = report.targets[0];
  assert.equal(result.alive, true);
  assert.ok(result.errors.length > 0);
  assert.ok(result.path_taken.every(([, outcome]) => outcome === "mismatch"));
  validateReport(report);
});

test("calibration reports unverifiable subfeatures as divergent", async () => {
  const target: TargetJson = { host: "10.0.0.1", port: 80, scheme: "http" };
  const checks: CheckJson[] = [
    LOGO_CHECK,
    {
      path: "a/app.js",
      type: "js",
      checks: [
        { kind: "js_symbol", name: "V", symbol_kind: "variable", expected_value: "'1'" },
        { kind: "js_symbol", name: "GONE", symbol_kind: "function" },
      ],
    },
  ];
  const divergence = await calibrate(
    "acme:a:1.0", target, checks, new TableExecutor(NETWORK), 100);
  assert.equal(divergence.schema_version, 1);
  assert.deepEqual(divergence.divergent, [{
    service: "acme:a:1.0",
    path: "a/app.js",
    subfeature: { kind: "js_symbol", name: "GONE", symbol_kind: "function" },
  }]);
});

test("unsupported plan schema rejected", async () => {
  const plan = makePlan();
  plan.schema_version = 9;
  await assert.rejects(runPlan(plan, new TableExecutor(NETWORK)));
});
