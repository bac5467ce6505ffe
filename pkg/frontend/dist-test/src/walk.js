"use strict";
/**
 * Plan execution: host discovery, tree walking, report assembly.
 * Everything network-shaped is behind CheckExecutor so the walk runs
 * identically in a browser and under test harnesses.
 */
Object.defineProperty(exports, "__esModule", { value: true });
exports.Semaphore = exports.DIVERGENCE_SCHEMA_VERSION = exports.REPORT_SCHEMA_VERSION = void 0;
exports.runPlan = runPlan;
exports.calibrate = calibrate;
exports.validateReport = validateReport;
const compare_1 = require("./compare");
const types_1 = require("./types");
exports.REPORT_SCHEMA_VERSION = 1;
exports.DIVERGENCE_SCHEMA_VERSION = 1;
/** Counting semaphore bounding in-flight resource loads. */
class Semaphore {
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
        }
        else {
            this.available++;
        }
    }
    async run(fn) {
        await this.acquire();
        try {
            return await fn();
        }
        finally {
            this.release();
        }
    }
}
exports.Semaphore = Semaphore;
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
        caveat: false,
    };
    let alive = false;
    try {
        alive = await gate.run(() => executor.discover(target, plan.discovery.probe_path, plan.discovery.timeout_ms));
    }
    catch (err) {
        result.errors.push(`discovery failed: ${String(err)}`);
        return result;
    }
    if (!alive) {
        result.errors.push(`discovery probe ${plan.discovery.probe_path} timed out after ` +
            `${plan.discovery.timeout_ms} ms`);
        return result;
    }
    result.alive = true;
    const timeout = plan.limits.per_check_timeout_ms;
    let node = plan.tree.root;
    while (!(0, types_1.isLeaf)(node)) {
        const check = node.check;
        let outcome = "mismatch";
        try {
            const observation = await gate.run(() => executor.execute(target, check, timeout));
            outcome = (0, compare_1.checkOutcome)(check.checks, observation);
        }
        catch (err) {
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
            let outcome = "mismatch";
            try {
                const observation = await gate.run(() => executor.execute(target, confirm, timeout));
                outcome = (0, compare_1.checkOutcome)(confirm.checks, observation);
            }
            catch (err) {
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
    const results = await Promise.all(plan.targets.map((target) => probeTarget(target, plan, executor, gate, options)));
    return {
        schema_version: exports.REPORT_SCHEMA_VERSION,
        counts_discovery: false,
        targets: results,
    };
}
/**
 * Calibration mode: probe a known-good origin with its own extracted
 * subfeatures; whatever fails to verify there is engine-divergent and
 * goes into the normalization report.
 */
async function calibrate(serviceToken, target, checks, executor, timeoutMs) {
    const divergent = [];
    for (const check of checks) {
        const observation = await executor.execute(target, check, timeoutMs);
        check.checks.forEach((sub, i) => {
            const obs = observation.observations[i] ?? { kind: "unavailable" };
            if (!observation.loaded ||
                (0, compare_1.checkOutcome)([sub], { loaded: observation.loaded, observations: [obs] }) === "mismatch") {
                divergent.push({ service: serviceToken, path: check.path, subfeature: sub });
            }
        });
    }
    return { schema_version: exports.DIVERGENCE_SCHEMA_VERSION, divergent };
}
/** Structural validation mirroring the toolchain's report parser. */
function validateReport(report) {
    if (report.schema_version !== exports.REPORT_SCHEMA_VERSION) {
        throw new Error(`bad report schema_version: ${report.schema_version}`);
    }
    for (const entry of report.targets) {
        const expected = entry.path_taken.length + (report.counts_discovery ? 1 : 0);
        if (entry.requests_used !== expected) {
            throw new Error(`requests_used=${entry.requests_used} inconsistent with ` +
                `${entry.path_taken.length} hops`);
        }
        for (const [, outcome] of entry.path_taken) {
            if (outcome !== "match" && outcome !== "mismatch") {
                throw new Error(`bad outcome: ${outcome}`);
            }
        }
    }
}
