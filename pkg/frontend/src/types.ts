/** JSON wire formats shared with the planning toolchain. */

export type SelectorKind = "type" | "class" | "id";

export type SubfeatureJson =
  | { kind: "image_dimension"; width: number; height: number }
  | {
      kind: "css_directive";
      selector_kind: SelectorKind;
      selector_name: string;
      element_type: string;
      property: string;
      expected_value: string;
    }
  | {
      kind: "js_symbol";
      name: string;
      symbol_kind: "function" | "variable";
      expected_value?: string;
      source_hash?: string;
    };

export interface CheckJson {
  path: string;
  type: "image" | "css" | "js";
  checks: SubfeatureJson[];
}

export interface InternalNodeJson {
  check: CheckJson;
  match: TreeNodeJson;
  mismatch: TreeNodeJson;
}

export interface LeafNodeJson {
  cluster: string[];
  confirm?: CheckJson[];
}

export type TreeNodeJson = InternalNodeJson | LeafNodeJson;

export function isLeaf(node: TreeNodeJson): node is LeafNodeJson {
  return (node as LeafNodeJson).cluster !== undefined;
}

export interface TreeJson {
  schema_version: number;
  config: { max_subfeatures: number; max_depth: number };
  root: TreeNodeJson;
}

export interface TargetJson {
  host: string;
  port: number;
  scheme: string;
}

export interface PlanJson {
  schema_version: number;
  targets: TargetJson[];
  discovery: { timeout_ms: number; probe_path: string };
  tree: TreeJson;
  limits: { max_parallel_checks: number; per_check_timeout_ms: number };
}

export type Outcome = "match" | "mismatch";

export interface TargetResultJson {
  host: string;
  port: number;
  scheme: string;
  alive: boolean;
  path_taken: [string, Outcome][];
  cluster: string[];
  requests_used: number;
  errors: string[];
  caveat: boolean;
}

export interface ReportJson {
  schema_version: number;
  counts_discovery: boolean;
  targets: TargetResultJson[];
}

/** What the executor observed for one subfeature of a loaded resource. */
export type SubObservation =
  | { kind: "image"; width: number; height: number }
  | { kind: "css"; value: string | null }
  | {
      kind: "js";
      present: boolean;
      isFunction: boolean;
      canonicalValue: string | null;
      sourceHash: string | null;
    }
  | { kind: "unavailable" };

export interface CheckObservation {
  loaded: boolean;
  observations: SubObservation[];
}

/** Pluggable probe backend: the DOM in a browser, tables under test. */
export interface CheckExecutor {
  discover(target: TargetJson, probePath: string, timeoutMs: number): Promise<boolean>;
  execute(
    target: TargetJson,
    check: CheckJson,
    timeoutMs: number,
  ): Promise<CheckObservation>;
}

export interface DivergenceEntry {
  service: string;
  path: string;
  subfeature: SubfeatureJson;
}

export interface DivergenceReport {
  schema_version: number;
  divergent: DivergenceEntry[];
}

export function targetOrigin(target: TargetJson): string {
  return `${target.scheme}://${target.host}:${target.port}`;
}
