/** graph.json (GraphExport) types and strict parsing. */

export interface Incidence {
  c: number;
  n: number;
}

export interface GraphNode {
  id: number;
  pt: string;
  cluster: number | null;
  label: string | null;
  node_weight: number;
  ic_lower: number | null;
  fold_change: number | null;
  ci_lower: number | null;
  ci_upper: number | null;
  incidence: Incidence[];
}

export interface GraphEdge {
  source: number;
  target: number;
  weight: number;
}

export interface GraphMeta {
  k: number;
  arm_names: string[];
}

export interface GraphExport {
  meta: GraphMeta;
  nodes: GraphNode[];
  edges: GraphEdge[];
}

export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

function isRecord(v: unknown): v is Record<string, unknown> {
  return typeof v === "object" && v !== null && !Array.isArray(v);
}

function num(v: unknown, path: string): number {
  if (typeof v !== "number" || !Number.isFinite(v)) {
    throw new SchemaError(`${path} must be a finite number`);
  }
  return v;
}

function numOrNull(v: unknown, path: string): number | null {
  return v === null ? null : num(v, path);
}

function str(v: unknown, path: string): string {
  if (typeof v !== "string") {
    throw new SchemaError(`${path} must be a string`);
  }
  return v;
}

function arr(v: unknown, path: string): unknown[] {
  if (!Array.isArray(v)) {
    throw new SchemaError(`${path} must be an array`);
  }
  return v;
}

function parseNode(v: unknown, path: string, arms: number): GraphNode {
  if (!isRecord(v)) {
    throw new SchemaError(`${path} must be an object`);
  }
  const cluster = v.cluster === null ? null : num(v.cluster, `${path}.cluster`);
  const label = v.label === null ? null : str(v.label, `${path}.label`);
  const incidence = arr(v.incidence, `${path}.incidence`).map((cell, j) => {
    if (!isRecord(cell)) {
      throw new SchemaError(`${path}.incidence[${j}] must be an object`);
    }
    return {
      c: num(cell.c, `${path}.incidence[${j}].c`),
      n: num(cell.n, `${path}.incidence[${j}].n`),
    };
  });
  if (incidence.length !== arms) {
    throw new SchemaError(
      `${path}.incidence has ${incidence.length} arms, meta.arm_names has ${arms}`,
    );
  }
  return {
    id: num(v.id, `${path}.id`),
    pt: str(v.pt, `${path}.pt`),
    cluster,
    label,
    node_weight: num(v.node_weight, `${path}.node_weight`),
    ic_lower: numOrNull(v.ic_lower, `${path}.ic_lower`),
    fold_change: numOrNull(v.fold_change, `${path}.fold_change`),
    ci_lower: numOrNull(v.ci_lower, `${path}.ci_lower`),
    ci_upper: numOrNull(v.ci_upper, `${path}.ci_upper`),
    incidence,
  };
}

/** Validate a decoded JSON value as a GraphExport; throws SchemaError. */
export function parseGraph(raw: unknown): GraphExport {
  if (!isRecord(raw)) {
    throw new SchemaError("graph document must be an object");
  }
  if (!isRecord(raw.meta)) {
    throw new SchemaError("meta must be an object");
  }
  const k = num(raw.meta.k, "meta.k");
  if (!Number.isInteger(k) || k < 1) {
    throw new SchemaError("meta.k must be a positive integer");
  }
  const armNames = arr(raw.meta.arm_names, "meta.arm_names").map((a, j) =>
    str(a, `meta.arm_names[${j}]`),
  );
  const nodes = arr(raw.nodes, "nodes").map((n, i) =>
    parseNode(n, `nodes[${i}]`, armNames.length),
  );
  const ids = new Set(nodes.map((n) => n.id));
  if (ids.size !== nodes.length) {
    throw new SchemaError("node ids must be unique");
  }
  nodes.forEach((n) => {
    if (!Number.isInteger(n.id) || n.id < 0 || n.id >= nodes.length) {
      throw new SchemaError(`node id ${n.id} outside dense range 0..${nodes.length - 1}`);
    }
  });
  const edges = arr(raw.edges, "edges").map((e, i) => {
    if (!isRecord(e)) {
      throw new SchemaError(`edges[${i}] must be an object`);
    }
    const source = num(e.source, `edges[${i}].source`);
    const target = num(e.target, `edges[${i}].target`);
    const weight = num(e.weight, `edges[${i}].weight`);
    if (!ids.has(source) || !ids.has(target)) {
      throw new SchemaError(`edges[${i}] references an unknown node id`);
    }
    if (source === target) {
      throw new SchemaError(`edges[${i}] is a self-loop`);
    }
    if (weight <= 0) {
      throw new SchemaError(`edges[${i}].weight must be positive`);
    }
    return { source, target, weight };
  });
  return { meta: { k, arm_names: armNames }, nodes, edges };
}
