import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { parseGraph, SchemaError } from "../src/graph";

const FIXTURE = JSON.parse(
  readFileSync(join(__dirname, "fixtures", "graph.json"), "utf-8"),
);

function minimal(): Record<string, unknown> {
  return {
    meta: { k: 2, arm_names: ["A", "B"] },
    nodes: [
      {
        id: 0,
        pt: "Nausea",
        cluster: 0,
        label: "gi",
        node_weight: 1.5,
        ic_lower: 0.2,
        fold_change: 1.3,
        ci_lower: 1.1,
        ci_upper: 1.9,
        incidence: [{ c: 3, n: 50 }, { c: 1, n: 50 }],
      },
      {
        id: 1,
        pt: "Vomiting",
        cluster: null,
        label: null,
        node_weight: 0.5,
        ic_lower: null,
        fold_change: null,
        ci_lower: null,
        ci_upper: null,
        incidence: [{ c: 2, n: 50 }, { c: 2, n: 50 }],
      },
    ],
    edges: [{ source: 0, target: 1, weight: 0.4 }],
  };
}

describe("parseGraph", () => {
  it("accepts the pipeline fixture", () => {
    const g = parseGraph(FIXTURE);
    expect(g.nodes.length).toBe(72);
    expect(g.meta.k).toBe(4);
    expect(g.meta.arm_names.length).toBe(4);
    for (const e of g.edges) {
      expect(e.weight).toBeGreaterThan(0);
    }
  });

  it("accepts nullable fields", () => {
    const g = parseGraph(minimal());
    expect(g.nodes[1].cluster).toBeNull();
    expect(g.nodes[1].ic_lower).toBeNull();
  });

  it.each([
    ["not an object", 42, "must be an object"],
    ["meta missing", { nodes: [], edges: [] }, "meta must be an object"],
    [
      "nodes not an array",
      { meta: { k: 1, arm_names: [] }, nodes: "x", edges: [] },
      "nodes must be an array",
    ],
  ])("rejects %s", (_name, doc, message) => {
    expect(() => parseGraph(doc)).toThrow(SchemaError);
    expect(() => parseGraph(doc)).toThrow(message);
  });

  it("rejects a bad node field with its path", () => {
    const doc = minimal();
    (doc.nodes as Record<string, unknown>[])[0].pt = 7;
    expect(() => parseGraph(doc)).toThrow("nodes[0].pt must be a string");
  });

  it("rejects incidence not matching arm_names", () => {
    const doc = minimal();
    (doc.nodes as Record<string, unknown>[])[0].incidence = [{ c: 1, n: 2 }];
    expect(() => parseGraph(doc)).toThrow("incidence has 1 arms");
  });

  it("rejects duplicate node ids", () => {
    const doc = minimal();
    (doc.nodes as Record<string, unknown>[])[1].id = 0;
    expect(() => parseGraph(doc)).toThrow("unique");
  });

  it("rejects ids outside the dense range", () => {
    const doc = minimal();
    (doc.nodes as Record<string, unknown>[])[1].id = 5;
    expect(() => parseGraph(doc)).toThrow("dense range");
  });

  it("rejects edges to unknown nodes, self-loops, bad weights", () => {
    let doc = minimal();
    (doc.edges as Record<string, unknown>[])[0].target = 9;
    expect(() => parseGraph(doc)).toThrow("unknown node id");

    doc = minimal();
    (doc.edges as Record<string, unknown>[])[0].target = 0;
    expect(() => parseGraph(doc)).toThrow("self-loop");

    doc = minimal();
    (doc.edges as Record<string, unknown>[])[0].weight = 0;
    expect(() => parseGraph(doc)).toThrow("weight must be positive");
  });

  it("rejects a non-integer k", () => {
    const doc = minimal();
    (doc.meta as Record<string, unknown>).k = 1.5;
    expect(() => parseGraph(doc)).toThrow("positive integer");
  });

  it("rejects non-finite numbers", () => {
    const doc = minimal();
    (doc.nodes as Record<string, unknown>[])[0].node_weight = Infinity;
    expect(() => parseGraph(doc)).toThrow("finite number");
  });
});
