import { beforeEach, describe, expect, it } from "vitest";

import type { GraphExport, GraphNode } from "../src/graph";
import { Scene } from "../src/render";

function node(id: number, over: Partial<GraphNode> = {}): GraphNode {
  return {
    id,
    pt: `PT${id}`,
    cluster: 0,
    label: "group",
    node_weight: 1.0,
    ic_lower: 0.1,
    fold_change: 1.5,
    ci_lower: 1.1,
    ci_upper: 2.0,
    incidence: [
      { c: 1, n: 50 },
      { c: 2, n: 50 },
    ],
    ...over,
  };
}

function graph(
  nodes: GraphNode[],
  edges: GraphExport["edges"],
  k = 2,
): GraphExport {
  return { meta: { k, arm_names: ["Active", "Placebo"] }, nodes, edges };
}

let mount: HTMLElement;

beforeEach(() => {
  document.body.innerHTML = "";
  mount = document.createElement("div");
  document.body.append(mount);
});

function circles(): SVGCircleElement[] {
  return [...mount.querySelectorAll("g.node circle")] as SVGCircleElement[];
}

function visibleEdges(): Element[] {
  return [...mount.querySelectorAll("line.edge")].filter(
    (el) => (el as SVGLineElement).style.display !== "none",
  );
}

describe("Scene", () => {
  it("renders two circles and one edge for a 2-node graph", () => {
    new Scene(mount, graph([node(0), node(1)], [{ source: 0, target: 1, weight: 0.5 }]));
    expect(circles().length).toBe(2);
    expect(mount.querySelectorAll("line.edge").length).toBe(1);
    expect(visibleEdges().length).toBe(1);
  });

  it("sizes nodes monotonically in ic_lower when k >= 2", () => {
    new Scene(
      mount,
      graph(
        [
          node(0, { ic_lower: 0.1 }),
          node(1, { ic_lower: 0.5 }),
          node(2, { ic_lower: 0.9 }),
        ],
        [],
      ),
    );
    const rs = circles().map((c) => Number(c.getAttribute("r")));
    expect(rs[0]).toBeLessThan(rs[1]);
    expect(rs[1]).toBeLessThan(rs[2]);
  });

  it("sizes nodes by node_weight when k = 1", () => {
    new Scene(
      mount,
      graph(
        [
          node(0, { node_weight: 0.2, ic_lower: null }),
          node(1, { node_weight: 0.9, ic_lower: null }),
        ],
        [],
        1,
      ),
    );
    const rs = circles().map((c) => Number(c.getAttribute("r")));
    expect(rs[0]).toBeLessThan(rs[1]);
  });

  it("colors nodes by cluster", () => {
    new Scene(
      mount,
      graph(
        [
          node(0, { cluster: 0 }),
          node(1, { cluster: 0 }),
          node(2, { cluster: 1 }),
          node(3, { cluster: null, label: null }),
        ],
        [],
      ),
    );
    const fills = circles().map((c) => c.getAttribute("fill"));
    expect(fills[0]).toBe(fills[1]);
    expect(fills[0]).not.toBe(fills[2]);
    expect(fills[3]).toBe("#aaaaaa");
  });

  it("hides exactly the edges below the threshold", () => {
    const edges = [
      { source: 0, target: 1, weight: 0.2 },
      { source: 1, target: 2, weight: 0.5 },
      { source: 0, target: 2, weight: 0.8 },
    ];
    const scene = new Scene(mount, graph([node(0), node(1), node(2)], edges));
    scene.setThreshold(0);
    expect(visibleEdges().length).toBe(3);

    scene.setThreshold(0.5);
    const expected = edges.filter((e) => e.weight >= 0.5).length;
    expect(visibleEdges().length).toBe(expected);
    for (const el of visibleEdges()) {
      expect(Number((el as HTMLElement).dataset.weight)).toBeGreaterThanOrEqual(0.5);
    }

    scene.setThreshold(0.81);
    expect(visibleEdges().length).toBe(0);
    expect(scene.visibleEdgeCount()).toBe(0);
  });

  it("dims but never removes isolated nodes", () => {
    const scene = new Scene(
      mount,
      graph([node(0), node(1)], [{ source: 0, target: 1, weight: 0.3 }]),
    );
    scene.setThreshold(1.0);
    const gs = [...mount.querySelectorAll("g.node")] as SVGGElement[];
    expect(gs.length).toBe(2);
    for (const g of gs) {
      expect(g.style.display).not.toBe("none");
      expect(g.getAttribute("class")).toContain("dimmed");
    }
    scene.setThreshold(0);
    for (const g of [...mount.querySelectorAll("g.node")]) {
      expect(g.getAttribute("class")).not.toContain("dimmed");
    }
  });

  it("updates the counter with visible edge and node counts", () => {
    const scene = new Scene(
      mount,
      graph(
        [node(0), node(1), node(2)],
        [
          { source: 0, target: 1, weight: 0.2 },
          { source: 1, target: 2, weight: 0.9 },
        ],
      ),
    );
    const counts = mount.querySelector(".counts")!;
    expect(counts.textContent).toBe("2 edges / 3 nodes");
    scene.setThreshold(0.5);
    expect(counts.textContent).toBe("1 edges / 3 nodes");
  });

  it("hides a toggled-off cluster and its incident edges", () => {
    const scene = new Scene(
      mount,
      graph(
        [node(0, { cluster: 0 }), node(1, { cluster: 1 }), node(2, { cluster: 1 })],
        [
          { source: 0, target: 1, weight: 0.5 },
          { source: 1, target: 2, weight: 0.5 },
        ],
      ),
    );
    scene.toggleCluster(0, false);
    const gs = [...mount.querySelectorAll("g.node")] as SVGGElement[];
    expect(gs[0].style.display).toBe("none");
    expect(gs[1].style.display).not.toBe("none");
    expect(visibleEdges().length).toBe(1);
    expect(scene.visibleNodeCount()).toBe(2);

    scene.toggleCluster(0, true);
    expect(visibleEdges().length).toBe(2);
    expect(scene.visibleNodeCount()).toBe(3);
  });

  it("maps the slider through the log scale when enabled", () => {
    const scene = new Scene(
      mount,
      graph(
        [node(0), node(1), node(2)],
        [
          { source: 0, target: 1, weight: 0.01 },
          { source: 1, target: 2, weight: 1.0 },
        ],
      ),
    );
    const slider = mount.querySelector(".threshold-slider") as HTMLInputElement;
    const logBox = mount.querySelector(".log-scale") as HTMLInputElement;
    logBox.checked = true;
    slider.value = "1.0";
    slider.dispatchEvent(new Event("input"));
    expect(scene.state.threshold).toBeCloseTo(1.0, 12);
    expect(visibleEdges().length).toBe(1);

    slider.value = "0.5";
    slider.dispatchEvent(new Event("input"));
    expect(scene.state.threshold).toBeCloseTo(0.1, 12);
  });

  it("fills the inspect panel from the node record", () => {
    const scene = new Scene(
      mount,
      graph(
        [
          node(0, {
            pt: "Nausea",
            label: "gastro",
            fold_change: 2.0014,
            ci_lower: 1.2082,
            ci_upper: 3.603,
            incidence: [
              { c: 3, n: 63 },
              { c: 1, n: 62 },
            ],
          }),
          node(1),
        ],
        [],
      ),
    );
    scene.selectNode(0);
    const panel = mount.querySelector(".panel")!;
    expect(panel.querySelector("h3")!.textContent).toBe("Nausea");
    const text = panel.textContent!;
    expect(text).toContain("gastro");
    expect(text).toContain("3/63");
    expect(text).toContain("1/62");
    expect(text).toContain("2.00");
    expect(text).toContain("[1.21, 3.60]");
    expect(scene.state.selectedNode).toBe(0);
  });

  it("shows n/a detail values for single-arm nodes", () => {
    const scene = new Scene(
      mount,
      graph(
        [node(0, { ic_lower: null, fold_change: null, ci_lower: null, ci_upper: null })],
        [],
        1,
      ),
    );
    scene.selectNode(0);
    expect(mount.querySelector(".panel")!.textContent).toContain("n/a");
  });

  it("ignores unknown ids and clears on null", () => {
    const scene = new Scene(mount, graph([node(0)], []));
    scene.selectNode(0);
    scene.selectNode(99);
    expect(scene.state.selectedNode).toBe(0);
    expect(mount.querySelector(".panel")!.textContent).not.toBe("");
    scene.selectNode(null);
    expect(scene.state.selectedNode).toBeNull();
    expect(mount.querySelector(".panel")!.textContent).toBe("");
  });

  it("selects a node on circle click", () => {
    const scene = new Scene(mount, graph([node(0), node(1)], []));
    (circles()[1] as unknown as HTMLElement).dispatchEvent(new Event("click"));
    expect(scene.state.selectedNode).toBe(1);
  });
});
