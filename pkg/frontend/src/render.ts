/** SVG scene: force layout, threshold filtering, cluster toggles, inspect. */

import type { GraphExport, GraphNode } from "./graph";
import { computeLayout } from "./layout";

const SVG_NS = "http://www.w3.org/2000/svg";
const WIDTH = 800;
const HEIGHT = 600;
const R_MIN = 4;
const R_MAX = 16;

const PALETTE = [
  "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1",
  "#76b7b2", "#edc948", "#ff9da7", "#9c755f", "#bab0ac",
];
const UNCLUSTERED_COLOR = "#aaaaaa";

export interface ViewState {
  threshold: number;
  selectedNode: number | null;
  layoutSeed: number;
  hiddenClusters: Set<number | null>;
}

function clusterColor(cluster: number | null): string {
  if (cluster === null) {
    return UNCLUSTERED_COLOR;
  }
  return PALETTE[cluster % PALETTE.length];
}

/** Node sizing value: lower IC bound when arms were contrasted, else weight. */
function sizeValue(node: GraphNode, k: number): number {
  if (k >= 2 && node.ic_lower !== null) {
    return node.ic_lower;
  }
  return node.node_weight;
}

function radii(nodes: GraphNode[], k: number): number[] {
  const values = nodes.map((n) => sizeValue(n, k));
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  if (!(hi > lo)) {
    return values.map(() => (R_MIN + R_MAX) / 2);
  }
  return values.map((v) => R_MIN + ((R_MAX - R_MIN) * (v - lo)) / (hi - lo));
}

function fmt(v: number | null, digits = 2): string {
  return v === null ? "n/a" : v.toFixed(digits);
}

interface EdgeEntry {
  el: SVGLineElement;
  source: number;
  target: number;
  weight: number;
}

interface NodeEntry {
  el: SVGGElement;
  circle: SVGCircleElement;
  node: GraphNode;
}

export class Scene {
  readonly state: ViewState;
  readonly graph: GraphExport;

  private edgeEntries: EdgeEntry[] = [];
  private nodeEntries = new Map<number, NodeEntry>();
  private countsEl: HTMLElement;
  private panelEl: HTMLElement;
  private sliderEl: HTMLInputElement;
  private thresholdLabelEl: HTMLElement;
  private logEl: HTMLInputElement;
  private maxWeight: number;
  private minPositiveWeight: number;
  private lastEdgeCount = 0;
  private lastNodeCount = 0;

  constructor(mount: HTMLElement, graph: GraphExport, layoutSeed = 42) {
    this.graph = graph;
    this.state = {
      threshold: 0,
      selectedNode: null,
      layoutSeed,
      hiddenClusters: new Set(),
    };
    this.maxWeight = graph.edges.reduce((m, e) => Math.max(m, e.weight), 0);
    this.minPositiveWeight = graph.edges.reduce(
      (m, e) => Math.min(m, e.weight),
      this.maxWeight || 1,
    );

    const doc = mount.ownerDocument;
    const root = doc.createElement("div");
    root.className = "viewer";

    const controls = doc.createElement("div");
    controls.className = "viewer-controls";

    const sliderLabel = doc.createElement("label");
    sliderLabel.append("edge weight ≥ ");
    this.sliderEl = doc.createElement("input");
    this.sliderEl.type = "range";
    this.sliderEl.className = "threshold-slider";
    this.sliderEl.min = "0";
    this.sliderEl.max = String(this.maxWeight);
    this.sliderEl.step = "any";
    this.sliderEl.value = "0";
    this.sliderEl.addEventListener("input", () => this.onSlider());
    sliderLabel.append(this.sliderEl);
    this.thresholdLabelEl = doc.createElement("span");
    this.thresholdLabelEl.className = "threshold-value";
    sliderLabel.append(" ", this.thresholdLabelEl);
    controls.append(sliderLabel);

    const logLabel = doc.createElement("label");
    this.logEl = doc.createElement("input");
    this.logEl.type = "checkbox";
    this.logEl.className = "log-scale";
    this.logEl.addEventListener("change", () => this.onSlider());
    logLabel.append(this.logEl, " log scale");
    controls.append(" ", logLabel);

    this.countsEl = doc.createElement("span");
    this.countsEl.className = "counts";
    controls.append(" ", this.countsEl);

    const toggles = doc.createElement("span");
    toggles.className = "cluster-toggles";
    for (const cluster of this.clusterIds()) {
      const label = doc.createElement("label");
      label.className = "cluster-toggle";
      const box = doc.createElement("input");
      box.type = "checkbox";
      box.checked = true;
      box.dataset.cluster = cluster === null ? "none" : String(cluster);
      box.addEventListener("change", () =>
        this.toggleCluster(cluster, box.checked),
      );
      const swatch = doc.createElement("span");
      swatch.style.color = clusterColor(cluster);
      swatch.textContent = "●";
      label.append(box, swatch, this.clusterName(cluster));
      toggles.append(" ", label);
    }
    controls.append(" ", toggles);
    root.append(controls);

    const svg = doc.createElementNS(SVG_NS, "svg") as SVGSVGElement;
    svg.setAttribute("class", "graph-svg");
    svg.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
    svg.setAttribute("width", String(WIDTH));
    svg.setAttribute("height", String(HEIGHT));

    const positions = computeLayout(
      graph.nodes.length,
      graph.edges,
      layoutSeed,
      WIDTH,
      HEIGHT,
    );
    const byId = new Map(graph.nodes.map((n, i) => [n.id, i]));

    const edgeGroup = doc.createElementNS(SVG_NS, "g");
    edgeGroup.setAttribute("class", "edges");
    for (const e of graph.edges) {
      const line = doc.createElementNS(SVG_NS, "line") as SVGLineElement;
      const a = positions[byId.get(e.source)!];
      const b = positions[byId.get(e.target)!];
      line.setAttribute("class", "edge");
      line.setAttribute("x1", String(a.x));
      line.setAttribute("y1", String(a.y));
      line.setAttribute("x2", String(b.x));
      line.setAttribute("y2", String(b.y));
      line.setAttribute("stroke", "#999");
      line.setAttribute(
        "stroke-width",
        String(0.5 + (this.maxWeight > 0 ? (1.5 * e.weight) / this.maxWeight : 0)),
      );
      line.dataset.weight = String(e.weight);
      edgeGroup.append(line);
      this.edgeEntries.push({
        el: line,
        source: e.source,
        target: e.target,
        weight: e.weight,
      });
    }
    svg.append(edgeGroup);

    const nodeGroup = doc.createElementNS(SVG_NS, "g");
    nodeGroup.setAttribute("class", "nodes");
    const rs = radii(graph.nodes, graph.meta.k);
    graph.nodes.forEach((n, i) => {
      const g = doc.createElementNS(SVG_NS, "g") as SVGGElement;
      g.setAttribute("class", "node");
      g.dataset.id = String(n.id);
      const circle = doc.createElementNS(SVG_NS, "circle") as SVGCircleElement;
      circle.setAttribute("cx", String(positions[i].x));
      circle.setAttribute("cy", String(positions[i].y));
      circle.setAttribute("r", String(rs[i]));
      circle.setAttribute("fill", clusterColor(n.cluster));
      circle.addEventListener("click", () => this.selectNode(n.id));
      const title = doc.createElementNS(SVG_NS, "title");
      title.textContent = n.pt;
      circle.append(title);
      g.append(circle);
      nodeGroup.append(g);
      this.nodeEntries.set(n.id, { el: g, circle, node: n });
    });
    svg.append(nodeGroup);
    root.append(svg);

    this.panelEl = doc.createElement("div");
    this.panelEl.className = "panel";
    root.append(this.panelEl);

    mount.append(root);
    this.applyVisibility();
  }

  private clusterIds(): (number | null)[] {
    const ids = new Set<number>();
    let hasNull = false;
    for (const n of this.graph.nodes) {
      if (n.cluster === null) {
        hasNull = true;
      } else {
        ids.add(n.cluster);
      }
    }
    const sorted: (number | null)[] = [...ids].sort((a, b) => a - b);
    if (hasNull) {
      sorted.push(null);
    }
    return sorted;
  }

  private clusterName(cluster: number | null): string {
    for (const n of this.graph.nodes) {
      if (n.cluster === cluster && n.label !== null) {
        return n.label;
      }
    }
    return cluster === null ? "unclustered" : `cluster ${cluster}`;
  }

  private onSlider(): void {
    const raw = Number(this.sliderEl.value);
    let t = raw;
    if (this.logEl.checked && this.maxWeight > 0 && raw > 0) {
      const frac = raw / this.maxWeight;
      t =
        this.minPositiveWeight *
        Math.pow(this.maxWeight / this.minPositiveWeight, frac);
    }
    this.setThreshold(t);
  }

  /** Hide edges with weight < t; O(edges) + O(nodes). */
  setThreshold(t: number): void {
    this.state.threshold = t;
    this.applyVisibility();
  }

  toggleCluster(cluster: number | null, visible: boolean): void {
    if (visible) {
      this.state.hiddenClusters.delete(cluster);
    } else {
      this.state.hiddenClusters.add(cluster);
    }
    this.applyVisibility();
  }

  private applyVisibility(): void {
    const hidden = this.state.hiddenClusters;
    const t = this.state.threshold;
    const nodeOn = new Map<number, boolean>();
    for (const [id, entry] of this.nodeEntries) {
      nodeOn.set(id, !hidden.has(entry.node.cluster));
    }
    const liveEdges = new Map<number, number>();
    let edgeCount = 0;
    for (const e of this.edgeEntries) {
      const visible =
        e.weight >= t && nodeOn.get(e.source)! && nodeOn.get(e.target)!;
      e.el.style.display = visible ? "" : "none";
      if (visible) {
        edgeCount += 1;
        liveEdges.set(e.source, (liveEdges.get(e.source) ?? 0) + 1);
        liveEdges.set(e.target, (liveEdges.get(e.target) ?? 0) + 1);
      }
    }
    let nodeCount = 0;
    for (const [id, entry] of this.nodeEntries) {
      if (!nodeOn.get(id)) {
        entry.el.style.display = "none";
        continue;
      }
      entry.el.style.display = "";
      nodeCount += 1;
      // nodes with no visible incident edge stay rendered, dimmed
      if ((liveEdges.get(id) ?? 0) === 0) {
        entry.el.setAttribute("class", "node dimmed");
        entry.circle.setAttribute("fill-opacity", "0.35");
      } else {
        entry.el.setAttribute("class", "node");
        entry.circle.setAttribute("fill-opacity", "1");
      }
    }
    this.lastEdgeCount = edgeCount;
    this.lastNodeCount = nodeCount;
    this.countsEl.textContent = `${edgeCount} edges / ${nodeCount} nodes`;
    this.thresholdLabelEl.textContent = t.toPrecision(3);
  }

  visibleEdgeCount(): number {
    return this.lastEdgeCount;
  }

  visibleNodeCount(): number {
    return this.lastNodeCount;
  }

  /** Fill the detail panel for a node; unknown ids are a no-op. */
  selectNode(id: number | null): void {
    if (id === null) {
      this.state.selectedNode = null;
      this.panelEl.textContent = "";
      return;
    }
    const entry = this.nodeEntries.get(id);
    if (entry === undefined) {
      return;
    }
    this.state.selectedNode = id;
    const doc = this.panelEl.ownerDocument;
    this.panelEl.textContent = "";
    const n = entry.node;

    const title = doc.createElement("h3");
    title.textContent = n.pt;
    this.panelEl.append(title);

    const dl = doc.createElement("dl");
    const row = (term: string, value: string) => {
      const dt = doc.createElement("dt");
      dt.textContent = term;
      const dd = doc.createElement("dd");
      dd.textContent = value;
      dl.append(dt, dd);
    };
    row("cluster", n.label ?? "unclustered");
    this.graph.meta.arm_names.forEach((arm, j) => {
      const cell = n.incidence[j];
      row(arm, `${cell.c}/${cell.n}`);
    });
    row("fold-change", fmt(n.fold_change));
    row("CI", n.ci_lower === null ? "n/a" : `[${fmt(n.ci_lower)}, ${fmt(n.ci_upper)}]`);
    this.panelEl.append(dl);
  }
}
