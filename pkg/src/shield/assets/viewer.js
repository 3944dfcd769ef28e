"use strict";
(() => {
  // src/graph.ts
  var SchemaError = class extends Error {
    constructor(message) {
      super(message);
      this.name = "SchemaError";
    }
  };
  function isRecord(v) {
    return typeof v === "object" && v !== null && !Array.isArray(v);
  }
  function num(v, path) {
    if (typeof v !== "number" || !Number.isFinite(v)) {
      throw new SchemaError(`${path} must be a finite number`);
    }
    return v;
  }
  function numOrNull(v, path) {
    return v === null ? null : num(v, path);
  }
  function str(v, path) {
    if (typeof v !== "string") {
      throw new SchemaError(`${path} must be a string`);
    }
    return v;
  }
  function arr(v, path) {
    if (!Array.isArray(v)) {
      throw new SchemaError(`${path} must be an array`);
    }
    return v;
  }
  function parseNode(v, path, arms) {
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
        n: num(cell.n, `${path}.incidence[${j}].n`)
      };
    });
    if (incidence.length !== arms) {
      throw new SchemaError(
        `${path}.incidence has ${incidence.length} arms, meta.arm_names has ${arms}`
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
      incidence
    };
  }
  function parseGraph(raw) {
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
    const armNames = arr(raw.meta.arm_names, "meta.arm_names").map(
      (a, j) => str(a, `meta.arm_names[${j}]`)
    );
    const nodes = arr(raw.nodes, "nodes").map(
      (n, i) => parseNode(n, `nodes[${i}]`, armNames.length)
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

  // src/layout.ts
  function splitmix32(seed) {
    let s = seed >>> 0;
    return () => {
      s = s + 2654435769 >>> 0;
      let z = s;
      z ^= z >>> 16;
      z = Math.imul(z, 569420461);
      z ^= z >>> 15;
      z = Math.imul(z, 1935289751);
      z ^= z >>> 15;
      return (z >>> 0) / 4294967296;
    };
  }
  var LAYOUT_ITERATIONS = 250;
  function computeLayout(n, edges, seed, width = 800, height = 600, iterations = LAYOUT_ITERATIONS) {
    if (n === 0) {
      return [];
    }
    const rand = splitmix32(seed);
    const x = new Float64Array(n);
    const y = new Float64Array(n);
    for (let i = 0; i < n; i++) {
      x[i] = width * (0.25 + 0.5 * rand());
      y[i] = height * (0.25 + 0.5 * rand());
    }
    if (n === 1) {
      return [{ x: width / 2, y: height / 2 }];
    }
    const area = width * height;
    const k = 0.8 * Math.sqrt(area / n);
    const k2 = k * k;
    const dx = new Float64Array(n);
    const dy = new Float64Array(n);
    const t0 = width / 10;
    for (let iter = 0; iter < iterations; iter++) {
      dx.fill(0);
      dy.fill(0);
      for (let i = 0; i < n; i++) {
        for (let j = i + 1; j < n; j++) {
          let ddx = x[i] - x[j];
          let ddy = y[i] - y[j];
          let d2 = ddx * ddx + ddy * ddy;
          if (d2 < 1e-12) {
            ddx = 1e-6 * (i - j);
            ddy = 1e-6;
            d2 = ddx * ddx + ddy * ddy;
          }
          const rep = k2 / d2;
          dx[i] += ddx * rep;
          dy[i] += ddy * rep;
          dx[j] -= ddx * rep;
          dy[j] -= ddy * rep;
        }
      }
      for (const e of edges) {
        const i = e.source;
        const j = e.target;
        const ddx = x[i] - x[j];
        const ddy = y[i] - y[j];
        const d = Math.sqrt(ddx * ddx + ddy * ddy) || 1e-9;
        const att = d / k;
        dx[i] -= ddx * att;
        dy[i] -= ddy * att;
        dx[j] += ddx * att;
        dy[j] += ddy * att;
      }
      const t = t0 * (1 - iter / iterations) + 0.01;
      for (let i = 0; i < n; i++) {
        const d = Math.sqrt(dx[i] * dx[i] + dy[i] * dy[i]);
        if (d > 0) {
          const cap = Math.min(d, t) / d;
          x[i] += dx[i] * cap;
          y[i] += dy[i] * cap;
        }
        x[i] = Math.min(width - 10, Math.max(10, x[i]));
        y[i] = Math.min(height - 10, Math.max(10, y[i]));
      }
    }
    const out = new Array(n);
    for (let i = 0; i < n; i++) {
      out[i] = { x: x[i], y: y[i] };
    }
    return out;
  }

  // src/render.ts
  var SVG_NS = "http://www.w3.org/2000/svg";
  var WIDTH = 800;
  var HEIGHT = 600;
  var R_MIN = 4;
  var R_MAX = 16;
  var PALETTE = [
    "#4e79a7",
    "#f28e2b",
    "#59a14f",
    "#e15759",
    "#b07aa1",
    "#76b7b2",
    "#edc948",
    "#ff9da7",
    "#9c755f",
    "#bab0ac"
  ];
  var UNCLUSTERED_COLOR = "#aaaaaa";
  function clusterColor(cluster) {
    if (cluster === null) {
      return UNCLUSTERED_COLOR;
    }
    return PALETTE[cluster % PALETTE.length];
  }
  function sizeValue(node, k) {
    if (k >= 2 && node.ic_lower !== null) {
      return node.ic_lower;
    }
    return node.node_weight;
  }
  function radii(nodes, k) {
    const values = nodes.map((n) => sizeValue(n, k));
    const lo = Math.min(...values);
    const hi = Math.max(...values);
    if (!(hi > lo)) {
      return values.map(() => (R_MIN + R_MAX) / 2);
    }
    return values.map((v) => R_MIN + (R_MAX - R_MIN) * (v - lo) / (hi - lo));
  }
  function fmt(v, digits = 2) {
    return v === null ? "n/a" : v.toFixed(digits);
  }
  var Scene = class {
    constructor(mount, graph, layoutSeed = 42) {
      this.edgeEntries = [];
      this.nodeEntries = /* @__PURE__ */ new Map();
      this.lastEdgeCount = 0;
      this.lastNodeCount = 0;
      this.graph = graph;
      this.state = {
        threshold: 0,
        selectedNode: null,
        layoutSeed,
        hiddenClusters: /* @__PURE__ */ new Set()
      };
      this.maxWeight = graph.edges.reduce((m, e) => Math.max(m, e.weight), 0);
      this.minPositiveWeight = graph.edges.reduce(
        (m, e) => Math.min(m, e.weight),
        this.maxWeight || 1
      );
      const doc = mount.ownerDocument;
      const root = doc.createElement("div");
      root.className = "viewer";
      const controls = doc.createElement("div");
      controls.className = "viewer-controls";
      const sliderLabel = doc.createElement("label");
      sliderLabel.append("edge weight \u2265 ");
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
        box.addEventListener(
          "change",
          () => this.toggleCluster(cluster, box.checked)
        );
        const swatch = doc.createElement("span");
        swatch.style.color = clusterColor(cluster);
        swatch.textContent = "\u25CF";
        label.append(box, swatch, this.clusterName(cluster));
        toggles.append(" ", label);
      }
      controls.append(" ", toggles);
      root.append(controls);
      const svg = doc.createElementNS(SVG_NS, "svg");
      svg.setAttribute("class", "graph-svg");
      svg.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
      svg.setAttribute("width", String(WIDTH));
      svg.setAttribute("height", String(HEIGHT));
      const positions = computeLayout(
        graph.nodes.length,
        graph.edges,
        layoutSeed,
        WIDTH,
        HEIGHT
      );
      const byId = new Map(graph.nodes.map((n, i) => [n.id, i]));
      const edgeGroup = doc.createElementNS(SVG_NS, "g");
      edgeGroup.setAttribute("class", "edges");
      for (const e of graph.edges) {
        const line = doc.createElementNS(SVG_NS, "line");
        const a = positions[byId.get(e.source)];
        const b = positions[byId.get(e.target)];
        line.setAttribute("class", "edge");
        line.setAttribute("x1", String(a.x));
        line.setAttribute("y1", String(a.y));
        line.setAttribute("x2", String(b.x));
        line.setAttribute("y2", String(b.y));
        line.setAttribute("stroke", "#999");
        line.setAttribute(
          "stroke-width",
          String(0.5 + (this.maxWeight > 0 ? 1.5 * e.weight / this.maxWeight : 0))
        );
        line.dataset.weight = String(e.weight);
        edgeGroup.append(line);
        this.edgeEntries.push({
          el: line,
          source: e.source,
          target: e.target,
          weight: e.weight
        });
      }
      svg.append(edgeGroup);
      const nodeGroup = doc.createElementNS(SVG_NS, "g");
      nodeGroup.setAttribute("class", "nodes");
      const rs = radii(graph.nodes, graph.meta.k);
      graph.nodes.forEach((n, i) => {
        const g = doc.createElementNS(SVG_NS, "g");
        g.setAttribute("class", "node");
        g.dataset.id = String(n.id);
        const circle = doc.createElementNS(SVG_NS, "circle");
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
    clusterIds() {
      const ids = /* @__PURE__ */ new Set();
      let hasNull = false;
      for (const n of this.graph.nodes) {
        if (n.cluster === null) {
          hasNull = true;
        } else {
          ids.add(n.cluster);
        }
      }
      const sorted = [...ids].sort((a, b) => a - b);
      if (hasNull) {
        sorted.push(null);
      }
      return sorted;
    }
    clusterName(cluster) {
      for (const n of this.graph.nodes) {
        if (n.cluster === cluster && n.label !== null) {
          return n.label;
        }
      }
      return cluster === null ? "unclustered" : `cluster ${cluster}`;
    }
    onSlider() {
      const raw = Number(this.sliderEl.value);
      let t = raw;
      if (this.logEl.checked && this.maxWeight > 0 && raw > 0) {
        const frac = raw / this.maxWeight;
        t = this.minPositiveWeight * Math.pow(this.maxWeight / this.minPositiveWeight, frac);
      }
      this.setThreshold(t);
    }
    /** Hide edges with weight < t; O(edges) + O(nodes). */
    setThreshold(t) {
      this.state.threshold = t;
      this.applyVisibility();
    }
    toggleCluster(cluster, visible) {
      if (visible) {
        this.state.hiddenClusters.delete(cluster);
      } else {
        this.state.hiddenClusters.add(cluster);
      }
      this.applyVisibility();
    }
    applyVisibility() {
      const hidden = this.state.hiddenClusters;
      const t = this.state.threshold;
      const nodeOn = /* @__PURE__ */ new Map();
      for (const [id, entry] of this.nodeEntries) {
        nodeOn.set(id, !hidden.has(entry.node.cluster));
      }
      const liveEdges = /* @__PURE__ */ new Map();
      let edgeCount = 0;
      for (const e of this.edgeEntries) {
        const visible = e.weight >= t && nodeOn.get(e.source) && nodeOn.get(e.target);
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
    visibleEdgeCount() {
      return this.lastEdgeCount;
    }
    visibleNodeCount() {
      return this.lastNodeCount;
    }
    /** Fill the detail panel for a node; unknown ids are a no-op. */
    selectNode(id) {
      if (id === null) {
        this.state.selectedNode = null;
        this.panelEl.textContent = "";
        return;
      }
      const entry = this.nodeEntries.get(id);
      if (entry === void 0) {
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
      const row = (term, value) => {
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
  };

  // src/boot.ts
  function banner(mount, message) {
    const doc = mount.ownerDocument;
    const div = doc.createElement("div");
    div.className = "error-banner";
    div.setAttribute(
      "style",
      "background:#fdd;border:1px solid #c00;color:#900;padding:8px;margin:8px 0;"
    );
    div.textContent = `Cannot display graph: ${message}`;
    mount.append(div);
  }
  function renderInto(mount, text, layoutSeed = 42) {
    let graph;
    try {
      graph = parseGraph(JSON.parse(text));
    } catch (err) {
      banner(mount, err instanceof Error ? err.message : String(err));
      return null;
    }
    return new Scene(mount, graph, layoutSeed);
  }
  function renderPicker(mount) {
    const doc = mount.ownerDocument;
    const label = doc.createElement("label");
    label.className = "file-picker";
    label.append("Open a graph.json export: ");
    const input = doc.createElement("input");
    input.type = "file";
    input.accept = ".json,application/json";
    input.addEventListener("change", () => {
      const file = input.files && input.files[0];
      if (!file) {
        return;
      }
      const reader = new FileReader();
      reader.onload = () => {
        mount.textContent = "";
        renderInto(mount, String(reader.result));
      };
      reader.readAsText(file);
    });
    label.append(input);
    mount.append(label);
  }
  function boot(doc) {
    let mount = doc.getElementById("graph");
    if (mount === null) {
      mount = doc.createElement("div");
      mount.id = "graph";
      doc.body.append(mount);
    }
    const data = doc.getElementById("graph-data");
    if (data !== null && data.textContent !== null && data.textContent.trim() !== "") {
      return renderInto(mount, data.textContent);
    }
    renderPicker(mount);
    return null;
  }

  // src/main.ts
  if (document.readyState === "loading") {
    document.addEventListener("DOMContentLoaded", () => boot(document));
  } else {
    boot(document);
  }
})();
