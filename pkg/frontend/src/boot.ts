/** Page bootstrap: inline graph data or a local file picker; no network. */

import { parseGraph } from "./graph";
import { Scene } from "./render";

function banner(mount: HTMLElement, message: string): void {
  const doc = mount.ownerDocument;
  const div = doc.createElement("div");
  div.className = "error-banner";
  div.setAttribute(
    "style",
    "background:#fdd;border:1px solid #c00;color:#900;padding:8px;margin:8px 0;",
  );
  div.textContent = `Cannot display graph: ${message}`;
  mount.append(div);
}

/** Parse and render; on any failure show a banner and render nothing. */
export function renderInto(
  mount: HTMLElement,
  text: string,
  layoutSeed = 42,
): Scene | null {
  let graph;
  try {
    graph = parseGraph(JSON.parse(text));
  } catch (err) {
    banner(mount, err instanceof Error ? err.message : String(err));
    return null;
  }
  return new Scene(mount, graph, layoutSeed);
}

function renderPicker(mount: HTMLElement): void {
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

/** Entry point: prefers inline <script id="graph-data">, else a picker. */
export function boot(doc: Document): Scene | null {
  let mount = doc.getElementById("graph");
  if (mount === null) {
    mount = doc.createElement("div");
    mount.id = "graph";
    doc.body.append(mount);
  }
  const data = doc.getElementById("graph-data");
  if (data !== null && data.textContent !== null && data.textContent.trim() !== "") {
    return renderInto(mount as HTMLElement, data.textContent);
  }
  renderPicker(mount as HTMLElement);
  return null;
}
