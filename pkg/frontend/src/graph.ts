// Force-directed rendering of the verifier follower graph. Node radius
// scales with rank, the label carries the skill points, and edges keep
// their direction via arrowheads.

import { GraphView } from "./api.js";
import { el } from "./format.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const WIDTH = 640;
const HEIGHT = 480;
const ITERATIONS = 200;

interface LayoutNode {
  id: string;
  x: number;
  y: number;
  dx: number;
  dy: number;
}

export function layoutGraph(view: GraphView, width = WIDTH, height = HEIGHT): Map<string, { x: number; y: number }> {
  const nodes: LayoutNode[] = view.nodes.map((n, i) => {
    const angle = (2 * Math.PI * i) / Math.max(view.nodes.length, 1);
    return {
      id: n.id,
      x: width / 2 + (width / 3) * Math.cos(angle),
      y: height / 2 + (height / 3) * Math.sin(angle),
      dx: 0,
      dy: 0,
    };
  });
  const byId = new Map(nodes.map((n) => [n.id, n]));
  const k = Math.sqrt((width * height) / Math.max(nodes.length, 1));

  for (let iter = 0; iter < ITERATIONS; iter++) {
    const temperature = (1 - iter / ITERATIONS) * 0.1 * Math.min(width, height);
    for (const node of nodes) {
      node.dx = 0;
      node.dy = 0;
    }
    for (let i = 0; i < nodes.length; i++) {
      for (let j = i + 1; j < nodes.length; j++) {
        const a = nodes[i];
        const b = nodes[j];
        const dx = a.x - b.x;
        const dy = a.y - b.y;
        const dist = Math.max(Math.hypot(dx, dy), 0.01);
        const force = (k * k) / dist / dist;
        a.dx += dx * force;
        a.dy += dy * force;
        b.dx -= dx * force;
        b.dy -= dy * force;
      }
    }
    for (const edge of view.edges) {
      const a = byId.get(edge.from);
      const b = byId.get(edge.to);
      if (!a || !b) continue;
      const dx = a.x - b.x;
      const dy = a.y - b.y;
      const dist = Math.max(Math.hypot(dx, dy), 0.01);
      const force = (dist * dist) / k / dist;
      a.dx -= dx * force;
      a.dy -= dy * force;
      b.dx += dx * force;
      b.dy += dy * force;
    }
    for (const node of nodes) {
      const disp = Math.max(Math.hypot(node.dx, node.dy), 0.01);
      const step = Math.min(disp, temperature);
      node.x += (node.dx / disp) * step;
      node.y += (node.dy / disp) * step;
      node.x = Math.min(width - 30, Math.max(30, node.x));
      node.y = Math.min(height - 30, Math.max(30, node.y));
    }
  }
  return new Map(nodes.map((n) => [n.id, { x: n.x, y: n.y }]));
}

export function renderGraphView(view: GraphView): HTMLElement {
  const root = el("section", { class: "graph-view" });
  root.append(el("h2", {}, ["Verification graph"]));

  if (view.nodes.length === 0) {
    root.append(el("p", { class: "empty-state", "data-role": "empty" }, ["no verifiers yet"]));
    return root;
  }

  const positions = layoutGraph(view);
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
  svg.setAttribute("width", String(WIDTH));
  svg.setAttribute("height", String(HEIGHT));

  const defs = document.createElementNS(SVG_NS, "defs");
  const marker = document.createElementNS(SVG_NS, "marker");
  marker.setAttribute("id", "arrow");
  marker.setAttribute("markerWidth", "8");
  marker.setAttribute("markerHeight", "8");
  marker.setAttribute("refX", "7");
  marker.setAttribute("refY", "3");
  marker.setAttribute("orient", "auto");
  const tip = document.createElementNS(SVG_NS, "path");
  tip.setAttribute("d", "M0,0 L7,3 L0,6 Z");
  marker.append(tip);
  defs.append(marker);
  svg.append(defs);

  for (const edge of view.edges) {
    const a = positions.get(edge.from);
    const b = positions.get(edge.to);
    if (!a || !b) continue;
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("class", "graph-edge");
    line.setAttribute("x1", a.x.toFixed(1));
    line.setAttribute("y1", a.y.toFixed(1));
    line.setAttribute("x2", b.x.toFixed(1));
    line.setAttribute("y2", b.y.toFixed(1));
    line.setAttribute("stroke", "#888");
    line.setAttribute("stroke-width", String(Math.min(1 + edge.weight, 6)));
    line.setAttribute("marker-end", "url(#arrow)");
    line.setAttribute("data-from", edge.from);
    line.setAttribute("data-to", edge.to);
    svg.append(line);
  }

  const maxRank = Math.max(...view.nodes.map((n) => n.rank), 1e-9);
  for (const node of view.nodes) {
    const pos = positions.get(node.id)!;
    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("class", "graph-node");
    circle.setAttribute("cx", pos.x.toFixed(1));
    circle.setAttribute("cy", pos.y.toFixed(1));
    circle.setAttribute("r", (8 + 16 * (node.rank / maxRank)).toFixed(1));
    circle.setAttribute("fill", "#4a7fb5");
    circle.setAttribute("data-id", node.id);
    svg.append(circle);

    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", pos.x.toFixed(1));
    label.setAttribute("y", (pos.y - 28).toFixed(1));
    label.setAttribute("text-anchor", "middle");
    label.textContent = `${node.id} (${node.skill_points})`;
    svg.append(label);
  }

  root.append(svg);
  return root;
}
