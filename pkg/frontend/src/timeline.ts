// Score timeline chart: one point per vote ordinal, line segments between
// consecutive scored points, gaps where the vote count was still below the
// scoring threshold (score null).

import { TimelinePoint } from "./api.js";
import { el } from "./format.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const WIDTH = 480;
const HEIGHT = 200;
const PAD = 30;

export function scoreToY(score: number, height = HEIGHT, pad = PAD): number {
  // score 1 at the top, -1 at the bottom
  return pad + ((1 - score) / 2) * (height - 2 * pad);
}

export function ordinalToX(ordinal: number, maxOrdinal: number, width = WIDTH, pad = PAD): number {
  if (maxOrdinal <= 1) {
    return width / 2;
  }
  return pad + ((ordinal - 1) / (maxOrdinal - 1)) * (width - 2 * pad);
}

export function renderTimelineView(points: TimelinePoint[]): HTMLElement {
  const root = el("section", { class: "timeline-view" });
  root.append(el("h2", {}, ["Score timeline"]));

  if (points.length === 0) {
    root.append(el("p", { class: "empty-state", "data-role": "empty" }, ["no votes yet"]));
    return root;
  }

  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
  svg.setAttribute("width", String(WIDTH));
  svg.setAttribute("height", String(HEIGHT));

  const axis = document.createElementNS(SVG_NS, "line");
  axis.setAttribute("class", "timeline-axis");
  axis.setAttribute("x1", String(PAD));
  axis.setAttribute("y1", scoreToY(0).toFixed(1));
  axis.setAttribute("x2", String(WIDTH - PAD));
  axis.setAttribute("y2", scoreToY(0).toFixed(1));
  axis.setAttribute("stroke", "#ccc");
  axis.setAttribute("stroke-dasharray", "4 4");
  svg.append(axis);

  const maxOrdinal = Math.max(...points.map((p) => p.ordinal));
  let previous: { x: number; y: number } | null = null;
  for (const point of points) {
    if (point.score === null) {
      previous = null; // below threshold: gap in the line
      continue;
    }
    const x = ordinalToX(point.ordinal, maxOrdinal);
    const y = scoreToY(point.score);
    if (previous !== null) {
      const segment = document.createElementNS(SVG_NS, "line");
      segment.setAttribute("class", "timeline-segment");
      segment.setAttribute("x1", previous.x.toFixed(1));
      segment.setAttribute("y1", previous.y.toFixed(1));
      segment.setAttribute("x2", x.toFixed(1));
      segment.setAttribute("y2", y.toFixed(1));
      segment.setAttribute("stroke", "#4a7fb5");
      segment.setAttribute("stroke-width", "2");
      svg.append(segment);
    }
    const dot = document.createElementNS(SVG_NS, "circle");
    dot.setAttribute("class", "timeline-point");
    dot.setAttribute("cx", x.toFixed(1));
    dot.setAttribute("cy", y.toFixed(1));
    dot.setAttribute("r", "4");
    dot.setAttribute("fill", "#4a7fb5");
    dot.setAttribute("data-ordinal", String(point.ordinal));
    dot.setAttribute("data-score", String(point.score));
    svg.append(dot);
    previous = { x, y };
  }

  root.append(svg);
  return root;
}
