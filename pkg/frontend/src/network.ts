// SVG rendering of an ego network with the triage-view encodings.

import { edgeColor, edgeOpacity, edgeWidth, nodeRadius } from './encodings.js';
import { layoutPositions } from './layout.js';
import type { GraphData } from './types.js';

const SVG_NS = 'http://www.w3.org/2000/svg';

export interface NetworkOptions {
  width?: number;
  height?: number;
  focus?: [string, string];
}

export function renderNetwork(container: HTMLElement, graph: GraphData, opts: NetworkOptions = {}): SVGSVGElement {
  const width = opts.width ?? 640;
  const height = opts.height ?? 420;
  const doc = container.ownerDocument;
  container.replaceChildren();

  const svg = doc.createElementNS(SVG_NS, 'svg');
  svg.setAttribute('viewBox', `0 0 ${width} ${height}`);
  svg.setAttribute('width', String(width));
  svg.setAttribute('height', String(height));
  svg.setAttribute('data-nodes', String(graph.nodes.length));
  svg.setAttribute('data-edges', String(graph.edges.length));

  const pos = layoutPositions(graph, width, height);
  const maxWeight = Math.max(0, ...graph.edges.map((e) => e.weight));
  const maxSize = Math.max(0, ...graph.nodes.map((n) => n.size));
  const focus = new Set(opts.focus ?? []);

  for (const edge of graph.edges) {
    const pa = pos.get(edge.a);
    const pb = pos.get(edge.b);
    if (!pa || !pb) continue;
    const line = doc.createElementNS(SVG_NS, 'line');
    line.setAttribute('x1', pa.x.toFixed(1));
    line.setAttribute('y1', pa.y.toFixed(1));
    line.setAttribute('x2', pb.x.toFixed(1));
    line.setAttribute('y2', pb.y.toFixed(1));
    line.setAttribute('stroke', edgeColor(edge));
    line.setAttribute('stroke-opacity', edgeOpacity(edge, maxWeight).toFixed(3));
    line.setAttribute('stroke-width', edgeWidth(edge).toFixed(2));
    line.setAttribute('data-kind', edge.kind);
    line.setAttribute('data-weight', String(edge.weight));
    line.setAttribute('data-thickness', String(edge.thickness));
    const title = doc.createElementNS(SVG_NS, 'title');
    title.textContent =
      `${edge.a} - ${edge.b} (${edge.kind}): ${edge.weight} matches, ` +
      `longest run ${edge.thickness}`;
    line.appendChild(title);
    svg.appendChild(line);
  }

  for (const node of graph.nodes) {
    const p = pos.get(node.id);
    if (!p) continue;
    const circle = doc.createElementNS(SVG_NS, 'circle');
    circle.setAttribute('cx', p.x.toFixed(1));
    circle.setAttribute('cy', p.y.toFixed(1));
    circle.setAttribute('r', nodeRadius(node, maxSize).toFixed(2));
    circle.setAttribute('fill', focus.has(node.id) ? '#c62828' : '#607d8b');
    circle.setAttribute('data-id', node.id);
    const title = doc.createElementNS(SVG_NS, 'title');
    title.textContent = `${node.id}: ${node.size} matches played`;
    circle.appendChild(title);
    svg.appendChild(circle);

    const label = doc.createElementNS(SVG_NS, 'text');
    label.setAttribute('x', (p.x + 8).toFixed(1));
    label.setAttribute('y', (p.y - 8).toFixed(1));
    label.setAttribute('font-size', '10');
    label.setAttribute('fill', '#444');
    label.textContent = node.id;
    svg.appendChild(label);
  }

  container.appendChild(svg);
  return svg;
}
