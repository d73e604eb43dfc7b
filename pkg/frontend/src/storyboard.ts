/**
 * Node-graph layout for the storyboard screen.
 *
 * Scenes are placed on columns by breadth-first distance from the start
 * scene, so a linear story reads left to right and branches fan out
 * vertically.  Edges keep their response labels; an edge that lands on
 * an earlier (or same) column is marked `back` so the renderer can
 * curve it instead of crossing the whole board, which is how cycles and
 * reconverging branches stay readable.
 */

import type { StoryDoc } from "./schemas.js";

export interface GraphNode {
  sceneId: string;
  title: string;
  column: number;
  row: number;
  start: boolean;
  interactive: boolean;
  /** more than one edge arrives here: branches reconverge */
  merge: boolean;
  /** nothing leaves here: a story ending */
  terminal: boolean;
  unreachable: boolean;
}

export interface GraphEdge {
  from: string;
  to: string;
  via: string | null;
  back: boolean;
}

export interface GraphLayout {
  nodes: GraphNode[];
  edges: GraphEdge[];
  columns: number;
}

export function layoutStoryboard(story: StoryDoc): GraphLayout {
  const ids = Object.keys(story.scenes);
  const out = new Map<string, string[]>(ids.map((id) => [id, []]));
  const incoming = new Map<string, number>(ids.map((id) => [id, 0]));
  for (const edge of story.edges) {
    out.get(edge.from_scene)?.push(edge.to_scene);
    incoming.set(edge.to_scene, (incoming.get(edge.to_scene) ?? 0) + 1);
  }

  const column = new Map<string, number>();
  if (story.start_scene && story.scenes[story.start_scene]) {
    const queue: string[] = [story.start_scene];
    column.set(story.start_scene, 0);
    while (queue.length) {
      const id = queue.shift()!;
      const depth = column.get(id)!;
      for (const next of out.get(id) ?? []) {
        if (!column.has(next)) {
          column.set(next, depth + 1);
          queue.push(next);
        }
      }
    }
  }
  // scenes the start cannot reach sit one column past everything else
  const reachedMax = Math.max(-1, ...column.values());
  const orphanColumn = reachedMax + 1;
  for (const id of ids) if (!column.has(id)) column.set(id, orphanColumn);

  const rowCounter = new Map<number, number>();
  const nodes: GraphNode[] = ids.map((id) => {
    const col = column.get(id)!;
    const row = rowCounter.get(col) ?? 0;
    rowCounter.set(col, row + 1);
    const scene = story.scenes[id]!;
    return {
      sceneId: id,
      title: scene.title || id,
      column: col,
      row,
      start: story.start_scene === id,
      interactive: scene.interaction !== null,
      merge: (incoming.get(id) ?? 0) > 1,
      terminal: (out.get(id) ?? []).length === 0,
      unreachable: story.start_scene !== null && col === orphanColumn && reachedMax >= 0,
    };
  });

  const edges: GraphEdge[] = story.edges.map((e) => ({
    from: e.from_scene,
    to: e.to_scene,
    via: e.via,
    back: (column.get(e.to_scene) ?? 0) <= (column.get(e.from_scene) ?? 0),
  }));

  return { nodes, edges, columns: Math.max(0, ...column.values()) + (ids.length ? 1 : 0) };
}

/** Response labels still waiting for a branch target, per scene. */
export function unlinkedResponses(story: StoryDoc): Map<string, string[]> {
  const open = new Map<string, string[]>();
  for (const [id, scene] of Object.entries(story.scenes)) {
    if (!scene.interaction) continue;
    const linked = new Set(
      story.edges.filter((e) => e.from_scene === id && e.via !== null).map((e) => e.via),
    );
    const missing = scene.interaction.responses
      .map((r) => r.label)
      .filter((label) => !linked.has(label));
    if (missing.length) open.set(id, missing);
  }
  return open;
}
