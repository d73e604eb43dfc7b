import { describe, expect, it } from "vitest";

import { renderStoryboard } from "../src/html.js";
import { layoutStoryboard, unlinkedResponses } from "../src/storyboard.js";
import { branchingStory, linearStory, scene, storyDoc } from "./helpers.js";

function node(layout: ReturnType<typeof layoutStoryboard>, id: string) {
  const found = layout.nodes.find((n) => n.sceneId === id);
  if (!found) throw new Error(`no node ${id}`);
  return found;
}

describe("storyboard layout", () => {
  it("lays a linear story left to right", () => {
    const layout = layoutStoryboard(linearStory());
    expect(node(layout, "s1").column).toBe(0);
    expect(node(layout, "s2").column).toBe(1);
    expect(node(layout, "s3").column).toBe(2);
    expect(layout.edges.every((e) => !e.back)).toBe(true);
    expect(node(layout, "s1").start).toBe(true);
    expect(node(layout, "s3").terminal).toBe(true);
  });

  it("fans branches out and marks the reconvergence", () => {
    const layout = layoutStoryboard(branchingStory());
    expect(node(layout, "s2").column).toBe(1);
    expect(node(layout, "s3").column).toBe(1);
    expect(node(layout, "s2").row).not.toBe(node(layout, "s3").row);
    expect(node(layout, "s4").merge).toBe(true);
    const labels = layout.edges.map((e) => e.via).filter(Boolean).sort();
    expect(labels).toEqual(["Forest", "Town"]);
  });

  it("marks cycle edges as back edges", () => {
    const doc = linearStory();
    doc.edges = [...doc.edges, { from_scene: "s3", to_scene: "s1", via: null }];
    const layout = layoutStoryboard(doc);
    const backs = layout.edges.filter((e) => e.back);
    expect(backs).toHaveLength(1);
    expect(backs[0]).toMatchObject({ from: "s3", to: "s1" });
  });

  it("parks unreachable scenes past the reached board", () => {
    const doc = linearStory();
    doc.scenes = { ...doc.scenes, lost: scene("lost") };
    const layout = layoutStoryboard(doc);
    expect(node(layout, "lost").unreachable).toBe(true);
    expect(node(layout, "lost").column).toBe(3);
  });

  it("copes with no start scene at all", () => {
    const doc = storyDoc({ scenes: { a: scene("a"), b: scene("b") } });
    const layout = layoutStoryboard(doc);
    expect(layout.nodes).toHaveLength(2);
    expect(layout.nodes.every((n) => n.column === 0)).toBe(true);
    expect(layout.nodes.every((n) => !n.unreachable)).toBe(true);
  });

  it("lists response labels that still need a branch target", () => {
    const doc = branchingStory();
    doc.edges = doc.edges.filter((e) => e.via !== "Town");
    const open = unlinkedResponses(doc);
    expect(open.get("s1")).toEqual(["Town"]);
    expect(unlinkedResponses(branchingStory()).size).toBe(0);
  });
});

describe("storyboard rendering", () => {
  it("draws labeled edges and scene nodes", () => {
    const doc = branchingStory();
    const html = renderStoryboard(layoutStoryboard(doc), unlinkedResponses(doc));
    expect(html).toContain('data-scene="s1"');
    expect(html).toContain(">Forest</text>");
    expect(html).toContain(">Town</text>");
    expect(html).toContain("is-merge");
    expect(html).toContain("is-interactive");
  });

  it("escapes hostile scene titles", () => {
    const doc = storyDoc({
      scenes: { s1: scene("s1", { title: '<img src=x onerror="pwn()">' }) },
      start_scene: "s1",
    });
    const html = renderStoryboard(layoutStoryboard(doc), new Map());
    expect(html).not.toContain("<img");
    expect(html).toContain("&lt;img");
  });
});
