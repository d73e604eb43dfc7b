import { describe, expect, it } from "vitest";

import { renderStage } from "../src/html.js";
import { StageView } from "../src/player.js";
import type { PlaybackEvent } from "../src/schemas.js";
import { assetRef, branchingStory, storyDoc } from "./helpers.js";

const at = (kind: string, time: number, payload: Record<string, unknown>): PlaybackEvent => ({
  kind,
  time,
  payload,
});

function flaggedStory() {
  const doc = branchingStory();
  doc.scenes.s3!.background = "dead01";
  doc.asset_index = {
    dead01: assetRef("dead01", {
      provenance: {
        provider_name: "mock-image",
        prompt: "a terrible storm over the village",
        negative_prompt: "",
        params: { trigger_warning: true, categories: ["weather peril"] },
        seed: 1,
        created_at: "",
      },
    }),
  };
  return doc;
}

describe("stage view", () => {
  it("tracks what scene_enter and show/hide events put on stage", () => {
    const stage = new StageView(storyDoc());
    stage.apply([
      at("scene_enter", 0, { scene: "s1", title: "Riverbank", background: "bg1" }),
      at("particles", 0, { scene: "s1", effect: "rain" }),
      at("bubble_show", 0, {
        scene: "s1",
        element: "e1",
        text: "Hello.",
        position: [0.4, 0.2],
        size: [0.3, 0.1],
      }),
      at("audio_start", 0, { scene: "s1", asset: "fx1", clip: "c2" }),
    ]);
    expect(stage.sceneId).toBe("s1");
    expect(stage.particleEffect).toBe("rain");
    expect(stage.elements.get("e1")).toMatchObject({ text: "Hello.", x: 0.4 });
    expect(stage.playingAudio.has("fx1")).toBe(true);

    stage.apply([
      at("element_hide", 1, { scene: "s1", element: "e1", clip: "c1" }),
      at("audio_stop", 1, { scene: "s1", asset: "fx1", clip: "c2" }),
    ]);
    expect(stage.elements.size).toBe(0);
    expect(stage.playingAudio.size).toBe(0);
  });

  it("moves elements along their paths", () => {
    const stage = new StageView(storyDoc());
    stage.apply([
      at("scene_enter", 0, { scene: "s1", title: "", background: null }),
      at("element_show", 0, {
        scene: "s1",
        element: "e2",
        element_kind: "character",
        asset: "cut1",
        position: [0.1, 0.8],
        size: [0.2, 0.4],
      }),
      at("element_move", 0.5, { scene: "s1", element: "e2", position: [0.5, 0.8] }),
    ]);
    expect(stage.elements.get("e2")).toMatchObject({ x: 0.5, y: 0.8, assetId: "cut1" });
  });

  it("clears the stage between scenes and ends cleanly", () => {
    const stage = new StageView(storyDoc());
    stage.apply([
      at("scene_enter", 0, { scene: "s1", title: "", background: "bg1" }),
      at("bubble_show", 0, { scene: "s1", element: "e1", text: "x", position: [0, 0], size: [1, 1] }),
      at("scene_exit", 2, { scene: "s1" }),
      at("scene_enter", 0, { scene: "s2", title: "", background: null }),
      at("story_end", 1, { scene: "s2" }),
    ]);
    expect(stage.sceneId).toBe("s2");
    expect(stage.elements.size).toBe(0);
    expect(stage.finished).toBe(true);
  });

  it("surfaces the interaction prompt", () => {
    const stage = new StageView(branchingStory());
    stage.apply([
      at("scene_enter", 0, { scene: "s1", title: "", background: null }),
      at("interaction_prompt", 0, {
        scene: "s1",
        question: "Which way?",
        question_audio: null,
        responses: ["Forest", "Town"],
      }),
    ]);
    expect(stage.prompt).toEqual({ question: "Which way?", responses: ["Forest", "Town"] });
    const html = renderStage(stage, (id) => `/assets/${id}`);
    expect(html).toContain('data-action="respond" data-label="Forest"');
    expect(html).toContain('data-action="respond" data-label="Town"');
  });
});

describe("trigger-warning veil", () => {
  it("covers a flagged background until the viewer reveals it", () => {
    const stage = new StageView(flaggedStory());
    stage.apply([at("scene_enter", 0, { scene: "s3", title: "", background: "dead01" })]);

    expect(stage.veils()).toEqual([
      { assetId: "dead01", categories: ["weather peril"], slot: "background" },
    ]);
    let html = renderStage(stage, (id) => `/assets/${id}`);
    expect(html).toContain("sl-trigger-overlay");
    expect(html).toContain("weather peril");
    expect(html).not.toContain("/assets/dead01");

    stage.reveal("dead01");
    expect(stage.veils()).toEqual([]);
    html = renderStage(stage, (id) => `/assets/${id}`);
    expect(html).not.toContain("sl-trigger-overlay");
    expect(html).toContain("/assets/dead01");
  });

  it("a reveal sticks when the asset comes back on stage", () => {
    const stage = new StageView(flaggedStory());
    stage.apply([at("scene_enter", 0, { scene: "s3", title: "", background: "dead01" })]);
    stage.reveal("dead01");
    stage.apply([
      at("scene_exit", 1, { scene: "s3" }),
      at("scene_enter", 0, { scene: "s3", title: "", background: "dead01" }),
    ]);
    expect(stage.veils()).toEqual([]);
  });

  it("never veils unflagged assets", () => {
    const stage = new StageView(flaggedStory());
    stage.apply([at("scene_enter", 0, { scene: "s2", title: "", background: "clean9" })]);
    expect(stage.veils()).toEqual([]);
    expect(stage.visible("clean9")).toBe(true);
  });
});
