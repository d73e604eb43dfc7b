/** Canned wire documents for unit tests; shaped exactly like service output. */

import type { AssetRef, Scene, StoryDoc } from "../src/schemas.js";

export function assetRef(assetId: string, overrides: Partial<AssetRef> = {}): AssetRef {
  return {
    asset_id: assetId,
    kind: "image",
    media_type: "image/png",
    provenance: {
      provider_name: "mock-image",
      prompt: `picture ${assetId}`,
      negative_prompt: "",
      params: {},
      seed: 7,
      created_at: "2024-01-01T00:00:00+00:00",
    },
    byte_length: 128,
    ...overrides,
  };
}

export function scene(sceneId: string, overrides: Partial<Scene> = {}): Scene {
  return {
    scene_id: sceneId,
    title: `Scene ${sceneId}`,
    background: null,
    background_description: "",
    elements: [],
    clips: [],
    particle_effect: "none",
    interaction: null,
    ...overrides,
  };
}

export function storyDoc(overrides: Partial<StoryDoc> = {}): StoryDoc {
  return {
    story_id: "st1",
    title: "Testing grounds",
    storyline: "",
    screenplay: [],
    scenes: {},
    start_scene: null,
    edges: [],
    voice_profiles: {},
    asset_index: {},
    schema_version: 1,
    ...overrides,
  };
}

/** Linear three-scene story: s1 -> s2 -> s3, bubble and clip on s1. */
export function linearStory(): StoryDoc {
  return storyDoc({
    scenes: {
      s1: scene("s1", {
        elements: [
          {
            element_id: "e1",
            kind: "speech_bubble",
            asset: null,
            text: "Off we go.",
            size: [0.2, 0.2],
            path: null,
          },
        ],
        clips: [
          {
            clip_id: "c1",
            target: "e1",
            track: "visual",
            start_s: 0,
            duration_s: 1,
          },
        ],
      }),
      s2: scene("s2"),
      s3: scene("s3"),
    },
    start_scene: "s1",
    edges: [
      { from_scene: "s1", to_scene: "s2", via: null },
      { from_scene: "s2", to_scene: "s3", via: null },
    ],
  });
}

/** Branching story: s1 asks a question, answers lead to s2 or s3, both rejoin at s4. */
export function branchingStory(): StoryDoc {
  return storyDoc({
    scenes: {
      s1: scene("s1", {
        interaction: {
          question: "Which way?",
          question_audio: null,
          responses: [
            { label: "Forest", feedback_audio: null, next_scene: "s2" },
            { label: "Town", feedback_audio: null, next_scene: "s3" },
          ],
        },
      }),
      s2: scene("s2"),
      s3: scene("s3"),
      s4: scene("s4"),
    },
    start_scene: "s1",
    edges: [
      { from_scene: "s1", to_scene: "s2", via: "Forest" },
      { from_scene: "s1", to_scene: "s3", via: "Town" },
      { from_scene: "s2", to_scene: "s4", via: null },
      { from_scene: "s3", to_scene: "s4", via: null },
    ],
  });
}
