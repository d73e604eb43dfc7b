/**
 * Scene editor view model: a canvas of placed elements plus one
 * timeline row per track.  Everything is computed from the story
 * document, so the screen redraws from scratch after every mutation the
 * service confirms.
 */

import type { AssetRef, Scene, StoryDoc, TimelineClip } from "./schemas.js";

export const TRACKS = ["visual", "audio", "speech"] as const;
export type Track = (typeof TRACKS)[number];

export interface TimelineItem {
  clipId: string;
  target: string;
  label: string;
  startS: number;
  durationS: number;
  leftPct: number;
  widthPct: number;
}

export interface TimelineRow {
  track: Track;
  items: TimelineItem[];
}

export interface CanvasItem {
  elementId: string;
  kind: string;
  label: string;
  /** unit-canvas position: the path start when the element travels */
  x: number;
  y: number;
  width: number;
  height: number;
  hasPath: boolean;
  assetId: string | null;
}

export interface EditorView {
  sceneId: string;
  title: string;
  backgroundAsset: string | null;
  backgroundDescription: string;
  particleEffect: string;
  durationS: number;
  canvas: CanvasItem[];
  timeline: TimelineRow[];
  question: string | null;
  responseLabels: string[];
}

/** Short human name for a clip target: element text, asset prompt, or the id. */
function targetLabel(scene: Scene, assets: Record<string, AssetRef>, target: string): string {
  const element = scene.elements.find((e) => e.element_id === target);
  if (element) {
    if (element.text) return clipText(element.text);
    return `${element.kind} ${element.element_id}`;
  }
  const ref = assets[target];
  if (ref) return clipText(ref.provenance.prompt) || ref.kind;
  return target;
}

function clipText(text: string, limit = 28): string {
  const flat = text.replace(/\s+/g, " ").trim();
  return flat.length > limit ? `${flat.slice(0, limit - 1)}…` : flat;
}

export function sceneDuration(scene: Scene): number {
  return Math.max(0, ...scene.clips.map((c) => c.start_s + c.duration_s));
}

export function buildEditorView(story: StoryDoc, sceneId: string): EditorView | null {
  const scene = story.scenes[sceneId];
  if (!scene) return null;
  const durationS = sceneDuration(scene);
  const span = durationS || 1;

  const rows: TimelineRow[] = TRACKS.map((track) => ({
    track,
    items: scene.clips
      .filter((c) => c.track === track)
      .sort((a, b) => a.start_s - b.start_s)
      .map((c: TimelineClip) => ({
        clipId: c.clip_id,
        target: c.target,
        label: targetLabel(scene, story.asset_index, c.target),
        startS: c.start_s,
        durationS: c.duration_s,
        leftPct: (c.start_s / span) * 100,
        widthPct: (c.duration_s / span) * 100,
      })),
  }));

  const canvas: CanvasItem[] = scene.elements.map((e) => {
    const [x, y] = e.path?.[0] ?? [0.5, 0.5];
    return {
      elementId: e.element_id,
      kind: e.kind,
      label: e.text ? clipText(e.text) : `${e.kind} ${e.element_id}`,
      x,
      y,
      width: e.size[0],
      height: e.size[1],
      hasPath: e.path !== null && e.path.length > 1,
      assetId: e.asset,
    };
  });

  return {
    sceneId,
    title: scene.title,
    backgroundAsset: scene.background,
    backgroundDescription: scene.background_description,
    particleEffect: scene.particle_effect,
    durationS,
    canvas,
    timeline: rows,
    question: scene.interaction?.question ?? null,
    responseLabels: scene.interaction?.responses.map((r) => r.label) ?? [],
  };
}
