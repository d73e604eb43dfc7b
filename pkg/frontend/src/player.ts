/**
 * Playback stage: folds the interpreter's event stream into what is on
 * screen right now, and keeps flagged media veiled.
 *
 * An asset whose provenance carries `trigger_warning` is sensitive
 * content the author chose to keep: the stage shows a warning card with
 * its categories instead of the media, until the viewer reveals that
 * asset.  A reveal is per asset and sticks for the rest of the session.
 */

import type { PlaybackEvent, StoryDoc } from "./schemas.js";

export interface VisibleElement {
  elementId: string;
  kind: string;
  text: string | null;
  assetId: string | null;
  x: number;
  y: number;
  width: number;
  height: number;
}

export interface PromptView {
  question: string;
  responses: string[];
}

export interface Veil {
  assetId: string;
  categories: string[];
  /** where the flagged asset would appear */
  slot: "background" | "element" | "audio";
}

export class StageView {
  sceneId: string | null = null;
  sceneTitle = "";
  backgroundAsset: string | null = null;
  particleEffect: string | null = null;
  elements = new Map<string, VisibleElement>();
  playingAudio = new Set<string>();
  prompt: PromptView | null = null;
  finished = false;

  private sensitive = new Map<string, string[]>();
  private revealed = new Set<string>();

  constructor(story: StoryDoc) {
    for (const [assetId, ref] of Object.entries(story.asset_index)) {
      if (ref.provenance.params["trigger_warning"] === true) {
        const raw = ref.provenance.params["categories"];
        const categories = Array.isArray(raw) ? raw.map(String) : [];
        this.sensitive.set(assetId, categories);
      }
    }
  }

  apply(events: PlaybackEvent[]): void {
    for (const event of events) this.one(event);
  }

  private one(event: PlaybackEvent): void {
    const p = event.payload;
    switch (event.kind) {
      case "scene_enter":
        this.sceneId = str(p.scene);
        this.sceneTitle = str(p.title);
        this.backgroundAsset = strOrNull(p.background);
        this.particleEffect = null;
        this.elements.clear();
        this.playingAudio.clear();
        this.prompt = null;
        break;
      case "scene_exit":
        this.elements.clear();
        this.playingAudio.clear();
        this.prompt = null;
        break;
      case "particles":
        this.particleEffect = str(p.effect);
        break;
      case "bubble_show":
      case "element_show": {
        const [x, y] = pair(p.position);
        const [width, height] = pairOr(p.size, [0.2, 0.2]);
        const id = str(p.element);
        this.elements.set(id, {
          elementId: id,
          kind: event.kind === "bubble_show" ? "speech_bubble" : str(p.element_kind),
          text: strOrNull(p.text),
          assetId: strOrNull(p.asset),
          x,
          y,
          width,
          height,
        });
        break;
      }
      case "element_move": {
        const shown = this.elements.get(str(p.element));
        if (shown) {
          const [x, y] = pair(p.position);
          shown.x = x;
          shown.y = y;
        }
        break;
      }
      case "element_hide":
        this.elements.delete(str(p.element));
        break;
      case "audio_start":
      case "speech_start":
        this.playingAudio.add(str(p.asset));
        break;
      case "audio_stop":
        this.playingAudio.delete(str(p.asset));
        break;
      case "interaction_prompt":
        this.prompt = {
          question: str(p.question),
          responses: Array.isArray(p.responses) ? p.responses.map(String) : [],
        };
        break;
      case "story_end":
        this.finished = true;
        break;
    }
  }

  reveal(assetId: string): void {
    this.revealed.add(assetId);
  }

  /** Flagged assets on stage right now that the viewer has not opted into. */
  veils(): Veil[] {
    const out: Veil[] = [];
    const add = (assetId: string | null, slot: Veil["slot"]) => {
      if (!assetId || this.revealed.has(assetId)) return;
      const categories = this.sensitive.get(assetId);
      if (categories && !out.some((v) => v.assetId === assetId)) {
        out.push({ assetId, categories, slot });
      }
    };
    add(this.backgroundAsset, "background");
    for (const element of this.elements.values()) add(element.assetId, "element");
    for (const assetId of this.playingAudio) add(assetId, "audio");
    return out;
  }

  /** True when this asset should be drawn rather than covered. */
  visible(assetId: string): boolean {
    return !this.sensitive.has(assetId) || this.revealed.has(assetId);
  }
}

function str(value: unknown): string {
  return typeof value === "string" ? value : "";
}

function strOrNull(value: unknown): string | null {
  return typeof value === "string" ? value : null;
}

function pair(value: unknown): [number, number] {
  return pairOr(value, [0.5, 0.5]);
}

function pairOr(value: unknown, fallback: [number, number]): [number, number] {
  if (Array.isArray(value) && value.length === 2) {
    const [a, b] = value;
    if (typeof a === "number" && typeof b === "number") return [a, b];
  }
  return fallback;
}
