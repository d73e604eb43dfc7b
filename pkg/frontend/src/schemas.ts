/**
 * Wire shapes for the authoring service, as zod schemas.
 *
 * The backend flattens each object's `extra` dict into the object
 * itself, so unknown keys are normal and every schema here is loose:
 * known fields are checked, the rest ride along untouched.
 */

import { z } from "zod";

export const ErrorBody = z.looseObject({
  error: z.string(),
  message: z.string(),
  detail: z.record(z.string(), z.unknown()),
});
export type ErrorBody = z.infer<typeof ErrorBody>;

export const ChatMessage = z.looseObject({
  role: z.enum(["system", "user", "assistant"]),
  content: z.string(),
});
export type ChatMessage = z.infer<typeof ChatMessage>;

export const DialogueLine = z.looseObject({
  speaker: z.string(),
  speech: z.string(),
});

// field names follow the writing model's output schema, hence camelCase
export const ScreenplayScene = z.looseObject({
  sceneName: z.string(),
  backgroundDescription: z.string().default(""),
  narration: z.string().default(""),
  characters: z.array(z.string()).default([]),
  dialogue: z.array(DialogueLine).default([]),
});
export type ScreenplayScene = z.infer<typeof ScreenplayScene>;

export const CompileReport = z.looseObject({
  scenes: z.array(ScreenplayScene),
  repairs: z.array(z.string()),
  rejected: z.boolean(),
});
export type CompileReport = z.infer<typeof CompileReport>;

export const Provenance = z.looseObject({
  provider_name: z.string(),
  prompt: z.string(),
  negative_prompt: z.string().default(""),
  params: z.record(z.string(), z.unknown()).default({}),
  seed: z.number().nullable().default(null),
  created_at: z.string().default(""),
});
export type Provenance = z.infer<typeof Provenance>;

export const AssetRef = z.looseObject({
  asset_id: z.string(),
  kind: z.enum(["image", "character_cutout", "audio_effect", "music", "speech"]),
  media_type: z.string(),
  provenance: Provenance,
  byte_length: z.number(),
});
export type AssetRef = z.infer<typeof AssetRef>;

export const SceneElement = z.looseObject({
  element_id: z.string(),
  kind: z.enum(["character", "speech_bubble", "background"]),
  asset: z.string().nullable().default(null),
  text: z.string().nullable().default(null),
  size: z.tuple([z.number(), z.number()]).default([0.2, 0.2]),
  path: z
    .array(z.tuple([z.number(), z.number()]))
    .nullable()
    .default(null),
});
export type SceneElement = z.infer<typeof SceneElement>;

export const TimelineClip = z.looseObject({
  clip_id: z.string(),
  target: z.string(),
  track: z.enum(["visual", "audio", "speech"]),
  start_s: z.number(),
  duration_s: z.number(),
});
export type TimelineClip = z.infer<typeof TimelineClip>;

export const Response = z.looseObject({
  label: z.string(),
  feedback_audio: z.string().nullable().default(null),
  next_scene: z.string().nullable().default(null),
});
export type Response = z.infer<typeof Response>;

export const InteractionSpec = z.looseObject({
  question: z.string(),
  responses: z.array(Response),
  question_audio: z.string().nullable().default(null),
});
export type InteractionSpec = z.infer<typeof InteractionSpec>;

export const Scene = z.looseObject({
  scene_id: z.string(),
  title: z.string().default(""),
  background: z.string().nullable().default(null),
  background_description: z.string().default(""),
  elements: z.array(SceneElement).default([]),
  clips: z.array(TimelineClip).default([]),
  particle_effect: z.enum(["none", "rain", "snow"]).default("none"),
  interaction: InteractionSpec.nullable().default(null),
});
export type Scene = z.infer<typeof Scene>;

export const Edge = z.looseObject({
  from_scene: z.string(),
  to_scene: z.string(),
  via: z.string().nullable().default(null),
});
export type Edge = z.infer<typeof Edge>;

export const VoiceProfile = z.looseObject({
  name: z.string(),
  voice_id: z.string(),
  pitch: z.number().default(0),
  speed: z.number().default(1),
});
export type VoiceProfile = z.infer<typeof VoiceProfile>;

export const StoryDoc = z.looseObject({
  story_id: z.string(),
  title: z.string().default(""),
  storyline: z.string().default(""),
  screenplay: z.array(ScreenplayScene).default([]),
  scenes: z.record(z.string(), Scene).default({}),
  start_scene: z.string().nullable().default(null),
  edges: z.array(Edge).default([]),
  voice_profiles: z.record(z.string(), VoiceProfile).default({}),
  asset_index: z.record(z.string(), AssetRef).default({}),
  schema_version: z.number(),
});
export type StoryDoc = z.infer<typeof StoryDoc>;

export const StoryListing = z.looseObject({
  story_id: z.string(),
  title: z.string().default(""),
  scenes: z.number(),
  start_scene: z.string().nullable().default(null),
});
export type StoryListing = z.infer<typeof StoryListing>;

export const Violation = z.looseObject({
  code: z.string(),
  severity: z.string(),
  message: z.string(),
});
export type Violation = z.infer<typeof Violation>;

export const JobDoc = z.looseObject({
  job_id: z.string(),
  type: z.enum(["image", "audio", "speech", "segmentation"]),
  state: z.enum(["queued", "running", "done", "failed", "cancelled"]),
  request: z.record(z.string(), z.unknown()),
  result: z.array(z.string()).nullable(),
  error: z.string().nullable(),
  error_code: z.string().nullable(),
  trigger_warning: z.boolean(),
  transitions: z.array(z.array(z.unknown())),
});
export type JobDoc = z.infer<typeof JobDoc>;

export const PlaybackEvent = z.looseObject({
  kind: z.string(),
  time: z.number(),
  payload: z.record(z.string(), z.unknown()),
});
export type PlaybackEvent = z.infer<typeof PlaybackEvent>;

export const PlaybackState = z.looseObject({
  story_id: z.string(),
  current_scene: z.string().nullable(),
  t: z.number(),
  phase: z.enum(["playing", "awaiting_input", "finished"]),
  history: z.array(z.tuple([z.string(), z.string().nullable()])),
});
export type PlaybackState = z.infer<typeof PlaybackState>;

export const PlaybackSession = z.looseObject({
  session_id: z.string(),
  mode: z.enum(["clock", "manual"]),
  state: PlaybackState,
  events: z.array(PlaybackEvent).default([]),
});
export type PlaybackSession = z.infer<typeof PlaybackSession>;

export const SafetyVerdict = z.looseObject({
  allowed: z.boolean(),
  trigger_warning: z.boolean().default(false),
  categories: z.array(z.string()).default([]),
});
export type SafetyVerdict = z.infer<typeof SafetyVerdict>;

export const ParameterLabel = z.looseObject({
  parameter: z.string(),
  label: z.string(),
  explanation: z.string(),
});
export type ParameterLabel = z.infer<typeof ParameterLabel>;

export const PromptTemplate = z.looseObject({
  name: z.string(),
  slots: z.array(z.string()),
});
export type PromptTemplate = z.infer<typeof PromptTemplate>;

export const LibraryExample = z.looseObject({
  prompt: z.string(),
  asset_id: z.string(),
});
export type LibraryExample = z.infer<typeof LibraryExample>;

export const FeedEntry = z.looseObject({
  seq: z.number(),
  kind: z.enum(["story", "job", "playback"]),
  data: z.record(z.string(), z.unknown()),
});
export type FeedEntry = z.infer<typeof FeedEntry>;

export const FeedPage = z.looseObject({
  events: z.array(FeedEntry),
  next: z.number(),
});
export type FeedPage = z.infer<typeof FeedPage>;
