/**
 * Typed client for the authoring service.  Every call goes through
 * fetch; responses are validated against the schemas so a drifting
 * backend fails loudly here instead of deep inside a view.
 */

import { z } from "zod";
import * as S from "./schemas.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public detail: Record<string, unknown> = {},
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export interface ClientOptions {
  baseUrl: string;
  token?: string;
  fetchImpl?: typeof fetch;
}

type Json = Record<string, unknown>;

export class StoryloomClient {
  private baseUrl: string;
  private token?: string;
  private fetchImpl: typeof fetch;

  constructor(opts: ClientOptions) {
    this.baseUrl = opts.baseUrl.replace(/\/+$/, "");
    this.token = opts.token;
    this.fetchImpl = opts.fetchImpl ?? fetch;
  }

  private async request(method: string, path: string, body?: Json | null): Promise<unknown> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["content-type"] = "application/json";
    if (this.token) headers["authorization"] = `Bearer ${this.token}`;
    const res = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!res.ok) {
      const parsed = S.ErrorBody.safeParse(await res.json().catch(() => ({})));
      if (parsed.success) {
        throw new ApiError(res.status, parsed.data.error, parsed.data.message, parsed.data.detail);
      }
      throw new ApiError(res.status, "HttpError", `${method} ${path} -> ${res.status}`);
    }
    return res.json();
  }

  private async get<T>(path: string, schema: z.ZodType<T>): Promise<T> {
    return schema.parse(await this.request("GET", path));
  }

  private async send<T>(
    method: string,
    path: string,
    schema: z.ZodType<T>,
    body?: Json | null,
  ): Promise<T> {
    return schema.parse(await this.request(method, path, body));
  }

  // -- meta ---------------------------------------------------------------

  health() {
    return this.get("/health", z.looseObject({ ok: z.boolean() }));
  }

  labels() {
    return this.get("/labels", z.record(z.string(), S.ParameterLabel));
  }

  templates() {
    return this.get("/templates", z.looseObject({ templates: z.array(S.PromptTemplate) }));
  }

  renderTemplate(values: Record<string, string>) {
    return this.send("POST", "/templates/render", z.looseObject({ prompt: z.string() }), { values });
  }

  checkSafety(text: string) {
    return this.send("POST", "/safety", S.SafetyVerdict, { text });
  }

  refine(prompt: string) {
    return this.send("POST", "/refine", z.looseObject({ refined: z.string() }), { prompt });
  }

  library(query = "") {
    const path = query ? `/library?query=${encodeURIComponent(query)}` : "/library";
    return this.get(path, z.looseObject({ examples: z.array(S.LibraryExample) }));
  }

  // -- stories ------------------------------------------------------------

  listStories() {
    return this.get("/stories", z.looseObject({ stories: z.array(S.StoryListing) }));
  }

  async createStory(title = "", storyId?: string) {
    const body: Json = { title };
    if (storyId) body.story_id = storyId;
    return (await this.send("POST", "/stories", WithStory, body)).story;
  }

  async getStory(storyId: string) {
    return (await this.get(`/stories/${storyId}`, WithStory)).story;
  }

  deleteStory(storyId: string) {
    return this.send("DELETE", `/stories/${storyId}`, z.looseObject({ deleted: z.string() }));
  }

  validateStory(storyId: string) {
    return this.get(
      `/stories/${storyId}/validate`,
      z.looseObject({ violations: z.array(S.Violation) }),
    );
  }

  saveStory(storyId: string) {
    return this.send(
      "POST",
      `/stories/${storyId}/save`,
      z.looseObject({ package_id: z.string(), path: z.string() }),
    );
  }

  async loadStory(packageId: string) {
    return (await this.send("POST", "/stories/load", WithStory, { package_id: packageId })).story;
  }

  listPackages() {
    return this.get("/packages", z.looseObject({ packages: z.array(z.string()) }));
  }

  // -- writing ------------------------------------------------------------

  chatHistory(storyId: string) {
    return this.get(
      `/stories/${storyId}/chat`,
      z.looseObject({ messages: z.array(S.ChatMessage) }),
    );
  }

  chat(storyId: string, text: string) {
    return this.send(
      "POST",
      `/stories/${storyId}/chat`,
      z.looseObject({ reply: z.string(), messages: z.array(S.ChatMessage) }),
      { text },
    );
  }

  resetChat(storyId: string) {
    return this.send(
      "DELETE",
      `/stories/${storyId}/chat`,
      z.looseObject({ messages: z.array(S.ChatMessage) }),
    );
  }

  setStoryline(storyId: string, text: string) {
    return this.send("PUT", `/stories/${storyId}/storyline`, WithStory, { text });
  }

  compile(storyId: string, storyline?: string) {
    const body: Json = storyline === undefined ? {} : { storyline };
    return this.send("POST", `/stories/${storyId}/compile`, S.CompileReport, body);
  }

  populate(storyId: string) {
    return this.send(
      "POST",
      `/stories/${storyId}/populate`,
      WithStory.extend({ warnings: z.array(z.string()) }),
    );
  }

  // -- storyboard ---------------------------------------------------------

  addScene(storyId: string, title = "") {
    return this.send(
      "POST",
      `/stories/${storyId}/scenes`,
      WithStory.extend({ scene_id: z.string() }),
      { title },
    );
  }

  removeScene(storyId: string, sceneId: string) {
    return this.send(
      "DELETE",
      `/stories/${storyId}/scenes/${sceneId}`,
      WithStory.extend({ warnings: z.array(z.string()) }),
    );
  }

  duplicateScene(storyId: string, sceneId: string) {
    return this.send(
      "POST",
      `/stories/${storyId}/scenes/${sceneId}/duplicate`,
      WithStory.extend({ scene_id: z.string() }),
    );
  }

  link(storyId: string, from: string, to: string, via?: string) {
    const body: Json = { from, to };
    if (via !== undefined) body.via = via;
    return this.send("POST", `/stories/${storyId}/links`, WithStory, body);
  }

  unlink(storyId: string, from: string, to: string, via?: string) {
    const body: Json = { from, to };
    if (via !== undefined) body.via = via;
    return this.send("POST", `/stories/${storyId}/links/remove`, WithStory, body);
  }

  setStart(storyId: string, sceneId: string) {
    return this.send("PUT", `/stories/${storyId}/start`, WithStory, { scene_id: sceneId });
  }

  // -- scene editing ------------------------------------------------------

  updateScene(storyId: string, sceneId: string, fields: Json) {
    return this.send("PUT", `/stories/${storyId}/scenes/${sceneId}`, WithStory, fields);
  }

  upsertElement(storyId: string, sceneId: string, element: Json) {
    return this.send(
      "PUT",
      `/stories/${storyId}/scenes/${sceneId}/elements`,
      WithStory.extend({ element_id: z.string() }),
      element,
    );
  }

  removeElement(storyId: string, sceneId: string, elementId: string) {
    return this.send(
      "DELETE",
      `/stories/${storyId}/scenes/${sceneId}/elements/${elementId}`,
      WithStory,
    );
  }

  setPath(storyId: string, sceneId: string, elementId: string, path: [number, number][] | null) {
    return this.send(
      "PUT",
      `/stories/${storyId}/scenes/${sceneId}/elements/${elementId}/path`,
      WithStory,
      { path },
    );
  }

  setParticles(storyId: string, sceneId: string, effect: "none" | "rain" | "snow") {
    return this.send("PUT", `/stories/${storyId}/scenes/${sceneId}/particles`, WithStory, {
      effect,
    });
  }

  upsertClip(storyId: string, sceneId: string, clip: Json) {
    return this.send(
      "PUT",
      `/stories/${storyId}/scenes/${sceneId}/clips`,
      WithStory.extend({ clip_id: z.string() }),
      clip,
    );
  }

  removeClip(storyId: string, sceneId: string, clipId: string) {
    return this.send("DELETE", `/stories/${storyId}/scenes/${sceneId}/clips/${clipId}`, WithStory);
  }

  sceneDuration(storyId: string, sceneId: string) {
    return this.get(
      `/stories/${storyId}/scenes/${sceneId}/duration`,
      z.looseObject({ duration_s: z.number() }),
    );
  }

  /** The body is the interaction spec itself; null clears it. */
  setInteraction(storyId: string, sceneId: string, spec: Json | null) {
    return this.send(
      "PUT",
      `/stories/${storyId}/scenes/${sceneId}/interaction`,
      WithStory.extend({ warnings: z.array(z.string()) }),
      spec,
    );
  }

  upsertVoice(storyId: string, profile: Json) {
    return this.send("PUT", `/stories/${storyId}/voices`, WithStory, profile);
  }

  // -- generation ---------------------------------------------------------

  submitJob(request: Json) {
    return this.send("POST", "/generate", S.JobDoc, request);
  }

  listJobs() {
    return this.get("/jobs", z.looseObject({ jobs: z.array(S.JobDoc) }));
  }

  getJob(jobId: string) {
    return this.get(`/jobs/${jobId}`, S.JobDoc);
  }

  cancelJob(jobId: string) {
    return this.send("POST", `/jobs/${jobId}/cancel`, S.JobDoc);
  }

  async assetBytes(assetId: string): Promise<{ bytes: Uint8Array; mediaType: string }> {
    const headers: Record<string, string> = {};
    if (this.token) headers["authorization"] = `Bearer ${this.token}`;
    const res = await this.fetchImpl(`${this.baseUrl}/assets/${assetId}`, { headers });
    if (!res.ok) {
      throw new ApiError(res.status, "UnknownAsset", `no asset ${assetId}`);
    }
    return {
      bytes: new Uint8Array(await res.arrayBuffer()),
      mediaType: res.headers.get("content-type") ?? "application/octet-stream",
    };
  }

  assetRef(assetId: string) {
    return this.get(`/assets/${assetId}/ref`, S.AssetRef);
  }

  assetUrl(assetId: string): string {
    return `${this.baseUrl}/assets/${assetId}`;
  }

  // -- playback -----------------------------------------------------------

  startPlayback(storyId: string, mode: "clock" | "manual" = "manual", dt?: number) {
    const body: Json = { mode };
    if (dt !== undefined) body.dt = dt;
    return this.send("POST", `/stories/${storyId}/playback`, S.PlaybackSession, body);
  }

  playbackState(sessionId: string) {
    return this.get(`/playback/${sessionId}`, S.PlaybackSession.omit({ events: true }));
  }

  tick(sessionId: string, dt?: number) {
    const body: Json = dt === undefined ? {} : { dt };
    return this.send("POST", `/playback/${sessionId}/tick`, TickResult, body);
  }

  respond(sessionId: string, label: string) {
    return this.send("POST", `/playback/${sessionId}/respond`, TickResult, { label });
  }

  stopPlayback(sessionId: string) {
    return this.send("DELETE", `/playback/${sessionId}`, z.looseObject({ stopped: z.string() }));
  }

  // -- event feed ---------------------------------------------------------

  poll(after: number, timeoutS = 25): Promise<S.FeedPage> {
    return this.get(`/events?after=${after}&timeout=${timeoutS}`, S.FeedPage);
  }
}

// mutating story routes return the updated document plus route extras
const WithStory = z.looseObject({ story: S.StoryDoc });

const TickResult = z.looseObject({
  state: S.PlaybackState,
  events: z.array(S.PlaybackEvent),
});
