/**
 * Browser shell.  One client, one event feed, one render pass per state
 * change; all clicks arrive by delegation on data-action attributes.
 */

import { ApiError, StoryloomClient } from "./client.js";
import { buildEditorView } from "./editor.js";
import { EventFeed } from "./events.js";
import {
  renderChat,
  renderEditor,
  renderJobs,
  renderNav,
  renderScript,
  renderStage,
  renderStoryboard,
} from "./html.js";
import { GenerationPanel } from "./jobs.js";
import { StageView } from "./player.js";
import type { ChatMessage, ScreenplayScene, StoryDoc } from "./schemas.js";
import { layoutStoryboard, unlinkedResponses } from "./storyboard.js";
import {
  availableScreens,
  goTo,
  initialWorkflow,
  selectScene,
  withStory,
  type Screen,
  type WorkflowState,
} from "./workflow.js";

interface ShellConfig {
  baseUrl: string;
  token?: string;
}

const config: ShellConfig = (globalThis as { STORYLOOM?: ShellConfig }).STORYLOOM ?? {
  baseUrl: "http://127.0.0.1:8470",
};

const client = new StoryloomClient(config);
const feed = new EventFeed(client);
let panel = new GenerationPanel();

let workflow: WorkflowState = initialWorkflow();
let chatLog: ChatMessage[] = [];
let lastReport: { scenes: ScreenplayScene[]; repairs: string[] } | null = null;
let stage: StageView | null = null;
let sessionId: string | null = null;
let statusLine = "";

const root = document.getElementById("app")!;

function setStory(story: StoryDoc | null): void {
  workflow = withStory(workflow, story);
}

function scriptScenes(): ScreenplayScene[] {
  return lastReport?.scenes ?? workflow.story?.screenplay ?? [];
}

function render(): void {
  const open = availableScreens(workflow.story);
  const parts = [renderNav(workflow.screen, open)];
  if (statusLine) parts.push(`<p class="sl-status">${statusLine}</p>`);
  switch (workflow.screen) {
    case "chat":
      parts.push(renderChat(chatLog, workflow.story?.storyline ?? ""));
      break;
    case "script":
      parts.push(renderScript(scriptScenes(), lastReport?.repairs ?? []));
      break;
    case "storyboard":
      if (workflow.story) {
        parts.push(
          renderStoryboard(layoutStoryboard(workflow.story), unlinkedResponses(workflow.story)),
        );
      }
      break;
    case "editor": {
      const view =
        workflow.story && workflow.selectedScene
          ? buildEditorView(workflow.story, workflow.selectedScene)
          : null;
      if (view) parts.push(renderEditor(view));
      break;
    }
    case "player":
      parts.push(`<div class="sl-player-controls">`);
      if (!sessionId) parts.push(`<button data-action="start-playback">Play story</button>`);
      else parts.push(`<button data-action="tick">Step 0.5s</button>`);
      parts.push(`</div>`);
      if (stage) parts.push(renderStage(stage, (id) => client.assetUrl(id)));
      break;
  }
  parts.push(renderJobs(panel.lines()));
  root.innerHTML = parts.join("");
}

function report(err: unknown): void {
  statusLine = err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
  render();
}

async function ensureStory(): Promise<StoryDoc> {
  if (workflow.story) return workflow.story;
  const story = await client.createStory("Untitled story");
  setStory(story);
  return story;
}

const actions: Record<string, (el: HTMLElement) => Promise<void>> = {
  async goto(el) {
    workflow = goTo(workflow, el.dataset.screen as Screen);
  },
  async chat(el) {
    const form = el.closest("form") ?? el;
    const box = form.querySelector<HTMLTextAreaElement>("textarea[name=text]")!;
    const story = await ensureStory();
    const result = await client.chat(story.story_id, box.value);
    chatLog = result.messages;
  },
  async "save-storyline"() {
    const box = root.querySelector<HTMLTextAreaElement>("textarea[name=storyline]")!;
    const story = await ensureStory();
    setStory((await client.setStoryline(story.story_id, box.value)).story);
  },
  async compile() {
    const box = root.querySelector<HTMLTextAreaElement>("textarea[name=storyline]");
    const story = await ensureStory();
    const report = await client.compile(story.story_id, box?.value || undefined);
    lastReport = report;
    setStory(await client.getStory(story.story_id));
    if (!report.rejected) workflow = goTo(workflow, "script");
    statusLine = report.rejected ? "The screenwriter's reply could not be read as scenes." : "";
  },
  async populate() {
    const story = await ensureStory();
    setStory((await client.populate(story.story_id)).story);
    workflow = goTo(workflow, "storyboard");
  },
  async "add-scene"() {
    const story = await ensureStory();
    setStory((await client.addScene(story.story_id)).story);
  },
  async "select-scene"(el) {
    workflow = selectScene(workflow, el.dataset.scene!);
  },
  async "generate-background"() {
    const story = workflow.story;
    const sceneId = workflow.selectedScene;
    if (!story || !sceneId) return;
    const scene = story.scenes[sceneId]!;
    const job = await client.submitJob({
      type: "image",
      prompt: scene.background_description || scene.title || "a quiet empty stage",
    });
    panel.track(job);
    pendingBackgrounds.set(job.job_id, sceneId);
  },
  async "start-playback"() {
    const story = workflow.story;
    if (!story) return;
    const session = await client.startPlayback(story.story_id, "manual");
    sessionId = session.session_id;
    stage = new StageView(story);
    stage.apply(session.events);
  },
  async tick() {
    if (!sessionId || !stage) return;
    const result = await client.tick(sessionId, 0.5);
    stage.apply(result.events);
  },
  async respond(el) {
    if (!sessionId || !stage) return;
    const result = await client.respond(sessionId, el.dataset.label!);
    stage.apply(result.events);
  },
  async reveal(el) {
    stage?.reveal(el.dataset.asset!);
  },
};

// a finished background job lands on the scene that asked for it
const pendingBackgrounds = new Map<string, string>();

feed.subscribe((entry) => {
  panel.applyFeed(entry);
  if (entry.kind === "job") {
    const data = entry.data as { job_id?: string; state?: string; result?: string[] };
    const sceneId = data.job_id ? pendingBackgrounds.get(data.job_id) : undefined;
    if (sceneId && data.state === "done" && data.result?.length) {
      pendingBackgrounds.delete(data.job_id!);
      const story = workflow.story;
      if (story) {
        client
          .updateScene(story.story_id, sceneId, { background: data.result[0] })
          .then((r) => {
            setStory(r.story);
            render();
          })
          .catch(report);
      }
    }
  }
  if (entry.kind === "story") {
    const data = entry.data as { story_id?: string };
    if (workflow.story && data.story_id === workflow.story.story_id) {
      client
        .getStory(data.story_id)
        .then((story) => {
          setStory(story);
          render();
        })
        .catch(() => undefined);
    }
  }
  render();
});

root.addEventListener("click", (event) => {
  const el = (event.target as HTMLElement).closest<HTMLElement>("[data-action]");
  if (!el) return;
  const action = actions[el.dataset.action!];
  if (!action) return;
  event.preventDefault();
  action(el)
    .then(() => {
      statusLine = "";
      render();
    })
    .catch(report);
});

root.addEventListener("submit", (event) => {
  const form = (event.target as HTMLElement).closest<HTMLElement>("form[data-action]");
  if (!form) return;
  event.preventDefault();
  actions[form.dataset.action!]?.(form)
    .then(() => render())
    .catch(report);
});

async function boot(): Promise<void> {
  await client.health();
  panel = new GenerationPanel(await client.labels());
  feed.start();
  render();
}

boot().catch(report);
