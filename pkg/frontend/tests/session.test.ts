/**
 * Scripted studio session against the real authoring service.
 *
 * Boots the Python backend with its offline mock providers, then walks
 * the exact path a person takes in the browser: talk the story out,
 * compile it, branch the board, dress a scene while generation jobs
 * run, and watch both branches play, including the content-notice
 * overlay on a flagged background.  The studio side uses the same
 * modules the shell does; only the DOM is missing.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiError, StoryloomClient } from "../src/client.js";
import { buildEditorView } from "../src/editor.js";
import { EventFeed } from "../src/events.js";
import { renderJobs, renderScript, renderStage, renderStoryboard } from "../src/html.js";
import { GenerationPanel } from "../src/jobs.js";
import { StageView } from "../src/player.js";
import type { PlaybackEvent, StoryDoc } from "../src/schemas.js";
import { layoutStoryboard, unlinkedResponses } from "../src/storyboard.js";
import { availableScreens, initialWorkflow, selectScene, withStory } from "../src/workflow.js";

const PORT = 8600 + (process.pid % 500);
const BASE = `http://127.0.0.1:${PORT}`;

let workdir: string;
let server: ChildProcess;
let serverLog = "";
let client: StoryloomClient;

beforeAll(async () => {
  workdir = mkdtempSync(join(tmpdir(), "studio-session-"));
  const configPath = join(workdir, "service.json");
  writeFileSync(
    configPath,
    JSON.stringify({
      host: "127.0.0.1",
      port: PORT,
      store_path: join(workdir, "packages"),
      rng_seed: 11,
    }),
  );
  server = spawn("python3", ["-m", "storyloom.cli", "run", "--config", configPath], {
    cwd: join(workdir),
    stdio: ["ignore", "pipe", "pipe"],
  });
  server.stdout?.on("data", (chunk) => (serverLog += chunk));
  server.stderr?.on("data", (chunk) => (serverLog += chunk));
  client = new StoryloomClient({ baseUrl: BASE });

  const deadline = Date.now() + 20_000;
  for (;;) {
    try {
      await client.health();
      break;
    } catch {
      if (Date.now() > deadline) {
        throw new Error(`service never came up on ${BASE}\n${serverLog}`);
      }
      await sleep(150);
    }
  }
});

afterAll(async () => {
  server?.kill("SIGTERM");
  await new Promise((resolve) => {
    if (!server || server.exitCode !== null) return resolve(undefined);
    server.once("exit", resolve);
    setTimeout(() => {
      server.kill("SIGKILL");
      resolve(undefined);
    }, 5000);
  });
  rmSync(workdir, { recursive: true, force: true });
});

const sleep = (ms: number) => new Promise((r) => setTimeout(r, ms));

async function settle(feed: EventFeed, panel: GenerationPanel, deadlineMs = 15_000): Promise<void> {
  const deadline = Date.now() + deadlineMs;
  while (!panel.settled()) {
    if (Date.now() > deadline) throw new Error("generation jobs never settled");
    for (const entry of await feed.pollOnce(2)) panel.applyFeed(entry);
  }
}

/** Tick a manual session until the predicate holds, folding events into the stage. */
async function tickUntil(
  sessionId: string,
  stage: StageView,
  entered: string[],
  done: () => boolean,
): Promise<void> {
  for (let i = 0; i < 80 && !done(); i++) {
    const result = await client.tick(sessionId, 0.5);
    fold(result.events, stage, entered);
  }
  if (!done()) throw new Error("playback never reached the expected point");
}

function fold(events: PlaybackEvent[], stage: StageView, entered: string[]): void {
  stage.apply(events);
  for (const event of events) {
    if (event.kind === "scene_enter") entered.push(String(event.payload.scene));
  }
}

describe("a full authoring session", () => {
  it("carries a story from chat to branching playback", async () => {
    // -- talk the story out ----------------------------------------------
    let story: StoryDoc = await client.createStory("The Fork in the Road", "fork");
    let workflow = withStory(initialWorkflow(), story);
    expect(availableScreens(workflow.story).has("storyboard")).toBe(false);

    const first = await client.chat("fork", "A girl follows a paper boat down the river.");
    expect(first.reply.length).toBeGreaterThan(0);
    const second = await client.chat("fork", "Her friend dares her to chase it.");
    expect(second.messages.length).toBe(first.messages.length + 2);
    expect(second.messages.at(-1)?.role).toBe("assistant");

    // -- compile the screenplay ------------------------------------------
    const storyline =
      "Mira finds a paper boat by the river. " +
      "Her friend Tomas dares her to chase it. " +
      "The boat vanishes under the old mill.";
    story = (await client.setStoryline("fork", storyline)).story;
    const report = await client.compile("fork");
    expect(report.rejected).toBe(false);
    expect(report.scenes).toHaveLength(3);
    expect(report.repairs).toContain("normalized single-quoted strings");
    expect(report.repairs).toContain("trimmed surrounding commentary");
    const scriptHtml = renderScript(report.scenes, report.repairs);
    expect(scriptHtml).toContain("Mira");
    expect(scriptHtml).toContain("sl-repairs");

    // -- build the board -------------------------------------------------
    const populated = await client.populate("fork");
    expect(populated.warnings).toEqual([]);
    story = populated.story;
    expect(story.start_scene).toBe("s1");
    expect(Object.keys(story.scenes).sort()).toEqual(["s1", "s2", "s3"]);
    for (const scene of Object.values(story.scenes)) {
      expect(scene.background).toBeTruthy();
      expect(story.asset_index[scene.background!]).toBeDefined();
    }
    workflow = withStory(workflow, story);
    expect(availableScreens(workflow.story).has("player")).toBe(true);

    // -- fork it: s1 asks a question, branches rejoin at the mill --------
    story = (
      await client.setInteraction("fork", "s1", {
        question: "Which way does she run?",
        responses: [{ label: "Riverbank" }, { label: "Mill road" }],
      })
    ).story;
    expect(unlinkedResponses(story).get("s1")).toEqual(["Riverbank", "Mill road"]);
    story = (await client.link("fork", "s1", "s2", "Riverbank")).story;
    story = (await client.link("fork", "s1", "s3", "Mill road")).story;
    expect(unlinkedResponses(story).size).toBe(0);

    const layout = layoutStoryboard(story);
    const s3 = layout.nodes.find((n) => n.sceneId === "s3")!;
    expect(s3.merge).toBe(true); // reached from both branches
    expect(layout.edges.find((e) => e.from === "s2" && e.to === "s3")?.back).toBe(true);
    const boardHtml = renderStoryboard(layout, unlinkedResponses(story));
    expect(boardHtml).toContain(">Riverbank</text>");
    expect(boardHtml).toContain(">Mill road</text>");

    // -- dress a scene; the service referees clip overlaps ---------------
    workflow = selectScene(withStory(workflow, story), "s2");
    expect(workflow.screen).toBe("editor");
    const el = await client.upsertElement("fork", "s2", {
      kind: "speech_bubble",
      text: "There it goes!",
    });
    story = el.story;
    story = (
      await client.upsertClip("fork", "s2", {
        target: el.element_id,
        track: "visual",
        start_s: 0,
        duration_s: 2,
      })
    ).story;
    const clash = await client
      .upsertClip("fork", "s2", {
        target: el.element_id,
        track: "visual",
        start_s: 1,
        duration_s: 1,
      })
      .catch((e: unknown) => e);
    expect(clash).toBeInstanceOf(ApiError);
    expect((clash as ApiError).status).toBe(409);
    expect((clash as ApiError).code).toBe("OverlapConflict");
    story = (
      await client.upsertClip("fork", "s2", {
        target: el.element_id,
        track: "visual",
        start_s: 2,
        duration_s: 1,
      })
    ).story;

    // -- generation runs in the background while editing continues ------
    const feed = new EventFeed(client);
    const panel = new GenerationPanel(await client.labels());
    const audioJob = await client.submitJob({
      type: "audio",
      kind: "sound_effect",
      prompt: "rain dripping through leaves",
      duration_s: 2.0,
    });
    panel.track(audioJob);
    expect(["queued", "running", "done"]).toContain(audioJob.state);

    // the editor keeps working while the job cooks
    story = (await client.updateScene("fork", "s2", { title: "The Chase" })).story;
    expect(story.scenes.s2?.title).toBe("The Chase");

    await settle(feed, panel);
    const doneAudio = panel.get(audioJob.job_id)!;
    expect(doneAudio.state).toBe("done");
    const rainAsset = doneAudio.result![0]!;
    story = (
      await client.upsertClip("fork", "s2", {
        target: rainAsset,
        track: "audio",
        start_s: 0,
        duration_s: 2,
      })
    ).story;
    expect(story.asset_index[rainAsset]?.provenance.prompt).toBe("rain dripping through leaves");

    const editorView = buildEditorView(story, "s2")!;
    expect(editorView.timeline[0]!.items).toHaveLength(2);
    expect(editorView.timeline[1]!.items[0]!.label).toContain("rain dripping");

    // -- a flagged background gets a content notice ----------------------
    const stormJob = await client.submitJob({
      type: "image",
      prompt: "a terrible storm breaking over the old mill",
    });
    panel.track(stormJob);
    await settle(feed, panel);
    const doneStorm = panel.get(stormJob.job_id)!;
    expect(doneStorm.state).toBe("done");
    expect(doneStorm.trigger_warning).toBe(true);
    expect(renderJobs(panel.lines())).toContain("content notice");
    const stormAsset = doneStorm.result![0]!;
    story = (await client.updateScene("fork", "s3", { background: stormAsset })).story;
    expect(story.asset_index[stormAsset]?.provenance.params["trigger_warning"]).toBe(true);

    const png = await client.assetBytes(stormAsset);
    expect(png.mediaType).toBe("image/png");
    expect([...png.bytes.slice(0, 4)]).toEqual([137, 80, 78, 71]);

    // -- structurally sound ----------------------------------------------
    const verdict = await client.validateStory("fork");
    expect(verdict.violations.filter((v) => v.severity === "error")).toEqual([]);

    // -- play the riverbank branch ---------------------------------------
    const a = await client.startPlayback("fork", "manual");
    const stageA = new StageView(story);
    const enteredA: string[] = [];
    fold(a.events, stageA, enteredA);
    await tickUntil(a.session_id, stageA, enteredA, () => stageA.prompt !== null);
    expect(stageA.prompt?.question).toBe("Which way does she run?");
    const promptHtml = renderStage(stageA, (id) => client.assetUrl(id));
    expect(promptHtml).toContain('data-label="Riverbank"');
    expect(promptHtml).toContain('data-label="Mill road"');

    const picked = await client.respond(a.session_id, "Riverbank");
    fold(picked.events, stageA, enteredA);
    await tickUntil(a.session_id, stageA, enteredA, () => stageA.sceneId === "s3");

    // the storm background is veiled until the viewer opts in
    expect(stageA.veils()).toEqual([
      { assetId: stormAsset, categories: ["danger"], slot: "background" },
    ]);
    let stageHtml = renderStage(stageA, (id) => client.assetUrl(id));
    expect(stageHtml).toContain("sl-trigger-overlay");
    expect(stageHtml).not.toContain(client.assetUrl(stormAsset)); // media stays covered
    stageA.reveal(stormAsset);
    expect(stageA.veils()).toEqual([]);
    stageHtml = renderStage(stageA, (id) => client.assetUrl(id));
    expect(stageHtml).not.toContain("sl-trigger-overlay");
    expect(stageHtml).toContain(client.assetUrl(stormAsset));

    await tickUntil(a.session_id, stageA, enteredA, () => stageA.finished);
    expect(enteredA).toEqual(["s1", "s2", "s3"]);
    const finalA = await client.playbackState(a.session_id);
    expect(finalA.state.history).toEqual([
      ["s1", "Riverbank"],
      ["s2", null],
      ["s3", null],
    ]);

    // -- play the mill road branch, skipping the chase -------------------
    const b = await client.startPlayback("fork", "manual");
    const stageB = new StageView(story);
    const enteredB: string[] = [];
    fold(b.events, stageB, enteredB);
    await tickUntil(b.session_id, stageB, enteredB, () => stageB.prompt !== null);
    const afterB = await client.respond(b.session_id, "Mill road");
    fold(afterB.events, stageB, enteredB);
    await tickUntil(b.session_id, stageB, enteredB, () => stageB.finished);
    expect(enteredB).toEqual(["s1", "s3"]);
    const finalB = await client.playbackState(b.session_id);
    expect(finalB.state.history).toEqual([
      ["s1", "Mill road"],
      ["s3", null],
    ]);

    // -- keep it ----------------------------------------------------------
    const saved = await client.saveStory("fork");
    expect(saved.package_id).toBe("fork");
    expect((await client.listPackages()).packages).toContain("fork");

    await client.stopPlayback(a.session_id);
    await client.stopPlayback(b.session_id);
  });

  it("reports refused prompts through the jobs panel", async () => {
    const panel = new GenerationPanel(await client.labels());
    const feed = new EventFeed(client);
    const job = await client.submitJob({ type: "image", prompt: "a scene of gore" });
    panel.track(job);
    await settle(feed, panel);
    const failed = panel.get(job.job_id)!;
    expect(failed.state).toBe("failed");
    expect(failed.error_code).toBe("SafetyBlocked");
    const html = renderJobs(panel.lines());
    expect(html).toContain("is-failed");
    expect(html).toContain("prompt refused");
  });

  it("surfaces service errors with their codes", async () => {
    const missing = await client.getStory("never-was").catch((e: unknown) => e);
    expect(missing).toBeInstanceOf(ApiError);
    expect((missing as ApiError).status).toBe(404);
    expect((missing as ApiError).code).toBe("UnknownStory");
  });
});
