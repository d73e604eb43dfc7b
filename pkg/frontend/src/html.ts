/**
 * Screen renderers: view models in, HTML strings out.
 *
 * Rendering to strings keeps every screen testable without a browser;
 * the shell assigns the result to innerHTML and wires events through
 * data- attributes (`data-action`, `data-scene`, ...), never through
 * inline handlers, so escaped story text can't smuggle anything in.
 */

import type { EditorView } from "./editor.js";
import type { JobLine } from "./jobs.js";
import type { StageView } from "./player.js";
import type { GraphLayout } from "./storyboard.js";
import type { ChatMessage, ScreenplayScene } from "./schemas.js";
import { SCREEN_ORDER, SCREEN_TITLES, type Screen } from "./workflow.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

const esc = escapeHtml;

export function renderNav(current: Screen, open: Set<Screen>): string {
  const tabs = SCREEN_ORDER.map((screen) => {
    const classes = ["sl-tab"];
    if (screen === current) classes.push("is-current");
    if (!open.has(screen)) classes.push("is-locked");
    const attrs = open.has(screen) ? ` data-action="goto" data-screen="${screen}"` : " disabled";
    return `<button class="${classes.join(" ")}"${attrs}>${esc(SCREEN_TITLES[screen])}</button>`;
  });
  return `<nav class="sl-nav">${tabs.join("")}</nav>`;
}

export function renderChat(messages: ChatMessage[], storyline: string): string {
  const turns = messages
    .filter((m) => m.role !== "system")
    .map((m) => `<div class="sl-turn sl-turn-${m.role}"><p>${esc(m.content)}</p></div>`)
    .join("");
  return [
    `<section class="sl-chat">`,
    `<div class="sl-transcript">${turns || '<p class="sl-empty">Describe the story you want to tell.</p>'}</div>`,
    `<form class="sl-chat-form" data-action="chat">`,
    `<textarea name="text" rows="2" placeholder="What happens next?"></textarea>`,
    `<button type="submit">Send</button>`,
    `</form>`,
    `<div class="sl-storyline">`,
    `<h3>Storyline</h3>`,
    `<textarea name="storyline" rows="4">${esc(storyline)}</textarea>`,
    `<button data-action="save-storyline">Save</button>`,
    `<button data-action="compile">Compile screenplay</button>`,
    `</div>`,
    `</section>`,
  ].join("");
}

export function renderScript(scenes: ScreenplayScene[], repairs: string[]): string {
  const cards = scenes
    .map((scene, i) => {
      const dialogue = scene.dialogue
        .map((d) => `<li><b>${esc(d.speaker)}</b>: ${esc(d.speech)}</li>`)
        .join("");
      return [
        `<article class="sl-script-scene" data-index="${i}">`,
        `<h3>${i + 1}. ${esc(scene.sceneName)}</h3>`,
        `<p class="sl-background">${esc(scene.backgroundDescription)}</p>`,
        `<p class="sl-narration">${esc(scene.narration)}</p>`,
        scene.characters.length
          ? `<p class="sl-cast">Cast: ${scene.characters.map(esc).join(", ")}</p>`
          : "",
        dialogue ? `<ul class="sl-dialogue">${dialogue}</ul>` : "",
        `</article>`,
      ].join("");
    })
    .join("");
  const notes = repairs.length
    ? `<aside class="sl-repairs"><h4>Cleaned up while reading</h4><ul>${repairs
        .map((r) => `<li>${esc(r)}</li>`)
        .join("")}</ul></aside>`
    : "";
  return [
    `<section class="sl-script">`,
    notes,
    cards || '<p class="sl-empty">No screenplay yet; compile one from the storyline.</p>',
    cards ? `<button data-action="populate">Build storyboard from this script</button>` : "",
    `</section>`,
  ].join("");
}

const NODE_W = 130;
const NODE_H = 56;
const GAP_X = 70;
const GAP_Y = 28;

function nodeXY(column: number, row: number): [number, number] {
  return [20 + column * (NODE_W + GAP_X), 20 + row * (NODE_H + GAP_Y)];
}

export function renderStoryboard(layout: GraphLayout, unlinked: Map<string, string[]>): string {
  const at = new Map(layout.nodes.map((n) => [n.sceneId, n] as const));
  const edges = layout.edges
    .map((edge) => {
      const a = at.get(edge.from)!;
      const b = at.get(edge.to)!;
      const [ax, ay] = nodeXY(a.column, a.row);
      const [bx, by] = nodeXY(b.column, b.row);
      const x1 = ax + NODE_W;
      const y1 = ay + NODE_H / 2;
      const x2 = bx;
      const y2 = by + NODE_H / 2;
      // back edges bow underneath the board instead of cutting across it
      const d = edge.back
        ? `M ${x1 - NODE_W} ${y1 + NODE_H / 2} C ${x1 - NODE_W} ${y1 + 90}, ${x2 + NODE_W} ${y2 + 90}, ${x2 + NODE_W / 2} ${y2 + NODE_H / 2}`
        : `M ${x1} ${y1} C ${x1 + GAP_X / 2} ${y1}, ${x2 - GAP_X / 2} ${y2}, ${x2} ${y2}`;
      const label = edge.via
        ? `<text class="sl-edge-label" x="${(x1 + x2) / 2}" y="${(y1 + y2) / 2 - 6}">${esc(edge.via)}</text>`
        : "";
      const classes = `sl-edge${edge.back ? " is-back" : ""}${edge.via ? " is-labeled" : ""}`;
      return `<g class="${classes}" data-from="${esc(edge.from)}" data-to="${esc(edge.to)}"><path d="${d}"/>${label}</g>`;
    })
    .join("");
  const nodes = layout.nodes
    .map((node) => {
      const [x, y] = nodeXY(node.column, node.row);
      const marks = [
        node.start ? "is-start" : "",
        node.interactive ? "is-interactive" : "",
        node.merge ? "is-merge" : "",
        node.terminal ? "is-terminal" : "",
        node.unreachable ? "is-unreachable" : "",
      ]
        .filter(Boolean)
        .join(" ");
      const open = unlinked.get(node.sceneId);
      const badge = open
        ? `<title>unlinked responses: ${esc(open.join(", "))}</title>`
        : "";
      return [
        `<g class="sl-node ${marks}" data-action="select-scene" data-scene="${esc(node.sceneId)}" transform="translate(${x},${y})">`,
        badge,
        `<rect width="${NODE_W}" height="${NODE_H}" rx="8"/>`,
        `<text x="${NODE_W / 2}" y="22">${esc(node.title)}</text>`,
        `<text class="sl-node-id" x="${NODE_W / 2}" y="42">${esc(node.sceneId)}</text>`,
        `</g>`,
      ].join("");
    })
    .join("");
  const rows = Math.max(1, ...layout.nodes.map((n) => n.row + 1));
  const width = 40 + layout.columns * (NODE_W + GAP_X);
  const height = 140 + rows * (NODE_H + GAP_Y);
  return [
    `<section class="sl-storyboard">`,
    `<svg viewBox="0 0 ${width} ${height}" width="${width}" height="${height}">${edges}${nodes}</svg>`,
    `<button data-action="add-scene">Add scene</button>`,
    `</section>`,
  ].join("");
}

export function renderEditor(view: EditorView): string {
  const canvas = view.canvas
    .map((item) => {
      const style = `left:${item.x * 100}%;top:${item.y * 100}%;width:${item.width * 100}%;height:${item.height * 100}%`;
      return [
        `<div class="sl-element sl-element-${item.kind}${item.hasPath ? " has-path" : ""}"`,
        ` data-element="${esc(item.elementId)}" style="${style}">`,
        esc(item.label),
        `</div>`,
      ].join("");
    })
    .join("");
  const rows = view.timeline
    .map((row) => {
      const items = row.items
        .map(
          (item) =>
            `<div class="sl-clip" data-clip="${esc(item.clipId)}" style="left:${item.leftPct}%;width:${item.widthPct}%" title="${item.startS}s + ${item.durationS}s">${esc(item.label)}</div>`,
        )
        .join("");
      return `<div class="sl-track" data-track="${row.track}"><span class="sl-track-name">${row.track}</span><div class="sl-track-lane">${items}</div></div>`;
    })
    .join("");
  const interaction = view.question
    ? `<div class="sl-interaction"><b>${esc(view.question)}</b> ${view.responseLabels
        .map((l) => `<span class="sl-response">${esc(l)}</span>`)
        .join("")}</div>`
    : `<div class="sl-interaction sl-empty">Scene flows straight on.</div>`;
  return [
    `<section class="sl-editor" data-scene="${esc(view.sceneId)}">`,
    `<h3>${esc(view.title || view.sceneId)}</h3>`,
    `<div class="sl-canvas" data-background="${esc(view.backgroundAsset ?? "")}">${canvas}</div>`,
    `<div class="sl-timeline" data-duration="${view.durationS}">${rows}</div>`,
    interaction,
    `<button data-action="generate-background">Generate background</button>`,
    `</section>`,
  ].join("");
}

export function renderStage(stage: StageView, assetUrl: (assetId: string) => string): string {
  const veils = stage.veils();
  const background =
    stage.backgroundAsset && stage.visible(stage.backgroundAsset)
      ? `style="background-image:url('${assetUrl(stage.backgroundAsset)}')"`
      : "";
  const elements = [...stage.elements.values()]
    .map((el) => {
      const style = `left:${el.x * 100}%;top:${el.y * 100}%;width:${el.width * 100}%;height:${el.height * 100}%`;
      const body =
        el.assetId && stage.visible(el.assetId)
          ? `<img src="${assetUrl(el.assetId)}" alt="">`
          : esc(el.text ?? "");
      return `<div class="sl-stage-el sl-stage-${el.kind}" data-element="${esc(el.elementId)}" style="${style}">${body}</div>`;
    })
    .join("");
  const prompt = stage.prompt
    ? [
        `<div class="sl-prompt">`,
        `<p>${esc(stage.prompt.question)}</p>`,
        stage.prompt.responses
          .map((r) => `<button data-action="respond" data-label="${esc(r)}">${esc(r)}</button>`)
          .join(""),
        `</div>`,
      ].join("")
    : "";
  const overlay = veils.length
    ? [
        `<div class="sl-trigger-overlay">`,
        `<h4>Content notice</h4>`,
        veils
          .map(
            (veil) =>
              `<p class="sl-veil" data-asset="${esc(veil.assetId)}">This ${veil.slot} may depict: ${esc(
                veil.categories.join(", ") || "sensitive content",
              )}. <button data-action="reveal" data-asset="${esc(veil.assetId)}">Show it</button></p>`,
          )
          .join(""),
        `</div>`,
      ].join("")
    : "";
  const done = stage.finished ? `<div class="sl-the-end">The End</div>` : "";
  return [
    `<section class="sl-stage" data-scene="${esc(stage.sceneId ?? "")}">`,
    `<div class="sl-backdrop${stage.particleEffect ? ` sl-fx-${stage.particleEffect}` : ""}" ${background}>`,
    elements,
    `</div>`,
    prompt,
    overlay,
    done,
    `</section>`,
  ].join("");
}

export function renderJobs(lines: JobLine[]): string {
  if (!lines.length) return `<aside class="sl-jobs sl-empty"></aside>`;
  const items = lines
    .map((line) => {
      const params = line.params.length
        ? `<span class="sl-job-params">${line.params.map(esc).join(" · ")}</span>`
        : "";
      const warn = line.triggerWarning ? `<span class="sl-job-warn">content notice</span>` : "";
      const error = line.error ? `<span class="sl-job-error">${esc(line.error)}</span>` : "";
      return [
        `<li class="sl-job is-${line.state}" data-job="${esc(line.jobId)}">`,
        `<span class="sl-job-state">${line.state}</span> ${esc(line.summary)} ${params}${warn}${error}`,
        `</li>`,
      ].join("");
    })
    .join("");
  return `<aside class="sl-jobs"><ul>${items}</ul></aside>`;
}
