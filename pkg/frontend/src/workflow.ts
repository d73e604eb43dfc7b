/**
 * Studio workflow: ordered screens from idea to playback.
 *
 * The order mirrors how a story comes together (talk it out, compile a
 * script, arrange the board, dress the scenes, watch it), but moving
 * backwards is always allowed; a screen only locks while the story
 * genuinely has nothing for it to show.
 */

import type { StoryDoc } from "./schemas.js";

export type Screen = "chat" | "script" | "storyboard" | "editor" | "player";

export const SCREEN_ORDER: readonly Screen[] = [
  "chat",
  "script",
  "storyboard",
  "editor",
  "player",
];

export const SCREEN_TITLES: Record<Screen, string> = {
  chat: "Story chat",
  script: "Screenplay",
  storyboard: "Storyboard",
  editor: "Scene editor",
  player: "Player",
};

export function availableScreens(story: StoryDoc | null): Set<Screen> {
  const open = new Set<Screen>(["chat"]);
  if (!story) return open;
  if (story.storyline.trim() || story.screenplay.length) open.add("script");
  if (Object.keys(story.scenes).length) {
    open.add("storyboard");
    open.add("editor");
  }
  if (story.start_scene) open.add("player");
  return open;
}

export interface WorkflowState {
  screen: Screen;
  story: StoryDoc | null;
  selectedScene: string | null;
}

export function initialWorkflow(): WorkflowState {
  return { screen: "chat", story: null, selectedScene: null };
}

/** Replace the story document, keeping the selection when it survives
 * and falling back off screens the new document can no longer fill. */
export function withStory(state: WorkflowState, story: StoryDoc | null): WorkflowState {
  let selected = state.selectedScene;
  if (!story || (selected && !(selected in story.scenes))) selected = null;
  if (!selected && story) selected = story.start_scene ?? Object.keys(story.scenes)[0] ?? null;
  const open = availableScreens(story);
  const screen = open.has(state.screen) ? state.screen : lastOpen(open);
  return { screen, story, selectedScene: selected };
}

export function goTo(state: WorkflowState, screen: Screen): WorkflowState {
  if (!availableScreens(state.story).has(screen)) return state;
  return { ...state, screen };
}

export function selectScene(state: WorkflowState, sceneId: string): WorkflowState {
  if (!state.story || !(sceneId in state.story.scenes)) return state;
  return { ...state, selectedScene: sceneId, screen: "editor" };
}

function lastOpen(open: Set<Screen>): Screen {
  let found: Screen = "chat";
  for (const screen of SCREEN_ORDER) if (open.has(screen)) found = screen;
  return found;
}
