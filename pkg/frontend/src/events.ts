/**
 * Long-poll loop over /events.  One feed serves the whole studio:
 * subscribers get every entry and filter by kind themselves.
 */

import type { StoryloomClient } from "./client.js";
import type { FeedEntry } from "./schemas.js";

export type FeedHandler = (entry: FeedEntry) => void;

export class EventFeed {
  private after = 0;
  private running = false;
  private handlers = new Set<FeedHandler>();
  private loop: Promise<void> | null = null;

  constructor(
    private client: StoryloomClient,
    private pollTimeoutS = 25,
    private retryDelayMs = 1000,
  ) {}

  subscribe(handler: FeedHandler): () => void {
    this.handlers.add(handler);
    return () => this.handlers.delete(handler);
  }

  start(): void {
    if (this.running) return;
    this.running = true;
    this.loop = this.run();
  }

  async stop(): Promise<void> {
    this.running = false;
    await this.loop?.catch(() => undefined);
    this.loop = null;
  }

  /** One poll round; exposed so tests can drive the feed synchronously. */
  async pollOnce(timeoutS = 0): Promise<FeedEntry[]> {
    const page = await this.client.poll(this.after, timeoutS);
    this.after = page.next;
    for (const entry of page.events) {
      for (const handler of this.handlers) handler(entry);
    }
    return page.events;
  }

  private async run(): Promise<void> {
    while (this.running) {
      try {
        await this.pollOnce(this.pollTimeoutS);
      } catch {
        if (!this.running) return;
        await new Promise((resolve) => setTimeout(resolve, this.retryDelayMs));
      }
    }
  }
}
