/**
 * Generation panel: fire a job, keep editing.
 *
 * Submissions return immediately with a queued snapshot; the panel then
 * updates itself from `job` entries on the event feed, so the rest of
 * the studio never blocks on a render.  Request parameters are shown
 * with the service's friendly labels ("boost clarity"), not raw knob
 * names.
 */

import { JobDoc, type FeedEntry, type ParameterLabel } from "./schemas.js";

export interface JobLine {
  jobId: string;
  type: string;
  state: string;
  summary: string;
  params: string[];
  assets: string[];
  error: string | null;
  triggerWarning: boolean;
}

const ACTIVE = new Set(["queued", "running"]);

export class GenerationPanel {
  private jobs = new Map<string, JobDoc>();
  private order: string[] = [];

  constructor(private labels: Record<string, ParameterLabel> = {}) {}

  track(job: JobDoc): void {
    if (!this.jobs.has(job.job_id)) this.order.push(job.job_id);
    this.jobs.set(job.job_id, job);
  }

  /** Feed entries of other kinds pass through untouched. */
  applyFeed(entry: FeedEntry): void {
    if (entry.kind !== "job") return;
    const parsed = JobDoc.safeParse(entry.data);
    if (parsed.success && this.jobs.has(parsed.data.job_id)) this.track(parsed.data);
  }

  get(jobId: string): JobDoc | undefined {
    return this.jobs.get(jobId);
  }

  activeCount(): number {
    return [...this.jobs.values()].filter((j) => ACTIVE.has(j.state)).length;
  }

  settled(): boolean {
    return this.activeCount() === 0;
  }

  lines(): JobLine[] {
    return this.order.map((id) => this.line(this.jobs.get(id)!));
  }

  private line(job: JobDoc): JobLine {
    const prompt =
      typeof job.request.prompt === "string"
        ? job.request.prompt
        : typeof job.request.text === "string"
          ? job.request.text
          : "";
    const params: string[] = [];
    for (const [key, value] of Object.entries(job.request)) {
      const label = this.labels[key];
      if (label) params.push(`${label.label}: ${String(value)}`);
    }
    return {
      jobId: job.job_id,
      type: job.type,
      state: job.state,
      summary: prompt ? `${job.type}: ${prompt}` : job.type,
      params,
      assets: job.result ?? [],
      error: job.error,
      triggerWarning: job.trigger_warning,
    };
  }
}
