// Debounced dispatch to the analysis service with staleness tracking.
//
// Contract: any burst of input/paste events separated by gaps shorter than the
// idle interval produces exactly one request, carrying the text as it stands
// when the editor finally goes quiet. At most one request is in flight per
// editor; responses for anything but the newest dispatched version are
// discarded.

import type { AnalyzeResponse } from "./protocol";

export const DEFAULT_IDLE_MS = 500;
export const MIN_IDLE_MS = 200;
export const MAX_IDLE_MS = 2000;

export type Dispatch = (text: string, version: number) => Promise<AnalyzeResponse>;

export interface SchedulerEvents {
  /** Called only for fresh (newest-version) responses. */
  onResponse: (response: AnalyzeResponse, text: string, version: number) => void;
  /** Transport failure; UI shows a disconnected badge, never a dialog. */
  onError?: (error: unknown) => void;
}

export function clampIdle(idleMs: number): number {
  if (!Number.isFinite(idleMs)) return DEFAULT_IDLE_MS;
  return Math.min(MAX_IDLE_MS, Math.max(MIN_IDLE_MS, idleMs));
}

export class AnalysisScheduler {
  private timer: ReturnType<typeof setTimeout> | null = null;
  private inFlight = false;
  private dirtyWhileInFlight = false;
  private documentVersion = 0; // bumped on every editor event
  private disposed = false;
  requestCount = 0;

  constructor(
    private readonly currentText: () => string,
    private readonly dispatch: Dispatch,
    private readonly events: SchedulerEvents,
    readonly idleMs: number = DEFAULT_IDLE_MS,
  ) {}

  /** A keystroke or any other editor input. */
  noteInput(): void {
    this.documentVersion += 1;
    this.schedule();
  }

  /** Paste events follow the same quiet-period rule. */
  notePaste(): void {
    this.documentVersion += 1;
    this.schedule();
  }

  /** Version of the document as last edited. */
  get latestVersion(): number {
    return this.documentVersion;
  }

  dispose(): void {
    this.disposed = true;
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = null;
  }

  private schedule(): void {
    if (this.disposed) return;
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      this.fire();
    }, this.idleMs);
  }

  private fire(): void {
    if (this.disposed) return;
    if (this.inFlight) {
      // one request per editor at a time; redo once the current one settles
      this.dirtyWhileInFlight = true;
      return;
    }
    const version = this.documentVersion; // snapshot at dispatch
    const text = this.currentText();
    this.inFlight = true;
    this.requestCount += 1;
    this.dispatch(text, version)
      .then((response) => {
        // a response for an older document version is stale: drop it
        if (this.disposed || version !== this.documentVersion) return;
        this.events.onResponse(response, text, version);
      })
      .catch((error) => {
        if (!this.disposed) this.events.onError?.(error);
      })
      .finally(() => {
        this.inFlight = false;
        if (this.dirtyWhileInFlight && !this.disposed) {
          this.dirtyWhileInFlight = false;
          this.fire();
        }
      });
  }
}
