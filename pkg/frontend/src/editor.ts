// Platform detection and issue-editor discovery for GitHub and GitLab.
//
// The monitor attaches to the issue description editor on issue-compose views,
// re-attaches (without duplicate listeners) when the host page re-renders the
// editor, and stays inert everywhere else.

export type Platform = "github" | "gitlab";

export function detectPlatform(host: string): Platform | null {
  const bare = host.toLowerCase();
  if (bare === "github.com" || bare.endsWith(".github.com")) return "github";
  if (bare === "gitlab.com" || bare.endsWith(".gitlab.com")) return "gitlab";
  return null;
}

/** Issue creation or issue edit views only; everything else stays unbound. */
export function isIssueComposeView(platform: Platform, pathname: string): boolean {
  if (platform === "github") {
    return /^\/[^/]+\/[^/]+\/issues(\/new|\/\d+)?\/?$/.test(pathname);
  }
  return /\/-\/issues(\/new|\/\d+)?\/?$/.test(pathname);
}

const EDITOR_SELECTORS: Record<Platform, string[]> = {
  github: [
    "textarea#issue_body",
    'textarea[name="issue[body]"]',
    'textarea[aria-label="Markdown value"]',
    "textarea.js-comment-field",
  ],
  gitlab: [
    "textarea#issue_description",
    'textarea[name="issue[description]"]',
    "textarea.js-gfm-input",
  ],
};

export function findEditor(platform: Platform, root: ParentNode): HTMLTextAreaElement | null {
  for (const selector of EDITOR_SELECTORS[platform]) {
    const element = root.querySelector(selector);
    if (element instanceof HTMLTextAreaElement) return element;
  }
  return null;
}

export interface EditorBinding {
  platform: Platform;
  editor: HTMLTextAreaElement;
  /** Bumped every time the monitor (re)binds; used to invalidate old overlays. */
  generation: number;
}

export interface MonitorOptions {
  platform: Platform;
  document: Document;
  onBind: (binding: EditorBinding) => void;
  onUnbind?: (binding: EditorBinding) => void;
  /** Retry schedule when the editor has not rendered yet. */
  retryDelaysMs?: number[];
  setTimeoutFn?: typeof setTimeout;
}

export class EditorMonitor {
  private binding: EditorBinding | null = null;
  private observer: MutationObserver | null = null;
  private generation = 0;
  private retriesLeft: number[];
  private stopped = false;

  constructor(private readonly options: MonitorOptions) {
    this.retriesLeft = [...(options.retryDelaysMs ?? [250, 500, 1000, 2000])];
  }

  get currentBinding(): EditorBinding | null {
    return this.binding;
  }

  start(): void {
    if (!this.tryBind()) this.scheduleRetry();
    // one observer total, regardless of how often the editor re-renders
    this.observer = new MutationObserver(() => this.onMutation());
    this.observer.observe(this.options.document.body, { childList: true, subtree: true });
  }

  stop(): void {
    this.stopped = true;
    this.observer?.disconnect();
    this.observer = null;
    if (this.binding) this.options.onUnbind?.(this.binding);
    this.binding = null;
  }

  private tryBind(): boolean {
    const editor = findEditor(this.options.platform, this.options.document);
    if (editor === null) return false;
    if (this.binding?.editor === editor) return true; // already bound to this element
    if (this.binding) this.options.onUnbind?.(this.binding);
    this.binding = {
      platform: this.options.platform,
      editor,
      generation: ++this.generation,
    };
    this.options.onBind(this.binding);
    return true;
  }

  private onMutation(): void {
    if (this.stopped) return;
    if (this.binding && !this.binding.editor.isConnected) {
      this.options.onUnbind?.(this.binding);
      this.binding = null;
    }
    this.tryBind();
  }

  private scheduleRetry(): void {
    const delay = this.retriesLeft.shift();
    if (delay === undefined || this.stopped) return; // inert after backoff runs out
    const schedule = this.options.setTimeoutFn ?? setTimeout;
    schedule(() => {
      if (!this.stopped && !this.tryBind()) this.scheduleRetry();
    }, delay);
  }
}
