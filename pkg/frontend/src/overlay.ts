// DOM rendering: in-editor highlight marks plus a warning panel.
//
// The overlay only decorates. It never rewrites editor content and never
// blocks form submission; the worst it does to the host page is make the
// textarea background transparent so the marks behind it show through.

import type { Decoration } from "./decorations";

export interface OverlayCallbacks {
  onDismiss: (decoration: Decoration) => void;
}

const BACKDROP_CLASS = "lw-backdrop";
const PANEL_CLASS = "lw-panel";
const BADGE_CLASS = "lw-badge";

export class HighlightOverlay {
  private backdrop: HTMLDivElement;
  private panel: HTMLDivElement;
  private badge: HTMLSpanElement;
  private originalBackground: string;
  private scrollHandler: () => void;

  constructor(
    private readonly editor: HTMLTextAreaElement,
    private readonly callbacks: OverlayCallbacks,
  ) {
    const doc = editor.ownerDocument;
    this.backdrop = doc.createElement("div");
    this.backdrop.className = BACKDROP_CLASS;
    this.backdrop.setAttribute("aria-hidden", "true");

    this.panel = doc.createElement("div");
    this.panel.className = PANEL_CLASS;
    this.panel.setAttribute("role", "tooltip");
    this.panel.hidden = true;

    this.badge = doc.createElement("span");
    this.badge.className = `${BADGE_CLASS} lw-connected`;
    this.badge.title = "leakwarden: connected";

    editor.parentElement?.insertBefore(this.backdrop, editor);
    editor.parentElement?.appendChild(this.panel);
    editor.parentElement?.appendChild(this.badge);

    this.originalBackground = editor.style.background;
    this.scrollHandler = () => {
      this.backdrop.scrollTop = this.editor.scrollTop;
      this.backdrop.scrollLeft = this.editor.scrollLeft;
    };
    editor.addEventListener("scroll", this.scrollHandler);
  }

  get decorationCount(): number {
    return this.backdrop.querySelectorAll("mark").length;
  }

  setConnected(connected: boolean): void {
    this.badge.classList.toggle("lw-connected", connected);
    this.badge.classList.toggle("lw-disconnected", !connected);
    this.badge.title = connected ? "leakwarden: connected" : "leakwarden: service unreachable";
  }

  render(text: string, decorations: Decoration[], warning: string | null): void {
    this.renderMarks(text, decorations);
    this.renderPanel(decorations, warning);
    if (decorations.length > 0) {
      this.editor.style.background = "transparent";
      this.editor.classList.add("lw-decorated");
    } else {
      this.restoreEditorStyle();
    }
  }

  clear(): void {
    this.backdrop.replaceChildren();
    this.panel.replaceChildren();
    this.panel.hidden = true;
    this.restoreEditorStyle();
  }

  dispose(): void {
    this.editor.removeEventListener("scroll", this.scrollHandler);
    this.backdrop.remove();
    this.panel.remove();
    this.badge.remove();
    this.restoreEditorStyle();
  }

  private restoreEditorStyle(): void {
    this.editor.style.background = this.originalBackground;
    this.editor.classList.remove("lw-decorated");
  }

  private renderMarks(text: string, decorations: Decoration[]): void {
    const doc = this.editor.ownerDocument;
    const fragment = doc.createDocumentFragment();
    let cursor = 0;
    for (const decoration of decorations) {
      if (decoration.charStart < cursor) continue; // overlapping spans render once
      fragment.append(text.slice(cursor, decoration.charStart));
      const mark = doc.createElement("mark");
      mark.className = `lw-mark lw-${decoration.style}`;
      mark.dataset.rule = decoration.ruleId;
      mark.textContent = text.slice(decoration.charStart, decoration.charEnd);
      fragment.append(mark);
      cursor = decoration.charEnd;
    }
    fragment.append(text.slice(cursor));
    this.backdrop.replaceChildren(fragment);
  }

  private renderPanel(decorations: Decoration[], warning: string | null): void {
    const doc = this.editor.ownerDocument;
    this.panel.replaceChildren();
    this.panel.hidden = decorations.length === 0 && warning === null;
    if (warning !== null) {
      const note = doc.createElement("div");
      note.className = "lw-warning";
      note.textContent = `⚠ ${warning}`;
      this.panel.append(note);
    }
    if (decorations.length > 0) {
      const heading = doc.createElement("div");
      heading.className = "lw-heading";
      heading.textContent =
        decorations.length === 1
          ? "1 possible secret — remove it before submitting"
          : `${decorations.length} possible secrets — remove them before submitting`;
      this.panel.append(heading);
    }
    for (const decoration of decorations) {
      const row = doc.createElement("div");
      row.className = `lw-row lw-${decoration.style}`;

      const label = doc.createElement("code");
      label.textContent = decoration.maskedText;
      const rule = doc.createElement("span");
      rule.className = "lw-rule";
      rule.textContent =
        decoration.confidence === null
          ? `${decoration.ruleId} (unverified)`
          : `${decoration.ruleId} (${Math.round(decoration.confidence * 100)}%)`;

      const dismiss = doc.createElement("button");
      dismiss.type = "button";
      dismiss.className = "lw-dismiss";
      dismiss.textContent = "✕";
      dismiss.title = "Dismiss for this page";
      dismiss.addEventListener("click", () => this.callbacks.onDismiss(decoration));

      row.append(label, rule, dismiss);
      this.panel.append(row);
    }
  }
}
