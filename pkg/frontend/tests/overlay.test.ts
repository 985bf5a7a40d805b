import { beforeEach, describe, expect, it, vi } from "vitest";

import type { Decoration } from "../src/decorations";
import { HighlightOverlay } from "../src/overlay";

const TOKEN = "AKIATQ7MZP2W9C4XRV5B";

function setup(): { editor: HTMLTextAreaElement; overlay: HighlightOverlay; onDismiss: ReturnType<typeof vi.fn> } {
  document.body.innerHTML = `<div id="wrap"><textarea id="issue_body"></textarea></div>`;
  const editor = document.getElementById("issue_body") as HTMLTextAreaElement;
  const onDismiss = vi.fn();
  const overlay = new HighlightOverlay(editor, { onDismiss });
  return { editor, overlay, onDismiss };
}

function decoration(overrides: Partial<Decoration>): Decoration {
  return {
    charStart: 0,
    charEnd: 1,
    ruleId: "aws-access-key-id",
    maskedText: "AKIA**************5B",
    confidence: 0.77,
    style: "alert",
    ...overrides,
  };
}

describe("HighlightOverlay", () => {
  beforeEach(() => {
    document.body.innerHTML = "";
  });

  it("renders one red mark per alert decoration, at the right slices", () => {
    const { editor, overlay } = setup();
    const text = `a ${TOKEN} b ${TOKEN} c`;
    editor.value = text;
    const first = text.indexOf(TOKEN);
    const second = text.indexOf(TOKEN, first + 1);
    overlay.render(text, [
      decoration({ charStart: first, charEnd: first + TOKEN.length }),
      decoration({ charStart: second, charEnd: second + TOKEN.length }),
    ], null);

    const marks = document.querySelectorAll("mark.lw-mark.lw-alert");
    expect(marks).toHaveLength(2);
    expect([...marks].every((m) => m.textContent === TOKEN)).toBe(true);
    expect(overlay.decorationCount).toBe(2);
  });

  it("renders zero marks for an empty decoration set", () => {
    const { editor, overlay } = setup();
    editor.value = "plain text";
    overlay.render("plain text", [], null);
    expect(document.querySelectorAll("mark")).toHaveLength(0);
    expect(document.querySelector(".lw-panel")?.hasAttribute("hidden")).toBe(true);
  });

  it("styles unverified findings as caution, not red", () => {
    const { editor, overlay } = setup();
    const text = `x ${TOKEN}`;
    editor.value = text;
    overlay.render(text, [
      decoration({ charStart: 2, charEnd: 2 + TOKEN.length, style: "caution", confidence: null }),
    ], "classifier unavailable (connection): refused");
    expect(document.querySelectorAll("mark.lw-caution")).toHaveLength(1);
    expect(document.querySelectorAll("mark.lw-alert")).toHaveLength(0);
    expect(document.querySelector(".lw-warning")?.textContent).toContain("classifier unavailable");
  });

  it("panel lists masked text, rule name, and confidence", () => {
    const { editor, overlay } = setup();
    const text = `x ${TOKEN}`;
    editor.value = text;
    overlay.render(text, [decoration({ charStart: 2, charEnd: 2 + TOKEN.length })], null);
    const panel = document.querySelector(".lw-panel")!;
    expect(panel.textContent).toContain("AKIA**************5B");
    expect(panel.textContent).toContain("aws-access-key-id");
    expect(panel.textContent).toContain("77%");
    expect(panel.textContent).not.toContain(TOKEN); // masked only
  });

  it("dismiss buttons call back with the decoration", () => {
    const { editor, overlay, onDismiss } = setup();
    const text = `x ${TOKEN}`;
    editor.value = text;
    const d = decoration({ charStart: 2, charEnd: 2 + TOKEN.length });
    overlay.render(text, [d], null);
    (document.querySelector("button.lw-dismiss") as HTMLButtonElement).click();
    expect(onDismiss).toHaveBeenCalledWith(d);
  });

  it("never touches the editor content", () => {
    const { editor, overlay } = setup();
    const text = `before ${TOKEN} after`;
    editor.value = text;
    overlay.render(text, [decoration({ charStart: 7, charEnd: 7 + TOKEN.length })], null);
    overlay.clear();
    expect(editor.value).toBe(text);
  });

  it("dispose removes every injected node and restores the editor", () => {
    const { editor, overlay } = setup();
    editor.value = "t";
    overlay.render("t", [], null);
    overlay.dispose();
    expect(document.querySelector(".lw-backdrop")).toBeNull();
    expect(document.querySelector(".lw-panel")).toBeNull();
    expect(document.querySelector(".lw-badge")).toBeNull();
    expect(editor.classList.contains("lw-decorated")).toBe(false);
  });

  it("badge reflects connectivity", () => {
    const { overlay } = setup();
    overlay.setConnected(false);
    expect(document.querySelector(".lw-badge.lw-disconnected")).not.toBeNull();
    overlay.setConnected(true);
    expect(document.querySelector(".lw-badge.lw-connected")).not.toBeNull();
  });
});
