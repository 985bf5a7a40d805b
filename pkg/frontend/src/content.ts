// Content script entry point: bind the issue editor, debounce input, query the
// local analysis service, decorate findings.

import { AnalysisClient } from "./client";
import { AnalysisScheduler } from "./debounce";
import { computeDecorations, DismissalRegistry } from "./decorations";
import { detectPlatform, EditorMonitor, isIssueComposeView, type EditorBinding } from "./editor";
import { HighlightOverlay } from "./overlay";
import { loadSettings, type Settings } from "./settings";

interface ActiveSession {
  teardown: () => void;
}

function bindEditor(
  binding: EditorBinding,
  settings: Settings,
  client: AnalysisClient,
): ActiveSession {
  const editor = binding.editor;
  const dismissals = new DismissalRegistry();
  const overlay = new HighlightOverlay(editor, {
    onDismiss: (decoration) => {
      dismissals.dismiss({ rule_id: decoration.ruleId, masked_text: decoration.maskedText });
      scheduler.noteInput(); // re-render from a fresh analysis minus the dismissal
    },
  });

  const scheduler = new AnalysisScheduler(
    () => editor.value,
    (text) => client.analyze(text),
    {
      onResponse: (response, dispatchedText) => {
        overlay.setConnected(true);
        const current = editor.value;
        const set = computeDecorations(response, current, dismissals);
        overlay.render(current, set.decorations, set.warning);
        // text changed between dispatch and response: decorations for the
        // moved spans were dropped; ask for a fresh analysis
        if (set.staleCount > 0 || current !== dispatchedText) scheduler.noteInput();
      },
      onError: () => overlay.setConnected(false), // badge only, never a dialog
    },
    settings.idleMs,
  );

  const onInput = () => scheduler.noteInput();
  const onPaste = () => scheduler.notePaste();
  editor.addEventListener("input", onInput);
  editor.addEventListener("paste", onPaste);
  if (editor.value.trim() !== "") scheduler.noteInput(); // pre-filled edit views

  return {
    teardown: () => {
      editor.removeEventListener("input", onInput);
      editor.removeEventListener("paste", onPaste);
      scheduler.dispose();
      overlay.dispose();
    },
  };
}

export interface ContentController {
  stop: () => void;
}

const INERT: ContentController = { stop: () => {} };

export async function main(doc: Document, location: Location): Promise<ContentController> {
  const settings = await loadSettings();
  const platform = detectPlatform(location.host);
  if (platform === null) return INERT;
  if (platform === "github" && !settings.enableGithub) return INERT;
  if (platform === "gitlab" && !settings.enableGitlab) return INERT;
  if (!isIssueComposeView(platform, location.pathname)) return INERT; // no observers off issue views

  const client = new AnalysisClient(settings.endpoint);
  let session: ActiveSession | null = null;

  const monitor = new EditorMonitor({
    platform,
    document: doc,
    onBind: (binding) => {
      session?.teardown();
      session = bindEditor(binding, settings, client);
    },
    onUnbind: () => {
      session?.teardown();
      session = null;
    },
  });
  monitor.start();
  return {
    stop: () => {
      monitor.stop();
      session?.teardown();
      session = null;
    },
  };
}

// Self-start; off GitHub/GitLab issue views main() is a no-op, so importing
// this module under test is harmless (tests drive main() explicitly).
if (typeof window !== "undefined" && typeof document !== "undefined") {
  void main(document, window.location);
}
