// Options page: endpoint, idle interval, enabled platforms.

import { MAX_IDLE_MS, MIN_IDLE_MS } from "./debounce";
import { loadSettings, saveSettings, type Settings } from "./settings";

function byId<T extends HTMLElement>(doc: Document, id: string): T {
  const element = doc.getElementById(id);
  if (element === null) throw new Error(`options page is missing #${id}`);
  return element as T;
}

export async function initOptionsPage(doc: Document): Promise<void> {
  const endpoint = byId<HTMLInputElement>(doc, "endpoint");
  const idle = byId<HTMLInputElement>(doc, "idle");
  const github = byId<HTMLInputElement>(doc, "enable-github");
  const gitlab = byId<HTMLInputElement>(doc, "enable-gitlab");
  const status = byId<HTMLElement>(doc, "status");
  const form = byId<HTMLFormElement>(doc, "options-form");

  idle.min = String(MIN_IDLE_MS);
  idle.max = String(MAX_IDLE_MS);

  const settings = await loadSettings();
  endpoint.value = settings.endpoint;
  idle.value = String(settings.idleMs);
  github.checked = settings.enableGithub;
  gitlab.checked = settings.enableGitlab;

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const updated: Settings = {
      endpoint: endpoint.value,
      idleMs: Number(idle.value),
      enableGithub: github.checked,
      enableGitlab: gitlab.checked,
    };
    void saveSettings(updated).then(() => {
      status.textContent = "Saved.";
      setTimeout(() => (status.textContent = ""), 1500);
    });
  });
}

if (typeof document !== "undefined" && !("__vitest__" in globalThis)) {
  void initOptionsPage(document);
}
