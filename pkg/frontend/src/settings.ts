// Extension settings with graceful fallback outside an extension context.

import { clampIdle, DEFAULT_IDLE_MS } from "./debounce";

export interface Settings {
  endpoint: string;
  idleMs: number;
  enableGithub: boolean;
  enableGitlab: boolean;
}

export const DEFAULT_SETTINGS: Settings = {
  endpoint: "http://127.0.0.1:8901",
  idleMs: DEFAULT_IDLE_MS,
  enableGithub: true,
  enableGitlab: true,
};

interface ChromeStorageArea {
  get(defaults: Record<string, unknown>, callback: (items: Record<string, unknown>) => void): void;
  set(items: Record<string, unknown>, callback?: () => void): void;
}

function storageArea(): ChromeStorageArea | null {
  const chromeGlobal = (globalThis as { chrome?: { storage?: { sync?: ChromeStorageArea } } })
    .chrome;
  return chromeGlobal?.storage?.sync ?? null;
}

export function normalizeSettings(raw: Partial<Settings>): Settings {
  return {
    endpoint:
      typeof raw.endpoint === "string" && raw.endpoint.trim() !== ""
        ? raw.endpoint.trim()
        : DEFAULT_SETTINGS.endpoint,
    idleMs: clampIdle(Number(raw.idleMs ?? DEFAULT_SETTINGS.idleMs)),
    enableGithub: raw.enableGithub ?? DEFAULT_SETTINGS.enableGithub,
    enableGitlab: raw.enableGitlab ?? DEFAULT_SETTINGS.enableGitlab,
  };
}

export function loadSettings(): Promise<Settings> {
  const area = storageArea();
  if (area === null) return Promise.resolve({ ...DEFAULT_SETTINGS });
  return new Promise((resolve) => {
    area.get({ ...DEFAULT_SETTINGS }, (items) => resolve(normalizeSettings(items)));
  });
}

export function saveSettings(settings: Settings): Promise<void> {
  const area = storageArea();
  if (area === null) return Promise.resolve();
  return new Promise((resolve) => {
    area.set({ ...normalizeSettings(settings) }, () => resolve());
  });
}
