// Wire types for the local analysis service (see ../../docs/protocol.md).
// Field names are the contract; do not rename.

export type FindingLabel = "Secret" | "NonSensitive" | "Unverified";

export interface WireFinding {
  span_start: number; // byte offsets into the UTF-8 encoding of the document
  span_end: number;
  rule_id: string;
  label: FindingLabel;
  confidence: number | null;
  masked_text: string;
}

export interface AnalyzeTiming {
  extraction_ms: number;
  classification_ms: number;
  total_ms: number;
}

export interface AnalyzeResponse {
  findings: WireFinding[];
  timing: AnalyzeTiming;
  cache: { hits: number; misses: number };
  catalog_version: string;
  classifier_id: string;
  warning: string | null;
}

export interface AnalyzeRequest {
  document: string;
  options?: { threshold?: number | null; include_non_sensitive?: boolean };
}

function utf8Length(codePoint: number): number {
  if (codePoint < 0x80) return 1;
  if (codePoint < 0x800) return 2;
  if (codePoint < 0x10000) return 3;
  return 4;
}

/**
 * Convert a byte span over the UTF-8 encoding of `text` into UTF-16 code-unit
 * indices usable with JavaScript strings. Returns null when the span is out of
 * range or does not fall on character boundaries (e.g. the document changed
 * between dispatch and response).
 */
export function byteSpanToCharSpan(
  text: string,
  byteStart: number,
  byteEnd: number,
): [number, number] | null {
  if (byteStart < 0 || byteEnd <= byteStart) return null;
  let bytePos = 0;
  let unitPos = 0;
  let charStart = -1;
  if (byteStart === 0) charStart = 0;
  for (const ch of text) {
    const cp = ch.codePointAt(0)!;
    bytePos += utf8Length(cp);
    unitPos += ch.length; // 2 units for astral code points
    if (charStart < 0 && bytePos === byteStart) charStart = unitPos;
    if (bytePos === byteEnd) {
      return charStart >= 0 ? [charStart, unitPos] : null;
    }
    if (bytePos > byteEnd) return null;
  }
  return null;
}

/** Does the current editor text still contain what the service matched?
 * Full text is never echoed back, so compare against the masked form:
 * same length, same visible head and tail. */
export function sliceMatchesMasked(slice: string, masked: string): boolean {
  if (slice.length !== masked.length) return false;
  for (let i = 0; i < masked.length; i++) {
    if (masked[i] !== "*" && masked[i] !== slice[i]) return false;
  }
  return true;
}
