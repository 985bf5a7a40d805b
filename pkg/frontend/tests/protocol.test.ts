import { describe, expect, it } from "vitest";

import { byteSpanToCharSpan, sliceMatchesMasked } from "../src/protocol";

describe("byteSpanToCharSpan", () => {
  it("is the identity on ASCII", () => {
    expect(byteSpanToCharSpan("hello world", 6, 11)).toEqual([6, 11]);
  });

  it("accounts for two-byte characters", () => {
    // "é" is 2 bytes but 1 UTF-16 unit: "token" sits at bytes [5,10), chars [3,8)
    expect(byteSpanToCharSpan("éé token", 5, 10)).toEqual([3, 8]);
  });

  it("accounts for astral characters (two UTF-16 units, four bytes)", () => {
    const text = "🗝️key"; // 🗝 U+1F5DD (4 bytes, 2 units) + VS16 (3 bytes, 1 unit)
    expect(byteSpanToCharSpan(text, 7, 10)).toEqual([3, 6]);
  });

  it("rejects spans that split a character", () => {
    expect(byteSpanToCharSpan("é", 1, 2)).toBeNull();
  });

  it("rejects spans past the end", () => {
    expect(byteSpanToCharSpan("abc", 1, 9)).toBeNull();
  });

  it("rejects empty and negative spans", () => {
    expect(byteSpanToCharSpan("abc", 2, 2)).toBeNull();
    expect(byteSpanToCharSpan("abc", -1, 2)).toBeNull();
  });

  it("round-trips every candidate span in a mixed document", () => {
    const doc = "naïve 🤫 key AKIATQ7MZP2W9C4XRV5B done";
    const bytes = new TextEncoder().encode(doc);
    const token = "AKIATQ7MZP2W9C4XRV5B";
    const tokenBytes = new TextEncoder().encode(token);
    // locate the token's byte span the way the service would report it
    const byteStart = bytes.findIndex((_, i) =>
      tokenBytes.every((b, j) => bytes[i + j] === b),
    );
    const span = byteSpanToCharSpan(doc, byteStart, byteStart + tokenBytes.length);
    expect(span).not.toBeNull();
    const [start, end] = span!;
    expect(doc.slice(start, end)).toBe(token);
  });
});

describe("sliceMatchesMasked", () => {
  it("accepts the original text against its mask", () => {
    expect(sliceMatchesMasked("AKIATQ7MZP2W9C4XRV5B", "AKIA**************5B")).toBe(true);
  });

  it("rejects a different token of the same shape", () => {
    expect(sliceMatchesMasked("AKIBTQ7MZP2W9C4XRV5B", "AKIA**************5B")).toBe(false);
  });

  it("rejects length changes", () => {
    expect(sliceMatchesMasked("AKIA5B", "AKIA**************5B")).toBe(false);
  });

  it("accepts fully masked short tokens by length only", () => {
    expect(sliceMatchesMasked("abc", "***")).toBe(true);
    expect(sliceMatchesMasked("abcd", "***")).toBe(false);
  });
});
