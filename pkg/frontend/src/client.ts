// HTTP client for the loopback analysis service.

import type { AnalyzeRequest, AnalyzeResponse } from "./protocol";

export class AnalysisClient {
  constructor(
    private readonly endpoint: string,
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  async analyze(document: string): Promise<AnalyzeResponse> {
    const request: AnalyzeRequest = { document };
    const response = await this.fetchFn(`${this.endpoint.replace(/\/$/, "")}/analyze`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(request),
    });
    if (!response.ok) {
      throw new Error(`analysis service returned HTTP ${response.status}`);
    }
    return (await response.json()) as AnalyzeResponse;
  }
}
