// Thin service client. Responses are kept as raw text; callers extract the
// tokens they display so no number is ever re-formatted locally.

export interface EngineResponse {
  status: number;
  text: string;
}

export type FetchLike = (url: string, init?: {
  method?: string;
  headers?: Record<string, string>;
  body?: string;
}) => Promise<{ status: number; text(): Promise<string> }>;

export class EngineClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: FetchLike = fetch as unknown as FetchLike,
  ) {}

  async post(path: string, body: string): Promise<EngineResponse> {
    const resp = await this.fetchFn(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body,
    });
    return { status: resp.status, text: await resp.text() };
  }

  async health(): Promise<boolean> {
    try {
      const resp = await this.fetchFn(this.baseUrl + "/health");
      return resp.status === 200;
    } catch {
      return false;
    }
  }
}
