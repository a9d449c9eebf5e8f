/** Thin typed client over the service's JSON API. */

import type {
  CodeIndexPayload,
  DocumentModel,
  GraphLevel,
  GraphPayload,
  Link,
  LinksResponse,
  ManualLinkBody,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  if (!response.ok) {
    let code = "HttpError";
    let message = `${response.status} on ${url}`;
    try {
      const body = (await response.json()) as { code?: string; message?: string };
      code = body.code ?? code;
      message = body.message ?? message;
    } catch {
      // non-JSON error body; keep defaults
    }
    throw new ApiError(response.status, code, message);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  getDocument(): Promise<DocumentModel> {
    return request(`${this.base}/api/document`);
  }

  getEntities(): Promise<CodeIndexPayload> {
    return request(`${this.base}/api/code/entities`);
  }

  async getSource(file: string): Promise<string> {
    const response = await fetch(
      `${this.base}/api/code/source?file=${encodeURIComponent(file)}`,
    );
    if (!response.ok) {
      throw new ApiError(response.status, "NotFound", `no source for ${file}`);
    }
    return response.text();
  }

  getLinks(): Promise<LinksResponse> {
    return request(`${this.base}/api/links`);
  }

  createLink(body: ManualLinkBody): Promise<Link> {
    return request(`${this.base}/api/links`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  deleteLink(linkId: string): Promise<{ deleted: string }> {
    return request(`${this.base}/api/links/${linkId}`, { method: "DELETE" });
  }

  runAutoDiscovery(): Promise<LinksResponse & { auto_discovered: number }> {
    return request(`${this.base}/api/links/auto`, { method: "POST" });
  }

  getGraph(level: GraphLevel): Promise<GraphPayload> {
    return request(`${this.base}/api/graph?level=${level}`);
  }

  exportLinks(): Promise<{ path: string; links: number }> {
    return request(`${this.base}/api/export`, { method: "POST" });
  }
}
