/** Thin typed client for the node's JSON endpoints. */

import type { Envelope, NodeConfig } from "./types.js";

const JSON_HEADERS = { Accept: "application/json" };

export interface SearchParams {
  type: "LQF" | "RQF" | "SQF" | "SUGGEST";
  domain: string;
  values?: string[];
  id?: string;
}

export function encodeQuery(params: SearchParams): string {
  const pairs = new URLSearchParams();
  pairs.set("type", params.type);
  pairs.set("domain", params.domain);
  if (params.id !== undefined) {
    pairs.set("id", params.id);
  }
  for (const value of params.values ?? []) {
    pairs.append("value", value);
  }
  return pairs.toString();
}

export class ApiClient {
  constructor(readonly baseUrl: string = "") {}

  private async getJson<T>(path: string, signal?: AbortSignal): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      headers: JSON_HEADERS,
      signal,
    });
    return (await response.json()) as T;
  }

  config(): Promise<NodeConfig> {
    return this.getJson<NodeConfig>("/config");
  }

  query(params: SearchParams, signal?: AbortSignal): Promise<Envelope> {
    return this.getJson<Envelope>(`/query?${encodeQuery(params)}`, signal);
  }

  remote(params: SearchParams, signal?: AbortSignal): Promise<Envelope> {
    return this.getJson<Envelope>(`/remote?${encodeQuery(params)}`, signal);
  }

  suggest(domain: string, fragment: string, signal?: AbortSignal): Promise<Envelope> {
    return this.query({ type: "SUGGEST", domain, values: [fragment] }, signal);
  }

  /** Drill-down by `Collection:id` reference. */
  drillDown(ref: string, signal?: AbortSignal): Promise<Envelope> {
    const colon = ref.indexOf(":");
    const domain = ref.slice(0, colon);
    const id = ref.slice(colon + 1);
    return this.query({ type: "SQF", domain, id }, signal);
  }
}

/** The peer's own search page with the query re-encoded, for count links. */
export function peerResultsUrl(peerUrl: string, params: SearchParams): string {
  const base = peerUrl.replace(/\/+$/, "");
  return `${base}/ui/?${encodeQuery({ ...params, type: "LQF" })}`;
}
