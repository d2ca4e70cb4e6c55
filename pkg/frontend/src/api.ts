/** Backend client with stale-response discarding, plus file-open mode.
 *
 * Requests carry monotone ids per endpoint; a response is dropped when a
 * newer request of the same kind has already resolved, so rapid slider
 * movement can never paint stale data.  Off-grid bandwidths are snapped
 * before hitting the network to maximize backend cache hits.
 */

import { snapH } from "./state";
import {
    CclusterExport,
    CoresResponse,
    ExportDocument,
    HdrResponse,
    MetaResponse,
    SclusterExport,
    TreeJson,
} from "./types";

type Endpoint = "meta" | "density" | "tree" | "hdr" | "cores";

export class ApiClient {
    private issued: Record<Endpoint, number> = {
        meta: 0, density: 0, tree: 0, hdr: 0, cores: 0,
    };
    private applied: Record<Endpoint, number> = {
        meta: 0, density: 0, tree: 0, hdr: 0, cores: 0,
    };

    constructor(
        private baseUrl: string,
        private fetchFn: typeof fetch = fetch.bind(globalThis),
    ) {}

    private async get<T>(endpoint: Endpoint, params: Record<string, string>): Promise<T | null> {
        const id = ++this.issued[endpoint];
        const query = new URLSearchParams(params).toString();
        const url = `${this.baseUrl}/api/${endpoint}${query ? "?" + query : ""}`;
        const response = await this.fetchFn(url);
        if (!response.ok) {
            throw new Error(`${endpoint}: HTTP ${response.status}`);
        }
        const body = (await response.json()) as T;
        if (id <= this.applied[endpoint]) {
            return null; // stale: a newer request already resolved
        }
        this.applied[endpoint] = id;
        return body;
    }

    meta(): Promise<MetaResponse | null> {
        return this.get<MetaResponse>("meta", {});
    }

    density(h: number): Promise<unknown | null> {
        return this.get("density", { h: String(snapH(h)) });
    }

    tree(h: number): Promise<TreeJson | null> {
        return this.get<TreeJson>("tree", { h: String(snapH(h)) });
    }

    hdr(h: number, tau: number): Promise<HdrResponse | null> {
        return this.get<HdrResponse>("hdr", { h: String(snapH(h)), tau: String(tau) });
    }

    cores(h: number): Promise<CoresResponse | null> {
        return this.get<CoresResponse>("cores", { h: String(snapH(h)) });
    }
}

/** Parse an export document loaded from disk (no backend required). */
export function parseExportDocument(text: string): ExportDocument {
    const doc = JSON.parse(text);
    if (doc && doc.kind === "ccluster") return doc as CclusterExport;
    if (doc && doc.kind === "scluster") return doc as SclusterExport;
    if (doc && Array.isArray(doc.nodes) && typeof doc.n === "number") return doc as TreeJson;
    throw new Error("unrecognized export document: expected ccluster, scluster, or tree JSON");
}
