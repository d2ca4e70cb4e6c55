/** App wiring: file-open mode (export JSON, no backend) or live backend. */

import { ApiClient, parseExportDocument } from "./api";
import { drawCcluster, drawCoresStrip, drawScluster, drawTree } from "./render";
import { frameAt, frameLabel } from "./scluster";
import {
    ExplorerState,
    applyCommand,
    initialState,
    pause,
    scrub,
    setTau,
    setView,
    tick,
    togglePlay,
    withFrameCount,
} from "./state";
import { componentCountAtTau, cursorMass, nearestLevel } from "./tree";
import { CclusterExport, ExportDocument, SclusterExport, TreeJson } from "./types";

const FRAME_MS = 400;

class ExplorerApp {
    private state: ExplorerState = initialState(null);
    private doc: ExportDocument | null = null;
    private api: ApiClient | null = null;
    private coreLabels: number[] | null = null;
    private timer: ReturnType<typeof setInterval> | null = null;

    constructor(private root: Document) {
        this.bind();
    }

    private el<T extends HTMLElement>(id: string): T {
        const node = this.root.getElementById(id);
        if (!node) throw new Error(`missing element #${id}`);
        return node as T;
    }

    private bind(): void {
        this.el<HTMLInputElement>("file-input").addEventListener("change", (ev) => {
            const input = ev.target as HTMLInputElement;
            const file = input.files?.[0];
            if (!file) return;
            file.text().then((text) => this.loadDocument(parseExportDocument(text)));
        });
        this.el<HTMLButtonElement>("connect").addEventListener("click", () => {
            const url = this.el<HTMLInputElement>("backend-url").value || "http://127.0.0.1:8000";
            this.connect(url);
        });
        this.el<HTMLInputElement>("tau-slider").addEventListener("input", (ev) => {
            const value = Number((ev.target as HTMLInputElement).value);
            this.update(setTau(this.state, value));
        });
        this.el<HTMLButtonElement>("play-pause").addEventListener("click", () => {
            this.update(togglePlay(this.state));
        });
        this.el<HTMLInputElement>("frame-slider").addEventListener("input", (ev) => {
            const value = Number((ev.target as HTMLInputElement).value);
            this.update(scrub(pause(this.state), value));
        });
        this.el<HTMLButtonElement>("apply").addEventListener("click", () => {
            this.el<HTMLTextAreaElement>("command-out").value = applyCommand(this.state);
        });
        this.timer = setInterval(() => {
            if (this.state.playback.running) this.update(tick(this.state));
        }, FRAME_MS);
    }

    private connect(url: string): void {
        this.api = new ApiClient(url);
        this.api.meta().then((meta) => {
            if (!meta) return;
            this.state = initialState(meta);
            this.refreshFromBackend();
        }).catch((err) => this.showError(String(err)));
    }

    private refreshFromBackend(): void {
        if (!this.api) return;
        const handler = (doc: unknown) => {
            if (doc) this.loadDocument(doc as ExportDocument);
        };
        if (this.state.view === "tree") {
            this.api.tree(this.state.h).then(handler).catch((e) => this.showError(String(e)));
            this.api.cores(this.state.h).then((cores) => {
                if (cores) {
                    this.coreLabels = cores.labels;
                    this.render();
                }
            }).catch((e) => this.showError(String(e)));
        } else {
            this.api.density(this.state.h).then(handler).catch((e) => this.showError(String(e)));
        }
    }

    private loadDocument(doc: ExportDocument): void {
        this.doc = doc;
        if ("kind" in doc && doc.kind === "scluster") {
            this.state = withFrameCount(setView(this.state, "scluster-disks"), doc.frames.length);
        } else if ("kind" in doc && doc.kind === "ccluster") {
            this.state = setView(this.state, "ccluster-polar");
        } else {
            this.state = setView(this.state, "tree");
        }
        this.state = { ...this.state, viewError: null };
        this.render();
    }

    private update(next: ExplorerState): void {
        this.state = next;
        this.render();
    }

    private showError(message: string): void {
        this.el<HTMLDivElement>("status").textContent = message;
    }

    private render(): void {
        const canvas = this.el<HTMLCanvasElement>("view-canvas");
        const status = this.el<HTMLDivElement>("status");
        if (this.state.viewError) {
            status.textContent = this.state.viewError;
            return;
        }
        if (!this.doc) {
            status.textContent = "open an export JSON file or connect to a backend";
            return;
        }
        if ("kind" in this.doc && this.doc.kind === "ccluster") {
            drawCcluster(canvas, this.doc as CclusterExport, this.state.tau);
            status.textContent = `cCluster: n=${this.doc.n}, tau=${this.state.tau.toFixed(2)}`;
        } else if ("kind" in this.doc && this.doc.kind === "scluster") {
            const doc = this.doc as SclusterExport;
            const frame = frameAt(doc, this.state.playback.frameIndex);
            drawScluster(canvas, doc, frame, this.state.tau);
            status.textContent =
                `sCluster frame ${this.state.playback.frameIndex + 1}/${doc.frames.length}: ` +
                frameLabel(frame);
        } else {
            const tree = this.doc as TreeJson;
            drawTree(canvas, tree, this.state.tau, cursorMass(tree, this.state.tau));
            if (this.coreLabels) drawCoresStrip(canvas, this.coreLabels);
            const level = nearestLevel(tree, this.state.tau);
            status.textContent =
                `tree: ${componentCountAtTau(tree, this.state.tau)} component(s) at ` +
                `tau=${level.tau.toFixed(2)} (threshold ${level.threshold.toExponential(3)})`;
        }
    }

    dispose(): void {
        if (this.timer !== null) clearInterval(this.timer);
    }
}

if (typeof document !== "undefined") {
    new ExplorerApp(document);
}

export { ExplorerApp };
