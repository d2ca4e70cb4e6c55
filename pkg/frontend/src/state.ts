/** Explorer state and its transitions.
 *
 * The UI is stateless with respect to the backend: every number shown
 * comes from an API response or a loaded export document, and the same
 * (dataset, h, tau) always reproduces the same visuals.
 */

import { MetaResponse } from "./types";

export type ViewKind = "ccluster-polar" | "scluster-disks" | "tree";

export interface Playback {
    running: boolean;
    frameIndex: number;
    frameCount: number;
}

export interface ExplorerState {
    meta: MetaResponse | null;
    view: ViewKind;
    h: number;
    tau: number;
    playback: Playback;
    /** set when the requested view is invalid for the dataset dimension */
    viewError: string | null;
}

export const H_SNAP = 1e-3;   // off-grid h requests snap to this resolution
export const TAU_MIN = 0.01;
export const TAU_MAX = 0.99;

export function snapH(h: number): number {
    return Math.round(h / H_SNAP) * H_SNAP;
}

export function defaultView(d: number): ViewKind {
    if (d === 2) return "ccluster-polar";
    if (d === 3) return "scluster-disks";
    return "tree";
}

export function initialState(meta: MetaResponse | null): ExplorerState {
    const selectors = meta ? Object.values(meta.selectors) : [];
    return {
        meta,
        view: meta ? defaultView(meta.d) : "ccluster-polar",
        h: selectors.length ? snapH(selectors[0]) : 0.3,
        tau: 0.5,
        playback: { running: false, frameIndex: 0, frameCount: 0 },
        viewError: null,
    };
}

export function setTau(state: ExplorerState, tau: number): ExplorerState {
    const clamped = Math.max(TAU_MIN, Math.min(TAU_MAX, tau));
    return { ...state, tau: clamped };
}

export function setH(state: ExplorerState, h: number): ExplorerState {
    return { ...state, h: snapH(Math.max(H_SNAP, h)) };
}

export function setView(state: ExplorerState, view: ViewKind): ExplorerState {
    const d = state.meta?.d ?? null;
    if (view === "ccluster-polar" && d !== null && d !== 2) {
        return { ...state, viewError: `cCluster is unavailable for d = ${d} (needs d = 2)` };
    }
    if (view === "scluster-disks" && d !== null && d !== 3) {
        return { ...state, viewError: `sCluster is unavailable for d = ${d} (needs d = 3)` };
    }
    return { ...state, view, viewError: null };
}

export function withFrameCount(state: ExplorerState, frameCount: number): ExplorerState {
    const frameIndex = Math.min(state.playback.frameIndex, Math.max(0, frameCount - 1));
    return { ...state, playback: { ...state.playback, frameCount, frameIndex } };
}

export function play(state: ExplorerState): ExplorerState {
    return { ...state, playback: { ...state.playback, running: true } };
}

export function pause(state: ExplorerState): ExplorerState {
    return { ...state, playback: { ...state.playback, running: false } };
}

export function togglePlay(state: ExplorerState): ExplorerState {
    return state.playback.running ? pause(state) : play(state);
}

/** Advance one animation frame; a no-op while paused or with no frames. */
export function tick(state: ExplorerState): ExplorerState {
    const p = state.playback;
    if (!p.running || p.frameCount === 0) return state;
    return { ...state, playback: { ...p, frameIndex: (p.frameIndex + 1) % p.frameCount } };
}

export function scrub(state: ExplorerState, frameIndex: number): ExplorerState {
    const clamped = Math.max(0, Math.min(state.playback.frameCount - 1, frameIndex));
    return { ...state, playback: { ...state.playback, frameIndex: clamped } };
}

/** CLI-ready command for the chosen (h, tau); a single-value tau grid
 *  makes the cores level exactly the chosen tau. */
export function applyCommand(state: ExplorerState, dataset = "data.csv"): string {
    const tau = state.tau;
    return `dirclust classify ${dataset} --bandwidth ${state.h} --tau-grid ${tau}:${tau}:0.01`;
}
