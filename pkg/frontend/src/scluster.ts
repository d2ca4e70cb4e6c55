/** Spherical animation view: two hemisphere disks per bandwidth frame. */

import { cellColor } from "./colors";
import { nearestTauIndex } from "./ccluster";
import { SclusterExport, SclusterFrame } from "./types";

export interface DiskCell {
    row: number;
    col: number;
    color: string;
}

export function frameAt(doc: SclusterExport, index: number): SclusterFrame {
    return doc.frames[Math.max(0, Math.min(doc.frames.length - 1, index))];
}

/** Frames carrying selector bookmarks, in playback order. */
export function bookmarkedFrames(doc: SclusterExport): { index: number; selectors: string[] }[] {
    const out: { index: number; selectors: string[] }[] = [];
    doc.frames.forEach((frame, index) => {
        if (frame.selectors.length) out.push({ index, selectors: frame.selectors });
    });
    return out;
}

export function frameIndexForSelector(doc: SclusterExport, selectorId: string): number {
    const hit = doc.frames.findIndex((f) => f.selectors.includes(selectorId));
    return hit;
}

export function frameLabel(frame: SclusterFrame): string {
    const tags = frame.selectors.length ? ` [${frame.selectors.join(", ")}]` : "";
    return `h = ${frame.h}${tags}`;
}

function rasterRange(frame: SclusterFrame): [number, number] {
    let lo = Infinity;
    let hi = -Infinity;
    for (const disk of [frame.north, frame.south]) {
        for (const row of disk) {
            for (const v of row) {
                if (v === null) continue;
                if (v < lo) lo = v;
                if (v > hi) hi = v;
            }
        }
    }
    return [lo, hi];
}

/** Draw list for one hemisphere disk; null raster cells are skipped. */
export function diskCells(frame: SclusterFrame, which: "north" | "south", tau: number,
                          taus: number[]): DiskCell[] {
    const threshold = frame.thresholds[nearestTauIndex(taus, tau)];
    const [lo, hi] = rasterRange(frame);
    const raster = which === "north" ? frame.north : frame.south;
    const cells: DiskCell[] = [];
    raster.forEach((row, r) => {
        row.forEach((v, c) => {
            if (v === null) return;
            cells.push({ row: r, col: c, color: cellColor(v, threshold, lo, hi) });
        });
    });
    return cells;
}
