/** Polar heatmap geometry for the circular bandwidth-exploration view.
 *
 * Concentric rings are indexed by 1/h^2 (small concentrations innermost),
 * each ring split into angular cells colored by the density value, grayed
 * below the HDR threshold of the current tau.  Sample points draw as
 * ticks on the outer circle and selector concentrations as radial marks.
 */

import { cellColor } from "./colors";
import { CclusterExport } from "./types";

export interface PolarCell {
    ring: number;
    angleIndex: number;
    r0: number;         // inner radius, normalized [0, 1]
    r1: number;
    a0: number;         // angle span, radians
    a1: number;
    color: string;
}

export interface SelectorMark {
    id: string;
    radius: number;     // normalized ring-scale radius, NaN if off scale
}

const INNER_HOLE = 0.12;  // keep the innermost ring readable
const OUTER_RING = 0.92;  // sample ticks live outside this

/** Index of the grid tau closest to the requested one. */
export function nearestTauIndex(taus: number[], tau: number): number {
    let best = 0;
    for (let i = 1; i < taus.length; i++) {
        if (Math.abs(taus[i] - tau) < Math.abs(taus[best] - tau)) best = i;
    }
    return best;
}

/** Ring radius scale: log(1/h^2) normalized over the grid; each ring
 *  spans the midpoints to its neighbours. */
export function ringRadius(doc: CclusterExport, ring: number): [number, number] {
    const logs = doc.inv_h2.map(Math.log);
    const lo = logs[0];
    const hi = logs[logs.length - 1];
    const span = hi - lo || 1;
    const at = (i: number) =>
        INNER_HOLE + ((logs[i] - lo) / span) * (OUTER_RING - INNER_HOLE);
    const n = doc.inv_h2.length;
    const r0 = ring === 0 ? INNER_HOLE : (at(ring - 1) + at(ring)) / 2;
    const r1 = ring === n - 1 ? OUTER_RING : (at(ring) + at(ring + 1)) / 2;
    return [r0, r1];
}

export function thresholdFor(doc: CclusterExport, ring: number, tau: number): number {
    return doc.thresholds[ring][nearestTauIndex(doc.taus, tau)];
}

/** Which cells of a ring stay colored (density at or above threshold). */
export function coloredMask(doc: CclusterExport, ring: number, tau: number): boolean[] {
    const threshold = thresholdFor(doc, ring, tau);
    return doc.density[ring].map((v) => v >= threshold);
}

export function layoutCells(doc: CclusterExport, tau: number): PolarCell[] {
    const nAngles = doc.angles.length;
    const step = (2 * Math.PI) / nAngles;
    let lo = Infinity;
    let hi = -Infinity;
    for (const row of doc.density) {
        for (const v of row) {
            if (v < lo) lo = v;
            if (v > hi) hi = v;
        }
    }
    const cells: PolarCell[] = [];
    for (let ring = 0; ring < doc.inv_h2.length; ring++) {
        const [r0, r1] = ringRadius(doc, ring);
        const threshold = thresholdFor(doc, ring, tau);
        const row = doc.density[ring];
        for (let a = 0; a < nAngles; a++) {
            cells.push({
                ring,
                angleIndex: a,
                r0,
                r1,
                a0: doc.angles[a],
                a1: doc.angles[a] + step,
                color: cellColor(row[a], threshold, lo, hi),
            });
        }
    }
    return cells;
}

export function sampleTicks(doc: CclusterExport): { angle: number; r0: number; r1: number }[] {
    return doc.sample_angles.map((angle) => ({ angle, r0: OUTER_RING + 0.01, r1: 0.99 }));
}

export function selectorMarks(doc: CclusterExport): SelectorMark[] {
    const logs = doc.inv_h2.map(Math.log);
    const lo = logs[0];
    const hi = logs[logs.length - 1];
    const span = hi - lo || 1;
    return Object.entries(doc.selector_marks).map(([id, invH2]) => {
        const t = (Math.log(invH2) - lo) / span;
        const radius =
            t >= 0 && t <= 1 ? INNER_HOLE + t * (OUTER_RING - INNER_HOLE) : Number.NaN;
        return { id, radius };
    });
}

export interface HoverInfo {
    invH2: number;
    angle: number;
    density: number;
}

export function hoverInfo(doc: CclusterExport, ring: number, angleIndex: number): HoverInfo {
    return {
        invH2: doc.inv_h2[ring],
        angle: doc.angles[angleIndex],
        density: doc.density[ring][angleIndex],
    };
}
