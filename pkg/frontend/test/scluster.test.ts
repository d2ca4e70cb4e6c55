import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { parseExportDocument } from "../src/api";
import { GRAY } from "../src/colors";
import {
    bookmarkedFrames,
    diskCells,
    frameAt,
    frameIndexForSelector,
    frameLabel,
} from "../src/scluster";
import { initialState, pause, play, scrub, tick, withFrameCount } from "../src/state";
import { SclusterExport } from "../src/types";

const doc = parseExportDocument(
    readFileSync(new URL("../fixtures/scluster_sphere.json", import.meta.url), "utf8"),
) as SclusterExport;

function stateWithFrames() {
    return withFrameCount(initialState(null), doc.frames.length);
}

describe("scluster playback", () => {
    it("play then tick advances the frame", () => {
        let s = play(stateWithFrames());
        expect(s.playback.frameIndex).toBe(0);
        s = tick(s);
        expect(s.playback.frameIndex).toBe(1);
        s = tick(s);
        expect(s.playback.frameIndex).toBe(2);
    });

    it("pause freezes the frame index", () => {
        let s = play(stateWithFrames());
        s = tick(s);
        s = pause(s);
        const frozen = s.playback.frameIndex;
        s = tick(tick(s));
        expect(s.playback.frameIndex).toBe(frozen);
    });

    it("playback wraps around", () => {
        let s = play(stateWithFrames());
        for (let i = 0; i < doc.frames.length; i++) s = tick(s);
        expect(s.playback.frameIndex).toBe(0);
    });

    it("scrub selects a frame directly and clamps", () => {
        let s = stateWithFrames();
        s = scrub(s, 3);
        expect(s.playback.frameIndex).toBe(3);
        s = scrub(s, 999);
        expect(s.playback.frameIndex).toBe(doc.frames.length - 1);
    });
});

describe("scluster frames", () => {
    it("frames are ordered by bandwidth", () => {
        const hs = doc.frames.map((f) => f.h);
        expect([...hs].sort((a, b) => a - b)).toEqual(hs);
    });

    it("selector bandwidth frames are bookmarked", () => {
        const bookmarks = bookmarkedFrames(doc);
        const tagged = bookmarks.flatMap((b) => b.selectors);
        expect(new Set(tagged)).toEqual(new Set(Object.keys(doc.selector_marks)));
    });

    it("scrubbing to a bookmarked frame shows the selector id in the header", () => {
        const idx = frameIndexForSelector(doc, "rot-hyper");
        expect(idx).toBeGreaterThanOrEqual(0);
        expect(frameLabel(doc.frames[idx])).toContain("rot-hyper");
    });

    it("hot-spot fixture peaks in the north disk only", () => {
        const frame = frameAt(doc, 1);
        const maxOf = (disk: (number | null)[][]) =>
            Math.max(...disk.flat().filter((v): v is number => v !== null));
        expect(maxOf(frame.north)).toBeGreaterThan(100 * maxOf(frame.south));
    });

    it("disk cells skip nulls and gray below-threshold values", () => {
        const frame = frameAt(doc, 2);
        const cells = diskCells(frame, "south", 0.95, doc.taus);
        const total = doc.disk_resolution * doc.disk_resolution;
        expect(cells.length).toBeLessThan(total);  // corners are null
        // the south hemisphere is essentially empty: high tau grays it all
        expect(cells.every((c) => c.color === GRAY)).toBe(true);
    });
});
