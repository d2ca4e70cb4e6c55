/** Canvas drawing for the three views.  All numbers come from the layout
 * modules; nothing here computes densities or counts. */

import { layoutCells, sampleTicks, selectorMarks } from "./ccluster";
import { diskCells } from "./scluster";
import { layoutBranches } from "./tree";
import { CclusterExport, SclusterExport, SclusterFrame, TreeJson } from "./types";

export function drawCcluster(
    canvas: HTMLCanvasElement, doc: CclusterExport, tau: number,
): void {
    const ctx = canvas.getContext("2d");
    if (!ctx) return;
    const size = Math.min(canvas.width, canvas.height);
    const cx = canvas.width / 2;
    const cy = canvas.height / 2;
    const scale = size / 2;
    ctx.clearRect(0, 0, canvas.width, canvas.height);

    for (const cell of layoutCells(doc, tau)) {
        ctx.beginPath();
        ctx.fillStyle = cell.color;
        ctx.arc(cx, cy, cell.r1 * scale, cell.a0, cell.a1);
        ctx.arc(cx, cy, cell.r0 * scale, cell.a1, cell.a0, true);
        ctx.closePath();
        ctx.fill();
    }
    ctx.strokeStyle = "rgb(60,60,60)";
    for (const tick of sampleTicks(doc)) {
        ctx.beginPath();
        ctx.moveTo(cx + Math.cos(tick.angle) * tick.r0 * scale,
                   cy + Math.sin(tick.angle) * tick.r0 * scale);
        ctx.lineTo(cx + Math.cos(tick.angle) * tick.r1 * scale,
                   cy + Math.sin(tick.angle) * tick.r1 * scale);
        ctx.stroke();
    }
    ctx.strokeStyle = "rgb(200,60,60)";
    ctx.fillStyle = "rgb(200,60,60)";
    ctx.font = "11px sans-serif";
    for (const mark of selectorMarks(doc)) {
        if (Number.isNaN(mark.radius)) continue;
        ctx.beginPath();
        ctx.arc(cx, cy, mark.radius * scale, 0, 2 * Math.PI);
        ctx.stroke();
        ctx.fillText(mark.id, cx + mark.radius * scale + 3, cy - 3);
    }
}

export function drawScluster(
    canvas: HTMLCanvasElement, doc: SclusterExport, frame: SclusterFrame, tau: number,
): void {
    const ctx = canvas.getContext("2d");
    if (!ctx) return;
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    const res = doc.disk_resolution;
    const diskSize = Math.min(canvas.width / 2, canvas.height) - 10;
    const cellSize = diskSize / res;
    const origins: [string, number][] = [["north", 5], ["south", canvas.width / 2 + 5]];
    for (const [which, x0] of origins) {
        for (const cell of diskCells(frame, which as "north" | "south", tau, doc.taus)) {
            ctx.fillStyle = cell.color;
            ctx.fillRect(x0 + cell.col * cellSize, 5 + cell.row * cellSize,
                         cellSize + 0.5, cellSize + 0.5);
        }
        const pts = which === "north" ? doc.sample_points.north : doc.sample_points.south;
        ctx.fillStyle = "rgb(30,30,30)";
        const r = Math.sqrt(2);
        for (const [px, py] of pts) {
            const sx = x0 + ((px + r) / (2 * r)) * diskSize;
            const sy = 5 + ((py + r) / (2 * r)) * diskSize;
            ctx.fillRect(sx - 1, sy - 1, 2, 2);
        }
    }
}

export function drawTree(
    canvas: HTMLCanvasElement, tree: TreeJson, tau: number, cursorY: number,
): void {
    const ctx = canvas.getContext("2d");
    if (!ctx) return;
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    const pad = 30;
    const w = canvas.width - 2 * pad;
    const h = canvas.height - 2 * pad;
    const toX = (x: number) => pad + x * w;
    const toY = (mass: number) => pad + mass * h;   // 1 - tau increases downward

    const segments = layoutBranches(tree);
    const xById = new Map(segments.map((s) => [s.nodeId, s.x]));
    ctx.strokeStyle = "rgb(40,80,140)";
    ctx.lineWidth = 2;
    for (const seg of segments) {
        ctx.beginPath();
        ctx.moveTo(toX(seg.x), toY(seg.y0));
        ctx.lineTo(toX(seg.x), toY(seg.y1));
        ctx.stroke();
        if (seg.parent !== null && xById.has(seg.parent)) {
            ctx.beginPath();
            ctx.moveTo(toX(seg.x), toY(seg.y1));
            ctx.lineTo(toX(xById.get(seg.parent) as number), toY(seg.y1));
            ctx.stroke();
        }
    }
    ctx.strokeStyle = "rgb(200,60,60)";
    ctx.setLineDash([4, 3]);
    ctx.beginPath();
    ctx.moveTo(pad, toY(cursorY));
    ctx.lineTo(pad + w, toY(cursorY));
    ctx.stroke();
    ctx.setLineDash([]);
    ctx.fillStyle = "rgb(200,60,60)";
    ctx.font = "12px sans-serif";
    ctx.fillText(`tau = ${tau.toFixed(2)}`, pad + 4, toY(cursorY) - 4);
}

const CORE_PALETTE = [
    "rgb(180,180,180)",  // outskirts
    "rgb(31,119,180)", "rgb(255,127,14)", "rgb(44,160,44)", "rgb(214,39,40)",
    "rgb(148,103,189)", "rgb(140,86,75)", "rgb(227,119,194)", "rgb(127,127,127)",
];

/** One colored tick per observation along the bottom edge, showing core
 * membership at the current (h, tau-derived) level. */
export function drawCoresStrip(canvas: HTMLCanvasElement, labels: number[]): void {
    const ctx = canvas.getContext("2d");
    if (!ctx || labels.length === 0) return;
    const stripH = 8;
    const y = canvas.height - stripH - 2;
    const w = canvas.width / labels.length;
    labels.forEach((label, i) => {
        ctx.fillStyle = CORE_PALETTE[Math.min(label, CORE_PALETTE.length - 1)];
        ctx.fillRect(i * w, y, Math.max(w, 1), stripH);
    });
}
