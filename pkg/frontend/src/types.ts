/** Wire formats served by the backend and written by the CLI exporters. */

export interface CclusterExport {
    kind: "ccluster";
    n: number;
    angles: number[];
    inv_h2: number[];
    density: number[][];           // [ring][angle]
    taus: number[];
    thresholds: number[][];        // [ring][tau]
    sample_angles: number[];
    selector_marks: Record<string, number>;  // selector id -> 1/h^2
}

export interface SclusterFrame {
    h: number;
    inv_h2: number;
    north: (number | null)[][];
    south: (number | null)[][];
    thresholds: number[];
    selectors: string[];           // selector ids bookmarking this frame
}

export interface SclusterExport {
    kind: "scluster";
    n: number;
    disk_resolution: number;
    taus: number[];
    frames: SclusterFrame[];
    sample_points: { north: number[][]; south: number[][] };
    selector_marks: Record<string, number>;
}

export interface TreeNodeJson {
    id: number;
    parent: number | null;
    children: number[];
    birth_level: number;
    death_level: number;
    birth_mass: number;
    death_mass: number;
    representative: number;
    members_at_birth: number[];
}

export interface TreeLevel {
    tau: number;
    threshold: number;
    mass: number;
    count: number;
}

export interface TreeJson {
    n: number;
    leaf_count: number;
    roots: number[];
    nodes: TreeNodeJson[];
    levels?: TreeLevel[];
    h?: number;
}

export interface MetaResponse {
    n: number;
    d: number;
    selectors: Record<string, number>;   // selector id -> bandwidth h
}

export interface HdrResponse {
    h: number;
    tau: number;
    threshold: number;
    mask: boolean[];
}

export interface CoresResponse {
    h: number;
    n_c: number;
    core_level: number;
    tau: number;
    labels: number[];
}

export type ExportDocument = CclusterExport | SclusterExport | TreeJson;
