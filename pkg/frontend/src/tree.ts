/** Cluster-tree view: branch layout on a probability-content axis and the
 * component count at the tau cursor.
 *
 * Counting walks the node (death, birth] density intervals against the
 * threshold of the probed tau taken from the embedded level mapping, so
 * the displayed count always agrees with the backend's step function.
 */

import { TreeJson, TreeLevel } from "./types";

export interface BranchSegment {
    nodeId: number;
    x: number;        // [0, 1]
    y0: number;       // probability-content (1 - tau) axis, birth end
    y1: number;       // death end (toward 1)
    parent: number | null;
}

export function nearestLevel(tree: TreeJson, tau: number): TreeLevel {
    if (!tree.levels || tree.levels.length === 0) {
        throw new Error("tree document has no level mapping");
    }
    let best = tree.levels[0];
    for (const level of tree.levels) {
        if (Math.abs(level.tau - tau) < Math.abs(best.tau - tau)) best = level;
    }
    return best;
}

/** Nodes alive at density level k, i.e. death < k <= birth. */
export function countComponentsAtLevel(tree: TreeJson, k: number): number {
    if (k <= 0) return tree.roots.length;
    return tree.nodes.filter((n) => n.death_level < k && k <= n.birth_level).length;
}

export function componentCountAtTau(tree: TreeJson, tau: number): number {
    return countComponentsAtLevel(tree, nearestLevel(tree, tau).threshold);
}

/** Vertical position of the tau cursor on the 1-tau (content) axis. */
export function cursorMass(tree: TreeJson, tau: number): number {
    return nearestLevel(tree, tau).mass;
}

export function layoutBranches(tree: TreeJson): BranchSegment[] {
    const x = new Map<number, number>();

    const leaves = tree.nodes
        .filter((n) => n.children.length === 0)
        .sort((a, b) => a.representative - b.representative);
    leaves.forEach((leaf, i) => {
        x.set(leaf.id, leaves.length === 1 ? 0.5 : (i + 0.5) / leaves.length);
    });

    // internal nodes at the mean of their children's positions; children
    // always appear before parents when sorted by descending birth level
    const internal = tree.nodes
        .filter((n) => n.children.length > 0)
        .sort((a, b) => b.birth_level - a.birth_level);
    for (const node of internal) {
        const xs = node.children
            .map((c) => x.get(c))
            .filter((v): v is number => v !== undefined);
        x.set(node.id, xs.length ? xs.reduce((s, v) => s + v, 0) / xs.length : 0.5);
    }

    return tree.nodes.map((n) => ({
        nodeId: n.id,
        x: x.get(n.id) ?? 0.5,
        y0: n.birth_mass,
        y1: n.death_mass,
        parent: n.parent,
    }));
}

/** Core label per observation from the cores endpoint, as colors indices. */
export function coreColorIndex(labels: number[]): number[] {
    return labels.map((v) => (v > 0 ? v : 0));
}
