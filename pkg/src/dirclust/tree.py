"""Level-set filtration of the density-weighted sample graph.

The graph has one vertex per observation with its density value, and
edge weights equal to the minimum density along the geodesic between
the two endpoints (endpoints included).  Thresholding at level k keeps
vertices with f_n(X_i) >= k and edges with w >= k; the connected
components swept over all k form the cluster (merge) tree.

The tree is built exactly in one pass: vertices sorted by density
descending, edges by weight descending, merged with union-find.  This
is equivalent to running the per-level loop at every k simultaneously,
so component counts are not quantized to a level grid.  The thresholded
subgraph-DFS route is kept as ``graph_components`` and doubles as the
test oracle for the sweep.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .density import DensityModel, KernelDensity, log_vmf_const
from .errors import EmptySampleError
from .geometry import arc_interior_points

_TINY = np.finfo(float).tiny
ANTIPODAL_DOT = -1.0 + 1e-9


@dataclass(frozen=True)
class GraphConfig:
    step: float = 0.02
    knn: int | None = None
    min_interior: int = 5


@dataclass
class WeightedGraph:
    n: int
    vertex_density: np.ndarray
    edges_i: np.ndarray
    edges_j: np.ndarray
    weights: np.ndarray
    config: GraphConfig
    antipodal_pairs: int = 0


def _knn_pairs(sample: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Mutual k-nearest-neighbour pairs by geodesic (equivalently cosine) distance."""
    n = sample.shape[0]
    k = min(k, n - 1)
    dots = sample @ sample.T
    np.fill_diagonal(dots, -np.inf)
    # largest dot product = smallest geodesic distance
    nbrs = np.argpartition(-dots, kth=k - 1, axis=1)[:, :k]
    is_nbr = np.zeros((n, n), dtype=bool)
    rows = np.repeat(np.arange(n), k)
    is_nbr[rows, nbrs.ravel()] = True
    mutual = is_nbr & is_nbr.T
    ei, ej = np.where(np.triu(mutual, 1))
    return ei, ej


def _complete_pairs(n: int) -> tuple[np.ndarray, np.ndarray]:
    ei, ej = np.triu_indices(n, 1)
    return ei, ej


def build_graph(model: DensityModel, sample: np.ndarray, config: GraphConfig | None = None) -> WeightedGraph:
    """Algorithm graph: vertices with densities, arc-minimum edge weights.

    Complete graph by default, mutual-kNN subgraph when config.knn is
    set.  Antipodal pairs get weight 0 and are counted in
    ``antipodal_pairs`` (connectivity through intermediate points is
    restored by chains of edges).
    """
    config = config or GraphConfig()
    sample = np.atleast_2d(np.asarray(sample, dtype=float))
    n = sample.shape[0]
    if n == 0:
        raise EmptySampleError("cannot build a graph from an empty sample")
    if config.step <= 0:
        raise ValueError("config.step must be positive")

    f_log = np.atleast_1d(model.log_density(sample))
    if config.knn is not None and n > 2:
        ei, ej = _knn_pairs(sample, config.knn)
    else:
        ei, ej = _complete_pairs(n)

    dots = np.einsum("ij,ij->i", sample[ei], sample[ej])
    antipodal = dots <= ANTIPODAL_DOT
    n_antipodal = int(np.count_nonzero(antipodal))

    w_log = np.full(ei.shape[0], -np.inf)
    live = ~antipodal
    if live.any():
        li, lj = ei[live], ej[live]
        if isinstance(model, KernelDensity):
            interior = model._log_const + _kernels.arc_min_log_mean_exp(
                sample, model.points, li, lj, model.kappa, config.step, config.min_interior
            )
        else:
            interior = _generic_arc_min(model, sample, li, lj, config)
        w_log[live] = np.minimum(np.minimum(f_log[li], f_log[lj]), interior)

    weights = np.exp(w_log)
    weights[live & (weights == 0.0)] = _TINY
    vertex_density = np.exp(f_log)
    vertex_density[vertex_density == 0.0] = _TINY
    return WeightedGraph(
        n=n,
        vertex_density=vertex_density,
        edges_i=ei,
        edges_j=ej,
        weights=weights,
        config=config,
        antipodal_pairs=n_antipodal,
    )


def _generic_arc_min(model, sample, ei, ej, config, batch=512) -> np.ndarray:
    """Arc-minimum interior density for arbitrary density models."""
    out = np.full(ei.shape[0], np.inf)
    for start in range(0, ei.shape[0], batch):
        blk = slice(start, min(start + batch, ei.shape[0]))
        pts, offsets = [], [0]
        for a, b in zip(ei[blk], ej[blk]):
            p = arc_interior_points(sample[a], sample[b], config.step, config.min_interior)
            pts.append(p)
            offsets.append(offsets[-1] + len(p))
        if offsets[-1] == 0:
            continue
        logf = model.log_density(np.vstack([p for p in pts if len(p)]))
        for idx, (lo, hi) in enumerate(zip(offsets[:-1], offsets[1:])):
            if hi > lo:
                out[start + idx] = logf[lo:hi].min()
    return out


# ---------------------------------------------------------------------------
# merge tree


@dataclass
class TreeNode:
    id: int
    birth: float
    death: float = 0.0
    parent: int | None = None
    children: list = field(default_factory=list)
    representative: int = -1
    intro_vertices: list = field(default_factory=list)


class ClusterTree:
    """Merge tree of the superlevel-set filtration of a WeightedGraph."""

    def __init__(self, graph: WeightedGraph):
        self.graph = graph
        self.vertex_density = graph.vertex_density
        self.n = graph.n
        self.nodes: dict[int, TreeNode] = {}
        self.vertex_node = np.full(graph.n, -1, dtype=np.intp)
        self.roots: list[int] = []
        self._build()
        self._births = np.array([self.nodes[i].birth for i in sorted(self.nodes)])
        self._deaths = np.array([self.nodes[i].death for i in sorted(self.nodes)])
        self._ids = np.array(sorted(self.nodes))

    # -- construction -------------------------------------------------

    def _build(self) -> None:
        g = self.graph
        f = g.vertex_density
        # events at equal level: vertices before edges (S(k) before E(k))
        vertex_order = np.lexsort((np.arange(g.n), -f))
        keep = g.weights > 0.0  # zero-weight (antipodal) edges only matter at k = 0
        edge_order = np.where(keep)[0][np.argsort(-g.weights[keep], kind="stable")]

        parent_uf = np.arange(g.n, dtype=np.intp)

        def find(i):
            root = i
            while parent_uf[root] != root:
                root = parent_uf[root]
            while parent_uf[i] != root:
                parent_uf[i], i = root, parent_uf[i]
            return root

        comp_node = {}
        self._next_id = 0
        vi, eidx = 0, 0
        nv, ne = g.n, len(edge_order)
        while vi < nv or eidx < ne:
            v = vertex_order[vi] if vi < nv else None
            e = edge_order[eidx] if eidx < ne else None
            if e is None or (v is not None and f[v] >= g.weights[e]):
                node = self._new_node(birth=float(f[v]), representative=int(v),
                                      intro=[int(v)])
                comp_node[int(v)] = node.id
                self.vertex_node[v] = node.id
                vi += 1
            else:
                w = float(g.weights[e])
                ra, rb = find(g.edges_i[e]), find(g.edges_j[e])
                if ra == rb:
                    eidx += 1
                    continue
                na, nb = self.nodes[comp_node[ra]], self.nodes[comp_node[rb]]
                merged = self._merge(na, nb, w)
                parent_uf[rb] = ra
                comp_node[ra] = merged
                comp_node.pop(rb, None)
                eidx += 1
        for node in self.nodes.values():
            if node.parent is None:
                node.death = 0.0
                self.roots.append(node.id)

    def _new_node(self, birth: float, representative: int = -1, intro=None) -> TreeNode:
        node = TreeNode(id=self._next_id, birth=birth, representative=representative,
                        intro_vertices=intro or [])
        self.nodes[node.id] = node
        self._next_id += 1
        return node

    def _merge(self, na: TreeNode, nb: TreeNode, w: float) -> int:
        """Merge two component nodes at level w, absorbing zero-persistence
        singletons so leaves correspond to genuine filtration maxima."""
        def absorb(victim: TreeNode, into: TreeNode) -> int:
            into.intro_vertices.extend(victim.intro_vertices)
            for v in victim.intro_vertices:
                self.vertex_node[v] = into.id
            if self.vertex_density[victim.representative] > self.vertex_density[into.representative]:
                into.representative = victim.representative
            del self.nodes[victim.id]
            return into.id

        a_flat = na.birth == w and not na.children
        b_flat = nb.birth == w and not nb.children
        if a_flat and not b_flat:
            return absorb(na, nb)
        if b_flat:
            return absorb(nb, na)
        if na.birth == w:  # merge node re-merging at its own birth level: stay n-ary
            nb.death = w
            nb.parent = na.id
            na.children.append(nb.id)
            self._inherit_rep(na, nb)
            return na.id
        if nb.birth == w:
            na.death = w
            na.parent = nb.id
            nb.children.append(na.id)
            self._inherit_rep(nb, na)
            return nb.id
        parent = self._new_node(birth=w)
        for child in (na, nb):
            child.death = w
            child.parent = parent.id
            parent.children.append(child.id)
        parent.representative = na.representative
        self._inherit_rep(parent, nb)
        return parent.id

    def _inherit_rep(self, target: TreeNode, source: TreeNode) -> None:
        fs = self.vertex_density
        if (fs[source.representative], -source.representative) > (
            fs[target.representative], -target.representative
        ):
            target.representative = source.representative

    # -- queries ------------------------------------------------------

    def count_components(self, k: float) -> int:
        """Number of connected components of the level-k subgraph."""
        if k <= 0.0:
            return len(self.components_at_level(0.0))
        return int(np.count_nonzero((self._deaths < k) & (k <= self._births)))

    def components_at_level(self, k: float) -> list:
        """Partition of {i : f_n(X_i) >= k} matching the subgraph components."""
        if k <= 0.0:
            return graph_components(self.graph, 0.0)
        alive = np.where(self.vertex_density >= k)[0]
        cache: dict[int, int] = {}

        def component_of(node_id: int) -> int:
            seen = []
            while node_id not in cache:
                node = self.nodes[node_id]
                if node.death < k:
                    cache[node_id] = node_id
                    break
                seen.append(node_id)
                node_id = node.parent
            comp = cache[node_id]
            for s in seen:
                cache[s] = comp
            return comp

        groups: dict[int, list] = {}
        for v in alive:
            groups.setdefault(component_of(int(self.vertex_node[v])), []).append(int(v))
        comps = [np.array(sorted(g)) for g in groups.values()]
        comps.sort(key=lambda c: int(c[0]))
        return comps

    def members_at_birth(self, node_id: int) -> np.ndarray:
        """Vertices present in the component the instant it appears."""
        node = self.nodes[node_id]
        if not node.children:
            out = [v for v in node.intro_vertices
                   if self.vertex_density[v] >= node.birth]
            return np.array(sorted(out), dtype=int)
        out: list[int] = []
        stack = list(node.children)
        while stack:
            child = self.nodes[stack.pop()]
            out.extend(child.intro_vertices)
            stack.extend(child.children)
        return np.array(sorted(out), dtype=int)

    @property
    def leaf_count(self) -> int:
        return sum(1 for node in self.nodes.values() if not node.children)

    def mass_at_level(self, k: float) -> float:
        """Empirical probability content of the level-k superlevel set."""
        return float(np.mean(self.vertex_density >= k))

    def to_json(self, levels=None) -> dict:
        """JSON form of the tree; pass HDR (tau, threshold) levels to embed
        the k <-> (1-tau) mapping with per-level component counts."""
        nodes = []
        for node_id in sorted(self.nodes):
            node = self.nodes[node_id]
            nodes.append(
                {
                    "id": node.id,
                    "parent": node.parent,
                    "children": sorted(node.children),
                    "birth_level": node.birth,
                    "death_level": node.death,
                    "birth_mass": self.mass_at_level(node.birth),
                    "death_mass": self.mass_at_level(node.death) if node.death > 0 else 1.0,
                    "representative": node.representative,
                    "members_at_birth": self.members_at_birth(node.id).tolist(),
                }
            )
        payload = {
            "n": self.n,
            "leaf_count": self.leaf_count,
            "roots": sorted(self.roots),
            "nodes": nodes,
        }
        if levels is not None:
            payload["levels"] = [
                {
                    "tau": tau,
                    "threshold": thr,
                    "mass": self.mass_at_level(thr) if thr > 0 else 1.0,
                    "count": self.count_components(thr),
                }
                for tau, thr in levels
            ]
        return payload


def build_merge_tree(graph: WeightedGraph) -> ClusterTree:
    return ClusterTree(graph)


def graph_components(graph: WeightedGraph, k: float) -> list:
    """Connected components of the thresholded subgraph by depth-first search.

    Reference implementation of the per-level step; retained as the
    oracle the merge tree is checked against.
    """
    alive = graph.vertex_density >= k
    adj: dict[int, list] = {int(v): [] for v in np.where(alive)[0]}
    mask = graph.weights >= k if k > 0 else np.ones_like(graph.weights, dtype=bool)
    for a, b in zip(graph.edges_i[mask], graph.edges_j[mask]):
        a, b = int(a), int(b)
        if alive[a] and alive[b]:
            adj[a].append(b)
            adj[b].append(a)
    seen = set()
    comps = []
    for start in adj:
        if start in seen:
            continue
        stack, comp = [start], []
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        comps.append(np.array(sorted(comp)))
    comps.sort(key=lambda c: int(c[0]))
    return comps


def components_at_level(tree_or_graph, k: float) -> list:
    """Partition of the vertices alive at level k (tree or graph input)."""
    if isinstance(tree_or_graph, ClusterTree):
        return tree_or_graph.components_at_level(k)
    return graph_components(tree_or_graph, k)


# ---------------------------------------------------------------------------
# mode function and cluster cores


@dataclass
class ModeFunction:
    """Right-continuous step function: component count vs probability content.

    breakpoints are (1-tau, count) pairs sorted by 1-tau; the value on
    [x_i, x_{i+1}) is count_i, and the count is 0 at both endpoints.
    """

    breakpoints: list

    def value(self, one_minus_tau: float) -> int:
        if not 0.0 <= one_minus_tau <= 1.0:
            raise ValueError("argument must lie in [0, 1]")
        if one_minus_tau >= 1.0:
            return self.breakpoints[-1][1]
        count = 0
        for x, m in self.breakpoints:
            if x <= one_minus_tau:
                count = m
            else:
                break
        return count

    @property
    def max_count(self) -> int:
        return max(m for _, m in self.breakpoints)


def mode_function(tree: ClusterTree, levels: list) -> ModeFunction:
    """Empirical mode function over HDR levels, forced to 0 at both ends."""
    points = [(0.0, 0)]
    for tau, threshold in sorted(levels, key=lambda lt: -lt[0]):
        x = 1.0 - tau
        points.append((x, tree.count_components(threshold)))
    points.append((1.0, 0))
    return ModeFunction(points)


@dataclass
class CoreAssignment:
    """Cluster cores: labels 1..n_c at the chosen level, 0 = outskirts."""

    n_c: int
    core_level: float
    tau: float
    labels: np.ndarray


def cluster_cores(tree: ClusterTree, levels: list) -> CoreAssignment:
    """Smallest level achieving the maximum component count over the grid.

    Components at that level become the cores; their members are
    labelled 1..n_c in order of smallest member index.
    """
    if not levels:
        raise ValueError("need at least one (tau, threshold) level")
    counted = [(tau, thr, tree.count_components(thr)) for tau, thr in levels]
    n_c = max(c for _, _, c in counted)
    best_tau, best_thr = min(
        ((tau, thr) for tau, thr, c in counted if c == n_c), key=lambda tt: tt[1]
    )
    comps = tree.components_at_level(best_thr)
    labels = np.zeros(tree.n, dtype=int)
    for group, comp in enumerate(comps, start=1):
        labels[comp] = group
    return CoreAssignment(n_c=n_c, core_level=best_thr, tau=best_tau, labels=labels)
