"""Sparse parity-check matrices over Z_q with unit coefficients.

Covers the unstructured regular ensemble (uniform socket matching,
coefficients i.i.d. uniform over the units) and progressive edge growth
construction, plus syndrome computation, girth, and a diffable text
format: header "q m n", then one line per check "deg idx_1 coef_1 ...".
"""

from dataclasses import dataclass

import numpy as np

from .ring import RingContext


@dataclass(frozen=True)
class ParityCheckCode:
    """m x n sparse matrix over Z_q; rows hold (column, unit coefficient) pairs."""

    ctx: RingContext
    m: int
    n: int
    rows: tuple  # tuple of tuples of (col, coef)

    def __post_init__(self):
        units = set(self.ctx.units)
        for i, row in enumerate(self.rows):
            cols = [c for c, _ in row]
            if len(set(cols)) != len(cols):
                raise ValueError(f"duplicate column in row {i}")
            for c, h in row:
                if not 0 <= c < self.n:
                    raise ValueError(f"column {c} out of range in row {i}")
                if h not in units:
                    raise ValueError(f"coefficient {h} in row {i} is not a unit of Z_{self.ctx.q}")

    @property
    def design_rate(self) -> float:
        return 1.0 - self.m / self.n

    def column_degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=int)
        for row in self.rows:
            for c, _ in row:
                deg[c] += 1
        return deg

    def row_degrees(self) -> np.ndarray:
        return np.array([len(row) for row in self.rows], dtype=int)

    def edges(self):
        """Flat edge list [(check, col, coef), ...] in row-major order."""
        return [(i, c, h) for i, row in enumerate(self.rows) for c, h in row]

    def syndrome(self, x) -> np.ndarray:
        """s_i = sum_j h_ij x_j mod q; x is a codeword iff s = 0."""
        x = np.asarray(x)
        if x.shape != (self.n,):
            raise ValueError(f"vector length {x.shape} does not match n={self.n}")
        s = np.empty(self.m, dtype=np.int64)
        for i, row in enumerate(self.rows):
            acc = 0
            for c, h in row:
                acc += h * int(x[c])
            s[i] = acc % self.ctx.q
        return s

    def girth(self) -> int:
        """Length of the shortest cycle in the Tanner graph (0 if acyclic)."""
        adj = [[] for _ in range(self.n + self.m)]
        for i, row in enumerate(self.rows):
            for c, _ in row:
                adj[c].append(self.n + i)
                adj[self.n + i].append(c)
        best = 0
        nv = self.n + self.m
        for s in range(nv):
            depth = np.full(nv, -1)
            parent = np.full(nv, -1)
            depth[s] = 0
            queue = [s]
            while queue:
                nxt = []
                for u in queue:
                    for w in adj[u]:
                        if depth[w] < 0:
                            depth[w] = depth[u] + 1
                            parent[w] = u
                            nxt.append(w)
                        elif w != parent[u]:
                            cyc = depth[u] + depth[w] + 1
                            if best == 0 or cyc < best:
                                best = cyc
                queue = nxt
        return int(best)

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(f"{self.ctx.q} {self.m} {self.n}\n")
            for row in self.rows:
                parts = [str(len(row))]
                for c, h in row:
                    parts.append(str(c))
                    parts.append(str(h))
                fh.write(" ".join(parts) + "\n")

    @classmethod
    def load(cls, path) -> "ParityCheckCode":
        with open(path) as fh:
            q, m, n = map(int, fh.readline().split())
            rows = []
            for _ in range(m):
                vals = list(map(int, fh.readline().split()))
                deg = vals[0]
                if len(vals) != 1 + 2 * deg:
                    raise ValueError(f"malformed row in {path}")
                rows.append(tuple((vals[1 + 2 * k], vals[2 + 2 * k]) for k in range(deg)))
        return cls(ctx=RingContext(q), m=m, n=n, rows=tuple(rows))


def _check_regular(n: int, v: int, c: int):
    if v < 1 or c < 1:
        raise ValueError("degrees must be positive")
    if (n * v) % c != 0:
        raise ValueError(f"n*v = {n * v} not divisible by c = {c}")


def sample_regular_ensemble(ctx: RingContext, n: int, v: int, c: int,
                            rng: np.random.Generator) -> ParityCheckCode:
    """Uniform socket matching between n*v VN sockets and m*c CN sockets.

    Colliding socket pairs (duplicate edges) are re-drawn by swapping with a
    uniformly chosen socket until the graph is simple. Coefficients are
    i.i.d. uniform over the units.
    """
    _check_regular(n, v, c)
    m = n * v // c
    vn_of_edge = np.repeat(np.arange(n), v)
    cn_of_edge = rng.permutation(np.repeat(np.arange(m), c))
    ne = n * v
    for _ in range(100 * ne):
        pairs = cn_of_edge.astype(np.int64) * n + vn_of_edge
        order = np.argsort(pairs, kind="stable")
        sorted_pairs = pairs[order]
        dup_mask = np.zeros(ne, dtype=bool)
        dup_mask[order[1:]] = sorted_pairs[1:] == sorted_pairs[:-1]
        dups = np.flatnonzero(dup_mask)
        if dups.size == 0:
            break
        for i in dups:
            j = int(rng.integers(0, ne))
            cn_of_edge[i], cn_of_edge[j] = cn_of_edge[j], cn_of_edge[i]
    else:
        raise RuntimeError("socket matching failed to resolve duplicate edges")
    units = ctx.units
    coefs = rng.integers(0, len(units), size=ne)
    rows = [[] for _ in range(m)]
    for e in range(ne):
        rows[cn_of_edge[e]].append((int(vn_of_edge[e]), units[coefs[e]]))
    return ParityCheckCode(ctx=ctx, m=m, n=n,
                           rows=tuple(tuple(sorted(r)) for r in rows))


def peg_construct(ctx: RingContext, n: int, v: int, c: int,
                  rng: np.random.Generator) -> ParityCheckCode:
    """Progressive edge growth for a regular (v, c) graph.

    Each new edge of a VN attaches to a check at maximal BFS depth from the
    VN's current subtree (unreached checks first), ties broken toward the
    lowest current check degree and then uniformly with the seeded
    generator. Coefficients are drawn after the graph is built.
    """
    _check_regular(n, v, c)
    m = n * v // c
    vn_adj = [[] for _ in range(n)]  # VN -> list of CNs
    cn_adj = [[] for _ in range(m)]  # CN -> list of VNs
    cn_deg = np.zeros(m, dtype=int)

    for vn in range(n):
        for k in range(v):
            open_cns = cn_deg < c  # strict (v, c) regularity
            if k == 0:
                candidates = np.flatnonzero(open_cns)
            else:
                depth = _bfs_cn_depths(vn, vn_adj, cn_adj, m)
                connected = set(vn_adj[vn])
                unreached = np.flatnonzero((depth < 0) & open_cns)
                if unreached.size:
                    candidates = unreached
                else:
                    candidates = None
                    for d in np.unique(depth[depth >= 0])[::-1]:
                        cand = [cc for cc in np.flatnonzero((depth == d) & open_cns)
                                if cc not in connected]
                        if cand:
                            candidates = np.array(cand)
                            break
                    if candidates is None:
                        raise RuntimeError("PEG: no open check without duplicating an edge")
            dmin = cn_deg[candidates].min()
            candidates = candidates[cn_deg[candidates] == dmin]
            cn = int(candidates[rng.integers(0, len(candidates))])
            vn_adj[vn].append(cn)
            cn_adj[cn].append(vn)
            cn_deg[cn] += 1

    units = ctx.units
    rows = []
    for i in range(m):
        row = tuple(sorted((vn, units[int(rng.integers(0, len(units)))])
                           for vn in cn_adj[i]))
        rows.append(row)
    return ParityCheckCode(ctx=ctx, m=m, n=n, rows=tuple(rows))


def _bfs_cn_depths(root_vn: int, vn_adj, cn_adj, m: int) -> np.ndarray:
    """Depth of every CN from root_vn in the current graph; -1 if unreached."""
    depth = np.full(m, -1)
    seen_vn = {root_vn}
    frontier = [root_vn]
    d = 1
    while frontier:
        nxt_vns = []
        for vn in frontier:
            for cn in vn_adj[vn]:
                if depth[cn] < 0:
                    depth[cn] = d
                    for w in cn_adj[cn]:
                        if w not in seen_vn:
                            seen_vn.add(w)
                            nxt_vns.append(w)
        frontier = nxt_vns
        d += 2
    return depth


def syndrome(code: ParityCheckCode, x) -> np.ndarray:
    """Module-level alias for ParityCheckCode.syndrome."""
    return code.syndrome(x)
