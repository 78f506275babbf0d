"""Reference crystal for sl3 with the swap involution, indexed by skew-symmetric rank strata.

Vertex ``IC(n, r)`` sits in weight n and has rank stratum 2r (0 <= 2r <= n).
The edge table for n <= 5 is written out explicitly and is the ground truth;
larger graphs are extrapolated by the evident rule and marked as such.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .report import Report

__all__ = [
    "ICVertex",
    "ReferenceGraph",
    "TABULATED_EDGES",
    "TABULATED_DEPTH",
    "rule_edges",
    "reference_graph",
    "check_isomorphism",
]

TABULATED_DEPTH = 5

# (source (n, r), label, target (n, r)) for every arrow up to TABULATED_DEPTH
TABULATED_EDGES = (
    ((0, 0), 1, (1, 0)),
    ((0, 0), -1, (1, 0)),
    ((1, 0), 1, (2, 0)),
    ((1, 0), -1, (2, 1)),
    ((2, 0), 1, (3, 0)),
    ((2, 0), -1, (3, 0)),
    ((2, 1), 1, (3, 1)),
    ((2, 1), -1, (3, 1)),
    ((3, 0), 1, (4, 0)),
    ((3, 0), -1, (4, 1)),
    ((3, 1), 1, (4, 1)),
    ((3, 1), -1, (4, 2)),
    ((4, 0), 1, (5, 0)),
    ((4, 0), -1, (5, 0)),
    ((4, 1), 1, (5, 1)),
    ((4, 1), -1, (5, 1)),
    ((4, 2), 1, (5, 2)),
    ((4, 2), -1, (5, 2)),
)


@dataclass(frozen=True, order=True)
class ICVertex:
    n: int
    r: int

    def __post_init__(self):
        if not (0 <= 2 * self.r <= self.n):
            raise ValueError(f"IC vertex needs 0 <= 2r <= n, got n={self.n}, r={self.r}")

    @property
    def eps1(self):
        return self.n - 2 * self.r

    def __str__(self):
        return f"IC^{self.n}_{self.r}"


@dataclass
class ReferenceGraph:
    n_max: int
    vertices: list
    edges: list  # (ICVertex, label, ICVertex)
    extrapolated_from: int = None
    indices: tuple = (1, -1)
    notes: list = field(default_factory=list)

    def out_edges(self, x):
        return [(i, t) for s, i, t in self.edges if s == x]

    def to_dot(self):
        lines = ["digraph reference {", "  rankdir=LR;"]
        if self.extrapolated_from is not None:
            lines.append(f'  label="extrapolated beyond n={self.extrapolated_from}";')
        for x in self.vertices:
            lines.append(f'  "{x}" [label="{x}|wt={x.n}|eps_1={x.eps1}"];')
        for s, i, t in self.edges:
            lines.append(f'  "{s}" -> "{t}" [label="{i}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self):
        return {
            "n_max": self.n_max,
            "extrapolated_from": self.extrapolated_from,
            "vertices": [{"n": x.n, "r": x.r, "eps_1": x.eps1} for x in self.vertices],
            "edges": [{"source": [s.n, s.r], "index": i, "target": [t.n, t.r]} for s, i, t in self.edges],
        }


def rule_edges(n_max):
    """Edges generated by: label 1 keeps r; label -1 keeps r from even n and raises r from odd n."""
    out = []
    for n in range(n_max):
        for r in range(n // 2 + 1):
            out.append(((n, r), 1, (n + 1, r)))
            out.append(((n, r), -1, (n + 1, r + (n % 2))))
    return out


def reference_graph(n_max):
    if not 0 <= n_max <= 12:
        raise ValueError("n_max must lie in 0..12")
    verts = [ICVertex(n, r) for n in range(n_max + 1) for r in range(n // 2 + 1)]
    if n_max <= TABULATED_DEPTH:
        raw = [e for e in TABULATED_EDGES if e[2][0] <= n_max]
        extra = None
    else:
        raw = list(TABULATED_EDGES) + [e for e in rule_edges(n_max) if e[0][0] >= TABULATED_DEPTH]
        extra = TABULATED_DEPTH
    edges = [(ICVertex(*s), i, ICVertex(*t)) for s, i, t in raw]
    return ReferenceGraph(n_max, verts, edges, extra)


def check_isomorphism(ref, computed, eps_index=1):
    """Search for a bijection preserving weights, labelled edges and eps_1.

    Starting from the two roots the bijection is forced along edges, so the
    search is a single traversal; the first conflict is returned as a
    counterexample.
    """
    rep = Report("isomorphism with the reference crystal")
    if ref.n_max != computed.depth:
        rep.add("same truncation depth", False, {"reference": ref.n_max, "computed": computed.depth})
        return rep
    ref_out = {}
    for s, i, t in ref.edges:
        ref_out.setdefault(s, {}).setdefault(i, []).append(t)
    comp_out = {}
    for (s, i), t in computed.f_edges.items():
        comp_out.setdefault(s, {}).setdefault(i, []).append(t)
    counter = None
    for table, name in ((ref_out, "reference"), (comp_out, "computed")):
        for s, d in table.items():
            for i, ts in d.items():
                if len(ts) > 1 and counter is None:
                    counter = {"graph": name, "vertex": str(s), "label": i, "targets": [str(t) for t in ts]}
    fwd, back = {}, {}
    root_r, root_c = ICVertex(0, 0), computed.vertices[0].id
    fwd[root_r], back[root_c] = root_c, root_r
    queue = [root_r]
    while queue and counter is None:
        x = queue.pop(0)
        y = fwd[x]
        labels = set(ref_out.get(x, {})) | set(comp_out.get(y, {}))
        for i in sorted(labels, key=str):
            xs, ys = ref_out.get(x, {}).get(i, []), comp_out.get(y, {}).get(i, [])
            if len(xs) != len(ys):
                counter = {"reference": str(x), "computed": f"b{y}", "label": i, "reference targets": [str(t) for t in xs], "computed targets": [f"b{t}" for t in ys]}
                break
            if not xs:
                continue
            x2, y2 = xs[0], ys[0]
            if x2 in fwd or y2 in back:
                if fwd.get(x2) != y2 or back.get(y2) != x2:
                    counter = {"edge": [str(x), i], "reference target": str(x2), "computed target": f"b{y2}", "conflict": "targets already matched elsewhere"}
                    break
                continue
            fwd[x2], back[y2] = y2, x2
            queue.append(x2)
    if counter is None:
        missing_r = [str(x) for x in ref.vertices if x not in fwd]
        missing_c = [b.id for b in computed.vertices if b.id not in back]
        if missing_r or missing_c:
            counter = {"unmatched reference": missing_r, "unmatched computed": missing_c}
    if counter is None:
        for x, y in fwd.items():
            b = computed.vertices[y]
            if b.depth != x.n:
                counter = {"weight": str(x), "computed": f"b{y}", "depth": b.depth}
                break
            if b.eps[eps_index] != x.eps1:
                counter = {"eps_1": str(x), "expected": x.eps1, "computed": f"b{y}", "got": b.eps[eps_index]}
                break
    witness = counter if counter is not None else {str(x): f"b{y}" for x, y in sorted(fwd.items())}
    rep.add("bijection preserving weights, labelled edges and eps_1", counter is None, witness)
    return rep
