"""Export of the near-shortest-path integer programs as LP-format model files.

Two models are produced:

* the sum model: minimise total cost of a binary s-t flow whose cost is at
  least ``xi``;
* the universal model: maximise the sorted weighted cost with position
  variables ``s_i`` per arc, linearised through ``y_i = s_i * x``, subject to
  flow, subtour elimination over every vertex subset of size >= 2, assignment,
  sorting and an upper bound ``f* + xi``.

Note the differing conventions: ``xi`` is an absolute lower bound in the sum
model and an offset above the optimum in the universal one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable

from .errors import SizeGateError
from .graph import Graph
from .objective import Lambda
from .solvers import solve

SUBTOUR_MAX_VERTICES = 12
LINE_WIDTH = 240

Terms = list[tuple[int, str]]


@dataclass
class LpModel:
    sense: str
    objective: Terms
    constraints: list[tuple[str, Terms, str, int]] = field(default_factory=list)
    binaries: list[str] = field(default_factory=list)
    comments: list[str] = field(default_factory=list)

    def add(self, name: str, terms: Iterable[tuple[int, str]], rel: str, rhs: int) -> None:
        self.constraints.append((name, _combine(terms), rel, rhs))

    def count(self, prefix: str) -> int:
        return sum(1 for name, *_ in self.constraints if name.startswith(prefix))

    def count_vars(self, prefix: str) -> int:
        return sum(1 for v in self.binaries if v.startswith(prefix))

    def to_text(self) -> str:
        lines = [f"\\ {c}" if c else "\\" for c in self.comments]
        lines.append("Maximize" if self.sense == "max" else "Minimize")
        lines += _wrap(" obj:", self.objective, self._placeholder())
        lines.append("Subject To")
        for name, terms, rel, rhs in self.constraints:
            lines += _wrap(f" {name}:", terms, self._placeholder(), f" {rel} {rhs}")
        if self.binaries:
            lines.append("Binary")
            lines += _wrap_names(self.binaries)
        lines.append("End")
        return "\n".join(lines) + "\n"

    def _placeholder(self) -> str | None:
        return self.binaries[0] if self.binaries else None


def _combine(terms: Iterable[tuple[int, str]]) -> Terms:
    acc: dict[str, int] = {}
    for coef, var in terms:
        acc[var] = acc.get(var, 0) + coef
    return [(c, v) for v, c in acc.items() if c != 0]


def _wrap(head: str, terms: Terms, placeholder: str | None, tail: str = "") -> list[str]:
    # an empty expression is written as a zero multiple of some variable
    if not terms:
        body = [f"0 {placeholder}"] if placeholder else ["0"]
    else:
        body = []
        for i, (coef, var) in enumerate(terms):
            mag = abs(coef)
            if i == 0:
                body.append(f"{'-' if coef < 0 else ''}{mag} {var}")
            else:
                body.append(f"{'-' if coef < 0 else '+'} {mag} {var}")
    lines = []
    cur = head
    for tok in body:
        if len(cur) + 1 + len(tok) > LINE_WIDTH and cur.strip():
            lines.append(cur)
            cur = "  "
        cur += " " + tok
    cur += tail
    lines.append(cur)
    return lines


def _wrap_names(names: list[str]) -> list[str]:
    lines, cur = [], ""
    for name in names:
        if len(cur) + 1 + len(name) > LINE_WIDTH and cur:
            lines.append(cur)
            cur = ""
        cur += " " + name
    if cur:
        lines.append(cur)
    return lines


def x_name(g: Graph, aid: int) -> str:
    return f"x_{g.tails[aid]}_{g.heads[aid]}_{aid}"


def s_name(g: Graph, i: int, aid: int) -> str:
    return f"s_{i}_{g.tails[aid]}_{g.heads[aid]}_{aid}"


def y_name(g: Graph, i: int, aid: int) -> str:
    return f"y_{i}_{g.tails[aid]}_{g.heads[aid]}_{aid}"


def _flow(model: LpModel, g: Graph) -> None:
    for u in range(1, g.n + 1):
        terms = [(1, x_name(g, a)) for a in g.out_adj[u]] + [(-1, x_name(g, a)) for a in g.in_adj[u]]
        rhs = 1 if u == g.source else -1 if u == g.sink else 0
        model.add(f"flow_{u}", terms, "=", rhs)


def build_nspip(g: Graph, xi: int) -> LpModel:
    arcs = list(g.arc_ids())
    model = LpModel("min", _combine((g.costs[a], x_name(g, a)) for a in arcs))
    model.comments = [
        "near shortest simple path model: minimise cost subject to cost >= xi",
        f"n={g.n} m={g.m} source={g.source} sink={g.sink} xi={xi}",
    ]
    model.binaries = [x_name(g, a) for a in arcs]
    _flow(model, g)
    model.add("bound_xi", ((g.costs[a], x_name(g, a)) for a in arcs), ">=", xi)
    return model


def emit_nspip(g: Graph, xi: int) -> str:
    return build_nspip(g, xi).to_text()


def build_unspip(
    g: Graph,
    lam: Lambda,
    xi: int,
    f_star: int | None = None,
    max_vertices: int = SUBTOUR_MAX_VERTICES,
) -> LpModel:
    lam.check(g.n)
    if g.n > max_vertices:
        raise SizeGateError(
            f"n={g.n} exceeds {max_vertices}; subtour constraints are enumerated over all vertex subsets"
        )
    if f_star is None:
        opt = solve(g, None, g.source, g.sink, lam)
        f_star = opt.value if opt.value is not None else 0
    weights = lam.vector(g.n)
    positions = range(1, g.n)
    arcs = list(g.arc_ids())
    c = g.costs

    objective = [(weights[i - 1] * c[a], y_name(g, i, a)) for i in positions for a in arcs]
    model = LpModel("max", _combine(objective))
    model.comments = [
        "universal near shortest simple path model, linearised with y_i = s_i * x",
        f"n={g.n} m={g.m} source={g.source} sink={g.sink} lambda={lam} xi={xi} f_star={f_star}",
        "the objective is a maximisation; the bound row caps it at f_star + xi",
    ]
    # one position per arc and one arc per position together force m = n-1
    if g.m != g.n - 1:
        model.comments.append(
            f"warning: m={g.m} != n-1={g.n - 1}, so the assign_arc and assign_pos rows cannot both hold"
        )
    model.binaries = (
        [x_name(g, a) for a in arcs]
        + [s_name(g, i, a) for i in positions for a in arcs]
        + [y_name(g, i, a) for i in positions for a in arcs]
    )

    _flow(model, g)
    for size in range(2, g.n + 1):
        for subset in itertools.combinations(range(1, g.n + 1), size):
            members = set(subset)
            inside = [(1, x_name(g, a)) for a in arcs if g.tails[a] in members and g.heads[a] in members]
            model.add("subtour_" + "_".join(map(str, subset)), inside, "<=", size - 1)
    for a in arcs:
        model.add(f"assign_arc_{a}", [(1, s_name(g, i, a)) for i in positions], "=", 1)
    for i in positions:
        model.add(f"assign_pos_{i}", [(1, s_name(g, i, a)) for a in arcs], "=", 1)
    for i in range(1, g.n - 1):
        terms = [(c[a], y_name(g, i, a)) for a in arcs] + [(-c[a], y_name(g, i + 1, a)) for a in arcs]
        model.add(f"sort_{i}", terms, ">=", 0)
    for i in positions:
        for a in arcs:
            model.add(f"lin_le_s_{i}_{a}", [(1, y_name(g, i, a)), (-1, s_name(g, i, a))], "<=", 0)
    for i in positions:
        for a in arcs:
            model.add(f"lin_le_x_{i}_{a}", [(1, y_name(g, i, a)), (-1, x_name(g, a))], "<=", 0)
    for i in positions:
        for a in arcs:
            model.add(
                f"lin_ge_{i}_{a}",
                [(1, s_name(g, i, a)), (1, x_name(g, a)), (-1, y_name(g, i, a))],
                "<=",
                1,
            )
    model.add("bound_fstar", objective, "<=", f_star + xi)
    return model


def emit_unspip(g: Graph, lam: Lambda, xi: int, f_star: int | None = None) -> str:
    return build_unspip(g, lam, xi, f_star).to_text()
