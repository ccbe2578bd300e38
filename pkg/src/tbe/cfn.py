"""Cost function network model, validation, centering and JSON I/O.

A CFN is a set of discrete variables with tabulated unary costs and
pairwise interaction costs.  Choice indices are 1-based in the public
API and in the file format; internal storage is 0-based.

The canonical file format (CFN-JSON) is::

    {
      "variables": [{"name": "v0", "cardinality": 4}, ...],
      "unary":     [{"var": 0, "costs": [...]}, ...],
      "pairwise":  [{"vars": [0, 1], "costs": [... row-major ...]}, ...]
    }

Missing unary entries are treated as all-zero tables; a missing
pairwise entry means no interaction between that pair.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import CfnFormatError

__all__ = [
    "VariableSpec",
    "PairwiseTable",
    "Cfn",
    "CenteredCfn",
    "parse_cfn",
    "serialize_cfn",
    "center",
    "evaluate_cfn",
]


@dataclass(frozen=True)
class VariableSpec:
    name: str
    cardinality: int


@dataclass(frozen=True)
class PairwiseTable:
    """Interaction costs for an unordered variable pair, row-major.

    ``costs[(ci - 1) * card_j + (cj - 1)]`` is the cost of choices
    (ci, cj); ``i < j`` always.
    """

    i: int
    j: int
    costs: tuple[float, ...]

    def value(self, ci: int, cj: int, card_j: int) -> float:
        return self.costs[(ci - 1) * card_j + (cj - 1)]


@dataclass(frozen=True)
class Cfn:
    """A validated cost function network.

    Immutable after construction; all operations on it are pure
    functions, so instances can be shared freely across threads.
    """

    variables: tuple[VariableSpec, ...]
    unary_tables: tuple[tuple[float, ...], ...]
    pairwise_tables: tuple[PairwiseTable, ...]

    def __post_init__(self) -> None:
        _validate(self.variables, self.unary_tables, self.pairwise_tables)

    @property
    def num_variables(self) -> int:
        return len(self.variables)

    def cardinality(self, i: int) -> int:
        return self.variables[i].cardinality

    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple((t.i, t.j) for t in self.pairwise_tables)


@dataclass(frozen=True)
class CenteredCfn(Cfn):
    """A Cfn whose pairwise tables have (numerically) zero marginals."""

    centering_applied: bool = field(default=True)


def _validate(variables, unary_tables, pairwise_tables) -> None:
    n = len(variables)
    for k, v in enumerate(variables):
        if v.cardinality < 1:
            raise CfnFormatError(f"variables[{k}].cardinality must be >= 1")
    if len(unary_tables) != n:
        raise CfnFormatError("unary_tables length does not match variable count")
    for k, table in enumerate(unary_tables):
        if len(table) != variables[k].cardinality:
            raise CfnFormatError(
                f"table shape mismatch: unary table for var {k} has "
                f"{len(table)} entries, cardinality is {variables[k].cardinality}"
            )
        for x in table:
            if not math.isfinite(x):
                raise CfnFormatError(f"non-finite cost in unary table for var {k}")
    seen_pairs = set()
    for t in pairwise_tables:
        if not (0 <= t.i < n) or not (0 <= t.j < n):
            raise CfnFormatError(f"pairwise table references out-of-range variable ({t.i}, {t.j})")
        if t.i >= t.j:
            raise CfnFormatError(f"pairwise table pair ({t.i}, {t.j}) must satisfy i < j")
        if (t.i, t.j) in seen_pairs:
            raise CfnFormatError(f"duplicate pairwise table for pair ({t.i}, {t.j})")
        seen_pairs.add((t.i, t.j))
        expected = variables[t.i].cardinality * variables[t.j].cardinality
        if len(t.costs) != expected:
            raise CfnFormatError(
                f"table shape mismatch: pairwise table ({t.i}, {t.j}) has "
                f"{len(t.costs)} entries, expected {expected}"
            )
        for x in t.costs:
            if not math.isfinite(x):
                raise CfnFormatError(f"non-finite cost in pairwise table ({t.i}, {t.j})")


def parse_cfn(data: bytes | str) -> Cfn:
    """Parse CFN-JSON into a validated Cfn.

    Raises CfnFormatError naming the offending field on any schema
    violation, shape mismatch, duplicate pair or non-finite cost.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise CfnFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise CfnFormatError("top-level value must be an object")
    if "variables" not in doc:
        raise CfnFormatError("missing field: variables")

    variables = []
    for k, entry in enumerate(doc["variables"]):
        if not isinstance(entry, dict) or "cardinality" not in entry:
            raise CfnFormatError(f"variables[{k}] must be an object with a cardinality")
        card = entry["cardinality"]
        if not isinstance(card, int) or isinstance(card, bool) or card < 1:
            raise CfnFormatError(f"variables[{k}].cardinality must be a positive integer")
        name = entry.get("name", f"v{k}")
        if not isinstance(name, str):
            raise CfnFormatError(f"variables[{k}].name must be a string")
        variables.append(VariableSpec(name=name, cardinality=card))
    n = len(variables)

    unary = [tuple(0.0 for _ in range(v.cardinality)) for v in variables]
    for k, entry in enumerate(doc.get("unary", [])):
        if not isinstance(entry, dict) or "var" not in entry or "costs" not in entry:
            raise CfnFormatError(f"unary[{k}] must be an object with var and costs")
        var = entry["var"]
        if not isinstance(var, int) or not (0 <= var < n):
            raise CfnFormatError(f"unary[{k}].var out of range")
        costs = _float_list(entry["costs"], f"unary[{k}].costs")
        unary[var] = costs

    pairwise = []
    for k, entry in enumerate(doc.get("pairwise", [])):
        if not isinstance(entry, dict) or "vars" not in entry or "costs" not in entry:
            raise CfnFormatError(f"pairwise[{k}] must be an object with vars and costs")
        pair = entry["vars"]
        if (not isinstance(pair, list)) or len(pair) != 2 or not all(isinstance(x, int) for x in pair):
            raise CfnFormatError(f"pairwise[{k}].vars must be a pair of variable indices")
        costs = _float_list(entry["costs"], f"pairwise[{k}].costs")
        pairwise.append(PairwiseTable(i=pair[0], j=pair[1], costs=costs))

    return Cfn(variables=tuple(variables), unary_tables=tuple(unary), pairwise_tables=tuple(pairwise))


def _float_list(values, where: str) -> tuple[float, ...]:
    if not isinstance(values, list):
        raise CfnFormatError(f"{where} must be a list of numbers")
    out = []
    for x in values:
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise CfnFormatError(f"{where} must contain only numbers")
        out.append(float(x))
    return tuple(out)


def serialize_cfn(cfn: Cfn) -> str:
    """Emit CFN-JSON with keys in canonical order (variables, unary, pairwise)."""
    doc = {
        "variables": [{"name": v.name, "cardinality": v.cardinality} for v in cfn.variables],
        "unary": [
            {"var": i, "costs": list(table)} for i, table in enumerate(cfn.unary_tables)
        ],
        "pairwise": [
            {"vars": [t.i, t.j], "costs": list(t.costs)}
            for t in sorted(cfn.pairwise_tables, key=lambda t: (t.i, t.j))
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def center(cfn: Cfn) -> CenteredCfn:
    """Absorb pairwise-table marginals into the unary tables.

    For each pairwise table the centered row means go to the unary
    table of the row variable, the centered column means to the column
    variable, and the grand mean is added (as a constant) to the unary
    table of the lower-index variable of the pair.  The total cost at
    every configuration is unchanged; the resulting pairwise tables
    have zero row and column sums.
    """
    unary = [list(t) for t in cfn.unary_tables]
    new_pairwise = []
    for t in cfn.pairwise_tables:
        di = cfn.cardinality(t.i)
        dj = cfn.cardinality(t.j)
        rows = [t.costs[r * dj : (r + 1) * dj] for r in range(di)]
        row_means = [sum(row) / dj for row in rows]
        col_means = [sum(rows[r][c] for r in range(di)) / di for c in range(dj)]
        grand = sum(row_means) / di
        centered = tuple(
            rows[r][c] - row_means[r] - col_means[c] + grand
            for r in range(di)
            for c in range(dj)
        )
        # centered marginals plus the grand mean, which lands on the
        # lower-index variable of the pair (always t.i)
        for r in range(di):
            unary[t.i][r] += row_means[r]
        for c in range(dj):
            unary[t.j][c] += col_means[c] - grand
        new_pairwise.append(PairwiseTable(i=t.i, j=t.j, costs=centered))
    return CenteredCfn(
        variables=cfn.variables,
        unary_tables=tuple(tuple(t) for t in unary),
        pairwise_tables=tuple(new_pairwise),
    )


def evaluate_cfn(cfn: Cfn, assignment: list[int] | tuple[int, ...]) -> float:
    """Total cost of a full assignment of 1-based choice indices."""
    if len(assignment) != cfn.num_variables:
        raise ValueError(
            f"assignment length {len(assignment)} does not match {cfn.num_variables} variables"
        )
    for i, c in enumerate(assignment):
        if not (1 <= c <= cfn.cardinality(i)):
            raise ValueError(f"choice {c} out of range for variable {i}")
    total = 0.0
    for i, c in enumerate(assignment):
        total += cfn.unary_tables[i][c - 1]
    for t in cfn.pairwise_tables:
        total += t.value(assignment[t.i], assignment[t.j], cfn.cardinality(t.j))
    return total
