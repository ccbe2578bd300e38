"""Shared generators and independent oracles for the test suite.

The oracles here deliberately avoid the library's fast paths: naive
per-term products instead of parity tricks, O(4^D) transform sums
instead of butterflies, direct table lookups instead of the encoder's
effective-table machinery.
"""

from __future__ import annotations

import numpy as np

from tbe import Cfn, EncodingLayout, IsingPolynomial, PairwiseTable, Penalty, VariableSpec
from tbe.encoding import default_penalty_weight


def random_cfn(rng: np.random.Generator, max_vars: int = 3, max_card: int = 8,
               edge_prob: float = 0.8) -> Cfn:
    n = int(rng.integers(1, max_vars + 1))
    cards = [int(rng.integers(2, max_card + 1)) for _ in range(n)]
    variables = tuple(VariableSpec(f"v{i}", c) for i, c in enumerate(cards))
    unary = tuple(tuple(float(x) for x in rng.normal(size=c)) for c in cards)
    pairs = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < edge_prob:
                costs = tuple(float(x) for x in rng.normal(size=cards[i] * cards[j]))
                pairs.append(PairwiseTable(i, j, costs))
    return Cfn(variables, unary, tuple(pairs))


def random_polynomial(rng: np.random.Generator, n: int, num_terms: int,
                      max_degree: int | None = None) -> IsingPolynomial:
    pool = [m for m in range(1 << n) if max_degree is None or m.bit_count() <= max_degree]
    num_terms = min(num_terms, len(pool))
    chosen = rng.choice(len(pool), size=num_terms, replace=False)
    terms = {pool[int(k)]: float(rng.normal()) for k in chosen}
    return IsingPolynomial(n, terms)


def naive_eval(poly: IsingPolynomial, mask: int) -> float:
    """Per-term product evaluation, no parity shortcut."""
    total = 0.0
    for s, c in poly.terms.items():
        prod = 1.0
        for q in range(poly.num_qubits):
            if (s >> q) & 1:
                prod *= -1.0 if (mask >> q) & 1 else 1.0
        total += c * prod
    return total


def naive_cfn_eval(cfn: Cfn, assignment: list[int]) -> float:
    """Direct table summation, written independently of evaluate_cfn."""
    total = 0.0
    for i in range(len(cfn.variables)):
        total += cfn.unary_tables[i][assignment[i] - 1]
    for t in cfn.pairwise_tables:
        dj = cfn.variables[t.j].cardinality
        total += t.costs[(assignment[t.i] - 1) * dj + (assignment[t.j] - 1)]
    return total


def naive_walsh(values: np.ndarray) -> np.ndarray:
    """O(4^D) definition of the transform: expectation of f * chi_T."""
    size = len(values)
    out = np.zeros(size)
    for t in range(size):
        acc = 0.0
        for z in range(size):
            sign = -1.0 if bin(t & z).count("1") % 2 else 1.0
            acc += values[z] * sign
        out[t] = acc / size
    return out


def assemble_truth_table(cfn: Cfn, layout: EncodingLayout) -> np.ndarray:
    """Extended-table cost at every spin configuration, by direct lookup.

    Resolves each register's bit pattern to a choice (or the policy's
    extension value) and sums raw table entries; never touches the
    encoder's effective-table path.
    """
    policy = layout.unused_policy
    weight = None
    if isinstance(policy, Penalty):
        weight = policy.weight if policy.weight is not None else default_penalty_weight(cfn)
    n = layout.total_qubits
    values = np.zeros(1 << n)
    inverse = []
    for i in range(cfn.num_variables):
        inv = {bits: c for c, bits in enumerate(layout.assignments[i])}
        inverse.append(inv)
    for mask in range(1 << n):
        choices = []
        total = 0.0
        for i in range(cfn.num_variables):
            width = layout.register_widths[i]
            bits = (mask >> layout.register_offsets[i]) & ((1 << width) - 1)
            c0 = inverse[i].get(bits)
            choices.append(c0)
            if c0 is not None:
                total += cfn.unary_tables[i][c0]
            elif weight is None:
                total += cfn.unary_tables[i][layout.fallback_choice(i) - 1]
            else:
                total += weight
        for t in cfn.pairwise_tables:
            ci, cj = choices[t.i], choices[t.j]
            if weight is None:
                if ci is None:
                    ci = layout.fallback_choice(t.i) - 1
                if cj is None:
                    cj = layout.fallback_choice(t.j) - 1
            elif ci is None or cj is None:
                continue
            dj = cfn.variables[t.j].cardinality
            total += t.costs[ci * dj + cj]
        values[mask] = total
    return values


def all_assignments(cfn: Cfn):
    from itertools import product

    return product(*(range(1, v.cardinality + 1) for v in cfn.variables))
