"""Exact binary encoding of a CFN into a spin-basis HUBO.

Each variable of cardinality d occupies a register of ceil(log2 d)
qubits; choice c (1-based) is assigned a bitstring, and bit b maps to
spin z = 1 - 2b, so bit 0 corresponds to spin +1.  Encoding computes
the HUBO couplings directly as Walsh transforms of the (policy-
extended) cost tables on their register sub-hypercubes: unary tables
produce couplings supported on one register, interaction tables on
exactly two, and nothing spans three or more.

Registers whose cardinality is not a power of two leave unused
bitstrings.  Two policies are supported: ``Fallback`` gives unused
patterns the cost of a designated choice (so decoding them is
harmless), ``Penalty`` charges a constant weight on unused patterns
and leaves interactions at zero there.  Fallback extension reintroduces
nonzero marginals into the extended interaction grids; those marginals
are absorbed into the effective register tables before transforming,
which keeps interaction couplings supported on exactly two registers
and makes the per-table spectral decomposition exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cfn import Cfn
from .errors import CapacityError, CfnFormatError
from .polynomial import MAX_QUBITS, IsingPolynomial
from .walsh import fwht

__all__ = [
    "Fallback",
    "Penalty",
    "EncodingLayout",
    "build_layout",
    "default_penalty_weight",
    "bitstring_indicator",
    "indicator_expansion",
    "extended_register_tables",
    "encode",
    "decode",
    "spin_image",
    "k_full",
]


@dataclass(frozen=True)
class Fallback:
    """Unused bitstrings cost the same as a designated choice.

    ``choice`` is 1-based; None selects each register's last valid
    choice.
    """

    choice: int | None = None


@dataclass(frozen=True)
class Penalty:
    """Unused bitstrings carry a flat positive cost.

    ``weight`` of None defers to ``default_penalty_weight`` at encode
    time.
    """

    weight: float | None = None

    def __post_init__(self) -> None:
        if self.weight is not None and self.weight < 0:
            raise ValueError("penalty weight must be >= 0")


@dataclass(frozen=True)
class EncodingLayout:
    """Register geometry plus the choice-to-bitstring maps.

    ``assignments[i][c-1]`` is the bitstring (as an int, bit q = qubit
    q of the register) encoding choice c of variable i;
    ``sign_vectors[i][c-1]`` is the corresponding +/-1 spin pattern.
    """

    register_widths: tuple[int, ...]
    register_offsets: tuple[int, ...]
    total_qubits: int
    assignments: tuple[tuple[int, ...], ...]
    sign_vectors: tuple[tuple[tuple[int, ...], ...], ...]
    unused_policy: Fallback | Penalty

    def __post_init__(self) -> None:
        for i, width in enumerate(self.register_widths):
            seen = set()
            for c, bits in enumerate(self.assignments[i]):
                if not (0 <= bits < (1 << width)):
                    raise CfnFormatError(
                        f"custom bitstring of wrong length: variable {i} choice {c + 1}"
                    )
                if bits in seen:
                    raise CfnFormatError(f"non-injective custom map for variable {i}")
                seen.add(bits)
                signs = self.sign_vectors[i][c]
                if len(signs) != width or any(
                    signs[q] != 1 - 2 * ((bits >> q) & 1) for q in range(width)
                ):
                    raise CfnFormatError(f"sign vector mismatch for variable {i} choice {c + 1}")

    @property
    def num_variables(self) -> int:
        return len(self.register_widths)

    def cardinality(self, var: int) -> int:
        return len(self.assignments[var])

    def num_unused(self, var: int) -> int:
        return (1 << self.register_widths[var]) - self.cardinality(var)

    def fallback_choice(self, var: int) -> int:
        policy = self.unused_policy
        if isinstance(policy, Fallback) and policy.choice is not None:
            return policy.choice
        return self.cardinality(var)

    def register_mask(self, var: int) -> int:
        return ((1 << self.register_widths[var]) - 1) << self.register_offsets[var]

    def sigma(self, var: int, choice: int, subset: int) -> int:
        """Product of the choice's spin signs over a local qubit subset."""
        bits = self.assignments[var][choice - 1]
        return -1 if (bits & subset).bit_count() % 2 else 1


def _binary_assignment(card: int) -> tuple[int, ...]:
    return tuple(c for c in range(card))


def _gray_assignment(card: int) -> tuple[int, ...]:
    return tuple(c ^ (c >> 1) for c in range(card))


def build_layout(
    cfn: Cfn,
    strategy: str | Sequence[Sequence[int]] = "binary",
    unused_policy: Fallback | Penalty | None = None,
) -> EncodingLayout:
    """Lay out registers and bitstring assignments for a CFN.

    ``strategy`` is "binary" (choice c gets the bits of c-1), "gray"
    (reflected binary code of c-1), or an explicit per-variable list of
    bitstrings, one per choice.
    """
    if unused_policy is None:
        unused_policy = Fallback()
    widths = []
    offsets = []
    assignments = []
    total = 0
    for i, v in enumerate(cfn.variables):
        width = max(v.cardinality - 1, 0).bit_length()
        if isinstance(strategy, str):
            if strategy == "binary":
                bits = _binary_assignment(v.cardinality)
            elif strategy == "gray":
                bits = _gray_assignment(v.cardinality)
            else:
                raise ValueError(f"unknown assignment strategy {strategy!r}")
        else:
            if len(strategy) != cfn.num_variables:
                raise CfnFormatError("custom assignment needs one map per variable")
            bits = tuple(int(b) for b in strategy[i])
            if len(bits) != v.cardinality:
                raise CfnFormatError(f"custom map for variable {i} must cover every choice")
        widths.append(width)
        offsets.append(total)
        assignments.append(bits)
        total += width
    if isinstance(unused_policy, Fallback) and unused_policy.choice is not None:
        for i, v in enumerate(cfn.variables):
            if (1 << widths[i]) - v.cardinality > 0 and not (1 <= unused_policy.choice <= v.cardinality):
                raise CfnFormatError(
                    f"fallback choice {unused_policy.choice} out of range for variable {i}"
                )
    signs = tuple(
        tuple(
            tuple(1 - 2 * ((bits >> q) & 1) for q in range(widths[i]))
            for bits in assignments[i]
        )
        for i in range(cfn.num_variables)
    )
    return EncodingLayout(
        register_widths=tuple(widths),
        register_offsets=tuple(offsets),
        total_qubits=total,
        assignments=tuple(assignments),
        sign_vectors=signs,
        unused_policy=unused_policy,
    )


def default_penalty_weight(cfn: Cfn) -> float:
    """Twice the spread of an exact per-table bound on CFN values, plus one."""
    hi = 0.0
    lo = 0.0
    for table in cfn.unary_tables:
        if table:
            hi += max(table)
            lo += min(table)
    for t in cfn.pairwise_tables:
        hi += max(t.costs)
        lo += min(t.costs)
    return 2.0 * (hi - lo) + 1.0


def bitstring_indicator(width: int, bits: int) -> IsingPolynomial:
    """Polynomial over one register that is 1 exactly at ``bits``.

    Expanding the product of per-qubit literals gives one term per
    qubit subset with coefficient +/- 2^-width.
    """
    scale = 1.0 / (1 << width)
    terms = {
        t: (-scale if (bits & t).bit_count() % 2 else scale) for t in range(1 << width)
    }
    return IsingPolynomial(width, terms)


def indicator_expansion(layout: EncodingLayout, var: int, choice: int) -> IsingPolynomial:
    """Indicator of one choice, over the register's local qubits."""
    if not (1 <= choice <= layout.cardinality(var)):
        raise ValueError(f"choice {choice} out of range for variable {var}")
    return bitstring_indicator(layout.register_widths[var], layout.assignments[var][choice - 1])


def extended_register_tables(
    cfn: Cfn, layout: EncodingLayout
) -> tuple[float, list[np.ndarray], list[tuple[int, int, np.ndarray]]]:
    """Policy-extended tables with interaction marginals absorbed.

    Returns ``(constant, unary, pairwise)`` where ``unary[i]`` is the
    effective register-i table over all 2^width bitstrings and each
    pairwise entry ``(i, j, grid)`` is a flat array over the joint
    sub-hypercube (register-i qubits are the low bits of the index)
    with exactly zero marginal sums.  Row/column means of the extended
    interaction grids are moved into the unary tables and the grand
    means into the constant, so summing the three parts reproduces the
    extended cost at every bitstring pattern, valid or not.
    """
    policy = layout.unused_policy
    penalty_weight = None
    if isinstance(policy, Penalty):
        penalty_weight = policy.weight if policy.weight is not None else default_penalty_weight(cfn)

    # choice lookup per register: bitstring -> 0-based choice, or -1 for unused
    choice_of: list[np.ndarray] = []
    for i in range(cfn.num_variables):
        lookup = np.full(1 << layout.register_widths[i], -1, dtype=np.int64)
        for c0, bits in enumerate(layout.assignments[i]):
            lookup[bits] = c0
        choice_of.append(lookup)

    unary: list[np.ndarray] = []
    for i in range(cfn.num_variables):
        table = np.asarray(cfn.unary_tables[i], dtype=float)
        lookup = choice_of[i]
        if penalty_weight is None:
            fb = layout.fallback_choice(i) - 1
            idx = np.where(lookup >= 0, lookup, fb)
            unary.append(table[idx])
        else:
            ext = np.full(lookup.size, penalty_weight, dtype=float)
            valid = lookup >= 0
            ext[valid] = table[lookup[valid]]
            unary.append(ext)

    constant = 0.0
    pairwise: list[tuple[int, int, np.ndarray]] = []
    for t in cfn.pairwise_tables:
        di = cfn.cardinality(t.i)
        dj = cfn.cardinality(t.j)
        wi = layout.register_widths[t.i]
        wj = layout.register_widths[t.j]
        base = np.asarray(t.costs, dtype=float).reshape(di, dj)
        lookup_i = choice_of[t.i]
        lookup_j = choice_of[t.j]
        if penalty_weight is None:
            fi = layout.fallback_choice(t.i) - 1
            fj = layout.fallback_choice(t.j) - 1
            rows = np.where(lookup_i >= 0, lookup_i, fi)
            cols = np.where(lookup_j >= 0, lookup_j, fj)
            grid = base[np.ix_(rows, cols)]
        else:
            grid = np.zeros((1 << wi, 1 << wj))
            vi = lookup_i >= 0
            vj = lookup_j >= 0
            grid[np.ix_(vi, vj)] = base[np.ix_(lookup_i[vi], lookup_j[vj])]
        # absorb marginals so the remaining grid has zero row/column sums
        row_means = grid.mean(axis=1)  # function of the register-i bitstring
        col_means = grid.mean(axis=0)
        grand = float(grid.mean())
        grid = grid - row_means[:, None] - col_means[None, :] + grand
        unary[t.i] = unary[t.i] + (row_means - grand)
        unary[t.j] = unary[t.j] + (col_means - grand)
        constant += grand
        # flatten with register-i bits low: joint index r_i | (r_j << wi)
        pairwise.append((t.i, t.j, grid.T.reshape(-1)))
    return constant, unary, pairwise


def encode(cfn: Cfn, layout: EncodingLayout) -> IsingPolynomial:
    """Compile a CFN into its exact spin-basis HUBO.

    Couplings come straight from Walsh transforms of the effective
    register tables: single-register subsets from the unary tables,
    two-register subsets (both parts nonempty) from the interaction
    grids, nothing else.  The constant term is stored.
    """
    n = layout.total_qubits
    if n > MAX_QUBITS:
        raise CapacityError(f"{n} qubits exceed the {MAX_QUBITS}-qubit bitmask capacity")
    constant, unary, pairwise = extended_register_tables(cfn, layout)
    terms: dict[int, float] = {0: constant}

    for i, table in enumerate(unary):
        coeffs = fwht(table)
        offset = layout.register_offsets[i]
        terms[0] += float(coeffs[0])
        for local in range(1, coeffs.size):
            c = float(coeffs[local])
            if c != 0.0:
                key = local << offset
                terms[key] = terms.get(key, 0.0) + c

    for i, j, grid in pairwise:
        wi = layout.register_widths[i]
        off_i = layout.register_offsets[i]
        off_j = layout.register_offsets[j]
        low = (1 << wi) - 1
        coeffs = fwht(grid)
        for joint in range(coeffs.size):
            ti = joint & low
            tj = joint >> wi
            if ti == 0 or tj == 0:
                continue  # marginal modes were absorbed; anything left is roundoff
            c = float(coeffs[joint])
            if c != 0.0:
                key = (ti << off_i) | (tj << off_j)
                terms[key] = terms.get(key, 0.0) + c

    return IsingPolynomial(n, terms)


def spin_image(layout: EncodingLayout, assignment: Sequence[int]) -> int:
    """Configuration mask encoding a full 1-based choice assignment."""
    if len(assignment) != layout.num_variables:
        raise ValueError("assignment length does not match layout")
    mask = 0
    for i, c in enumerate(assignment):
        if not (1 <= c <= layout.cardinality(i)):
            raise ValueError(f"choice {c} out of range for variable {i}")
        mask |= layout.assignments[i][c - 1] << layout.register_offsets[i]
    return mask


def decode(layout: EncodingLayout, z: Sequence[int] | int) -> tuple[list[int], list[bool]]:
    """Recover the choice assignment from a spin configuration.

    Accepts a +/-1 spin vector or a configuration mask.  Registers
    landing on unused bitstrings are flagged invalid and resolved by
    the layout's policy: Fallback substitutes its designated choice;
    Penalty substitutes the valid bitstring at smallest Hamming
    distance (ties broken by lowest choice index).
    """
    if isinstance(z, int):
        mask = z
    else:
        if len(z) != layout.total_qubits:
            raise ValueError(f"spin vector length {len(z)} != {layout.total_qubits}")
        from .polynomial import spins_to_mask

        mask = spins_to_mask(z)
    assignment: list[int] = []
    valid: list[bool] = []
    for i in range(layout.num_variables):
        width = layout.register_widths[i]
        bits = (mask >> layout.register_offsets[i]) & ((1 << width) - 1)
        try:
            choice = layout.assignments[i].index(bits) + 1
            assignment.append(choice)
            valid.append(True)
            continue
        except ValueError:
            pass
        valid.append(False)
        if isinstance(layout.unused_policy, Fallback):
            assignment.append(layout.fallback_choice(i))
        else:
            best = min(
                range(layout.cardinality(i)),
                key=lambda c0: ((layout.assignments[i][c0] ^ bits).bit_count(), c0),
            )
            assignment.append(best + 1)
    return assignment, valid


def k_full(cfn: Cfn, layout: EncodingLayout) -> int:
    """Largest possible monomial degree of the exact encoding."""
    widths = layout.register_widths
    if cfn.pairwise_tables:
        return max(widths[t.i] + widths[t.j] for t in cfn.pairwise_tables)
    return max(widths, default=0)
