"""Per-degree spectral power of an encoded CFN, table by table.

The squared Walsh coefficients of the encoded HUBO, binned by monomial
degree, measure how much of the landscape's variance lives at each
interaction order.  Because unary couplings sit on single registers
and interaction couplings on disjoint two-register subsets, the global
profile is the exact sum of per-table profiles, so the whole spectrum
can be computed from small per-table transforms without assembling the
2^n polynomial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .cfn import Cfn
from .encoding import EncodingLayout, extended_register_tables, k_full
from .polynomial import IsingPolynomial
from .walsh import fwht

__all__ = ["SpectralProfile", "table_spectrum", "profile_of_polynomial", "spectrum_csv"]


@dataclass(frozen=True)
class SpectralProfile:
    """Degree-binned squared coupling mass and its per-table split.

    Index k of each tuple is the total squared coupling at monomial
    degree k; ``per_degree_power[0]`` is the squared constant.  For
    k >= 1 the global entry equals the sum of all per-table entries.
    """

    num_qubits: int
    per_degree_power: tuple[float, ...]
    per_table_unary: tuple[tuple[float, ...], ...]
    per_table_pairwise: tuple[tuple[int, int, tuple[float, ...]], ...]

    @property
    def max_degree(self) -> int:
        return len(self.per_degree_power) - 1

    def cumulative_below(self, k_max: int) -> float:
        """Total power at degrees 1..k_max (the constant never counts)."""
        return float(sum(self.per_degree_power[1 : k_max + 1]))

    def cumulative_above(self, k_max: int) -> float:
        return float(sum(self.per_degree_power[k_max + 1 :]))

    def omitted_mode_count(self, k_max: int) -> int:
        """Number of hypercube modes of degree above k_max."""
        n = self.num_qubits
        kept = sum(math.comb(n, k) for k in range(0, min(k_max, n) + 1))
        return (1 << n) - kept

    def unary_power(self, k: int) -> float:
        return float(sum(t[k] for t in self.per_table_unary))

    def pairwise_power(self, k: int) -> float:
        return float(sum(t[2][k] for t in self.per_table_pairwise))

    def weak_ratio(self, k_max: int) -> float | None:
        """Omitted over kept power; None when nothing is kept."""
        above = self.cumulative_above(k_max)
        if above == 0.0:
            return 0.0
        below = self.cumulative_below(k_max)
        return above / below if below > 0.0 else None

    def strong_margin(self, k_max: int) -> float | None:
        """Weak ratio divided by k_max / n; None when undefined."""
        ratio = self.weak_ratio(k_max)
        if ratio is None or self.num_qubits == 0:
            return None
        return ratio * self.num_qubits / k_max


def table_spectrum(cfn: Cfn, layout: EncodingLayout) -> SpectralProfile:
    """Spectral profile straight from the per-register cost tables.

    Transforms each effective register table and each zero-marginal
    interaction grid on its own sub-hypercube and bins the squared
    coefficients by degree (interaction modes by the sum of the two
    register-local degrees, both nonzero).
    """
    top = k_full(cfn, layout)
    constant, unary, pairwise = extended_register_tables(cfn, layout)

    unary_profiles = []
    total_constant = constant
    for i, table in enumerate(unary):
        coeffs = fwht(table)
        bins = [0.0] * (top + 1)
        for t in range(1, coeffs.size):
            bins[t.bit_count()] += float(coeffs[t]) ** 2
        total_constant += float(coeffs[0])
        unary_profiles.append(tuple(bins))

    pairwise_profiles = []
    for i, j, grid in pairwise:
        wi = layout.register_widths[i]
        low = (1 << wi) - 1
        coeffs = fwht(grid)
        bins = [0.0] * (top + 1)
        for joint in range(coeffs.size):
            ti = joint & low
            tj = joint >> wi
            if ti == 0 or tj == 0:
                continue
            bins[ti.bit_count() + tj.bit_count()] += float(coeffs[joint]) ** 2
        pairwise_profiles.append((i, j, tuple(bins)))

    global_bins = [0.0] * (top + 1)
    global_bins[0] = total_constant**2
    for bins in unary_profiles:
        for k in range(1, top + 1):
            global_bins[k] += bins[k]
    for _, _, bins in pairwise_profiles:
        for k in range(1, top + 1):
            global_bins[k] += bins[k]

    return SpectralProfile(
        num_qubits=layout.total_qubits,
        per_degree_power=tuple(global_bins),
        per_table_unary=tuple(unary_profiles),
        per_table_pairwise=tuple(pairwise_profiles),
    )


def profile_of_polynomial(poly: IsingPolynomial) -> tuple[float, ...]:
    """Degree-binned squared couplings of an explicit polynomial."""
    bins = [0.0] * (poly.degree + 1)
    for s, c in poly.sorted_terms():
        bins[s.bit_count()] += c * c
    return tuple(bins)


def spectrum_csv(profile: SpectralProfile) -> str:
    """CSV rendering: one row per degree with unary/pairwise split."""
    lines = ["k,P_k,P_k_unary,P_k_pairwise"]
    for k in range(len(profile.per_degree_power)):
        pk = profile.per_degree_power[k]
        pu = profile.unary_power(k) if k >= 1 else 0.0
        pp = profile.pairwise_power(k) if k >= 1 else 0.0
        lines.append(f"{k},{pk:.17e},{pu:.17e},{pp:.17e}")
    return "\n".join(lines) + "\n"
