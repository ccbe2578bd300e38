"""Degree truncation of spin polynomials and its error certificate.

Dropping every monomial above a cutoff degree is an orthogonal
projection onto the low-degree subspace, because spin monomials are
exactly the Walsh basis.  The certificate bounds the worst-case
pointwise deviation by the l1 norm of the dropped couplings, records
the l2 (typical-amplitude) residual, and reports the noise-floor
ratios used to judge whether the dropped mass is perturbative.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .polynomial import IsingPolynomial

__all__ = [
    "TruncationCertificate",
    "truncate",
    "residual",
    "certify",
    "certificate_json",
    "noise_floor_ok",
]


@dataclass(frozen=True)
class TruncationCertificate:
    """One-pass summary of what a degree cutoff discards.

    ``epsilon`` is the l1 norm of omitted couplings (a sound bound on
    the pointwise truncation error anywhere on the hypercube);
    ``l2_residual`` is the root of the omitted squared mass.  The two
    ratio fields compare omitted to kept power, the strong variant
    additionally scaled by n / k_max; both exclude the constant term.
    ``common_sign_saturation`` marks certificates whose bound is
    attained exactly at the all-plus configuration because every
    omitted coupling shares one sign (vacuously true when nothing is
    omitted).
    """

    k_max: int
    num_qubits: int
    epsilon: float
    l2_residual: float
    power_below: float
    power_above: float
    omitted_nonzero: int
    omitted_combinatorial: int
    weak_noise_floor_ratio: float | None
    strong_noise_floor_margin: float | None
    common_sign_saturation: bool


def truncate(poly: IsingPolynomial, k_max: int) -> IsingPolynomial:
    """Drop all monomials of degree above ``k_max``.

    Kept coefficients are carried over bit-identically.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    terms = {s: c for s, c in poly.terms.items() if s.bit_count() <= k_max}
    return IsingPolynomial(poly.num_qubits, terms)


def residual(poly: IsingPolynomial, k_max: int) -> IsingPolynomial:
    """Exactly the dropped terms: truncate + residual == poly termwise."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    terms = {s: c for s, c in poly.terms.items() if s.bit_count() > k_max}
    return IsingPolynomial(poly.num_qubits, terms)


def certify(poly: IsingPolynomial, k_max: int) -> TruncationCertificate:
    """Certificate for truncating ``poly`` at ``k_max``.

    Single pass over the stored terms, in canonical order so the
    floating-point sums are reproducible run to run.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    if not poly.terms:
        raise ValueError("cannot certify an empty polynomial")
    n = poly.num_qubits
    epsilon = 0.0
    power_above = 0.0
    power_below = 0.0
    omitted = 0
    saw_positive = False
    saw_negative = False
    for s, c in poly.sorted_terms():
        k = s.bit_count()
        if k == 0:
            continue
        if k <= k_max:
            power_below += c * c
        else:
            epsilon += abs(c)
            power_above += c * c
            omitted += 1
            if c > 0:
                saw_positive = True
            else:
                saw_negative = True

    kept_modes = sum(math.comb(n, k) for k in range(0, min(k_max, n) + 1))
    combinatorial = (1 << n) - kept_modes

    if power_above == 0.0:
        weak: float | None = 0.0
    elif power_below > 0.0:
        weak = power_above / power_below
    else:
        weak = None
    if weak is None or n == 0:
        strong: float | None = None
    else:
        strong = weak * n / k_max

    return TruncationCertificate(
        k_max=k_max,
        num_qubits=n,
        epsilon=epsilon,
        l2_residual=math.sqrt(power_above),
        power_below=power_below,
        power_above=power_above,
        omitted_nonzero=omitted,
        omitted_combinatorial=combinatorial,
        weak_noise_floor_ratio=weak,
        strong_noise_floor_margin=strong,
        common_sign_saturation=not (saw_positive and saw_negative),
    )


def certificate_json(cert: TruncationCertificate) -> str:
    doc = {
        "k_max": cert.k_max,
        "epsilon": cert.epsilon,
        "l2_residual": cert.l2_residual,
        "P_below": cert.power_below,
        "P_above": cert.power_above,
        "omitted_nonzero": cert.omitted_nonzero,
        "omitted_combinatorial": cert.omitted_combinatorial,
        "weak_ratio": cert.weak_noise_floor_ratio,
        "strong_margin": cert.strong_noise_floor_margin,
        "common_sign_saturation": cert.common_sign_saturation,
    }
    return json.dumps(doc, indent=2) + "\n"


def noise_floor_ok(
    cert: TruncationCertificate,
    weak_threshold: float = 0.1,
    strong_threshold: float = 0.1,
) -> tuple[bool, bool]:
    """(weak, strong) pass flags against configurable thresholds.

    A ratio of None (no kept power to compare against) fails unless
    nothing was omitted at all.
    """
    weak = cert.weak_noise_floor_ratio
    strong = cert.strong_noise_floor_margin
    weak_ok = weak is not None and weak <= weak_threshold
    strong_ok = strong is not None and strong <= strong_threshold
    if cert.power_above == 0.0:
        return True, True
    return weak_ok, strong_ok
