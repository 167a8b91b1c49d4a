"""Radial sigma_k Loewner-Nirenberg lab: cone algebra, conformal spectra,
admissible-metric certificates and a continuation solver."""

import json

from ._lnlab import (
    LnlabError,
    acceptance_groups,
    contains_ray_e1,
    f_eval,
    grad_f,
    in_cone,
    mu_plus,
    radial_schouten_spectrum,
    sigma_k,
    tau_deform,
    verify,
)
from . import _lnlab

__all__ = [
    "LnlabError",
    "acceptance_groups",
    "certify_scan",
    "contains_ray_e1",
    "delta_sweep",
    "f_eval",
    "grad_f",
    "in_cone",
    "mu_plus",
    "radial_schouten_spectrum",
    "sigma_k",
    "solve",
    "tau_deform",
    "verify",
]


def _domain_args(domain, radius, inner, outer):
    return dict(domain=domain, radius=radius, inner=inner, outer=outer)


def solve(n, k, tau, *, domain="ball", radius=1.0, inner=1.0, outer=2.0,
          delta=0.1, grid=1000, rhs=(0.5,)):
    """Continuation in tau from 0; returns the report as a dict."""
    return json.loads(_lnlab.solve_json(
        n, k, tau, delta=delta, grid=grid, rhs=list(rhs),
        **_domain_args(domain, radius, inner, outer)))


def delta_sweep(n, k, tau, deltas, *, domain="ball", radius=1.0, inner=1.0,
                outer=2.0, grid=1000, rhs=(0.5,)):
    """Solves for each boundary value in the decreasing schedule."""
    return json.loads(_lnlab.delta_sweep_json(
        n, k, tau, deltas=list(deltas), grid=grid, rhs=list(rhs),
        **_domain_args(domain, radius, inner, outer)))


def certify_scan(x, n, k):
    """Certificate for v = 1 + x in flat space, verified against Gamma_k^+."""
    return json.loads(_lnlab.certify_scan_json(list(x), n, k))
