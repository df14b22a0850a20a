"""Kolmogorov widths of intersections of l_p balls: order estimates and desk-scale numerics."""

from ._core import (
    NotCovered,
    dist_to_subspace,
    effective_k,
    gauge,
    interpolation_lambda,
    k_from_nu,
    lambda_pq,
    order_ball,
    order_intersection,
    pca_lower_l2,
    regime_boundary,
    run_cli,
    support,
    transfer_lower,
    verify,
    vk_vertices,
    width_bounds,
    width_exact,
)

__all__ = [
    "NotCovered",
    "dist_to_subspace",
    "effective_k",
    "gauge",
    "interpolation_lambda",
    "k_from_nu",
    "lambda_pq",
    "order_ball",
    "order_intersection",
    "pca_lower_l2",
    "regime_boundary",
    "run_cli",
    "support",
    "transfer_lower",
    "verify",
    "vk_vertices",
    "width_bounds",
    "width_exact",
]
