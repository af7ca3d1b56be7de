"""Equal-weight quadrature on [-1, 1] from sums of scaled discrete uniform
variables, with certified interval arithmetic underneath."""

from ._qmoments import (
    QmomentsError,
    coefficients,
    coeffs_json,
    figure,
    get_precision,
    h_hat,
    nodes,
    nodes_json,
    roots,
    set_precision,
    verify,
    __version__,
)

__all__ = [
    "QmomentsError",
    "coefficients",
    "coeffs_json",
    "figure",
    "get_precision",
    "h_hat",
    "nodes",
    "nodes_json",
    "roots",
    "set_precision",
    "verify",
    "__version__",
]
