"""Default numerical tolerances.

Every public routine takes an optional ``tol`` argument; when omitted the value
comes from :data:`DEFAULTS`.
"""
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-10
    # eigenvalues below -psd * ||M||_inf are errors, not roundoff
    psd: float = 1e-10
    trace: float = 1e-10
    norm: float = 1e-12
    jacobi_offdiag: float = 1e-14
    jacobi_sweeps: int = 100
    # singular values below this fraction of the largest are treated as null
    svd_null: float = 1e-13
    kraus: float = 1e-9
    gram: float = 1e-9
    # Gram-Schmidt residual under which a vector counts as dependent
    dependence: float = 1e-8
    fidelity_clamp: float = 1e-9

    def with_overrides(self, **kw) -> "Tolerances":
        return replace(self, **kw)


DEFAULTS = Tolerances()
