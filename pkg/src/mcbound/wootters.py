"""Two-qubit concurrence for unnormalized PSD 4x4 operators.

``C(rho) = max(0, l1 - l2 - l3 - l4)`` with ``l_i`` the descending square
roots of the eigenvalues of ``sqrt(rho) rho~ sqrt(rho)``, where
``rho~ = (Y x Y) rho* (Y x Y)``. The kernels obtain them as singular values of
``X^T (Y x Y) X`` (``rho = X X^dag``) through a Hermitian dilation, which keeps
everything on the Jacobi eigensolver and avoids square roots of eigenvalues
that are zero up to rounding. ``C`` is positively homogeneous: ``C(c rho) = c C(rho)``.
"""
import numpy as np

from mcbound import kernels, linalg
from mcbound.errors import DimensionError, NumericError, PSDViolation
from mcbound.qstate import DensityMatrix

_SIGMA_Y = np.array([[0, -1j], [1j, 0]])
SPIN_FLIP = np.kron(_SIGMA_Y, _SIGMA_Y).real


def _as_two_qubit(rho):
    if isinstance(rho, DensityMatrix):
        if rho.dims != (2, 2):
            raise DimensionError(f"two-qubit state expected, got dims {list(rho.dims)}")
        return rho.matrix
    m = linalg.as_matrix(rho)
    if m.shape != (4, 4):
        raise DimensionError(f"two-qubit state must be 4x4, got {m.shape}")
    return m


def spin_flip(rho):
    m = _as_two_qubit(rho)
    return SPIN_FLIP @ m.conj() @ SPIN_FLIP


def concurrence_many(stack, psd_tol=linalg.PSD_TOL, herm_tol=linalg.HERMITIAN_TOL):
    """Concurrences of a ``(m, 4, 4)`` stack of two-qubit operators.

    Raises :class:`PSDViolation` when an operator has an eigenvalue below
    ``-psd_tol * max(1, trace)`` and :class:`NumericError` when a computed
    lambda is below ``-psd_tol * trace``.
    """
    stack = np.asarray(stack, dtype=np.complex128)
    if stack.ndim != 3 or stack.shape[1:] != (4, 4):
        raise DimensionError(f"expected an (m, 4, 4) stack, got {stack.shape}")
    if stack.shape[0] == 0:
        return np.zeros(0)
    if not np.all(np.isfinite(stack)):
        raise DimensionError("non-finite entries in two-qubit stack")
    dev = float(np.max(np.abs(stack - stack.conj().transpose(0, 2, 1))))
    if dev > herm_tol:
        raise linalg.HermiticityError(dev, herm_tol)
    try:
        out = kernels.wootters_batch(stack)
    except ArithmeticError as exc:
        raise NumericError(str(exc)) from exc
    conc, min_rho, min_r, tr = out.T
    floor = -psd_tol * np.maximum(1.0, tr)
    bad = np.flatnonzero(min_rho < floor)
    if bad.size:
        raise PSDViolation(float(min_rho[bad[0]]), float(floor[bad[0]]))
    bad = np.flatnonzero(min_r < -psd_tol * np.maximum(tr, 0.0) - 1e-300)
    if bad.size:
        raise NumericError(f"negative Wootters lambda {min_r[bad[0]]:.3e}")
    return conc


def concurrence_two_qubit(rho):
    """Wootters concurrence of a single (possibly unnormalized) two-qubit operator."""
    return float(concurrence_many(_as_two_qubit(rho)[None])[0])
