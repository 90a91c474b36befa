"""Dense complex linear algebra used by the rest of the package.

Matrices are plain ``complex128`` numpy arrays. Products and traces go through
numpy; the Hermitian eigensolver is the cyclic Jacobi kernel from
:mod:`mcbound.kernels`.
"""
import numpy as np

from mcbound import kernels
from mcbound.errors import DimensionError, HermiticityError, NumericError, PSDViolation

HERMITIAN_TOL = 1e-9
PSD_TOL = 1e-8


def as_matrix(a, name="matrix"):
    """Validate and convert to a 2-D finite complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DimensionError(f"{name} has non-finite entries")
    return m


def _square(a, name="matrix"):
    m = as_matrix(a, name)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {m.shape}")
    return m


def multiply(a, b):
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def adjoint(a):
    return as_matrix(a).conj().T


def trace(a):
    return complex(np.trace(_square(a)))


def hermiticity_deviation(h):
    h = _square(h)
    return float(np.max(np.abs(h - h.conj().T), initial=0.0))


def check_hermitian(h, tol=HERMITIAN_TOL):
    h = _square(h)
    dev = hermiticity_deviation(h)
    if dev > tol:
        raise HermiticityError(dev, tol)
    return h


def hermitian_eigh(h, tol=HERMITIAN_TOL):
    """Eigenvalues (descending) and orthonormal eigenvectors (columns).

    Raises :class:`HermiticityError` if ``h`` deviates from its adjoint by
    more than ``tol`` and :class:`NumericError` if the Jacobi sweeps do not
    converge.
    """
    h = check_hermitian(h, tol)
    h = 0.5 * (h + h.conj().T)
    w, v, sweeps = kernels.jacobi_eigh(h)
    if sweeps < 0:
        raise NumericError(f"Jacobi eigensolver did not converge on a {h.shape[0]}x{h.shape[0]} matrix")
    return w, v


def hermitian_spectrum(h, tol=HERMITIAN_TOL):
    """Real eigenvalues of a Hermitian matrix in descending order."""
    return hermitian_eigh(h, tol)[0]


def assert_psd(rho, tol=PSD_TOL):
    """Raise :class:`PSDViolation` unless min eigenvalue >= -tol * max(1, trace)."""
    rho = _square(rho)
    w = hermitian_spectrum(rho)
    threshold = -tol * max(1.0, float(np.trace(rho).real))
    if w.size and w[-1] < threshold:
        raise PSDViolation(float(w[-1]), threshold)


def psd_sqrt(rho):
    """Principal square root of a PSD matrix (negative eigenvalues clamped to 0)."""
    w, v = hermitian_eigh(rho)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
