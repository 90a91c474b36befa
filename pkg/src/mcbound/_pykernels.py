"""Pure-Python kernels, used when the compiled extension is unavailable.

Same algorithms and return conventions as ``_ckernels.pyx``; row and column
updates are vectorized with numpy, the sweep loops stay in Python.
"""
import numpy as np

_FLIP_SIGNS = np.array([-1.0, 1.0, 1.0, -1.0])


def _jacobi(a, max_sweeps):
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    a[np.diag_indices(n)] = a.diagonal().real
    fro = np.sqrt(np.sum(np.abs(a) ** 2))
    iu = np.triu_indices(n, 1)
    for sweep in range(max_sweeps + 1):
        off = np.sum(np.abs(a[iu]) ** 2)
        if off == 0.0 or np.sqrt(off) <= 1e-18 * fro:
            return a.diagonal().real.copy(), v, sweep
        if sweep == max_sweeps:
            break
        for p in range(n):
            for q in range(p + 1, n):
                g = a[p, q]
                r = abs(g)
                if r == 0.0:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                if sweep > 3 and abs(app) + 1e2 * r == abs(app) and abs(aqq) + 1e2 * r == abs(aqq):
                    a[p, q] = a[q, p] = 0.0
                    continue
                e = g / r
                ec = e.conjugate()
                theta = (aqq - app) / (2.0 * r)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                x = a[:, p].copy()
                y = a[:, q].copy()
                a[:, p] = c * x - s * ec * y
                a[:, q] = s * e * x + c * y
                x = a[p, :].copy()
                y = a[q, :].copy()
                a[p, :] = c * x - s * e * y
                a[q, :] = s * ec * x + c * y
                a[p, q] = a[q, p] = 0.0
                a[p, p] = app - t * r
                a[q, q] = aqq + t * r
                x = v[:, p].copy()
                y = v[:, q].copy()
                v[:, p] = c * x - s * ec * y
                v[:, q] = s * e * x + c * y
    return a.diagonal().real.copy(), v, -1


def jacobi_eigh(h, max_sweeps=100):
    """Eigen-decomposition of a Hermitian matrix, eigenvalues descending.

    Returns ``(w, v, sweeps)``; ``sweeps == -1`` signals non-convergence.
    """
    a = np.array(h, dtype=np.complex128, order="C", copy=True)
    if a.shape[0] == 0:
        return np.empty(0), np.empty((0, 0), dtype=np.complex128), 0
    w, v, sweeps = _jacobi(a, max_sweeps)
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order], sweeps


def _wootters_one(rho):
    # lambdas = singular values of X^T (Y x Y) X with rho = X X^dag, taken from
    # the Hermitian dilation so rounding is not amplified by a square root
    w, vec, sweeps = _jacobi(rho.copy(), 100)
    if sweeps < 0:
        raise ArithmeticError("Jacobi iteration did not converge in Wootters kernel")
    x = vec * np.sqrt(np.clip(w, 0.0, None))
    tau = x.T @ (_FLIP_SIGNS[:, None] * x[::-1])
    big = np.zeros((8, 8), dtype=np.complex128)
    big[:4, 4:] = tau
    big[4:, :4] = tau.conj().T
    lam, _, sweeps = _jacobi(big, 100)
    if sweeps < 0:
        raise ArithmeticError("Jacobi iteration did not converge in Wootters kernel")
    lam = np.sort(lam)[::-1][:4]
    roots = np.clip(lam, 0.0, None)
    conc = max(0.0, roots[0] - roots[1] - roots[2] - roots[3])
    return conc, w.min(), lam[3], rho.diagonal().real.sum()


def wootters_batch(stack):
    """Wootters concurrence for a ``(m, 4, 4)`` stack.

    Returns an ``(m, 4)`` float array with columns
    ``(concurrence, min eigenvalue of rho, smallest lambda, trace)``.
    """
    stack = np.ascontiguousarray(stack, dtype=np.complex128)
    out = np.zeros((stack.shape[0], 4))
    for i, rho in enumerate(stack):
        out[i] = _wootters_one(rho)
    return out


def _digit_projections(dims, masks):
    dims = [int(d) for d in dims]
    size = int(np.prod(dims))
    flat = np.arange(size)
    strides = np.ones(len(dims), dtype=np.intp)
    for p in range(len(dims) - 2, -1, -1):
        strides[p] = strides[p + 1] * dims[p + 1]
    proj = np.zeros((len(masks), size), dtype=np.intp)
    for mi, m in enumerate(masks):
        for p in range(len(dims)):
            if int(m) >> p & 1:
                proj[mi] += (flat // strides[p]) % dims[p] * strides[p]
    return proj


def swap_family_sums(psi, dims, masks):
    """For each party bitmask S: sum_{r,h} |a_r a_h - a_r' a_h'|^2."""
    a = np.ascontiguousarray(psi, dtype=np.complex128).ravel()
    proj = _digit_projections(dims, list(masks))
    idx = np.arange(a.size)
    base = np.outer(a, a)
    out = np.zeros(len(proj))
    for mi, pr in enumerate(proj):
        rp = (idx - pr)[:, None] + pr[None, :]
        hp = (idx - pr)[None, :] + pr[:, None]
        out[mi] = np.sum(np.abs(base - a[rp] * a[hp]) ** 2)
    return out
