"""Independent brute-force oracles used by the test-suite."""

import math

import mpmath
import numpy as np
from scipy import linalg


def sphere_lambda1(n, a=1.0, cells=400):
    """First nonzero Laplace eigenvalue of the round n-sphere of radius a.

    Zonal functions u(theta) solve -(sin^{n-1} u')' = lam sin^{n-1} u on
    [0, pi] with natural (Neumann) ends; dense cell-centred finite volumes.
    """
    h = math.pi / cells
    centres = (np.arange(cells) + 0.5) * h
    faces = np.arange(1, cells) * h
    wf = np.sin(faces) ** (n - 1)
    mass = np.sin(centres) ** (n - 1) * h
    A = np.zeros((cells, cells))
    for i, w in enumerate(wf):
        c = w / h
        A[i, i] += c
        A[i + 1, i + 1] += c
        A[i, i + 1] -= c
        A[i + 1, i] -= c
    vals = linalg.eigh(A, np.diag(mass), eigvals_only=True, subset_by_index=[0, 1])
    return vals[1] / a**2


def absorption_series(x0, t, L=1.0, diffusion=4.0, terms=200):
    """P(absorbed at 0 by t) for d rho = sqrt(2 diffusion) dW on (0, L), reflecting at L."""
    s = 0.0
    for j in range(terms):
        mu = (j + 0.5) * math.pi / L
        s += 2.0 / (mu * L) * math.sin(mu * x0) * math.exp(-diffusion * mu * mu * t)
    return 1.0 - s


def absorption_pde(x0, t, L=1.0, diffusion=4.0, nodes=400):
    """Same probability from a dense 1-D grid: v_t = diffusion v_xx, v(0)=0, v_x(L)=0, v(.,0)=1."""
    h = L / nodes
    main = np.full(nodes, -2.0)
    upper = np.ones(nodes - 1)
    lower = np.ones(nodes - 1)
    lower[-1] = 2.0  # ghost node for the Neumann end
    A = (np.diag(lower, -1) + np.diag(main) + np.diag(upper, 1)) * (diffusion / h**2)
    v = linalg.expm(A * t) @ np.ones(nodes)
    x = np.arange(1, nodes + 1) * h
    return 1.0 - float(np.interp(x0, np.concatenate([[0.0], x]), np.concatenate([[0.0], v])))


def mp_big_g(k, r, dps=40):
    """G(k, r) in multiprecision, straight from the three-branch definition."""
    with mpmath.workdps(dps):
        k, r = mpmath.mpf(k), mpmath.mpf(r)
        if k > 0:
            return float(-2 * mpmath.sqrt(k) * mpmath.tan(mpmath.sqrt(k) * r / 2))
        if k < 0:
            a = mpmath.sqrt(-k)
            return float(2 * a * mpmath.tanh(a * r / 2))
        return 0.0


def mp_index_energy(k, r, dps=30):
    """Quadrature of the Jacobi energy in multiprecision with the un-normalised sin/cos."""
    with mpmath.workdps(dps):
        k, r = mpmath.mpf(k), mpmath.mpf(r)
        a = mpmath.sqrt(abs(k))
        if k > 0:
            s, c = (lambda t: mpmath.sin(a * t)), (lambda t: mpmath.cos(a * t))
            sp, cp = (lambda t: a * mpmath.cos(a * t)), (lambda t: -a * mpmath.sin(a * t))
        else:
            s, c = (lambda t: mpmath.sinh(a * t)), (lambda t: mpmath.cosh(a * t))
            sp, cp = (lambda t: a * mpmath.cosh(a * t)), (lambda t: a * mpmath.sinh(a * t))
        A = (1 - c(r)) / s(r)
        j = lambda t: c(t) + A * s(t)
        jp = lambda t: cp(t) + A * sp(t)
        return float(mpmath.quad(lambda t: jp(t) ** 2 - k * j(t) ** 2, [0, r]))
