"""Closed-form phase-space functions: (complex polynomial) x (complex Gaussian).

The exponential part is held as a quadratic form with the sign convention

    f(q, p) = sum_{a,b} c_{ab} q^a p^b * exp(-(x^T A x + l.x + k)),  x = (q, p),

where A is a complex symmetric 2x2 matrix, l a complex 2-vector and k a
complex scalar.  The class is closed under differentiation, multiplication
by polynomials, star products, full-plane integration and marginals, which
is what makes every model in this package exactly computable.

A function is normalizable when Re(A) is positive definite; integration
requires that.  All values are immutable after construction and every
operation is a pure function.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NonNormalizableError, ParameterMismatchError
from .symbols import PRUNE_REL_TOL, PolynomialSymbol


@dataclass(frozen=True)
class QuadForm:
    """Complex quadratic form x^T A x + l.x + k on 2D phase space.

    A is stored symmetric (the off-diagonal entries are averaged on input),
    so the quadratic part reads A_qq q^2 + 2 A_qp q p + A_pp p^2.
    """

    A: np.ndarray
    l: np.ndarray = field(default=None)
    k: complex = 0.0

    def __post_init__(self):
        A = np.asarray(self.A, dtype=complex)
        if A.shape != (2, 2):
            raise ValueError("A must be 2x2")
        A = 0.5 * (A + A.T)
        A.flags.writeable = False
        object.__setattr__(self, "A", A)
        l = np.zeros(2, dtype=complex) if self.l is None else np.asarray(self.l, dtype=complex)
        if l.shape != (2,):
            raise ValueError("l must be a 2-vector")
        l = l.copy()
        l.flags.writeable = False
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "k", complex(self.k))

    @classmethod
    def from_coeffs(cls, aqq, aqp, app, lq=0.0, lp=0.0, k=0.0) -> "QuadForm":
        return cls(np.array([[aqq, aqp], [aqp, app]]), np.array([lq, lp]), k)

    @classmethod
    def zero(cls) -> "QuadForm":
        return cls(np.zeros((2, 2)))

    def is_normalizable(self) -> bool:
        """True when Re(A) is positive definite (the Gaussian decays)."""
        ra = self.A.real
        return ra[0, 0] > 0.0 and np.linalg.det(ra) > 0.0

    def exponent(self, q, p):
        """The full exponent -(x^T A x + l.x + k) at the given points."""
        q = np.asarray(q)
        p = np.asarray(p)
        quad = (self.A[0, 0] * q * q + 2.0 * self.A[0, 1] * q * p
                + self.A[1, 1] * p * p)
        return -(quad + self.l[0] * q + self.l[1] * p + self.k)

    def conjugate(self) -> "QuadForm":
        return QuadForm(np.conj(self.A), np.conj(self.l), np.conj(self.k))

    def __add__(self, other: "QuadForm") -> "QuadForm":
        return QuadForm(self.A + other.A, self.l + other.l, self.k + other.k)

    def allclose(self, other: "QuadForm", tol: float = 1e-12) -> bool:
        return (np.allclose(self.A, other.A, rtol=0.0, atol=tol)
                and np.allclose(self.l, other.l, rtol=0.0, atol=tol)
                and abs(self.k - other.k) <= tol)


def _prune_terms(terms: dict) -> dict:
    if not terms:
        return {}
    biggest = max(abs(c) for c in terms.values())
    if biggest == 0.0:
        return {}
    cut = PRUNE_REL_TOL * biggest
    # extended-precision coefficients (mpmath) pass through unconverted;
    # they carry the cancellation headroom that float64 cannot
    return {k: (complex(c) if isinstance(c, (int, float, complex)) else c)
            for k, c in terms.items() if abs(c) > cut}


class PolyGauss:
    """Polynomial times Gaussian on phase space; see the module docstring."""

    __slots__ = ("terms", "shape", "hbar")

    def __init__(self, terms, shape: QuadForm, hbar: float = 1.0):
        if hbar <= 0:
            raise ValueError("hbar must be positive")
        self.terms = _prune_terms(dict(terms))
        self.shape = shape
        self.hbar = float(hbar)

    @classmethod
    def gaussian(cls, shape: QuadForm, hbar: float = 1.0, coeff=1.0) -> "PolyGauss":
        return cls({(0, 0): coeff}, shape, hbar)

    @classmethod
    def from_symbol(cls, s: PolynomialSymbol, shape: QuadForm, hbar: float = 1.0) -> "PolyGauss":
        return cls(dict(s.coeffs), shape, hbar)

    @property
    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(a + b for a, b in self.terms)

    def poly(self) -> PolynomialSymbol:
        return PolynomialSymbol(self.terms)

    def is_zero(self, tol: float = 0.0) -> bool:
        return not self.terms or max(abs(c) for c in self.terms.values()) <= tol

    # ---- pointwise algebra -------------------------------------------------

    def scale(self, c) -> "PolyGauss":
        return PolyGauss({k: c * v for k, v in self.terms.items()}, self.shape, self.hbar)

    def __add__(self, other: "PolyGauss") -> "PolyGauss":
        self._check_compatible(other)
        if not self.shape.allclose(other.shape):
            raise ParameterMismatchError(
                "cannot add functions with different Gaussian shapes")
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0.0) + c
        return PolyGauss(out, self.shape, self.hbar)

    def __sub__(self, other: "PolyGauss") -> "PolyGauss":
        return self + other.scale(-1.0)

    def mul_symbol(self, s: PolynomialSymbol) -> "PolyGauss":
        out = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in s.coeffs.items():
                key = (a1 + a2, b1 + b2)
                out[key] = out.get(key, 0.0) + c1 * c2
        return PolyGauss(out, self.shape, self.hbar)

    def pointwise_mul(self, other: "PolyGauss") -> "PolyGauss":
        """Plain (non-star) product; shapes add, polynomials convolve."""
        self._check_compatible(other)
        out = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                key = (a1 + a2, b1 + b2)
                out[key] = out.get(key, 0.0) + c1 * c2
        return PolyGauss(out, self.shape + other.shape, self.hbar)

    def conjugate(self) -> "PolyGauss":
        return PolyGauss({k: np.conj(c) for k, c in self.terms.items()},
                         self.shape.conjugate(), self.hbar)

    # ---- calculus ----------------------------------------------------------

    def diff(self, var: str) -> "PolyGauss":
        """Exact partial derivative with respect to 'q' or 'p'.

        d/dq [P e^E] = (dP/dq + P dE/dq) e^E with dE/dq linear, so the class
        is closed under differentiation.
        """
        if var == "q":
            idx, row = 0, self.shape.A[0]
        elif var == "p":
            idx, row = 1, self.shape.A[1]
        else:
            raise ValueError("var must be 'q' or 'p'")
        out = {}
        for (a, b), c in self.terms.items():
            # polynomial part
            if idx == 0 and a > 0:
                out[(a - 1, b)] = out.get((a - 1, b), 0.0) + a * c
            if idx == 1 and b > 0:
                out[(a, b - 1)] = out.get((a, b - 1), 0.0) + b * c
            # exponent part: dE/dx_i = -(2 A x + l)_i
            out[(a + 1, b)] = out.get((a + 1, b), 0.0) - 2.0 * row[0] * c
            out[(a, b + 1)] = out.get((a, b + 1), 0.0) - 2.0 * row[1] * c
            key = (a, b)
            out[key] = out.get(key, 0.0) - self.shape.l[idx] * c
        return PolyGauss(out, self.shape, self.hbar)

    def has_extended_precision(self) -> bool:
        return any(not isinstance(c, complex) for c in self.terms.values())

    def as_float(self) -> "PolyGauss":
        """Coefficients downcast to complex128 (lossy for squeezed states)."""
        return PolyGauss({k: complex(c) for k, c in self.terms.items()},
                         self.shape, self.hbar)

    def evaluate(self, q, p):
        """Pointwise values; finite at every finite point by construction.

        When coefficients carry extended precision the polynomial sum is run
        at that precision before the (harmless) downcast of the value; this
        is what keeps strongly squeezed high-order states accurate, where
        the monomial basis cancels catastrophically in float64.
        """
        q = np.asarray(q, dtype=float)
        p = np.asarray(p, dtype=float)
        if self.has_extended_precision():
            poly = _eval_poly_mp(self.terms, q, p)
        else:
            poly = np.zeros(np.broadcast(q, p).shape, dtype=complex)
            for (a, b), c in self.terms.items():
                poly = poly + c * q ** a * p ** b
        return poly * np.exp(self.shape.exponent(q, p))

    def _check_compatible(self, other: "PolyGauss"):
        if abs(self.hbar - other.hbar) > 1e-15:
            raise ParameterMismatchError(
                f"hbar mismatch: {self.hbar} vs {other.hbar}")

    def __repr__(self):
        return (f"PolyGauss(degree={self.degree}, nterms={len(self.terms)}, "
                f"hbar={self.hbar})")


class PolyGauss1D:
    """One-variable polynomial-Gaussian, the result of a marginal."""

    __slots__ = ("coeffs", "a2", "a1", "a0", "var")

    def __init__(self, coeffs, a2, a1=0.0, a0=0.0, var="q"):
        self.coeffs = {int(a): complex(c) for a, c in dict(coeffs).items()
                       if c != 0.0}
        self.a2 = complex(a2)
        self.a1 = complex(a1)
        self.a0 = complex(a0)
        self.var = var

    @property
    def degree(self) -> int:
        return max(self.coeffs) if self.coeffs else -1

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        poly = np.zeros(x.shape, dtype=complex)
        for a, c in self.coeffs.items():
            poly = poly + c * x ** a
        return poly * np.exp(-(self.a2 * x * x + self.a1 * x + self.a0))

    def integrate(self):
        if self.a2.real <= 0.0:
            raise NonNormalizableError("1D Gaussian part does not decay")
        base = np.sqrt(np.pi / self.a2) * np.exp(
            self.a1 * self.a1 / (4.0 * self.a2) - self.a0)
        moments = _hermite_scalar_1d(max(self.coeffs, default=0),
                                     -self.a1 / (2.0 * self.a2),
                                     1.0 / (2.0 * self.a2))
        return base * sum(c * moments[a] for a, c in self.coeffs.items())

    def __repr__(self):
        return f"PolyGauss1D(var={self.var!r}, degree={self.degree})"


def _hermite_scalar_1d(nmax: int, L: complex, K: complex):
    """H_n = d^n/dJ^n exp(L J + K J^2 / 2) at J=0, via the usual recursion."""
    H = [1.0 + 0.0j, L]
    for n in range(1, nmax + 1):
        H.append(L * H[n] + n * K * H[n - 1])
    return H[: nmax + 1]


_MP_WORK_DPS = 50


def _eval_poly_mp(terms: dict, q: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Polynomial part at extended precision, one point at a time."""
    from mpmath import mp, mpf

    qb, pb = np.broadcast_arrays(q, p)
    flat_q = qb.ravel()
    flat_p = pb.ravel()
    out = np.empty(flat_q.shape, dtype=complex)
    amax = max(a for a, _ in terms)
    bmax = max(b for _, b in terms)
    items = list(terms.items())
    with mp.workdps(_MP_WORK_DPS):
        for i in range(flat_q.size):
            qa = [mpf(1)] * (amax + 1)
            pb_ = [mpf(1)] * (bmax + 1)
            qv = mpf(float(flat_q[i]))
            pv = mpf(float(flat_p[i]))
            for a in range(1, amax + 1):
                qa[a] = qa[a - 1] * qv
            for b in range(1, bmax + 1):
                pb_[b] = pb_[b - 1] * pv
            acc = mpf(0)
            for (a, b), c in items:
                acc += c * qa[a] * pb_[b]
            out[i] = complex(acc)
    return out.reshape(qb.shape)


def _sqrt_det_principal(M: np.ndarray) -> complex:
    """sqrt(det M) through principal square roots of the eigenvalues.

    Valid branch for complex symmetric M with Re(M) >= 0 (the Fresnel limit
    included): eigenvalues stay in the closed right half-plane, so the
    principal roots vary continuously from the real positive-definite case.
    """
    lam = np.linalg.eigvals(M)
    scale = max(abs(lam))
    if scale == 0.0 or np.any(lam.real < -1e-12 * scale):
        raise NonNormalizableError("Gaussian part does not decay")
    return complex(np.prod(np.sqrt(lam)))


def integrate(f: PolyGauss) -> complex:
    """Exact full-plane integral of a normalizable polynomial-Gaussian.

    The Gaussian base integral is pi/sqrt(det A) times the completed-square
    exponential; polynomial prefactors are generated by differentiating a
    source term, which yields a two-variable Hermite recursion with constant
    first-order data.
    """
    if not f.shape.is_normalizable():
        raise NonNormalizableError("Re(A) is not positive definite")
    if not f.terms:
        return 0.0 + 0.0j
    if f.has_extended_precision():
        return _integrate_mp(f)
    A, l, k = f.shape.A, f.shape.l, f.shape.k
    Ainv = np.linalg.inv(A)
    base = np.pi / _sqrt_det_principal(A) * np.exp(0.25 * l @ Ainv @ l - k)
    # moments of q^a p^b under the shifted Gaussian:
    # d^a/dJq d^b/dJp exp((l-J)^T Ainv (l-J)/4) at J=0
    L = -0.5 * Ainv @ l
    K = 0.5 * Ainv
    amax = max(a for a, _ in f.terms)
    bmax = max(b for _, b in f.terms)
    H = np.zeros((amax + 1, bmax + 1), dtype=complex)
    H[0, 0] = 1.0
    for b in range(1, bmax + 1):
        H[0, b] = L[1] * H[0, b - 1]
        if b >= 2:
            H[0, b] += (b - 1) * K[1, 1] * H[0, b - 2]
    for a in range(1, amax + 1):
        for b in range(bmax + 1):
            val = L[0] * H[a - 1, b]
            if a >= 2:
                val += (a - 1) * K[0, 0] * H[a - 2, b]
            if b >= 1:
                val += b * K[0, 1] * H[a - 1, b - 1]
            H[a, b] = val
    return complex(base * sum(c * H[a, b] for (a, b), c in f.terms.items()))


def _integrate_mp(f: PolyGauss) -> complex:
    """integrate() at extended precision (closed 2x2 forms throughout)."""
    from mpmath import exp as mexp, mp, mpc, pi as mpi, sqrt as msqrt

    with mp.workdps(_MP_WORK_DPS):
        a11 = mpc(complex(f.shape.A[0, 0]))
        a12 = mpc(complex(f.shape.A[0, 1]))
        a22 = mpc(complex(f.shape.A[1, 1]))
        l1 = mpc(complex(f.shape.l[0]))
        l2 = mpc(complex(f.shape.l[1]))
        kc = mpc(complex(f.shape.k))
        det = a11 * a22 - a12 * a12
        tr = a11 + a22
        disc = msqrt(tr * tr - 4 * det)
        sqrt_det = msqrt((tr + disc) / 2) * msqrt((tr - disc) / 2)
        i11, i12, i22 = a22 / det, -a12 / det, a11 / det
        quad_l = (l1 * (i11 * l1 + i12 * l2) + l2 * (i12 * l1 + i22 * l2)) / 4
        base = mpi / sqrt_det * mexp(quad_l - kc)
        L1 = -(i11 * l1 + i12 * l2) / 2
        L2 = -(i12 * l1 + i22 * l2) / 2
        K11, K12, K22 = i11 / 2, i12 / 2, i22 / 2
        amax = max(a for a, _ in f.terms)
        bmax = max(b for _, b in f.terms)
        H = [[mpc(0)] * (bmax + 1) for _ in range(amax + 1)]
        H[0][0] = mpc(1)
        for b in range(1, bmax + 1):
            H[0][b] = L2 * H[0][b - 1]
            if b >= 2:
                H[0][b] += (b - 1) * K22 * H[0][b - 2]
        for a in range(1, amax + 1):
            for b in range(bmax + 1):
                val = L1 * H[a - 1][b]
                if a >= 2:
                    val += (a - 1) * K11 * H[a - 2][b]
                if b >= 1:
                    val += b * K12 * H[a - 1][b - 1]
                H[a][b] = val
        total = mpc(0)
        for (a, b), c in f.terms.items():
            total += c * H[a][b]
        return complex(base * total)


def marginal(f: PolyGauss, axis: str) -> PolyGauss1D:
    """Integrate out one variable exactly; axis names the variable removed.

    marginal(f, 'p') returns a function of q.  Requires the integrated
    direction to decay (positive real part of the diagonal A entry).
    """
    if axis == "p":
        keep, drop = 0, 1
    elif axis == "q":
        keep, drop = 1, 0
    else:
        raise ValueError("axis must be 'q' or 'p'")
    if f.has_extended_precision():
        f = f.as_float()
    A, l, k = f.shape.A, f.shape.l, f.shape.k
    alpha = A[drop, drop]
    if alpha.real <= 0.0:
        raise NonNormalizableError("integrated axis does not decay")
    cross = 2.0 * A[keep, drop]      # coefficient of x_keep in beta(x)
    beta0 = l[drop]
    # int x_drop^b exp(-alpha t^2 - (beta - J) t) dt
    #   = sqrt(pi/alpha) exp((beta - J)^2 / (4 alpha)),   beta = cross*x + beta0
    # Derivatives in J give a 1-variable Hermite recursion whose first-order
    # data L(x) = -(cross*x + beta0)/(2 alpha) is affine in the kept variable.
    bmax = max((idx[drop] for idx in f.terms), default=0)
    Kc = 0.5 / alpha
    # H_b as polynomials in x (coefficient arrays, ascending powers)
    H: list[np.ndarray] = [np.array([1.0 + 0.0j])]
    Lpoly = np.array([-beta0 / (2.0 * alpha), -cross / (2.0 * alpha)])
    for b in range(1, bmax + 1):
        prev = H[b - 1]
        cur = np.zeros(len(prev) + 1, dtype=complex)
        cur[: len(prev)] += Lpoly[0] * prev
        cur[1: len(prev) + 1] += Lpoly[1] * prev
        if b >= 2:
            cur[: len(H[b - 2])] += (b - 1) * Kc * H[b - 2]
        H.append(cur)
    coeffs: dict[int, complex] = {}
    for idx, c in f.terms.items():
        a = idx[keep]
        hb = H[idx[drop]]
        for j, hc in enumerate(hb):
            coeffs[a + j] = coeffs.get(a + j, 0.0) + c * hc
    pref = np.sqrt(np.pi / alpha)
    coeffs = {a: pref * c for a, c in coeffs.items()}
    # remaining exponent: -(A_kk x^2 + l_k x + k) + (cross*x + beta0)^2/(4 alpha)
    a2 = A[keep, keep] - cross * cross / (4.0 * alpha)
    a1 = l[keep] - 2.0 * cross * beta0 / (4.0 * alpha)
    a0 = k - beta0 * beta0 / (4.0 * alpha)
    return PolyGauss1D(coeffs, a2, a1, a0, var="q" if axis == "p" else "p")
