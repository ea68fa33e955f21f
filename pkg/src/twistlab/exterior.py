"""Pointwise multilinear algebra of (p, q)-covectors with a Hermitian metric.

Everything in this module acts at a single point: forms are finite coefficient
vectors over the monomial basis ``dz^I ^ dzbar^J``, the metric is an n x n
positive definite Hermitian Gram matrix, and all adjoints are taken with
respect to the inner product that declares the monomials of an orthonormal
coframe orthonormal (no combinatorial factors).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .multiindex import (
    all_indices,
    bidegree_basis,
    basis_position,
    check_multi_index,
    conj_table,
    degree_pairs,
    wedge_table,
)

_EIG_FLOOR = 1e-12


@dataclass(frozen=True)
class PointForm:
    """A (p, q)-form at a point, stored as a dense vector over the monomial basis."""

    n: int
    p: int
    q: int
    coeffs: np.ndarray = field(default=None)

    def __post_init__(self):
        dim = len(bidegree_basis(self.n, self.p, self.q))
        if self.coeffs is None:
            object.__setattr__(self, "coeffs", np.zeros(dim, dtype=complex))
        else:
            c = np.asarray(self.coeffs, dtype=complex)
            if c.shape != (dim,):
                raise ValueError(f"expected {dim} coefficients, got shape {c.shape}")
            object.__setattr__(self, "coeffs", c)

    @property
    def degree(self):
        return self.p + self.q

    @classmethod
    def monomial(cls, n, I, J, value=1.0):
        I = check_multi_index(I, n)
        J = check_multi_index(J, n)
        f = cls(n, len(I), len(J))
        f.coeffs[basis_position(n, len(I), len(J))[(I, J)]] = value
        return f

    @classmethod
    def scalar(cls, n, value=1.0):
        return cls.monomial(n, (), (), value)

    @classmethod
    def covector(cls, n, coeffs, kind):
        """Degree-1 form from n coefficients; kind is '1,0' or '0,1'."""
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.shape != (n,):
            raise ValueError("covector needs n coefficients")
        if kind == "1,0":
            return cls(n, 1, 0, coeffs)
        if kind == "0,1":
            return cls(n, 0, 1, coeffs)
        raise ValueError(f"unknown covector kind {kind!r}")

    def __add__(self, other):
        self._check_compatible(other)
        return PointForm(self.n, self.p, self.q, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check_compatible(other)
        return PointForm(self.n, self.p, self.q, self.coeffs - other.coeffs)

    def __mul__(self, scalar):
        return PointForm(self.n, self.p, self.q, self.coeffs * scalar)

    __rmul__ = __mul__

    def __neg__(self):
        return PointForm(self.n, self.p, self.q, -self.coeffs)

    def conj(self):
        out = PointForm(self.n, self.q, self.p)
        for pos_out, pos_in, sign in conj_table(self.n, self.p, self.q):
            out.coeffs[pos_out] = sign * np.conj(self.coeffs[pos_in])
        return out

    def norm_inf(self):
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    def _check_compatible(self, other):
        if (self.n, self.p, self.q) != (other.n, other.p, other.q):
            raise ValueError(
                f"bidegree mismatch: ({self.p},{self.q}) vs ({other.p},{other.q})"
            )


class HermitianMetricPoint:
    """Hermitian metric at a point, given by the Gram matrix of omega.

    ``omega = i * sum_{j,k} gram[j,k] dz_j ^ dzbar_k`` with ``gram`` Hermitian
    positive definite; both properties are checked on construction.
    """

    def __init__(self, gram):
        gram = np.asarray(gram, dtype=complex)
        if gram.ndim != 2 or gram.shape[0] != gram.shape[1]:
            raise ValueError("gram must be square")
        if np.max(np.abs(gram - gram.conj().T)) > 1e-12 * max(1.0, np.max(np.abs(gram))):
            raise ValueError("gram matrix is not Hermitian")
        w = np.linalg.eigvalsh(gram)
        if w.min() <= _EIG_FLOOR:
            raise ValueError(f"gram matrix is not positive definite (min eig {w.min():.3e})")
        self.n = gram.shape[0]
        self.gram = gram
        self._frame = None

    @classmethod
    def standard(cls, n):
        return cls(np.eye(n))

    @classmethod
    def random(cls, n, rng):
        """Positive definite Gram built as A A^H + I."""
        a = rng.uniform(-1, 1, (n, n)) + 1j * rng.uniform(-1, 1, (n, n))
        return cls(a @ a.conj().T + np.eye(n))

    def as_form(self):
        """omega as a (1, 1)-PointForm (coefficient i*gram[j,k] on dz_j^dzbar_k)."""
        form = PointForm(self.n, 1, 1)
        pos = basis_position(self.n, 1, 1)
        for j in range(1, self.n + 1):
            for k in range(1, self.n + 1):
                form.coeffs[pos[((j,), (k,))]] = 1j * self.gram[j - 1, k - 1]
        return form

    def frame(self):
        if self._frame is None:
            self._frame = MetricFrame.from_metric(self)
        return self._frame


class MetricFrame:
    """Change of coframe taking the coordinate coframe to an omega-orthonormal one.

    With ``C = change_of_frame`` the covectors ``phi = C dz`` satisfy
    ``omega = i sum_a phi^a ^ phibar^a``, which pins ``C^T conj(C) = gram``.
    """

    def __init__(self, change_of_frame, gram):
        self.n = change_of_frame.shape[0]
        self.change_of_frame = change_of_frame
        residual = change_of_frame.T @ np.conj(change_of_frame) - gram
        rel = np.max(np.abs(residual)) / max(1.0, np.max(np.abs(gram)))
        if rel > 1e-13:
            raise ValueError(f"frame does not reproduce gram (relative error {rel:.3e})")
        self._inv = np.linalg.inv(change_of_frame)
        self._tensors = {}

    @classmethod
    def from_metric(cls, metric):
        low = np.linalg.cholesky(metric.gram)
        return cls(low.T, metric.gram)

    def _minor_tensor(self, mat, p):
        """T[A, I] = det(mat[rows A, cols I]) over length-p multi-indices."""
        idx = all_indices(self.n, p)
        t = np.empty((len(idx), len(idx)), dtype=complex)
        for a, A in enumerate(idx):
            rows = [i - 1 for i in A]
            for b, B in enumerate(idx):
                cols = [i - 1 for i in B]
                sub = mat[np.ix_(rows, cols)]
                t[a, b] = np.linalg.det(sub) if p else 1.0
        return t

    def to_frame_tensors(self, p, q):
        """Matrices (Tp, Tq) with frame coeffs = Tp @ coords @ Tq^T blockwise."""
        key = (p, q)
        if key not in self._tensors:
            # dz^I = sum_A det(Cinv[I, A]) phi^A, so coefficients pick up the
            # transposed minor tensors of Cinv (and its conjugate on the J side).
            tp = self._minor_tensor(self._inv, p).T
            tq = self._minor_tensor(np.conj(self._inv), q).T
            self._tensors[key] = (tp, tq)
        return self._tensors[key]

    def to_frame(self, form: PointForm) -> np.ndarray:
        if form.coeffs.size == 0:
            return form.coeffs.copy()
        tp, tq = self.to_frame_tensors(form.p, form.q)
        mat = form.coeffs.reshape(
            len(all_indices(form.n, form.p)), len(all_indices(form.n, form.q))
        )
        return (tp @ mat @ tq.T).reshape(-1)

    def from_frame(self, coeffs, p, q) -> PointForm:
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.size == 0:
            return PointForm(self.n, p, q)
        tp, tq = self.to_frame_tensors(p, q)
        mat = coeffs.reshape(len(all_indices(self.n, p)), len(all_indices(self.n, q)))
        out = np.linalg.solve(tp, mat)
        out = np.linalg.solve(tq, out.T).T
        return PointForm(self.n, p, q, out.reshape(-1))


def wedge(a: PointForm, b: PointForm) -> PointForm:
    """Wedge product; degree overflow yields the zero form of the overflowed bidegree."""
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} vs {b.n}")
    p, q = a.p + b.p, a.q + b.q
    out = PointForm(a.n, p, q)
    if p > a.n or q > a.n or min(a.p, a.q, b.p, b.q) < 0:
        return out
    for pos_out, pos_a, pos_b, sign in wedge_table(a.n, a.p, a.q, b.p, b.q):
        out.coeffs[pos_out] += sign * a.coeffs[pos_a] * b.coeffs[pos_b]
    return out


def lefschetz(u: PointForm, metric: HermitianMetricPoint) -> PointForm:
    """Multiplication by omega."""
    return wedge(metric.as_form(), u)


def inner_product(a: PointForm, b: PointForm, metric: HermitianMetricPoint) -> complex:
    """Pointwise Hermitian inner product; monomials of an orthonormal coframe are orthonormal."""
    a._check_compatible(b)
    frame = metric.frame()
    return complex(np.vdot(frame.to_frame(b), frame.to_frame(a)))


def form_norm(a: PointForm, metric: HermitianMetricPoint) -> float:
    return float(np.sqrt(max(inner_product(a, a, metric).real, 0.0)))


def operator_matrix(op, n, p, q):
    """Dense matrix of a linear map on (p, q)-forms over the monomial basis."""
    basis = bidegree_basis(n, p, q)
    cols = []
    for k in range(len(basis)):
        e = PointForm(n, p, q)
        e.coeffs[k] = 1.0
        cols.append(op(e))
    out = cols[0]
    mat = np.zeros((out.coeffs.size, len(basis)), dtype=complex)
    for k, col in enumerate(cols):
        mat[:, k] = col.coeffs
    return mat, (out.p, out.q)


def gram_matrix(n, p, q, metric):
    """Gram matrix of the monomial basis of (p, q)-forms."""
    frame = metric.frame()
    tp, tq = frame.to_frame_tensors(p, q)
    # coefficient map to the orthonormal frame is kron(tp, tq); the frame basis
    # is orthonormal, so G = F^H F
    f = np.kron(tp, tq)
    return f.conj().T @ f


def metric_adjoint_matrix(op, n, p, q, metric):
    """Dense matrix of the metric adjoint of ``op`` restricted to (p, q)-forms.

    Solves the pairing identity <op v, u> = <v, op* u> by dense linear algebra;
    this is the brute-force oracle the closed-form adjoints are tested against.
    """
    mat, (po, qo) = operator_matrix(op, n, p, q)
    g_in = gram_matrix(n, p, q, metric)
    g_out = gram_matrix(n, po, qo, metric)
    return np.linalg.solve(g_in, mat.conj().T @ g_out), (po, qo)


def lambda_op(u: PointForm, metric: HermitianMetricPoint) -> PointForm:
    """Metric adjoint of the Lefschetz operator."""
    if u.p <= 0 or u.q <= 0 or u.p > u.n or u.q > u.n:
        return PointForm(u.n, u.p - 1, u.q - 1)
    frame = metric.frame()
    flat = _flat_lefschetz_matrix(u.n, u.p - 1, u.q - 1)
    out = flat.conj().T @ frame.to_frame(u)
    return frame.from_frame(out, u.p - 1, u.q - 1)


def _flat_lefschetz_matrix(n, p, q):
    """Matrix of wedging with the standard omega from (p, q) to (p+1, q+1)."""
    std = HermitianMetricPoint.standard(n)

    def op(f):
        return wedge(std.as_form(), f)

    mat, _ = operator_matrix(op, n, p, q)
    return mat


def adjoint_wedge(alpha: PointForm, u: PointForm, metric: HermitianMetricPoint) -> PointForm:
    """Metric adjoint of wedging by a degree-1 covector, i.e. a contraction.

    In an orthonormal coframe this is the interior product with the metric
    dual of ``alpha``; realised here by conjugating the flat contraction with
    the frame change.
    """
    if alpha.degree != 1:
        raise ValueError("alpha must be a covector of pure degree 1")
    return adjoint_wedge_form(alpha, u, metric)


def adjoint_wedge_form(beta: PointForm, u: PointForm, metric: HermitianMetricPoint) -> PointForm:
    """Metric adjoint of wedging by an arbitrary fixed form ``beta``."""
    p, q = u.p - beta.p, u.q - beta.q
    if p < 0 or q < 0 or u.p > u.n or u.q > u.n:
        return PointForm(u.n, p, q)
    frame = metric.frame()
    beta_flat = frame.to_frame(beta)
    table = wedge_table(u.n, beta.p, beta.q, p, q)
    u_flat = frame.to_frame(u)
    out = np.zeros(len(bidegree_basis(u.n, p, q)), dtype=complex)
    # flat adjoint of (beta ^ .): out includes conj(beta) coefficients
    for pos_out, pos_b, pos_in, sign in table:
        out[pos_in] += sign * np.conj(beta_flat[pos_b]) * u_flat[pos_out]
    return frame.from_frame(out, p, q)


# ---------------------------------------------------------------------------
# identity catalog for the pointwise layer
# ---------------------------------------------------------------------------

POINT_IDENTITIES = ("PID-1", "PID-2", "PID-3", "PID-4")


@dataclass
class PointResidualReport:
    """Residuals of a pointwise identity, per bidegree, over randomized trials."""

    identity: str
    n: int
    trials: int
    per_bidegree: dict
    max_residual: float

    def __str__(self):
        rows = ", ".join(f"({p},{q})={r:.2e}" for (p, q), r in sorted(self.per_bidegree.items()))
        return f"{self.identity} n={self.n} trials={self.trials} max={self.max_residual:.3e} [{rows}]"


def _random_covector(n, rng):
    return rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n)


def _commutator(a, b):
    return lambda f: a(b(f)) - b(a(f))


def verify_pointwise_identity(identity, n, trials=20, seed=0):
    """Brute-force check of one pointwise identity over the full monomial basis.

    For each trial a random Hermitian metric and random covector data are
    drawn, both sides are assembled as dense matrices on every bidegree, and
    the maximum absolute entry of the difference is recorded.
    """
    if identity not in POINT_IDENTITIES:
        raise ValueError(f"unknown pointwise identity {identity!r}")
    if n > 4:
        raise ValueError("full-basis enumeration is limited to n <= 4")
    rng = np.random.default_rng(seed)
    per = {}
    for _ in range(trials):
        metric = HermitianMetricPoint.random(n, rng)
        data = {
            # independent pointwise data: d_eta_bar is a free (1,0)-covector,
            # dbar_eta its conjugate; eta a free non-vanishing scalar
            "d_eta_bar": PointForm.covector(n, _random_covector(n, rng), "1,0"),
            "eta": complex(rng.uniform(0.5, 2.0) * (1 + 0.3j * rng.uniform(-1, 1))),
        }
        data["dbar_eta"] = data["d_eta_bar"].conj()
        for p, q in degree_pairs(n):
            res = _point_identity_residual(identity, n, p, q, metric, data)
            per[(p, q)] = max(per.get((p, q), 0.0), res)
    return PointResidualReport(identity, n, trials, per, max(per.values()))


def _point_identity_residual(identity, n, p, q, metric, data):
    L = lambda f: lefschetz(f, metric)
    Lam = lambda f: lambda_op(f, metric)
    d_eta_bar = data["d_eta_bar"]
    dbar_eta = data["dbar_eta"]

    def wedge_by(alpha):
        return lambda f: wedge(alpha, f)

    def adj_wedge_by(alpha):
        return lambda f: adjoint_wedge(alpha, f, metric)

    def mat(op):
        m, _ = operator_matrix(op, n, p, q)
        return m

    def max_abs(m):
        return float(np.max(np.abs(m))) if m.size else 0.0

    if identity == "PID-1":
        # four contraction/commutator identities for a complex scalar:
        # (i)  [d_eta_bar ^ ., Lam] = i (dbar_eta ^ .)*
        # (ii) [dbar_eta ^ ., Lam]  = -i (d_eta_bar ^ .)*
        # (iii) [L, (d_eta_bar ^ .)*] = -i dbar_eta ^ .
        # (iv)  [L, (dbar_eta ^ .)*]  =  i d_eta_bar ^ .
        pairs = [
            (_commutator(wedge_by(d_eta_bar), Lam), lambda f: 1j * adj_wedge_by(dbar_eta)(f)),
            (_commutator(wedge_by(dbar_eta), Lam), lambda f: -1j * adj_wedge_by(d_eta_bar)(f)),
            (_commutator(L, adj_wedge_by(d_eta_bar)), lambda f: -1j * wedge_by(dbar_eta)(f)),
            (_commutator(L, adj_wedge_by(dbar_eta)), lambda f: 1j * wedge_by(d_eta_bar)(f)),
        ]
        return max(max_abs(mat(a) - mat(b)) for a, b in pairs)

    if identity == "PID-2":
        # [Lam, (1/eta) dbar_eta ^ omega ^ .] on k-forms equals
        # (n-k-1)(1/eta) dbar_eta ^ . + omega ^ ((i/eta)(d_eta_bar ^ .)*)
        eta = data["eta"]
        k = p + q
        omega = metric.as_form()
        dbar_eta_w = wedge(dbar_eta, omega)

        def lhs(f):
            return Lam(wedge(dbar_eta_w, f) * (1 / eta)) - (1 / eta) * wedge(dbar_eta_w, Lam(f))

        def rhs(f):
            t1 = ((n - k - 1) / eta) * wedge(dbar_eta, f)
            t2 = wedge(omega, (1j / eta) * adjoint_wedge(d_eta_bar, f, metric))
            return t1 + t2

        return max_abs(mat(lhs) - mat(rhs))

    if identity == "PID-3":
        # [Lam, omega ^ .] = (n - k) Id on k-forms
        k = p + q

        def lhs(f):
            return Lam(L(f)) - L(Lam(f))

        def rhs(f):
            return (n - k) * f

        return max_abs(mat(lhs) - mat(rhs))

    if identity == "PID-4":
        # closed-form contraction equals the dense pairing solution, for both
        # covector types
        res = 0.0
        for alpha in (d_eta_bar, dbar_eta):
            dense, (po, qo) = metric_adjoint_matrix(wedge_by(alpha), n, p, q, metric)
            if len(bidegree_basis(n, po, qo)) == 0:
                continue
            closed, _ = operator_matrix(adj_wedge_by(alpha), n, po, qo)
            res = max(res, max_abs(dense - closed))
        return res

    raise AssertionError(identity)
