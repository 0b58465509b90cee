"""A small first-order conic solver for Hermitian semidefinite programs.

Problems take the variational form

    minimize    c . y
    subject to  F0_l + sum_k y_k Fk_l  is PSD      (one block per l)
                A y = b                            (optional equalities)

with real variables ``y`` and complex Hermitian data ``F``.  The solver
runs ADMM on the homogeneous self-dual embedding (the splitting SCS made
standard): primal and dual are folded into one monotone inclusion whose
fixed point encodes either an optimal pair or an infeasibility
certificate.  Each iteration solves one quasi-definite linear system
(factored once) and projects onto the cone product; over-relaxation and
Ruiz equilibration speed up the linear rate, and when the primal and dual
residuals drift far apart the embedded right-hand side is rescaled in
place, which only costs two triangular solves.

Hermitian matrices travel through the cone machinery in "svec"
coordinates: the q real diagonal entries first, then sqrt(2) * Re and
sqrt(2) * Im of the strict upper triangle in row-major order.  This makes
the Euclidean inner product of two svec vectors equal the real
Hilbert-Schmidt pairing of the matrices, so PSD cones stay self-dual in
coordinates.

Everything is deterministic: no randomness, fixed iteration order, and a
fixed factorization, so repeated solves of the same program give
bit-identical output.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse

from decnorms import linalg

_SQRT2 = np.sqrt(2.0)


class SolverError(Exception):
    """Raised for malformed programs; solver outcomes are returned, not raised."""


# ---------------------------------------------------------------------------
# svec coordinates for complex Hermitian matrices
# ---------------------------------------------------------------------------

def svec_dim(q: int) -> int:
    """Real dimension of the Hermitian q x q matrices, which is q**2."""
    return q * q


def _triu_pairs(q: int) -> tuple[np.ndarray, np.ndarray]:
    return np.triu_indices(q, k=1)


def svec(mat: np.ndarray) -> np.ndarray:
    """Isometric real coordinates of a Hermitian matrix.

    Layout: q diagonal entries (real parts), then sqrt(2) * Re of the
    strict upper triangle row-major, then sqrt(2) * Im of the same.
    """
    m = np.asarray(mat, dtype=np.complex128)
    q = m.shape[0]
    iu = _triu_pairs(q)
    t = iu[0].size
    out = np.empty(q * q, dtype=np.float64)
    out[:q] = m.diagonal().real
    if t:
        off = m[iu]
        out[q:q + t] = _SQRT2 * off.real
        out[q + t:] = _SQRT2 * off.imag
    return out


def unsvec(vec: np.ndarray, q: int) -> np.ndarray:
    """Inverse of :func:`svec`."""
    v = np.asarray(vec, dtype=np.float64)
    if v.shape != (q * q,):
        raise ValueError(f"svec vector for size {q} must have length {q * q}")
    iu = _triu_pairs(q)
    t = iu[0].size
    m = np.zeros((q, q), dtype=np.complex128)
    m[np.arange(q), np.arange(q)] = v[:q]
    if t:
        off = (v[q:q + t] + 1j * v[q + t:]) / _SQRT2
        m[iu] = off
        m[iu[1], iu[0]] = off.conj()
    return m


def _unsvec_batch(vecs: np.ndarray, q: int, iu) -> np.ndarray:
    nb = vecs.shape[0]
    t = iu[0].size
    mats = np.zeros((nb, q, q), dtype=np.complex128)
    mats[:, np.arange(q), np.arange(q)] = vecs[:, :q]
    if t:
        off = (vecs[:, q:q + t] + 1j * vecs[:, q + t:]) / _SQRT2
        mats[:, iu[0], iu[1]] = off
        mats[:, iu[1], iu[0]] = off.conj()
    return mats


def _svec_batch(mats: np.ndarray, q: int, iu) -> np.ndarray:
    nb = mats.shape[0]
    t = iu[0].size
    out = np.empty((nb, q * q), dtype=np.float64)
    out[:, :q] = mats[:, np.arange(q), np.arange(q)].real
    if t:
        off = mats[:, iu[0], iu[1]]
        out[:, q:q + t] = _SQRT2 * off.real
        out[:, q + t:] = _SQRT2 * off.imag
    return out


# ---------------------------------------------------------------------------
# Program description
# ---------------------------------------------------------------------------

@dataclass
class PsdBlockSpec:
    """One PSD constraint block ``F0 + sum_k y_k F_k >= 0``.

    ``lin`` holds the svec coordinates of the F_k: column k is
    ``svec(F_k)``, shape ``(size**2, num_vars)``.  Keeping the linear part
    in coordinates avoids ever materializing dense F_k tensors.
    """

    size: int
    f0: np.ndarray
    lin: scipy.sparse.csr_matrix

    def __post_init__(self):
        q = self.size
        self.f0 = linalg.symmetrize(self.f0, rtol=1e-9)
        if self.f0.shape != (q, q):
            raise SolverError(f"F0 must be {q}x{q}, got {self.f0.shape}")
        if self.lin.shape[0] != q * q:
            raise SolverError(
                f"linear part has {self.lin.shape[0]} rows, expected {q * q}"
            )


@dataclass
class ConicProgram:
    """Hermitian SDP in variational form; see the module docstring."""

    objective: np.ndarray
    psd_blocks: list[PsdBlockSpec]
    eq_a: np.ndarray | None = None
    eq_b: np.ndarray | None = None

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=np.float64).ravel()
        if not np.all(np.isfinite(self.objective)):
            raise SolverError("objective contains non-finite entries")
        m = self.objective.size
        if len(self.psd_blocks) == 0:
            raise SolverError("program needs at least one PSD block")
        for blk in self.psd_blocks:
            if blk.lin.shape[1] != m:
                raise SolverError(
                    f"block linear part has {blk.lin.shape[1]} columns, expected {m}"
                )
        if (self.eq_a is None) != (self.eq_b is None):
            raise SolverError("equality data needs both a matrix and a right-hand side")
        if self.eq_a is not None:
            self.eq_a = np.asarray(self.eq_a, dtype=np.float64)
            self.eq_b = np.asarray(self.eq_b, dtype=np.float64).ravel()
            if self.eq_a.ndim != 2 or self.eq_a.shape[1] != m:
                raise SolverError(f"equality matrix must be (p, {m})")
            if self.eq_b.shape[0] != self.eq_a.shape[0]:
                raise SolverError("equality right-hand side length mismatch")
            if not (np.all(np.isfinite(self.eq_a)) and np.all(np.isfinite(self.eq_b))):
                raise SolverError("equality data contains non-finite entries")

    @property
    def num_vars(self) -> int:
        return self.objective.size

    @property
    def num_eq(self) -> int:
        return 0 if self.eq_a is None else self.eq_a.shape[0]


class BlockBuilder:
    """Accumulates one PSD block from matrix-valued contributions.

    All package SDPs place Hermitian variables (in svec coordinates) at
    diagonal sub-positions of a constraint block, which in svec terms is a
    coordinate-for-coordinate copy.  The three primitives below cover
    every program the package builds.
    """

    def __init__(self, size: int, num_vars: int):
        self.size = size
        self.num_vars = num_vars
        self.f0 = np.zeros((size, size), dtype=np.complex128)
        self._rows: list[np.ndarray] = []
        self._cols: list[np.ndarray] = []
        self._vals: list[np.ndarray] = []

    def _svec_coords(self, qsub: int, row0: int):
        """svec coordinates in the big block for a qsub-sized diagonal slot."""
        q = self.size
        iu_big = _triu_pairs(q)
        t_big = iu_big[0].size
        # map: pair (a, b), a < b inside the sub-block -> big pair (row0+a, row0+b)
        diag_big = np.arange(row0, row0 + qsub)
        iu_sub = _triu_pairs(qsub)
        if iu_sub[0].size:
            a_big = iu_sub[0] + row0
            b_big = iu_sub[1] + row0
            # row-major strict-upper index of (a, b) in the big block
            pair_idx = a_big * q - (a_big * (a_big + 1)) // 2 + (b_big - a_big - 1)
            re_big = q + pair_idx
            im_big = q + t_big + pair_idx
        else:
            re_big = np.array([], dtype=int)
            im_big = np.array([], dtype=int)
        return diag_big, re_big, im_big

    def add_constant(self, mat: np.ndarray, row0: int = 0):
        m = np.asarray(mat, dtype=np.complex128)
        qsub = m.shape[0]
        self.f0[row0:row0 + qsub, row0:row0 + qsub] += m

    def add_constant_offdiag(self, mat: np.ndarray, row0: int, col0: int):
        """Place a constant rectangular block at (row0, col0), mirrored."""
        m = np.asarray(mat, dtype=np.complex128)
        r, c = m.shape
        if row0 == col0:
            raise SolverError("use add_constant for diagonal placements")
        self.f0[row0:row0 + r, col0:col0 + c] += m
        self.f0[col0:col0 + c, row0:row0 + r] += m.conj().T

    def add_hermitian_var(self, var_offset: int, qsub: int, row0: int, sign: float = 1.0):
        """Add ``sign * P`` at a diagonal slot, P a Hermitian svec variable."""
        diag_big, re_big, im_big = self._svec_coords(qsub, row0)
        rows = np.concatenate([diag_big, re_big, im_big])
        cols = var_offset + np.arange(qsub * qsub)
        self._rows.append(rows)
        self._cols.append(cols)
        self._vals.append(np.full(qsub * qsub, float(sign)))

    def add_scalar_identity(self, var_index: int, qsub: int, row0: int, sign: float = 1.0):
        """Add ``sign * y_k * I`` on a diagonal slot."""
        diag_big = np.arange(row0, row0 + qsub)
        self._rows.append(diag_big)
        self._cols.append(np.full(qsub, var_index))
        self._vals.append(np.full(qsub, float(sign)))

    def add_partial_trace_var(self, var_offset: int, n: int, c: int, row0: int, sign: float = 1.0):
        """Add ``sign * ptr(C)`` where C is an (n*c) Hermitian svec variable.

        The partial trace sums over the first (size n) tensor factor:
        ``ptr(C)[a, b] = sum_r C[(r, a), (r, b)]`` with the row index major,
        leaving a c x c matrix placed at the diagonal slot ``row0``.
        """
        qv = n * c
        tv = qv * (qv - 1) // 2
        diag_big, re_big, im_big = self._svec_coords(c, row0)
        iu_sub = _triu_pairs(c)
        rows_all, cols_all, vals_all = [], [], []
        for r in range(n):
            # diagonal coordinates of C at ((r, a), (r, a))
            src_diag = r * c + np.arange(c)
            rows_all.append(diag_big)
            cols_all.append(var_offset + src_diag)
            vals_all.append(np.full(c, float(sign)))
            if iu_sub[0].size:
                a_big = r * c + iu_sub[0]
                b_big = r * c + iu_sub[1]
                pair_idx = a_big * qv - (a_big * (a_big + 1)) // 2 + (b_big - a_big - 1)
                rows_all.append(re_big)
                cols_all.append(var_offset + qv + pair_idx)
                vals_all.append(np.full(pair_idx.size, float(sign)))
                rows_all.append(im_big)
                cols_all.append(var_offset + qv + tv + pair_idx)
                vals_all.append(np.full(pair_idx.size, float(sign)))
        self._rows.append(np.concatenate(rows_all))
        self._cols.append(np.concatenate(cols_all))
        self._vals.append(np.concatenate(vals_all))

    def build(self) -> PsdBlockSpec:
        q = self.size
        if self._rows:
            rows = np.concatenate(self._rows)
            cols = np.concatenate(self._cols)
            vals = np.concatenate(self._vals)
        else:
            rows = cols = vals = np.array([])
        lin = scipy.sparse.coo_matrix(
            (vals, (rows, cols)), shape=(q * q, self.num_vars)
        ).tocsr()
        return PsdBlockSpec(size=q, f0=self.f0, lin=lin)


# ---------------------------------------------------------------------------
# Solution container and certificate verification
# ---------------------------------------------------------------------------

@dataclass
class ConicSolution:
    """Solver output; ``status`` is optimal, max_iterations or infeasible_suspected."""

    status: str
    primal_value: float
    y: np.ndarray
    dual_value: float
    psd_residual: float
    equality_residual: float
    gap: float
    iterations: int
    res_primal: float
    res_dual: float
    dual_psd: list[np.ndarray] = field(default_factory=list, repr=False)
    dual_eq: np.ndarray | None = field(default=None, repr=False)
    message: str = ""
    solve_seconds: float = 0.0


@dataclass
class CertificateReport:
    clean: bool
    discrepancies: list[str]
    psd_residual: float
    equality_residual: float
    primal_value: float
    dual_value: float
    gap: float
    stationarity_residual: float
    dual_psd_residual: float


def block_matrices(program: ConicProgram, y: np.ndarray) -> list[np.ndarray]:
    """Evaluate every constraint block ``F0 + sum_k y_k F_k`` at ``y``."""
    out = []
    for blk in program.psd_blocks:
        vec = svec(blk.f0) + blk.lin @ y
        out.append(unsvec(vec, blk.size))
    return out


def verify_certificate(program: ConicProgram, sol: ConicSolution, tol: float = 1e-6) -> CertificateReport:
    """Recompute all residuals of a reported solution from scratch.

    Primal feasibility, objective values, dual feasibility (cone membership
    and stationarity of the Lagrangian) and the duality gap are rebuilt
    from the program data alone; any disagreement with the reported fields
    beyond ``tol`` is listed in ``discrepancies``.
    """
    issues: list[str] = []
    y = np.asarray(sol.y, dtype=np.float64)
    if y.shape != (program.num_vars,):
        return CertificateReport(False, [f"variable vector has shape {y.shape}"], np.inf,
                                 np.inf, np.nan, np.nan, np.inf, np.inf, np.inf)
    if sol.status != "optimal":
        issues.append(f"status is {sol.status!r}, not optimal")

    psd_res = 0.0
    for idx, mat in enumerate(block_matrices(program, y)):
        w = np.linalg.eigvalsh((mat + mat.conj().T) / 2.0)
        psd_res = max(psd_res, max(0.0, -float(w[0])))
    eq_res = 0.0
    if program.eq_a is not None:
        eq_res = float(np.max(np.abs(program.eq_a @ y - program.eq_b), initial=0.0))
    primal = float(program.objective @ y)

    stat_res = np.inf
    dual_psd_res = np.inf
    dual = np.nan
    if len(sol.dual_psd) != len(program.psd_blocks):
        issues.append("dual PSD variables missing or mismatched in count")
    else:
        dual_psd_res = 0.0
        stat = -program.objective.copy()
        dual = 0.0
        for blk, z in zip(program.psd_blocks, sol.dual_psd):
            zh = (z + z.conj().T) / 2.0
            wz = np.linalg.eigvalsh(zh)
            dual_psd_res = max(dual_psd_res, max(0.0, -float(wz[0])))
            zv = svec(zh)
            stat = stat + blk.lin.T @ zv
            dual -= float(svec(blk.f0) @ zv)
        if program.eq_a is not None:
            mu = sol.dual_eq if sol.dual_eq is not None else np.zeros(program.num_eq)
            stat = stat + program.eq_a.T @ mu
            dual += float(program.eq_b @ mu)
        # stationarity: sum_l <F_k, Z_l> + (A^T mu)_k = c_k for every k
        stat_res = float(np.max(np.abs(stat), initial=0.0))
    gap = abs(primal - dual) / (1.0 + abs(primal) + abs(dual)) if np.isfinite(dual) else np.inf

    scale = 1.0 + abs(primal)
    if psd_res > tol:
        issues.append(f"PSD residual {psd_res:.3e} exceeds {tol:.1e}")
    if abs(psd_res - sol.psd_residual) > tol:
        issues.append(f"reported PSD residual {sol.psd_residual:.3e} is off by "
                      f"{abs(psd_res - sol.psd_residual):.3e}")
    if eq_res > tol:
        issues.append(f"equality residual {eq_res:.3e} exceeds {tol:.1e}")
    if abs(eq_res - sol.equality_residual) > tol:
        issues.append("reported equality residual disagrees with recomputation")
    if abs(primal - sol.primal_value) > tol * scale:
        issues.append(f"reported primal value {sol.primal_value:.9g} differs from "
                      f"recomputed {primal:.9g}")
    if np.isfinite(dual) and abs(dual - sol.dual_value) > tol * (1.0 + abs(dual)):
        issues.append(f"reported dual value {sol.dual_value:.9g} differs from "
                      f"recomputed {dual:.9g}")
    if np.isfinite(stat_res) and stat_res > tol * (1.0 + float(np.abs(program.objective).max(initial=0.0))):
        issues.append(f"dual stationarity residual {stat_res:.3e} exceeds tolerance")
    if dual_psd_res > tol:
        issues.append(f"dual cone violation {dual_psd_res:.3e}")
    if np.isfinite(gap) and gap > max(10 * tol, 1e-6):
        issues.append(f"recomputed duality gap {gap:.3e} is large")

    return CertificateReport(
        clean=(len(issues) == 0),
        discrepancies=issues,
        psd_residual=psd_res,
        equality_residual=eq_res,
        primal_value=primal,
        dual_value=dual,
        gap=gap,
        stationarity_residual=stat_res,
        dual_psd_residual=dual_psd_res,
    )


# ---------------------------------------------------------------------------
# The HSDE ADMM engine
# ---------------------------------------------------------------------------

def _ruiz_equilibrate(a: np.ndarray, block_slices: list[slice], iters: int):
    """Diagonal row/column scaling; PSD block rows share one scalar.

    Zero-cone (equality) rows scale individually.  Returns (d, e) with the
    scaled matrix D A E written into ``a`` in place.
    """
    rows, cols = a.shape
    d = np.ones(rows)
    e = np.ones(cols)
    for _ in range(iters):
        am = np.abs(a)
        row_max = am.max(axis=1, initial=0.0)
        # uniform scale inside each PSD block keeps the cone geometry intact
        for sl in block_slices:
            if sl.stop > sl.start:
                row_max[sl] = row_max[sl].max()
        row_scale = np.ones_like(row_max)
        nz = row_max > 0
        row_scale[nz] = 1.0 / np.sqrt(row_max[nz])
        a *= row_scale[:, None]
        d *= row_scale
        col_max = np.abs(a).max(axis=0, initial=0.0)
        col_scale = np.ones_like(col_max)
        nz = col_max > 0
        col_scale[nz] = 1.0 / np.sqrt(col_max[nz])
        a *= col_scale[None, :]
        e *= col_scale
    return d, e


def solve(
    program: ConicProgram,
    *,
    gap_tol: float = 1e-8,
    feas_tol: float = 1e-8,
    max_iter: int = 100_000,
    check_every: int = 25,
    over_relax: float = 1.5,
    ruiz_iters: int = 10,
    adaptive: bool = True,
    infeas_tol: float = 1e-8,
    verbose: bool = False,
) -> ConicSolution:
    """Solve a program to the requested normalized tolerances.

    Termination: primal residual / (1 + ||b||), dual residual / (1 + ||c||)
    both below ``feas_tol`` and relative duality gap below ``gap_tol``.
    When the iteration cap is hit the best candidate seen is returned with
    status ``max_iterations``; infeasibility certificates come back as
    ``infeasible_suspected`` (a dual-infeasibility certificate, meaning an
    unbounded primal, is reported the same way and distinguished in the
    message).
    """
    t0 = time.perf_counter()
    m = program.num_vars
    p = program.num_eq
    qs = [blk.size for blk in program.psd_blocks]
    cone_rows = sum(q * q for q in qs)
    rows = p + cone_rows

    # --- assemble A (rows x m) and b in svec coordinates -------------------
    a = np.zeros((rows, m), dtype=np.float64)
    b = np.zeros(rows, dtype=np.float64)
    if p:
        a[:p] = program.eq_a
        b[:p] = program.eq_b
    block_slices: list[slice] = []
    off = p
    for blk in program.psd_blocks:
        q2 = blk.size ** 2
        sl = slice(off, off + q2)
        block_slices.append(sl)
        # cone row: s_block = svec(F0) + lin y  =>  -lin y + s = svec(F0)
        a[sl] = -blk.lin.toarray()
        b[sl] = svec(blk.f0)
        off += q2
    c = program.objective.copy()

    # --- equilibration and b/c normalization -------------------------------
    d_row, e_col = _ruiz_equilibrate(a, block_slices, ruiz_iters)
    b_s = d_row * b
    c_s = e_col * c
    beta = 1.0 / max(float(np.linalg.norm(b_s)), 1e-10)
    gamma = 1.0 / max(float(np.linalg.norm(c_s)), 1e-10)
    beta = float(np.clip(beta, 1e-6, 1e6))
    gamma = float(np.clip(gamma, 1e-6, 1e6))
    b_s *= beta
    c_s *= gamma

    at = np.ascontiguousarray(a.T)

    # --- linear system: M = [[I, A^T], [-A, I]] via (I + A^T A) ------------
    if m:
        gram = np.eye(m) + at @ a
        chol = scipy.linalg.cho_factor(gram, lower=True, check_finite=False)

    def solve_m(wx: np.ndarray, wy: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        if m == 0:
            return wx, wy.copy()
        x = scipy.linalg.cho_solve(chol, wx - at @ wy, check_finite=False)
        return x, wy + a @ x

    def refresh_h():
        hx, hy = c_s, b_s
        gx, gy = solve_m(hx, hy)
        denom = 1.0 + float(hx @ gx + hy @ gy)
        return gx, gy, denom

    g_x, g_y, denom = refresh_h()

    # --- cone projection of the dual segment -------------------------------
    groups: dict[int, list[int]] = {}
    for idx, q in enumerate(qs):
        groups.setdefault(q, []).append(idx)
    group_data = []
    for q, idxs in sorted(groups.items()):
        gather = np.concatenate([
            np.arange(block_slices[i].start - p, block_slices[i].stop - p) for i in idxs
        ])
        group_data.append((q, len(idxs), gather, _triu_pairs(q)))

    def project_psd_segment(seg: np.ndarray) -> np.ndarray:
        out = np.empty_like(seg)
        for q, nb, gather, iu in group_data:
            mats = _unsvec_batch(seg[gather].reshape(nb, q * q), q, iu)
            w, v = np.linalg.eigh(mats)
            np.clip(w, 0.0, None, out=w)
            proj = (v * w[:, None, :]) @ v.conj().swapaxes(-1, -2)
            out[gather] = _svec_batch(proj, q, iu).ravel()
        return out

    # --- iterate ------------------------------------------------------------
    alpha = float(over_relax)
    u = np.zeros(m + rows + 1)
    v = np.zeros(m + rows + 1)
    u[-1] = 1.0
    v[-1] = 1.0

    norm_b = float(np.linalg.norm(b))
    norm_c = float(np.linalg.norm(c))

    best_score = np.inf
    best_point: tuple | None = None
    status = None
    message = ""
    iterations = 0
    last_adapt = 0
    adapt_count = 0

    def dist_to_cone(neg_w: np.ndarray) -> float:
        """Euclidean distance of a row-space vector to the cone K."""
        sq = float(np.dot(neg_w[:p], neg_w[:p]))  # zero cone: full distance
        for sl, q in zip(block_slices, qs):
            mat = unsvec(neg_w[sl], q)
            wv = np.linalg.eigvalsh(mat)
            neg = np.clip(wv, None, 0.0)
            sq += float(np.dot(neg, neg))
        return float(np.sqrt(sq))

    for it in range(1, max_iter + 1):
        w = u + v
        t_x, t_y = solve_m(w[:m], w[m:-1])
        tau_t = (w[-1] + c_s @ t_x + b_s @ t_y) / denom
        z_x = t_x - tau_t * g_x
        z_y = t_y - tau_t * g_y

        # over-relaxed point
        r_x = alpha * z_x + (1 - alpha) * u[:m]
        r_y = alpha * z_y + (1 - alpha) * u[m:-1]
        r_t = alpha * tau_t + (1 - alpha) * u[-1]

        # u update: project (relaxed - v) onto R^m x (R^p x PSD) x R_+
        un = np.empty_like(u)
        un[:m] = r_x - v[:m]
        dual_seg = r_y - v[m:-1]
        if p:
            un[m:m + p] = dual_seg[:p]
        un[m + p:-1] = project_psd_segment(dual_seg[p:])
        un[-1] = max(r_t - v[-1], 0.0)

        # v update keeps the pair complementary
        v[:m] += un[:m] - r_x
        v[m:-1] += un[m:-1] - r_y
        v[-1] += un[-1] - r_t
        u = un

        if it % check_every and it != max_iter:
            continue
        if not np.all(np.isfinite(u)):
            raise SolverError(f"iterate diverged to non-finite values at iteration {it}")

        tau = u[-1]
        kappa = v[-1]

        if tau > 1e-9 * max(1.0, kappa):
            x_hat = u[:m] / tau
            eta_hat = u[m:-1] / tau
            s_hat = v[m:-1] / tau
            # unscaled candidates
            x = e_col * x_hat / beta
            eta = d_row * eta_hat / gamma
            s = (s_hat / d_row) / beta
            # residuals in original data coordinates
            rp_vec = (a @ x_hat + s_hat - b_s) / (d_row * beta)
            rd_vec = (at @ eta_hat + c_s) / (e_col * gamma) if m else np.zeros(0)
            res_p = float(np.linalg.norm(rp_vec)) / (1.0 + norm_b)
            res_d = float(np.linalg.norm(rd_vec)) / (1.0 + norm_c)
            pobj = float(c @ x)
            dobj = -float(b @ eta)
            res_g = abs(pobj - dobj) / (1.0 + abs(pobj) + abs(dobj))

            if verbose:
                print(f"  iter {it:6d}  res_p {res_p:.3e}  res_d {res_d:.3e}  gap {res_g:.3e}")

            score = max(res_p, res_d, res_g)
            if score < best_score:
                best_score = score
                best_point = (x.copy(), eta.copy(), s.copy(), pobj, dobj, res_p, res_d, res_g, it)

            if res_p <= feas_tol and res_d <= feas_tol and res_g <= gap_tol:
                status = "optimal"
                iterations = it
                break

            # rebalance the embedding when one residual lags far behind
            if (adaptive and adapt_count < 5 and it - last_adapt >= 500 and it >= 500
                    and max(res_p, res_d) > 10 * feas_tol and res_d > 0):
                ratio = res_p / res_d
                if ratio > 100.0 or ratio < 0.01:
                    f = float(np.clip(np.sqrt(ratio), 1.0 / 16, 16.0))
                    b_s *= f
                    beta *= f
                    u[:m] *= f
                    v[m:-1] *= f
                    v[-1] *= f
                    g_x, g_y, denom = refresh_h()
                    last_adapt = it
                    adapt_count += 1
                    if verbose:
                        print(f"  iter {it:6d}  rebalanced rhs by {f:.3g}")
        else:
            # tau collapsed: look for infeasibility certificates
            eta_c = d_row * u[m:-1] / gamma
            bty = float(b @ eta_c)
            if bty < -1e-12:
                atn = float(np.linalg.norm((at @ u[m:-1]) / (e_col * gamma))) if m else 0.0
                if atn * max(1.0, norm_b) <= infeas_tol * (-bty):
                    status = "infeasible_suspected"
                    message = "primal infeasibility certificate found"
                    iterations = it
                    break
            x_c = e_col * u[:m] / beta
            ctx = float(c @ x_c)
            if ctx < -1e-12:
                w_rows = (a @ u[:m]) / (d_row * beta)
                dist = dist_to_cone(-w_rows)
                if dist * max(1.0, norm_c) <= infeas_tol * (-ctx):
                    status = "infeasible_suspected"
                    message = "dual infeasibility certificate found; primal appears unbounded"
                    iterations = it
                    break

        if it == max_iter:
            status = "max_iterations"
            iterations = it

    if status is None:
        status = "max_iterations"
        iterations = max_iter

    elapsed = time.perf_counter() - t0

    if status == "infeasible_suspected":
        return ConicSolution(
            status=status,
            primal_value=np.nan,
            y=np.full(m, np.nan),
            dual_value=np.nan,
            psd_residual=np.nan,
            equality_residual=np.nan,
            gap=np.nan,
            iterations=iterations,
            res_primal=np.nan,
            res_dual=np.nan,
            message=message,
            solve_seconds=elapsed,
        )

    if best_point is None:
        raise SolverError(
            f"no usable iterate after {iterations} iterations "
            f"(tau stayed degenerate; the program may be pathological)"
        )

    x, eta, s, pobj, dobj, res_p, res_d, res_g, seen_at = best_point
    if status == "max_iterations":
        message = (f"iteration limit {max_iter} reached; best residuals "
                   f"primal {res_p:.3e} dual {res_d:.3e} gap {res_g:.3e} at iteration {seen_at}")

    # direct feasibility measurements at the returned point
    psd_res = 0.0
    for mat in block_matrices(program, x):
        wv = np.linalg.eigvalsh((mat + mat.conj().T) / 2.0)
        psd_res = max(psd_res, max(0.0, -float(wv[0])))
    eq_res = 0.0
    if p:
        eq_res = float(np.max(np.abs(program.eq_a @ x - program.eq_b), initial=0.0))

    dual_psd = [unsvec(eta[sl], q) for sl, q in zip(block_slices, qs)]
    dual_eq = -eta[:p] if p else None

    return ConicSolution(
        status=status,
        primal_value=pobj,
        y=x,
        dual_value=dobj,
        psd_residual=psd_res,
        equality_residual=eq_res,
        gap=res_g,
        iterations=iterations,
        res_primal=res_p,
        res_dual=res_d,
        dual_psd=dual_psd,
        dual_eq=dual_eq,
        message=message,
        solve_seconds=elapsed,
    )


def dump_diagnostics(program: ConicProgram, sol: ConicSolution, path: str):
    """Write a plain-text account of a solved program next to its solution.

    The format is line-oriented ``key: value`` pairs followed by the
    variable vector and per-block minimum eigenvalues, meant for attaching
    to bug reports rather than for machine consumption.
    """
    lines = [
        f"variables: {program.num_vars}",
        f"equalities: {program.num_eq}",
        f"psd_block_sizes: {[blk.size for blk in program.psd_blocks]}",
        f"status: {sol.status}",
        f"primal_value: {sol.primal_value!r}",
        f"dual_value: {sol.dual_value!r}",
        f"gap: {sol.gap!r}",
        f"psd_residual: {sol.psd_residual!r}",
        f"equality_residual: {sol.equality_residual!r}",
        f"res_primal: {sol.res_primal!r}",
        f"res_dual: {sol.res_dual!r}",
        f"iterations: {sol.iterations}",
        f"message: {sol.message}",
    ]
    if np.all(np.isfinite(sol.y)):
        for idx, mat in enumerate(block_matrices(program, sol.y)):
            wv = np.linalg.eigvalsh((mat + mat.conj().T) / 2.0)
            lines.append(f"block_{idx}_min_eig: {float(wv[0])!r}")
        lines.append("y: " + " ".join(repr(float(t)) for t in sol.y))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
