"""Linear maps between finite-dimensional C*-algebras and their Choi matrices.

A map ``u`` from ``A = M_{d_1} + ... + M_{d_k}`` into ``B`` is stored by its
images on the matrix units of ``A``, enumerated domain-block by domain-block
in row-major order: block ``i`` contributes the images of ``e_rs`` for
``r = 0..d_i-1`` (outer) and ``s = 0..d_i-1`` (inner).

The Choi matrix of ``u`` splits along the domain blocks.  For block ``i``
it is the ``d_i * m`` square matrix (``m`` the codomain embedding size)

    C_i = sum_{r,s} e_rs (x) embed(u(e_rs))

with the domain index major, so the (r, s) sub-block of ``C_i`` of size
``m x m`` equals the assembled image of ``e_rs``.

Worked example: the identity on M_2 has a single Choi block of size 4 with
ones at positions (0, 0), (0, 3), (3, 0) and (3, 3) and zeros elsewhere,
i.e. the rank-one projector onto the maximally entangled vector scaled to
trace 2.  The transpose map on M_2 instead produces the 4x4 swap matrix,
whose smallest eigenvalue is -1, which is how ``is_cp`` rejects it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from decnorms import linalg
from decnorms.algebra import (
    AlgebraElement,
    AlgebraShape,
    from_assembled,
    matrix_algebra,
    abelian_algebra,
    unit,
    zero,
)


@dataclass
class LinearMapRep:
    """A linear map stored by matrix-unit images.

    ``images[k]`` is the image in the codomain of the k-th matrix unit of
    the domain under the enumeration of :func:`matrix_unit_index`.
    """

    domain: AlgebraShape
    codomain: AlgebraShape
    images: list[AlgebraElement] = field(repr=False)

    def __post_init__(self):
        want = self.domain.total_dim
        if len(self.images) != want:
            raise ValueError(f"need {want} matrix-unit images, got {len(self.images)}")
        for k, img in enumerate(self.images):
            if img.shape != self.codomain:
                raise ValueError(
                    f"image {k} lives in shape {img.shape.block_dims}, "
                    f"expected {self.codomain.block_dims}"
                )

    def image(self, block: int, r: int, s: int) -> AlgebraElement:
        return self.images[matrix_unit_index(self.domain, block, r, s)]


def matrix_unit_index(shape: AlgebraShape, block: int, r: int, s: int) -> int:
    """Flat position of the matrix unit ``e_rs`` of the given block."""
    dims = shape.block_dims
    if not 0 <= block < len(dims):
        raise ValueError(f"block {block} out of range for {dims}")
    d = dims[block]
    if not (0 <= r < d and 0 <= s < d):
        raise ValueError(f"unit index ({r}, {s}) out of range for a {d}x{d} block")
    offset = sum(dd * dd for dd in dims[:block])
    return offset + r * d + s


def matrix_units(shape: AlgebraShape):
    """Yield ``(flat_index, block, r, s)`` in enumeration order."""
    k = 0
    for i, d in enumerate(shape.block_dims):
        for r in range(d):
            for s in range(d):
                yield k, i, r, s
                k += 1


def matrix_unit_element(shape: AlgebraShape, block: int, r: int, s: int) -> AlgebraElement:
    e = zero(shape)
    e.blocks[block][r, s] = 1.0
    return e


def apply_map(u: LinearMapRep, x: AlgebraElement) -> AlgebraElement:
    """Evaluate ``u`` on an element by expanding it over matrix units."""
    if x.shape != u.domain:
        raise ValueError(
            f"element shape {x.shape.block_dims} does not match domain {u.domain.block_dims}"
        )
    out = zero(u.codomain)
    for k, i, r, s in matrix_units(u.domain):
        c = x.blocks[i][r, s]
        if c != 0:
            out = out + c * u.images[k]
    return out


def map_from_function(domain: AlgebraShape, codomain: AlgebraShape, f) -> LinearMapRep:
    """Tabulate ``f`` on matrix units.  ``f`` takes an AlgebraElement."""
    images = [f(matrix_unit_element(domain, i, r, s)) for _, i, r, s in matrix_units(domain)]
    return LinearMapRep(domain, codomain, images)


def identity_map(shape: AlgebraShape) -> LinearMapRep:
    return map_from_function(shape, shape, lambda e: e)


def map_from_linf(xs: list[AlgebraElement]) -> LinearMapRep:
    """Map from the abelian algebra of dimension n sending ``e_j`` to ``xs[j]``."""
    if len(xs) == 0:
        raise ValueError("need at least one coefficient")
    codomain = xs[0].shape
    return LinearMapRep(abelian_algebra(len(xs)), codomain, [x.copy() for x in xs])


def linf_coefficients(u: LinearMapRep) -> list[AlgebraElement]:
    if not u.domain.is_abelian():
        raise ValueError("map does not have an abelian domain")
    return [img.copy() for img in u.images]


def choi(u: LinearMapRep) -> list[np.ndarray]:
    """Choi matrices of ``u``, one per domain block (domain index major)."""
    m = u.codomain.embed_dim
    out = []
    for i, d in enumerate(u.domain.block_dims):
        c = np.zeros((d * m, d * m), dtype=np.complex128)
        for r in range(d):
            for s in range(d):
                img = u.image(i, r, s).assemble()
                c[r * m:(r + 1) * m, s * m:(s + 1) * m] = img
        out.append(c)
    return out


def map_from_choi(domain: AlgebraShape, codomain: AlgebraShape, blocks: list[np.ndarray]) -> LinearMapRep:
    """Inverse of :func:`choi`: read matrix-unit images off Choi blocks."""
    m = codomain.embed_dim
    if len(blocks) != domain.num_blocks:
        raise ValueError(f"need {domain.num_blocks} Choi blocks, got {len(blocks)}")
    images = []
    for i, d in enumerate(domain.block_dims):
        c = linalg.as_matrix(blocks[i])
        if c.shape != (d * m, d * m):
            raise ValueError(f"Choi block {i} must be {d * m}x{d * m}, got {c.shape}")
        for r in range(d):
            for s in range(d):
                images.append(from_assembled(codomain, c[r * m:(r + 1) * m, s * m:(s + 1) * m]))
    return LinearMapRep(domain, codomain, images)


def is_cp(u: LinearMapRep, tol: float = 1e-9) -> bool:
    """Complete positivity via PSD-ness of every Choi block.

    A Choi block with Hermitian defect above ``tol`` means the map does not
    even preserve adjoints, so it is not CP; no error is raised.
    """
    for c in choi(u):
        if linalg.operator_norm(c - c.conj().T) > tol:
            return False
        w = np.linalg.eigvalsh((c + c.conj().T) / 2.0)
        if float(w[0]) < -tol:
            return False
    return True


def star_map(u: LinearMapRep) -> LinearMapRep:
    """The map ``u_*(x) = u(x*)*``, whose images swap unit indices and adjoin."""
    images = [None] * len(u.images)
    for k, i, r, s in matrix_units(u.domain):
        images[k] = u.image(i, s, r).adjoint()
    return LinearMapRep(u.domain, u.codomain, images)


def is_selfadjoint_map(u: LinearMapRep, tol: float = 1e-10) -> bool:
    """True iff ``u = u_*``, i.e. u maps self-adjoints to self-adjoints."""
    v = star_map(u)
    from decnorms.algebra import element_norm
    return all(element_norm(a - b) <= tol for a, b in zip(u.images, v.images))


def compose(v: LinearMapRep, u: LinearMapRep) -> LinearMapRep:
    """The composition ``v after u``."""
    if u.codomain != v.domain:
        raise ValueError(
            f"cannot compose: inner codomain {u.codomain.block_dims} "
            f"differs from outer domain {v.domain.block_dims}"
        )
    return LinearMapRep(u.domain, v.codomain, [apply_map(v, img) for img in u.images])


def tensor(u1: LinearMapRep, u2: LinearMapRep) -> LinearMapRep:
    """Tensor product of two maps between single matrix blocks.

    Domains ``M_{n1}, M_{n2}`` combine into ``M_{n1 n2}`` with the index
    convention ``(r1, r2) -> r1 * n2 + r2``, and likewise for codomains.
    """
    for w in (u1, u2):
        if not (w.domain.is_factor() and w.codomain.is_factor()):
            raise ValueError("tensor products are supported for single-block maps only")
    n1 = u1.domain.block_dims[0]
    n2 = u2.domain.block_dims[0]
    c1 = u1.codomain.block_dims[0]
    c2 = u2.codomain.block_dims[0]
    domain = matrix_algebra(n1 * n2)
    codomain = matrix_algebra(c1 * c2)
    images = []
    for r1 in range(n1):
        for r2 in range(n2):
            for s1 in range(n1):
                for s2 in range(n2):
                    a = u1.image(0, r1, s1).blocks[0]
                    b = u2.image(0, r2, s2).blocks[0]
                    images.append(AlgebraElement(codomain, [np.kron(a, b)]))
    # images were produced in (row-pair, column-pair) nested order, which is
    # exactly row-major over the combined indices; re-check the count.
    out = [None] * (n1 * n2) ** 2
    k = 0
    for r1 in range(n1):
        for r2 in range(n2):
            for s1 in range(n1):
                for s2 in range(n2):
                    out[matrix_unit_index(domain, 0, r1 * n2 + r2, s1 * n2 + s2)] = images[k]
                    k += 1
    return LinearMapRep(domain, codomain, out)


def is_unital(u: LinearMapRep, tol: float = 1e-9) -> bool:
    from decnorms.algebra import element_norm
    return element_norm(apply_map(u, unit(u.domain)) - unit(u.codomain)) <= tol


def conjugation_map(a, domain: AlgebraShape | None = None) -> LinearMapRep:
    """The CP map ``x -> a* x a`` on a single matrix block.

    ``a`` is a (possibly rectangular) matrix from the codomain space to the
    domain space, so a d-by-d ``a`` gives a map on ``M_d``.
    """
    m = linalg.as_matrix(a)
    d = m.shape[0]
    if domain is None:
        domain = matrix_algebra(d)
    if domain.block_dims != (d,):
        raise ValueError("conjugation domain must be the single block matching a's row count")
    codomain = matrix_algebra(m.shape[1])
    return map_from_function(domain, codomain, lambda e: AlgebraElement(codomain, [m.conj().T @ e.blocks[0] @ m]))


def kraus_map(kraus: list[np.ndarray]) -> LinearMapRep:
    """The CP map ``x -> sum_k a_k* x a_k`` built from Kraus operators."""
    if len(kraus) == 0:
        raise ValueError("need at least one Kraus operator")
    ms = [linalg.as_matrix(k) for k in kraus]
    d, c = ms[0].shape
    for m in ms:
        if m.shape != (d, c):
            raise ValueError("all Kraus operators must share one shape")
    domain = matrix_algebra(d)
    codomain = matrix_algebra(c)

    def f(e):
        x = e.blocks[0]
        return AlgebraElement(codomain, [sum(m.conj().T @ x @ m for m in ms)])

    return LinearMapRep(domain, codomain, [f(matrix_unit_element(domain, 0, r, s)) for r in range(d) for s in range(d)])


def transpose_map(d: int) -> LinearMapRep:
    shape = matrix_algebra(d)
    return map_from_function(shape, shape, lambda e: AlgebraElement(shape, [e.blocks[0].T.copy()]))


def trace_map(d: int) -> LinearMapRep:
    """The map ``x -> tr(x) * 1/d`` on M_d, whose Choi block is ``I / d``."""
    shape = matrix_algebra(d)
    return map_from_function(
        shape, shape,
        lambda e: AlgebraElement(shape, [np.trace(e.blocks[0]) / d * np.eye(d, dtype=np.complex128)]),
    )
