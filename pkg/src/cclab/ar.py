"""Auslander-Reiten translates via Coxeter functors, and projective/injective summands."""

from __future__ import annotations

from fractions import Fraction

from .linalg import QQ, Matrix, kernel_basis, solve
from .rep import (
    Representation,
    RepresentationError,
    dim_hom,
    direct_sum,
    injective,
    projective,
    simple,
)


def coxeter_plus(M: Representation) -> Representation:
    """Composite of sink reflections taken in admissible order.

    At vertex ``i`` the new space is the kernel of
    ``[x_a for a into i | h_b for b out of i] -> M_i``, where ``h_b`` is
    the part of an already computed kernel that lands in ``M_i``.
    """
    Q, F = M.quiver, M.field
    new_dim = [0] * Q.n
    # h[k]: block of the kernel at target(k) mapping to M_source(k)
    h: dict[int, Matrix] = {}
    y: dict[int, Matrix] = {}
    for i in Q.order:
        into = Q.arrows_into(i)
        out = Q.arrows_out_of(i)
        parts = [M.mats[k] for k in into] + [h[k] for k in out]
        widths = [M.dims[Q.arrows[k].source] for k in into] + [new_dim[Q.arrows[k].target] for k in out]
        total = sum(widths)
        if parts:
            phi = parts[0]
            for m in parts[1:]:
                phi = phi.hstack(m)
        else:
            phi = Matrix.zeros(F, M.dims[i], 0)
        K = kernel_basis(phi) if total else Matrix.zeros(F, 0, 0)
        new_dim[i] = K.ncols
        off = 0
        for k, w in zip(into + out, widths):
            block = K.submatrix(range(off, off + w), range(K.ncols))
            if k in into:
                h[k] = block
            else:
                y[k] = block
            off += w
    mats = [y[k] for k in range(len(Q.arrows))]
    return Representation(Q, tuple(new_dim), mats, F)


def tau(M: Representation) -> Representation:
    """AR translate: the Coxeter functor followed by negating every arrow map."""
    return coxeter_plus(M).negated().with_label(f"tau {M.label}" if M.label else "")


def _dual_back(M: Representation, quiver) -> Representation:
    return Representation(quiver, M.dims, [m.T for m in M.mats], M.field, M.label)


def coxeter_minus(M: Representation) -> Representation:
    """Inverse Coxeter functor, computed as D Phi+ D on the opposite quiver."""
    return _dual_back(coxeter_plus(M.dual()), M.quiver)


def tau_inverse(M: Representation) -> Representation:
    return _dual_back(tau(M.dual()), M.quiver).with_label(f"tau^-1 {M.label}" if M.label else "")


def tau_power(M: Representation, k: int) -> Representation:
    out = M
    step = tau if k > 0 else tau_inverse
    for _ in range(abs(k)):
        out = step(out)
    return out


def _split_dims(M: Representation, rest: Representation, family) -> list[int]:
    """Multiplicities m_i with dim M - dim rest = sum m_i dim family(i)."""
    Q = M.quiver
    diff = [a - b for a, b in zip(M.dims, rest.dims)]
    vecs = [family(Q, i).dims for i in Q.vertices]
    # unitriangular in admissible order
    A = Matrix(QQ, [[vecs[i][j] for i in Q.vertices] for j in Q.vertices], Q.n)
    b = Matrix(QQ, [[x] for x in diff], 1)
    sol = solve(A, b)
    if sol is None:
        raise RepresentationError("summand dimension bookkeeping failed")
    mult = [Fraction(sol.rows[i][0]) for i in Q.vertices]
    if any(m < 0 or m.denominator != 1 for m in mult):
        raise RepresentationError(f"non-integral summand multiplicities {mult}")
    return [int(m) for m in mult]


def _assemble(Q, field, mult, family, fallback_label):
    parts = [family(Q, i, field) for i in Q.vertices for _ in range(mult[i])]
    if not parts:
        return Representation.zero(Q, field)
    return direct_sum(*parts) if len(parts) > 1 else parts[0]


def max_projective_summand(M: Representation) -> tuple[Representation, list[int], Representation]:
    """Split ``M = P0 + M'`` with ``P0`` projective and ``M'`` without projective summands.

    ``M'`` is tau^-1 tau M; the multiplicities of P0 follow from dimension
    vectors and are cross-checked against tops.
    """
    Q, F = M.quiver, M.field
    rest = tau_inverse(tau(M))
    mult = _split_dims(M, rest, projective)
    for i in Q.vertices:
        S = simple(Q, i, F)
        if dim_hom(M, S) != mult[i] + dim_hom(rest, S):
            raise RepresentationError("projective summand check failed on tops")
    return _assemble(Q, F, mult, projective, "P"), mult, rest


def max_injective_summand(M: Representation) -> tuple[Representation, list[int], Representation]:
    """Dual of :func:`max_projective_summand`: ``M = I0 + M'`` with ``M' = tau tau^-1 M``."""
    Q, F = M.quiver, M.field
    rest = tau(tau_inverse(M))
    mult = _split_dims(M, rest, injective)
    for i in Q.vertices:
        S = simple(Q, i, F)
        if dim_hom(S, M) != mult[i] + dim_hom(S, rest):
            raise RepresentationError("injective summand check failed on socles")
    return _assemble(Q, F, mult, injective, "I"), mult, rest


def injective_for_projective(P_mult: list[int], Q, field) -> Representation:
    """``I = sum I_i^{m_i}`` for ``P = sum P_i^{m_i}``."""
    return _assemble(Q, field, P_mult, injective, "I")


def top_dims(mult: list[int], Q) -> tuple[int, ...]:
    """dim top of sum P_i^{m_i} (equivalently dim soc of sum I_i^{m_i})."""
    return tuple(mult[i] for i in Q.vertices)
