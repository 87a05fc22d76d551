"""Weights, highest weight vectors and decompositions of subspaces of A_d."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .polyring import GradedPiece, Poly, homogeneous_degree, monomial_basis
from .qlinalg import Echelon, Subspace, _sparse, sparse_kernel, span
from .repcore import CARTAN, RepSpec, act_terms

Weight = tuple  # tuple[int, ...], one entry per cartan generator


class NotInvariantError(ValueError):
    """A subspace that had to be invariant is not; carries the violating pair."""

    def __init__(self, message: str, generator: str | None = None, element: Poly | None = None):
        super().__init__(message)
        self.generator = generator
        self.element = element


class DecompositionAuditError(RuntimeError):
    pass


def weight_of_monomial(rep: RepSpec, mono: Sequence[int]) -> Weight:
    """Cartan eigenvalues of x^a:  -sum_k a_k H[k][k]  for each cartan H."""
    out = []
    for H in rep.cartan:
        s = sum(a * H.matrix[k, k] for k, a in enumerate(mono) if a)
        out.append(-int(s))
    return tuple(out)


def _piece(S: Subspace) -> GradedPiece:
    if not isinstance(S.ambient, GradedPiece):
        raise TypeError("expected a subspace of a graded piece")
    return S.ambient


def _image_vector(rep: RepSpec, name: str, piece: GradedPiece, vec: Sequence) -> dict:
    """Sparse coordinates of X applied to the polynomial with coordinates vec."""
    forms = rep.coaction_forms(name)
    terms = ((piece.basis[j], c) for j, c in enumerate(vec) if c)
    out = act_terms(forms, terms)
    index = piece.index
    return {index[m]: c for m, c in out.items() if c}


def _image_sparse(rep: RepSpec, name: str, piece: GradedPiece, row: dict) -> dict:
    forms = rep.coaction_forms(name)
    out = act_terms(forms, ((piece.basis[j], c) for j, c in row.items()))
    index = piece.index
    return {index[m]: c for m, c in out.items() if c}


def weight_decomposition(rep: RepSpec, S: Subspace) -> dict:
    """Split a Cartan-stable subspace into weight blocks ``{weight: Subspace}``."""
    piece = _piece(S)
    weights = [weight_of_monomial(rep, m) for m in piece.basis]
    projections: dict = {}
    for v in S.basis:
        parts: dict = {}
        for j, c in enumerate(v):
            if c:
                parts.setdefault(weights[j], {})[j] = c
        for w, row in parts.items():
            projections.setdefault(w, Echelon(piece.dim)).add(row)
    total = sum(len(e) for e in projections.values())
    if total != S.dim:
        raise NotInvariantError("subspace is not stable under the cartan generators")
    return {w: Subspace.from_echelon(piece, projections[w]) for w in sorted(projections, reverse=True)}


def is_invariant_subspace(rep: RepSpec, S: Subspace) -> tuple[bool, tuple | None]:
    """``(True, None)`` or ``(False, (generator name, offending basis polynomial))``."""
    piece = _piece(S)
    ech = S.echelon()
    for g in rep.generators:
        for v in S.basis:
            img = _image_vector(rep, g.name, piece, v)
            if ech.reduce(img):
                return False, (g.name, piece.poly(v))
    return True, None


def require_invariant(rep: RepSpec, S: Subspace) -> None:
    ok, witness = is_invariant_subspace(rep, S)
    if not ok:
        name, elem = witness
        raise NotInvariantError(f"subspace not invariant: {name} moves {elem} outside it", name, elem)


def _closure(rep: RepSpec, piece: GradedPiece, seeds: Sequence[dict]) -> Echelon:
    ech = Echelon(piece.dim)
    frontier = []
    for s in seeds:
        if ech.add(s):
            frontier.append(s)
    while frontier:
        nxt = []
        for row in frontier:
            for g in rep.generators:
                img = _image_sparse(rep, g.name, piece, row)
                if img and ech.add(img):
                    nxt.append(img)
        frontier = nxt
    return ech


def generate_submodule(rep: RepSpec, v: Poly) -> Subspace:
    """Smallest invariant subspace of A_d containing the nonzero homogeneous v."""
    d = homogeneous_degree(v)
    if not isinstance(d, int):
        raise ValueError(f"need a nonzero homogeneous polynomial, got {v}")
    piece = monomial_basis(v.n, d)
    ech = _closure(rep, piece, [_sparse(piece.coordinates(v))])
    return Subspace.from_echelon(piece, ech)


def highest_weight_vectors(rep: RepSpec, S: Subspace) -> list[tuple[Weight, Subspace]]:
    """Joint kernel of the raising generators inside each weight block of S."""
    require_invariant(rep, S)
    piece = _piece(S)
    raising = [g.name for g in rep.raising]
    out = []
    for w, block in weight_decomposition(rep, S).items():
        # unknowns: coefficients on the block basis
        rows: dict = {}
        for b, vec in enumerate(block.basis):
            for r, name in enumerate(raising):
                for j, c in _image_vector(rep, name, piece, vec).items():
                    rows.setdefault((r, j), {})[b] = c
        combos = sparse_kernel(rows.values(), block.dim)
        if not combos:
            continue
        vecs = []
        for a in combos:
            v = [Fraction(0)] * piece.dim
            for b, coef in enumerate(a):
                if coef:
                    for j, x in enumerate(block.basis[b]):
                        if x:
                            v[j] += coef * x
            vecs.append(v)
        out.append((w, span(vecs, piece)))
    return out


@dataclass(frozen=True)
class Summand:
    highest_weight: Weight
    hwv: tuple
    generated_dim: int


@dataclass(frozen=True)
class DecompositionReport:
    summands: tuple
    total_dim: int
    highest_weight_set: frozenset

    def sorted_weights(self) -> list:
        return sorted(self.highest_weight_set, reverse=True)


def decompose(rep: RepSpec, S: Subspace) -> DecompositionReport:
    """Decompose an invariant subspace into submodules generated by HWVs.

    The audit requires the generated submodules to be independent and to fill
    S; anything else raises :class:`DecompositionAuditError`.
    """
    piece = _piece(S)
    summands = []
    total = Echelon(piece.dim)
    for w, hw_space in highest_weight_vectors(rep, S):
        for vec in hw_space.basis:
            gen = _closure(rep, piece, [_sparse(vec)])
            summands.append(Summand(w, vec, len(gen)))
            for row in gen.rows.values():
                total.add(row)
    gen_sum = sum(s.generated_dim for s in summands)
    if gen_sum != S.dim or len(total) != S.dim:
        raise DecompositionAuditError(
            f"generated submodules have dimensions summing to {gen_sum}, span {len(total)}, "
            f"but the subspace has dimension {S.dim}")
    return DecompositionReport(tuple(summands), S.dim, frozenset(s.highest_weight for s in summands))


def invariants(rep: RepSpec, d: int) -> Subspace:
    """Polynomials in A_d annihilated by every generator."""
    piece = monomial_basis(rep.n, d)
    # cartan generators act diagonally on monomials: restrict to weight zero first
    zero = (0,) * len(rep.cartan)
    cols = [j for j, m in enumerate(piece.basis) if weight_of_monomial(rep, m) == zero]
    rows: dict = {}
    for t, j in enumerate(cols):
        unit = {j: Fraction(1)}
        for g in rep.generators:
            if g.role == CARTAN:
                continue
            for i, c in _image_sparse(rep, g.name, piece, unit).items():
                rows.setdefault((g.name, i), {})[t] = c
    vecs = []
    for a in sparse_kernel(rows.values(), len(cols)):
        v = [Fraction(0)] * piece.dim
        for t, c in enumerate(a):
            v[cols[t]] = c
        vecs.append(v)
    return span(vecs, piece)


@lru_cache(maxsize=None)
def _count_weighted(m: int, d: int, w: int) -> int:
    # exponent vectors (a_0..a_m), sum a_j = d, sum j a_j = w; partitions in a d x m box
    if w < 0:
        return 0
    if d == 0:
        return 1 if w == 0 else 0
    if m == 0:
        return 1 if w == 0 else 0
    # either no part equals m (a_m = 0) or remove one copy of index m
    return _count_weighted(m - 1, d, w) + _count_weighted(m, d - 1, w - m)


def cayley_sylvester(m: int, d: int) -> int:
    """Dimension of the sl2 invariants in Sym^d V(m)."""
    if m < 0 or d < 0:
        raise ValueError("m and d must be non-negative")
    if (m * d) % 2:
        return 0
    w = m * d // 2
    return _count_weighted(m, d, w) - _count_weighted(m, d, w - 1)
