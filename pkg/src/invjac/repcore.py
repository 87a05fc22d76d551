"""Lie-algebra representations on V = Q^n and the induced actions.

A generator with matrix M acts on the basis of V by ``X e_i = sum_j M[j][i] e_j``
and on coordinate functions contragrediently, ``X x_k = -sum_j M[k][j] x_j``.
On A = Q[x1..xn] it acts as the derivation extending that rule, and on
A (x) V by the usual tensor product rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .polyring import Poly
from .qlinalg import QMatrix

RAISING = "raising"
LOWERING = "lowering"
CARTAN = "cartan"
OTHER = "other"
ROLES = (RAISING, LOWERING, CARTAN, OTHER)


class RepError(ValueError):
    pass


class UnknownGeneratorError(RepError, KeyError):
    def __str__(self) -> str:
        return self.args[0]


@dataclass(frozen=True)
class Generator:
    name: str
    role: str
    matrix: QMatrix


@dataclass(frozen=True)
class Violation:
    code: str
    detail: str

    def __str__(self) -> str:
        return f"{self.code}: {self.detail}"


@dataclass(frozen=True)
class RepSpec:
    """Tagged generator matrices of a representation on Q^n.

    ``sl2_blocks`` records the highest weights of the sl2 irreducible blocks,
    in order, when the rep was assembled from :func:`sl2_irrep` pieces.
    """

    n: int
    generators: tuple
    sl2_triples: tuple = ()
    sl2_blocks: tuple | None = None
    _coaction: dict = field(default=None, init=False, repr=False, compare=False, hash=False)
    _columns: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def generator(self, name: str) -> Generator:
        for g in self.generators:
            if g.name == name:
                return g
        raise UnknownGeneratorError(f"unknown generator {name!r}")

    def matrix(self, name: str) -> QMatrix:
        return self.generator(name).matrix

    @property
    def names(self) -> list[str]:
        return [g.name for g in self.generators]

    def by_role(self, role: str) -> list[Generator]:
        return [g for g in self.generators if g.role == role]

    @property
    def cartan(self) -> list[Generator]:
        return self.by_role(CARTAN)

    @property
    def raising(self) -> list[Generator]:
        return self.by_role(RAISING)

    def coaction_forms(self, name: str) -> tuple:
        """Per variable k (0-based), the sparse linear form X x_k as (j, coeff) pairs."""
        if self._coaction is None:
            object.__setattr__(self, "_coaction", {})
        forms = self._coaction.get(name)
        if forms is None:
            M = self.matrix(name).entries
            forms = tuple(
                tuple((j, -M[k][j]) for j in range(self.n) if M[k][j])
                for k in range(self.n))
            self._coaction[name] = forms
        return forms

    def column_forms(self, name: str) -> tuple:
        """Per basis index i (0-based), X e_i as (j, M[j][i]) pairs."""
        if self._columns is None:
            object.__setattr__(self, "_columns", {})
        cols = self._columns.get(name)
        if cols is None:
            M = self.matrix(name).entries
            cols = tuple(
                tuple((j, M[j][i]) for j in range(self.n) if M[j][i])
                for i in range(self.n))
            self._columns[name] = cols
        return cols


def make_rep(n: int, generators: Iterable, sl2_triples: Iterable = (),
             sl2_blocks: Sequence[int] | None = None) -> RepSpec:
    """Build a RepSpec from ``(name, role, matrix)`` triples; matrices may be nested lists."""
    gens = []
    for g in generators:
        if isinstance(g, Generator):
            gens.append(g)
            continue
        name, role, matrix = g
        if not isinstance(matrix, QMatrix):
            matrix = QMatrix.from_rows(matrix, cols=n if not matrix else None)
        gens.append(Generator(name, role, matrix))
    triples = tuple(tuple(t) for t in sl2_triples)
    blocks = tuple(sl2_blocks) if sl2_blocks is not None else None
    return RepSpec(n, tuple(gens), triples, blocks)


def _bracket(A: QMatrix, B: QMatrix) -> QMatrix:
    return A @ B - B @ A


def validate(rep: RepSpec) -> list[Violation]:
    """Structural checks; an empty list means the rep is acceptable."""
    out: list[Violation] = []
    n = rep.n
    seen = set()
    sized = {}
    for g in rep.generators:
        if g.name in seen:
            out.append(Violation("duplicate generator", g.name))
        seen.add(g.name)
        if g.role not in ROLES:
            out.append(Violation("bad role", f"{g.name}: {g.role!r}"))
        M = g.matrix
        if (M.rows, M.cols) != (n, n):
            out.append(Violation("matrix size", f"{g.name} is {M.rows}x{M.cols}, expected {n}x{n}"))
            continue
        sized[g.name] = M
        if g.role == CARTAN:
            if not M.is_diagonal():
                out.append(Violation("cartan not diagonal", g.name))
            elif any(M[i, i].denominator != 1 for i in range(n)):
                out.append(Violation("cartan not integer", g.name))
    if not rep.cartan:
        out.append(Violation("no cartan", "at least one cartan generator is required"))
    for triple in rep.sl2_triples:
        if len(triple) != 3:
            out.append(Violation("bad sl2 triple", repr(triple)))
            continue
        missing = [x for x in triple if x not in sized]
        if missing:
            out.append(Violation("unknown generator in triple", f"{triple}: {missing}"))
            continue
        E, F, H = (sized[x] for x in triple)
        label = "(" + ",".join(triple) + ")"
        if _bracket(E, F) != H:
            out.append(Violation("[E,F]≠H", label))
        if _bracket(H, E) != E.scale(2):
            out.append(Violation("[H,E]≠2E", label))
        if _bracket(H, F) != F.scale(-2):
            out.append(Violation("[H,F]≠-2F", label))
    if rep.sl2_blocks is not None and sum(m + 1 for m in rep.sl2_blocks) != n:
        out.append(Violation("sl2 blocks", f"block sizes do not add up to {n}"))
    return out


# -- builders ----------------------------------------------------------------


def sl2_irrep(m: int) -> RepSpec:
    """The irreducible sl2 module V(m) with basis v_0..v_m.

    H v_j = (m - 2j) v_j,  F v_j = v_{j+1},  E v_j = j(m - j + 1) v_{j-1}.
    """
    if m < 0:
        raise ValueError("highest weight must be non-negative")
    n = m + 1
    E = [[0] * n for _ in range(n)]
    F = [[0] * n for _ in range(n)]
    H = [[0] * n for _ in range(n)]
    for j in range(n):
        H[j][j] = m - 2 * j
        if j + 1 < n:
            F[j + 1][j] = 1
        if j >= 1:
            E[j - 1][j] = j * (m - j + 1)
    return make_rep(n, [("E", RAISING, E), ("F", LOWERING, F), ("H", CARTAN, H)],
                    [("E", "F", "H")], sl2_blocks=(m,))


def _block_diag(mats: Sequence[QMatrix]) -> QMatrix:
    n = sum(M.rows for M in mats)
    rows = []
    offset = 0
    for M in mats:
        for r in M.entries:
            rows.append([0] * offset + list(r) + [0] * (n - offset - M.cols))
        offset += M.cols
    return QMatrix.from_rows(rows, cols=n)


def direct_sum(reps: Sequence[RepSpec]) -> RepSpec:
    if not reps:
        raise RepError("direct sum of no representations")
    first = reps[0]
    signature = [(g.name, g.role) for g in first.generators]
    for r in reps[1:]:
        if [(g.name, g.role) for g in r.generators] != signature:
            raise RepError("generator mismatch between summands")
    if len(reps) == 1:
        return first
    gens = [
        Generator(name, role, _block_diag([r.matrix(name) for r in reps]))
        for name, role in signature
    ]
    blocks = None
    if all(r.sl2_blocks is not None for r in reps):
        blocks = tuple(m for r in reps for m in r.sl2_blocks)
    return RepSpec(sum(r.n for r in reps), tuple(gens), first.sl2_triples, blocks)


def dual_rep(rep: RepSpec) -> RepSpec:
    """Contragredient representation: every matrix M becomes -M^T."""
    gens = tuple(Generator(g.name, g.role, -g.matrix.transpose()) for g in rep.generators)
    # V(m)* is isomorphic to V(m) but not in the builder's basis, so blocks are dropped
    return RepSpec(rep.n, gens, rep.sl2_triples, None)


def sln_standard(k: int) -> RepSpec:
    """Defining representation of sl_k with Chevalley generators e_i, f_i, h_i."""
    if k < 2:
        raise ValueError("sl_k needs k >= 2")

    def unit(i, j):
        M = [[0] * k for _ in range(k)]
        M[i][j] = 1
        return M

    gens = []
    for i in range(k - 1):
        gens.append((f"e{i + 1}", RAISING, unit(i, i + 1)))
    for i in range(k - 1):
        gens.append((f"f{i + 1}", LOWERING, unit(i + 1, i)))
    for i in range(k - 1):
        h = unit(i, i)
        h[i + 1][i + 1] = -1
        gens.append((f"h{i + 1}", CARTAN, h))
    triples = [(f"e{i}", f"f{i}", f"h{i}") for i in range(1, k)]
    return make_rep(k, gens, triples, sl2_blocks=(1,) if k == 2 else None)


def trivial_rep(n: int = 1) -> RepSpec:
    """n copies of the trivial sl2 module."""
    return direct_sum([sl2_irrep(0)] * n)


# -- actions -------------------------------------------------------------------


def _check_poly(rep: RepSpec, f: Poly) -> None:
    if f.n != rep.n:
        raise RepError(f"polynomial has {f.n} variables, representation has dimension {rep.n}")


def coaction_on_x(rep: RepSpec, name: str, k: int) -> Poly:
    """X x_k as a linear form (k is 1-based)."""
    if not 1 <= k <= rep.n:
        raise IndexError(f"variable index {k} out of range 1..{rep.n}")
    n = rep.n
    terms = {}
    for j, c in rep.coaction_forms(name)[k - 1]:
        mono = [0] * n
        mono[j] = 1
        terms[tuple(mono)] = c
    return Poly(n, terms)


def act_terms(forms: tuple, terms: Iterable, out: dict | None = None) -> dict:
    """Apply the derivation given by coaction forms to raw (mono, coeff) pairs."""
    if out is None:
        out = {}
    for mono, c in terms:
        for k, a in enumerate(mono):
            if not a:
                continue
            ca = c * a
            for j, w in forms[k]:
                if j == k:
                    m = mono
                else:
                    m = list(mono)
                    m[k] -= 1
                    m[j] += 1
                    m = tuple(m)
                out[m] = out.get(m, 0) + ca * w
    return out


def act_on_poly(rep: RepSpec, name: str, f: Poly) -> Poly:
    """Apply generator ``name`` to f as the derivation sum_k (X x_k) d/dx_k."""
    _check_poly(rep, f)
    out = act_terms(rep.coaction_forms(name), f.items())
    return Poly(rep.n, out)


class TensorElement:
    """A finite sum  sum_i f_i (x) e_i  in A (x) V, stored as {i: f_i} (i 1-based)."""

    __slots__ = ("n", "parts")

    def __init__(self, n: int, parts: Mapping[int, Poly] | Iterable = ()):
        acc: dict[int, Poly] = {}
        items = parts.items() if isinstance(parts, Mapping) else parts
        for i, f in items:
            if not 1 <= i <= n:
                raise IndexError(f"basis index {i} out of range 1..{n}")
            if f.n != n:
                raise RepError("tensor part has the wrong variable count")
            acc[i] = acc[i] + f if i in acc else f
        self.n = n
        self.parts = {i: acc[i] for i in sorted(acc) if not acc[i].is_zero()}

    @classmethod
    def pure(cls, f: Poly, i: int) -> "TensorElement":
        return cls(f.n, [(i, f)])

    def __eq__(self, other) -> bool:
        return isinstance(other, TensorElement) and self.n == other.n and self.parts == other.parts

    def __hash__(self):
        return hash((self.n, tuple(self.parts.items())))

    def __add__(self, other: "TensorElement") -> "TensorElement":
        return TensorElement(self.n, list(self.parts.items()) + list(other.parts.items()))

    def is_zero(self) -> bool:
        return not self.parts

    def __repr__(self) -> str:
        inner = " + ".join(f"({f})⊗e{i}" for i, f in self.parts.items()) or "0"
        return f"TensorElement({inner})"


def act_on_tensor(rep: RepSpec, name: str, t: TensorElement) -> TensorElement:
    """X (f (x) e_i) = (X f) (x) e_i + sum_j M[j][i] f (x) e_j."""
    if t.n != rep.n:
        raise RepError("tensor element does not match the representation")
    cols = rep.column_forms(name)
    parts = []
    for i, f in t.parts.items():
        parts.append((i, act_on_poly(rep, name, f)))
        for j, c in cols[i - 1]:
            parts.append((j + 1, f.scale(c)))
    return TensorElement(rep.n, parts)
