"""Jacobian subspaces and the module-theoretic checks built on them.

The central map is ``phi: A (x) V -> A, f (x) e_i -> df/dx_i``.  Everything
here reduces to exact linear conditions, checked exhaustively on monomial
bases.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Sequence

from .modanalysis import (
    NotInvariantError,
    cayley_sylvester,
    decompose,
    invariants,
    is_invariant_subspace,
)
from .polyring import (
    Poly,
    ZERO,
    dimension_cap,
    graded_piece_dim,
    homogeneous_degree,
    monomial_basis,
    partial,
)
from .qlinalg import Subspace, equal, sparse_kernel, span
from .repcore import (
    RepSpec,
    TensorElement,
    act_on_poly,
    act_on_tensor,
    direct_sum,
    sl2_irrep,
)


class HypothesisError(ValueError):
    """Input does not meet the hypothesis of the check that was asked for."""


class KempfNotFound(RuntimeError):
    pass


class NoMirrorMap(RuntimeError):
    pass


TensorAction = Callable[[RepSpec, str, TensorElement], TensorElement]


def _require_homogeneous(f: Poly) -> int:
    d = homogeneous_degree(f)
    if d == ZERO:
        raise HypothesisError("polynomial is zero")
    if not isinstance(d, int):
        raise HypothesisError(f"polynomial is not homogeneous: {f}")
    return d


def jacobian_subspace(f: Poly) -> Subspace:
    """Span of the partial derivatives of f inside A_{d-1}."""
    d = _require_homogeneous(f)
    if d < 1:
        raise HypothesisError("constant polynomial has no Jacobian inside a graded piece")
    piece = monomial_basis(f.n, d - 1)
    return span([partial(f, i) for i in range(1, f.n + 1)], piece)


def phi(rep: RepSpec, t: TensorElement) -> Poly:
    """sum_i f_i (x) e_i  ->  sum_i df_i/dx_i."""
    if t.n != rep.n:
        raise ValueError("tensor element does not match the representation")
    degrees = {homogeneous_degree(f) for f in t.parts.values()}
    if len(degrees) > 1 or any(not isinstance(x, int) for x in degrees):
        raise HypothesisError(f"tensor parts are not of one common degree: {sorted(map(str, degrees))}")
    out = Poly.zero(rep.n)
    for i, f in t.parts.items():
        out = out + partial(f, i)
    return out


# -- intertwining of phi ---------------------------------------------------------------


@dataclass(frozen=True)
class Counterexample:
    generator: str
    monomial: tuple
    index: int  # 1-based basis index of V (or of A_1 for the mirror map)
    lhs: Poly
    rhs: Poly

    def as_dict(self) -> dict:
        return {
            "generator": self.generator,
            "monomial": list(self.monomial),
            "index": self.index,
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
        }


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    checked: int
    counterexample: Counterexample | None = None

    def __bool__(self) -> bool:
        return self.passed


def _int_forms(forms: tuple) -> tuple:
    return tuple(
        tuple((j, c.numerator if c.denominator == 1 else c) for j, c in row)
        for row in forms)


def _phi_pair(rep: RepSpec, name: str, mono: tuple, i: int,
              tensor_action: TensorAction) -> tuple[Poly, Poly]:
    x = Poly.monomial(mono)
    t = TensorElement.pure(x, i)
    lhs = phi(rep, tensor_action(rep, name, t))
    rhs = act_on_poly(rep, name, phi(rep, t))
    return lhs, rhs


def check_intertwining_phi(rep: RepSpec, d: int,
                           tensor_action: TensorAction | None = None) -> CheckResult:
    """Exhaustively test  phi(X.(x^a (x) e_i)) == X.phi(x^a (x) e_i)  on A_d (x) V.

    ``tensor_action`` replaces :func:`act_on_tensor` (used for negative
    controls); when given, the generic polynomial path is used.
    """
    n = rep.n
    basis = monomial_basis(n, d).basis
    if tensor_action is not None:
        count = 0
        for g in rep.generators:
            for a in basis:
                for i in range(1, n + 1):
                    count += 1
                    lhs, rhs = _phi_pair(rep, g.name, a, i, tensor_action)
                    if lhs != rhs:
                        return CheckResult(False, count, Counterexample(g.name, a, i, lhs, rhs))
        return CheckResult(True, count)

    # monomials encoded as integers in base d+2 so shifts are additions
    B = d + 2
    pw = [B ** k for k in range(n)]
    count = 0
    for g in rep.generators:
        forms = _int_forms(rep.coaction_forms(g.name))
        cols = _int_forms(rep.column_forms(g.name))
        moves = [(k, j, w, pw[j] - pw[k]) for k in range(n) for j, w in forms[k]]
        for a in basis:
            code = sum(e * p for e, p in zip(a, pw))
            for i in range(n):
                count += 1
                pi = pw[i]
                ai = a[i]
                # phi(X.(x^a (x) e_i)) - X.phi(x^a (x) e_i), accumulated in one dict
                diff: dict = {}
                for k, j, w, sh in moves:
                    ak = a[k]
                    if not ak:
                        continue
                    m = code + sh - pi
                    # d/dx_i of the (k -> j) term of D_X x^a
                    e = ai - (i == k) + (i == j)
                    if e:
                        diff[m] = diff.get(m, 0) + ak * w * e
                    # D_X applied to a_i x^(a - e_i)
                    if ai:
                        bk = ak - (k == i)
                        if bk:
                            diff[m] = diff.get(m, 0) - ai * bk * w
                for j, w in cols[i]:
                    e = a[j]
                    if e:
                        m = code - pw[j]
                        diff[m] = diff.get(m, 0) + w * e
                if any(diff.values()):
                    lp, rp = _phi_pair(rep, g.name, a, i + 1, act_on_tensor)
                    return CheckResult(False, count, Counterexample(g.name, a, i + 1, lp, rp))
    return CheckResult(True, count)


def drop_vector_part(rep: RepSpec, name: str, t: TensorElement) -> TensorElement:
    """A deliberately wrong action on A (x) V that ignores the V factor."""
    return TensorElement(rep.n, [(i, act_on_poly(rep, name, f)) for i, f in t.parts.items()])


def transpose_vector_part(rep: RepSpec, name: str, t: TensorElement) -> TensorElement:
    """A deliberately wrong action using M[i][j] instead of M[j][i] on the V factor."""
    M = rep.matrix(name)
    parts = []
    for i, f in t.parts.items():
        parts.append((i, act_on_poly(rep, name, f)))
        for j in range(rep.n):
            if M[i - 1, j]:
                parts.append((j + 1, f.scale(M[i - 1, j])))
    return TensorElement(rep.n, parts)


# -- J(f) as a quotient of V --------------------------------------------------------


@dataclass(frozen=True)
class QuotientReport:
    is_hom: bool
    kernel_dim: int
    image_dim: int
    witness: tuple | None = None  # (generator, basis index) of the first failure


def quotient_map_check(rep: RepSpec, f: Poly) -> QuotientReport:
    """Test whether e_i -> df/dx_i is a module map V -> A_{d-1}."""
    if f.n != rep.n:
        raise ValueError("polynomial and representation have different dimensions")
    _require_homogeneous(f)
    n = rep.n
    partials = [partial(f, i) for i in range(1, n + 1)]
    witness = None
    for g in rep.generators:
        cols = rep.column_forms(g.name)
        for i in range(n):
            lhs = Poly.zero(n)
            for j, c in cols[i]:
                lhs = lhs + partials[j].scale(c)
            if lhs != act_on_poly(rep, g.name, partials[i]):
                witness = (g.name, i + 1)
                break
        if witness:
            break
    nonzero = [p for p in partials if p]
    image = span(nonzero) if nonzero else None
    image_dim = image.dim if image is not None else 0
    return QuotientReport(witness is None, n - image_dim, image_dim, witness)


# -- Kempf witness ---------------------------------------------------------------


def _jacobian_invariance(rep: RepSpec, f: Poly) -> Subspace:
    J = jacobian_subspace(f)
    ok, witness = is_invariant_subspace(rep, J)
    if not ok:
        name, elem = witness
        raise NotInvariantError(f"J(f) is not invariant: {name} moves {elem} outside it", name, elem)
    return J


def _coefficient_order(h: int) -> list[int]:
    out = [0]
    for k in range(1, h + 1):
        out += [k, -k]
    return out


def _deterministic_candidates(r: int, max_height: int):
    for h in range(1, max_height + 1):
        for c in itertools.product(_coefficient_order(h), repeat=r):
            if max(abs(x) for x in c) == h:
                yield c


def is_invariant_poly(rep: RepSpec, f: Poly) -> bool:
    return all(act_on_poly(rep, g.name, f).is_zero() for g in rep.generators)


def kempf_witness(rep: RepSpec, f: Poly, *, max_height: int = 3, budget: int = 5000,
                  random_trials: int = 200, seed: int = 0) -> Poly:
    """Find an invariant g of the same degree as f with J(g) = J(f).

    Candidates are combinations of a basis of the invariants g whose partials
    all lie in J(f); small integer combinations are tried first, then seeded
    random rational ones.
    """
    d = _require_homogeneous(f)
    if d < 1:
        raise HypothesisError("degree must be at least 1")
    if f.n != rep.n:
        raise ValueError("polynomial and representation have different dimensions")
    J = _jacobian_invariance(rep, f)
    inv = invariants(rep, d).polys()
    if not inv:
        raise KempfNotFound(f"no invariants in degree {d}")

    # linear conditions: every d(sum c_r g_r)/dx_i reduces to zero modulo J(f)
    ech = J.echelon()
    piece = J.ambient
    rows: dict = {}
    for r, g in enumerate(inv):
        for i in range(1, rep.n + 1):
            p = partial(g, i)
            if p.is_zero():
                continue
            residual = ech.reduce({piece.index[m]: c for m, c in p.items()})
            for j, c in residual.items():
                rows.setdefault((i, j), {})[r] = c
    sols = sparse_kernel(rows.values(), len(inv))
    if not sols:
        raise KempfNotFound("no invariant has all of its partials inside J(f)")
    sol_polys = []
    for a in sols:
        g = Poly.zero(rep.n)
        for c, p in zip(a, inv):
            if c:
                g = g + p.scale(c)
        sol_polys.append(g)

    def attempt(coeffs) -> Poly | None:
        g = Poly.zero(rep.n)
        for c, p in zip(coeffs, sol_polys):
            if c:
                g = g + p.scale(c)
        if g.is_zero():
            return None
        return g if equal(jacobian_subspace(g), J) else None

    tried = 0
    for coeffs in _deterministic_candidates(len(sol_polys), max_height):
        if tried >= budget:
            break
        tried += 1
        g = attempt(coeffs)
        if g is not None:
            return g
    rng = random.Random(seed)
    for _ in range(random_trials):
        coeffs = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in sol_polys]
        g = attempt(coeffs)
        if g is not None:
            return g
    raise KempfNotFound(
        f"no invariant g with J(g) = J(f) found after {tried} deterministic and "
        f"{random_trials} random candidates (degree {d})")


# -- highest weights of J(f) versus A_1 ----------------------------------------------


@dataclass(frozen=True)
class YauReport:
    f_degree: int
    f_invariant: bool
    jacobian_invariant: bool
    j_highest_weights: frozenset
    a1_highest_weights: frozenset
    subset_holds: bool
    witness: Poly
    quotient_hom: bool
    quotient_kernel_dim: int
    jacobian_dim: int

    def as_dict(self) -> dict:
        return {
            "f_degree": self.f_degree,
            "f_invariant": self.f_invariant,
            "jacobian_invariant": self.jacobian_invariant,
            "jacobian_dim": self.jacobian_dim,
            "j_highest_weights": [list(w) for w in sorted(self.j_highest_weights, reverse=True)],
            "a1_highest_weights": [list(w) for w in sorted(self.a1_highest_weights, reverse=True)],
            "subset_holds": self.subset_holds,
            "kempf_witness": str(self.witness),
            "quotient_hom": self.quotient_hom,
            "quotient_kernel_dim": self.quotient_kernel_dim,
        }


def yau_check(rep: RepSpec, f: Poly, **kempf_options) -> YauReport:
    d = _require_homogeneous(f)
    if f.n != rep.n:
        raise ValueError("polynomial and representation have different dimensions")
    if d <= 2:
        raise HypothesisError(f"degree ≤ 2 (got {d}); the statement needs degree greater than 2")
    J = _jacobian_invariance(rep, f)
    j_weights = decompose(rep, J).highest_weight_set
    a1 = Subspace.full(monomial_basis(rep.n, 1))
    a1_weights = decompose(rep, a1).highest_weight_set
    f_inv = is_invariant_poly(rep, f)
    g = f if f_inv else kempf_witness(rep, f, **kempf_options)
    q = quotient_map_check(rep, g)
    return YauReport(
        f_degree=d,
        f_invariant=f_inv,
        jacobian_invariant=True,
        j_highest_weights=j_weights,
        a1_highest_weights=a1_weights,
        subset_holds=j_weights <= a1_weights,
        witness=g,
        quotient_hom=q.is_hom,
        quotient_kernel_dim=q.kernel_dim,
        jacobian_dim=J.dim,
    )


# -- the sl2 mirror map ---------------------------------------------------------------


@dataclass(frozen=True)
class MirrorBlock:
    offset: int  # 0-based index of the block's first variable
    m: int
    coefficients: tuple  # c_0..c_m
    alternating: bool


@dataclass(frozen=True)
class MirrorMap:
    """psi(f (x) x_{s,j}) = c_{s,j} * df/dx_{s, m_s - j} on every sl2 block s."""

    n: int
    blocks: tuple

    def target(self, k: int) -> tuple[int, Fraction]:
        """For the 1-based variable k, the 1-based partial index and its coefficient."""
        for b in self.blocks:
            if b.offset < k <= b.offset + b.m + 1:
                j = k - 1 - b.offset
                return b.offset + (b.m - j) + 1, b.coefficients[j]
        raise IndexError(k)

    def psi(self, f: Poly, k: int) -> Poly:
        t, c = self.target(k)
        return partial(f, t).scale(c)

    def with_flipped_sign(self, block: int = 0, j: int = 0) -> "MirrorMap":
        b = self.blocks[block]
        coeffs = list(b.coefficients)
        coeffs[j] = -coeffs[j]
        blocks = list(self.blocks)
        blocks[block] = replace(b, coefficients=tuple(coeffs))
        return replace(self, blocks=tuple(blocks))

    @property
    def alternating(self) -> bool:
        return all(b.alternating for b in self.blocks)


def _block_offsets(rep: RepSpec) -> list[tuple[int, int]]:
    if rep.sl2_blocks is None:
        raise HypothesisError("mirror map needs a direct sum of sl2 irreducibles built by sl2_irrep")
    out, offset = [], 0
    for m in rep.sl2_blocks:
        out.append((offset, m))
        offset += m + 1
    return out


def equivariant_mirror_map(rep: RepSpec, degrees: Sequence[int] = (1, 2, 3)) -> MirrorMap:
    """Solve for the coefficients making psi a module map, block by block.

    The solution space of each block must be one-dimensional; its
    representative is scaled so that the first coefficient is 1.
    """
    n = rep.n
    blocks = []
    for offset, m in _block_offsets(rep):
        size = m + 1
        rows: dict = {}
        for d in degrees:
            for a in monomial_basis(n, d).basis:
                f = Poly.monomial(a)
                for g in rep.generators:
                    forms = rep.coaction_forms(g.name)
                    Xf = act_on_poly(rep, g.name, f)
                    for j in range(size):
                        # psi(X.(f (x) x_j)) - X.psi(f (x) x_j) in terms of the unknowns
                        tgt = offset + (m - j) + 1
                        terms: list = [(j, partial(Xf, tgt)), (j, -act_on_poly(rep, g.name, partial(f, tgt)))]
                        for l, w in forms[offset + j]:
                            jl = l - offset
                            if not 0 <= jl < size:
                                raise HypothesisError("coaction leaves an sl2 block")
                            terms.append((jl, partial(f, offset + (m - jl) + 1).scale(w)))
                        for unknown, p in terms:
                            for mono, c in p.items():
                                key = (d, a, g.name, j, mono)
                                row = rows.setdefault(key, {})
                                s = row.get(unknown, 0) + c
                                if s:
                                    row[unknown] = s
                                else:
                                    row.pop(unknown, None)
        sols = sparse_kernel(rows.values(), size)
        if not sols:
            raise NoMirrorMap(f"only the zero map intertwines on the block V({m}) at offset {offset}")
        if len(sols) != 1:
            raise NoMirrorMap(f"solution space has dimension {len(sols)} on block V({m}); expected 1")
        v = sols[0]
        lead = next(x for x in v if x)
        coeffs = tuple(x / lead for x in v)
        alternating = all(c != 0 for c in coeffs) and all(
            (coeffs[j] > 0) != (coeffs[j + 1] > 0) for j in range(m))
        blocks.append(MirrorBlock(offset, m, coeffs, alternating))
    return MirrorMap(n, tuple(blocks))


def check_psi_hom(rep: RepSpec, mirror: MirrorMap, d: int) -> CheckResult:
    """Exhaustive test of psi(X.(f (x) x_k)) == X.psi(f (x) x_k) on A_d (x) A_1."""
    n = rep.n
    count = 0
    for g in rep.generators:
        forms = rep.coaction_forms(g.name)
        for a in monomial_basis(n, d).basis:
            f = Poly.monomial(a)
            Xf = act_on_poly(rep, g.name, f)
            for k in range(1, n + 1):
                count += 1
                lhs = mirror.psi(Xf, k)
                for l, w in forms[k - 1]:
                    lhs = lhs + mirror.psi(f, l + 1).scale(w)
                rhs = act_on_poly(rep, g.name, mirror.psi(f, k))
                if lhs != rhs:
                    return CheckResult(False, count, Counterexample(g.name, a, k, lhs, rhs))
    return CheckResult(True, count)


# -- randomized end-to-end harness --------------------------------------------------


CHECKS = ("intertwining", "cayley_sylvester", "quotient_hom", "jacobian_invariant",
          "yau", "kempf")


@dataclass
class TrialResult:
    index: int
    blocks: tuple
    degree: int
    outcomes: dict = field(default_factory=dict)  # check -> "pass" | "fail" | "skip"
    notes: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"index": self.index, "sl2_blocks": list(self.blocks), "degree": self.degree,
                "outcomes": dict(self.outcomes), "notes": list(self.notes)}


@dataclass
class FuzzSummary:
    seed: int
    trials: list

    @property
    def counts(self) -> dict:
        out = {c: {"pass": 0, "fail": 0, "skip": 0} for c in CHECKS}
        for t in self.trials:
            for c, v in t.outcomes.items():
                out[c][v] += 1
        return out

    @property
    def failures(self) -> int:
        return sum(v["fail"] for v in self.counts.values())

    @property
    def all_passed(self) -> bool:
        return self.failures == 0

    def as_dict(self) -> dict:
        return {"seed": self.seed, "trial_count": len(self.trials), "counts": self.counts,
                "failures": self.failures, "trials": [t.as_dict() for t in self.trials]}


def _random_trial(seed: int, index: int, max_m: int, max_d: int, max_n: int) -> tuple[tuple, int]:
    rng = random.Random(f"{seed}:{index}")
    while True:
        blocks = tuple(rng.randint(0, max_m) for _ in range(rng.randint(1, 2)))
        n = sum(m + 1 for m in blocks)
        d = rng.randint(1, max_d)
        if n <= max_n and graded_piece_dim(n, d) * n <= dimension_cap():
            return blocks, d


def run_trial(seed: int, index: int, max_m: int, max_d: int, *, max_n: int = 6,
              inject_fault: bool = False) -> TrialResult:
    blocks, d = _random_trial(seed, index, max_m, max_d, max_n)
    rep = direct_sum([sl2_irrep(m) for m in blocks])
    res = TrialResult(index, blocks, d)
    out = res.outcomes

    def verdict(ok: bool) -> str:
        return "pass" if ok else "fail"

    action = drop_vector_part if inject_fault else None
    r = check_intertwining_phi(rep, d, tensor_action=action)
    out["intertwining"] = verdict(r.passed)
    if not r.passed:
        res.notes.append(f"intertwining counterexample: {r.counterexample.as_dict()}")

    inv = invariants(rep, d)
    if len(blocks) == 1:
        out["cayley_sylvester"] = verdict(inv.dim == cayley_sylvester(blocks[0], d))
    else:
        out["cayley_sylvester"] = "skip"
    if not inv.dim:
        for c in ("quotient_hom", "jacobian_invariant", "yau", "kempf"):
            out[c] = "skip"
        return res

    rng = random.Random(f"{seed}:{index}:f")
    f = Poly.zero(rep.n)
    while f.is_zero():
        for p in inv.polys():
            f = f + p.scale(Fraction(rng.randint(-5, 5), rng.randint(1, 4)))

    q = quotient_map_check(rep, f)
    out["quotient_hom"] = verdict(q.is_hom and q.kernel_dim + q.image_dim == rep.n)
    ok, _ = is_invariant_subspace(rep, jacobian_subspace(f))
    out["jacobian_invariant"] = verdict(ok)
    if d > 2:
        try:
            y = yau_check(rep, f)
            out["yau"] = verdict(y.subset_holds and y.quotient_hom)
        except (NotInvariantError, KempfNotFound) as exc:
            out["yau"] = "fail"
            res.notes.append(f"yau: {exc}")
    else:
        out["yau"] = "skip"
    try:
        g = kempf_witness(rep, f)
        out["kempf"] = verdict(equal(jacobian_subspace(g), jacobian_subspace(f)))
    except KempfNotFound as exc:
        out["kempf"] = "fail"
        res.notes.append(f"kempf: {exc}")
    return res


def fuzz_harness(seed: int, trials: int, max_m: int = 3, max_d: int = 4, *,
                 max_n: int = 6, inject_fault: bool = False) -> FuzzSummary:
    """Random end-to-end trials; the summary depends only on the arguments."""
    results = [run_trial(seed, i, max_m, max_d, max_n=max_n, inject_fault=inject_fault)
               for i in range(trials)]
    results.sort(key=lambda t: t.index)
    return FuzzSummary(seed, results)
