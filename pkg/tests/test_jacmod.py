from fractions import Fraction

import pytest

from invjac.jacmod import (
    HypothesisError,
    KempfNotFound,
    MirrorMap,
    check_intertwining_phi,
    check_psi_hom,
    drop_vector_part,
    equivariant_mirror_map,
    fuzz_harness,
    jacobian_subspace,
    kempf_witness,
    phi,
    quotient_map_check,
    transpose_vector_part,
    yau_check,
)
from invjac.modanalysis import NotInvariantError, invariants, is_invariant_subspace
from invjac.polyring import Poly, monomial_basis, parse_poly
from invjac.qlinalg import QMatrix, Subspace, equal, span
from invjac.repcore import (
    Generator,
    TensorElement,
    act_on_poly,
    act_on_tensor,
    direct_sum,
    dual_rep,
    make_rep,
    sl2_irrep,
    sln_standard,
    trivial_rep,
)

DET = "x1*x4 - x2*x3"


def V(*ms):
    return direct_sum([sl2_irrep(m) for m in ms])


class TestJacobian:
    def test_determinant_is_full(self):
        J = jacobian_subspace(parse_poly(DET, 4))
        assert J.dim == 4 and equal(J, Subspace.full(monomial_basis(4, 1)))

    @pytest.mark.parametrize("d", [1, 2, 5])
    def test_pure_power(self, d):
        J = jacobian_subspace(Poly.monomial((d, 0)))
        assert equal(J, span([Poly.monomial((d - 1, 0))], monomial_basis(2, d - 1)))

    def test_linear_gives_constants(self):
        J = jacobian_subspace(parse_poly("x1", 2))
        assert J.ambient == monomial_basis(2, 0) and J.dim == 1

    def test_rejects_zero_and_mixed(self):
        with pytest.raises(HypothesisError):
            jacobian_subspace(Poly.zero(2))
        with pytest.raises(HypothesisError):
            jacobian_subspace(parse_poly("x1 + x2^2", 2))


class TestPhi:
    def test_single_partial(self):
        t = TensorElement.pure(parse_poly("x1^2", 2), 1)
        assert phi(sl2_irrep(1), t) == parse_poly("2*x1", 2)

    def test_zero(self):
        assert phi(sl2_irrep(1), TensorElement(2)).is_zero()

    def test_sum_of_partials(self):
        f = parse_poly(DET, 4)
        t = TensorElement(4, [(1, f), (4, f)])
        assert phi(V(1, 1), t) == parse_poly("x4 + x1", 4)

    def test_degree_mismatch(self):
        t = TensorElement(2, [(1, parse_poly("x1", 2)), (2, parse_poly("x1^2", 2))])
        with pytest.raises(HypothesisError):
            phi(sl2_irrep(1), t)


class TestIntertwining:
    def test_v1_degree_one(self):
        assert check_intertwining_phi(sl2_irrep(1), 1).passed

    def test_v1_plus_v2_degree_three(self):
        res = check_intertwining_phi(V(1, 2), 3)
        assert res.passed and res.checked == 3 * 5 * 35

    @pytest.mark.parametrize("rep", [V(1, 2), sln_standard(3), dual_rep(sln_standard(3))])
    @pytest.mark.parametrize("d", [0, 1, 2, 3])
    def test_fast_path_agrees_with_generic(self, rep, d):
        fast = check_intertwining_phi(rep, d)
        slow = check_intertwining_phi(rep, d, tensor_action=act_on_tensor)
        assert fast == slow and fast.passed

    def test_corrupted_matrix_still_intertwines(self):
        # the identity holds for each matrix separately, brackets play no part
        r = sl2_irrep(1)
        bad_E = QMatrix.from_rows([[3, 1], [Fraction(1, 2), 0]])
        gens = [Generator(g.name, g.role, bad_E if g.name == "E" else g.matrix) for g in r.generators]
        rep = make_rep(2, gens, r.sl2_triples)
        assert check_intertwining_phi(rep, 3).passed
        assert check_intertwining_phi(rep, 3, tensor_action=act_on_tensor).passed

    @pytest.mark.parametrize("fault", [drop_vector_part, transpose_vector_part])
    def test_negative_controls(self, fault):
        res = check_intertwining_phi(V(1, 2), 2, tensor_action=fault)
        assert not res.passed
        cx = res.counterexample
        assert cx.lhs != cx.rhs

    def test_fast_path_detects_wrong_vector_action(self):
        rep = V(1, 2)
        # poison the cached X e_i columns with the transposed matrix
        cols = {g.name: rep.column_forms(g.name) for g in rep.generators}
        wrong = {name: tuple(tuple((j, g.matrix[i, j]) for j in range(rep.n) if g.matrix[i, j])
                             for i in range(rep.n))
                 for name, g in ((g.name, g) for g in rep.generators)}
        object.__setattr__(rep, "_columns", wrong)
        try:
            res = check_intertwining_phi(rep, 2)
        finally:
            object.__setattr__(rep, "_columns", cols)
        assert not res.passed and res.counterexample.generator in ("E", "F")

    def test_degree_zero_vacuous(self):
        assert check_intertwining_phi(sl2_irrep(3), 0).passed


class TestQuotientMap:
    def test_determinant(self):
        q = quotient_map_check(V(1, 1), parse_poly(DET, 4))
        assert (q.is_hom, q.kernel_dim, q.image_dim) == (True, 0, 4)

    def test_trivial_rep_any_poly(self):
        q = quotient_map_check(trivial_rep(2), parse_poly("x1^3 - 5*x1*x2^2", 2))
        assert q.is_hom and q.kernel_dim + q.image_dim == 2

    def test_non_invariant_cube(self):
        q = quotient_map_check(sl2_irrep(1), parse_poly("x1^3", 2))
        assert not q.is_hom and q.witness is not None

    @pytest.mark.parametrize("ms,d", [((1, 1), 2), ((3,), 4), ((4,), 2), ((4,), 3), ((2, 2), 2), ((1, 1, 1, 1), 2)])
    def test_invariants_give_quotients(self, ms, d):
        rep = V(*ms)
        for f in invariants(rep, d).polys():
            q = quotient_map_check(rep, f)
            assert q.is_hom and q.kernel_dim + q.image_dim == rep.n
            J = jacobian_subspace(f)
            assert q.image_dim == J.dim
            assert is_invariant_subspace(rep, J)[0]


def quartic():
    return invariants(sl2_irrep(3), 4).polys()[0]


class TestYau:
    def test_binary_cubic_discriminant(self):
        y = yau_check(sl2_irrep(3), quartic())
        assert y.subset_holds and y.f_invariant
        assert y.j_highest_weights == {(3,)} == y.a1_highest_weights
        assert y.quotient_hom and y.quotient_kernel_dim == 0

    def test_degree_gate(self):
        with pytest.raises(HypothesisError, match="degree ≤ 2"):
            yau_check(V(1, 1), parse_poly(DET, 4))

    def test_non_invariant_jacobian(self):
        with pytest.raises(NotInvariantError) as err:
            yau_check(sl2_irrep(1), parse_poly("x1^3", 2))
        assert err.value.generator == "E"

    def test_zero(self):
        with pytest.raises(HypothesisError):
            yau_check(sl2_irrep(1), Poly.zero(2))

    @pytest.mark.parametrize("c", [Fraction(-1), Fraction(7, 3), Fraction(-2, 5)])
    def test_scale_invariance(self, c):
        rep = sl2_irrep(3)
        a, b = yau_check(rep, quartic()), yau_check(rep, quartic().scale(c))
        assert (a.subset_holds, a.j_highest_weights, a.quotient_hom, a.quotient_kernel_dim) == \
            (b.subset_holds, b.j_highest_weights, b.quotient_hom, b.quotient_kernel_dim)

    def test_product_of_determinants(self):
        # V(1)+V(1)+V(1): products of invariant quadrics in degree 4
        rep = V(1, 1, 1)
        for f in invariants(rep, 4).polys()[:3]:
            y = yau_check(rep, f)
            assert y.subset_holds and y.quotient_hom


class TestKempf:
    def test_invariant_returns_multiple(self):
        f = quartic()
        g = kempf_witness(sl2_irrep(3), f)
        assert equal(jacobian_subspace(g), jacobian_subspace(f))
        # one-dimensional invariant space: g is a multiple of f
        assert span([f]) == span([g])

    def test_scaled_determinant(self):
        f = parse_poly("5*x1*x4 - 5*x2*x3", 4)
        g = kempf_witness(V(1, 1), f)
        assert span([g]) == span([parse_poly(DET, 4)])

    def test_requires_invariant_jacobian(self):
        with pytest.raises(NotInvariantError):
            kempf_witness(sl2_irrep(1), parse_poly("x1^3", 2))

    def test_not_found_without_invariants(self):
        # J(x1) = A_0 is invariant, but there is no invariant linear form
        with pytest.raises(KempfNotFound):
            kempf_witness(sl2_irrep(1), parse_poly("x1", 2))

    def test_result_is_invariant(self):
        rep = V(2, 2)
        for f in invariants(rep, 2).polys():
            g = kempf_witness(rep, f)
            assert all(act_on_poly(rep, x.name, g).is_zero() for x in rep.generators)
            assert equal(jacobian_subspace(g), jacobian_subspace(f))


class TestMirror:
    def test_v1(self):
        mm = equivariant_mirror_map(sl2_irrep(1))
        assert mm.blocks[0].coefficients == (1, -1)
        f = parse_poly("x1^2*x2", 2)
        assert mm.psi(f, 1) == parse_poly("x1^2", 2)
        assert mm.psi(f, 2) == parse_poly("-2*x1*x2", 2)

    def test_trivial(self):
        mm = equivariant_mirror_map(sl2_irrep(0))
        assert mm.blocks[0].coefficients == (1,)
        assert mm.psi(parse_poly("x1^3", 1), 1) == parse_poly("3*x1^2", 1)

    def test_independent_blocks(self):
        mm = equivariant_mirror_map(V(1, 2))
        assert [(b.offset, b.m, b.coefficients) for b in mm.blocks] == \
            [(0, 1, (1, -1)), (2, 2, (1, -1, 1))]
        assert mm.alternating

    @pytest.mark.parametrize("m", range(5))
    def test_alternating_and_hom(self, m):
        rep = sl2_irrep(m)
        mm = equivariant_mirror_map(rep)
        assert mm.alternating
        for d in range(5):
            assert check_psi_hom(rep, mm, d).passed

    def test_sign_flip_fails(self):
        rep = sl2_irrep(2)
        bad = equivariant_mirror_map(rep).with_flipped_sign(0, 1)
        res = check_psi_hom(rep, bad, 2)
        assert not res.passed and res.counterexample.lhs != res.counterexample.rhs

    def test_needs_block_structure(self):
        with pytest.raises(HypothesisError):
            equivariant_mirror_map(sln_standard(3))


class TestFuzz:
    def test_all_pass(self):
        s = fuzz_harness(1, 10, max_m=3, max_d=4)
        assert s.all_passed and len(s.trials) == 10
        assert s.counts["intertwining"]["pass"] == 10

    def test_empty(self):
        s = fuzz_harness(1, 0)
        assert s.trials == [] and s.all_passed

    def test_fault_injection_reported(self):
        s = fuzz_harness(1, 6, inject_fault=True)
        assert s.counts["intertwining"]["fail"] > 0 and not s.all_passed

    def test_deterministic(self):
        assert fuzz_harness(3, 5).as_dict() == fuzz_harness(3, 5).as_dict()
