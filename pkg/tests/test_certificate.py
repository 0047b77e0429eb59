import pytest
import sympy

from wsatlab.certificate import (
    certificate_report,
    dim_U,
    g_vector,
    generators,
    span_U,
    support_condition,
    tight_case,
)
from wsatlab.core import ParamFamily, VertexUniverse, build_host, parts_choices
from wsatlab.errors import CertificateError, FamilyError
from wsatlab.exterior import ColorfulBasis, ExtElement, colorful_generic_basis, interior, wedge
from wsatlab.formulas import q_value
from wsatlab.linalg import rank
from wsatlab.percolation import cwsat_bruteforce

TWO_PROFILE = ((4, 4), [(1, 0), (0, 1)], [(2, 1), (1, 2)])


def identity_basis(n):
    """Block-diagonal identity: orthogonal, but most minors vanish."""
    u = VertexUniverse(n)
    blocks = tuple(tuple(tuple(int(a == b) for b in range(k)) for a in range(k)) for k in n)
    return ColorfulBasis(u, blocks, None, False)


class TestGVector:
    def test_one_color(self):
        basis = colorful_generic_basis((3,), seed=1)
        g = g_vector((3,), [(2,)], basis)
        assert g == basis.f_vector(2)
        assert len(g.terms) == 3

    def test_r_equals_s(self):
        basis = colorful_generic_basis((3, 2), seed=1)
        assert g_vector((2, 1), [(2, 1)], basis) == ExtElement.basis(5, 0)

    def test_two_profile_signs(self):
        basis = colorful_generic_basis((4, 4), seed=3)
        u = basis.universe
        f = lambda a, i: basis.f_vector(u.bit(a, i))
        both_first = wedge(f(1, 1), f(2, 1))
        mixed = wedge(f(2, 1), f(1, 2))
        assert g_vector((2, 1), TWO_PROFILE[1], basis) == both_first + mixed
        assert g_vector((2, 1), TWO_PROFILE[1], basis, ordered_signs=False) == both_first - mixed

    def test_precondition(self):
        basis = colorful_generic_basis((3, 3), seed=1)
        with pytest.raises(FamilyError):
            g_vector((1, 1), [(2, 1)], basis)


class TestSpan:
    def test_triangle_generators(self):
        basis = colorful_generic_basis((4,), seed=2)
        gens = span_U((4,), [(2,)], [(3,)], basis)
        assert len(gens) == 4
        for g in gens:
            support = g.support()
            assert len(support) == 3 and all(bin(m).count("1") == 2 for m in support)
            covered = 0
            for m in support:
                covered |= m
            assert bin(covered).count("1") == 3
        assert dim_U(gens) == 3 == q_value((4,), [(2,)], [(3,)])

    def test_empty(self):
        assert dim_U([]) == 0
        basis = colorful_generic_basis((2, 2), seed=2)
        assert span_U((2, 2), [(1, 1)], [(3, 3)], basis) == []
        assert support_condition(build_host((2, 2), [(1, 1)]), [(1, 1)], [(3, 3)], basis)

    def test_r_equals_n(self):
        basis = colorful_generic_basis((3, 2), seed=2)
        assert len(generators(ParamFamily((3, 2), [(1, 1)], [(3, 2)]), basis)) == 1

    def test_two_profile_dimension(self):
        basis = colorful_generic_basis((4, 4), seed=5)
        assert dim_U(span_U(*TWO_PROFILE, basis)) == 7

    def test_dim_matches_independent_rank(self):
        basis = colorful_generic_basis((3, 3), seed=4)
        gens = span_U((3, 3), [(1, 1), (2, 0)], [(2, 2)], basis)
        cols = sorted(set().union(*(g.terms for g in gens)))
        M = sympy.Matrix([[g.terms.get(c, 0) for c in cols] for g in gens])
        assert dim_U(gens) == M.rank()


class TestSupport:
    @pytest.mark.parametrize("inst", [TWO_PROFILE, ((4, 4), [(2, 1)], [(2, 2)]), ((3, 3), [(1, 1), (0, 0)], [(2, 2)])])
    def test_holds_for_generic_basis(self, inst):
        n, S, R = inst
        assert support_condition(build_host(n, S), S, R, colorful_generic_basis(n, seed=6))

    def test_corrupted_basis_is_caught(self):
        n, S, R = (3, 3), [(1, 1)], [(2, 2)]
        basis = identity_basis(n)
        assert not support_condition(build_host(n, S), S, R, basis)
        with pytest.raises(CertificateError):
            certificate_report(n, S, R, basis=basis)

    def test_literal_signs_overshoot(self):
        """With j != i in the sign exponent, dim U exceeds q on the two-profile family."""
        basis = colorful_generic_basis((4, 4), seed=5)
        fam = ParamFamily(*TWO_PROFILE)
        host = build_host(fam.n, fam.S).edges
        rows = []
        for r in fam.fitting_R():
            g = g_vector(r, fam.S, basis, ordered_signs=False)
            for parts in parts_choices(basis.universe, r):
                m = interior(g, ExtElement.basis(8, sum(parts.masks(basis.universe))))
                rows.append(m)
        cols = sorted(host)
        assert rank([[x.terms.get(c, 0) for c in cols] for x in rows]) == 8 > q_value(*TWO_PROFILE)


class TestReport:
    def test_triangle(self):
        rep = certificate_report((4,), [(2,)], [(3,)])
        assert (rep.edge_count, rep.dim_U, rep.q, rep.bound, rep.formula_cwsat) == (6, 3, 3, 3, 3)
        assert rep.support_ok and rep.tight_case == "max_s"

    def test_two_profile(self):
        rep = certificate_report(*TWO_PROFILE)
        assert (rep.edge_count, rep.dim_U, rep.q, rep.bound, rep.formula_cwsat) == (8, 7, 7, 1, 1)
        assert rep.support_ok and rep.tight_case == "none" and rep.dim_equals_q

    def test_square_small(self):
        rep = certificate_report((3, 3), [(2, 1)], [(2, 2)])
        assert rep.bound == rep.formula_cwsat == 3

    def test_sound_and_seed_independent(self):
        for n, S, R in [TWO_PROFILE, ((3, 3), [(1, 1)], [(2, 2), (3, 2)]), ((4, 3), [(1, 0), (1, 1)], [(2, 2)])]:
            dims = {certificate_report(n, S, R, seed=k).dim_U for k in (1, 2, 3)}
            assert len(dims) == 1
            rep = certificate_report(n, S, R, seed=1)
            assert rep.bound <= cwsat_bruteforce(build_host(n, S), S, R).value

    def test_tight_case_priority(self):
        assert tight_case([(1, 1)], [(2, 2)]) == "max_s"
        assert tight_case([(1, 0), (0, 1)], [(2, 2)]) == "min_r"
        assert tight_case(*TWO_PROFILE[1:]) == "none"

    def test_json(self):
        data = certificate_report((4,), [(2,)], [(3,)], seed=4).to_json()
        assert data["n"] == [4] and data["bound"] == 3 and data["seed"] == 4
