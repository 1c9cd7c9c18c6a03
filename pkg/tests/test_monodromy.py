import pytest

from conftest import P
from zerocenter.algebra import Deformation
from zerocenter.errors import ClosureCapExceeded, DegenerateConfiguration, UnexpectedPrimitive
from zerocenter.monodromy import (
    PermGroup,
    Permutation,
    block_systems,
    classify,
    closure,
    deformation_group,
    is_transitive,
    is_two_transitive,
    loop_basis,
    monodromy_at,
)

C4 = Permutation.from_cycles(4, (0, 1, 2, 3))


def group(n, *gens):
    return PermGroup(n, tuple(gens))


def test_permutation_basics():
    p = Permutation((1, 2, 0))
    q = Permutation((1, 0, 2))
    assert (p * q)(0) == p(q(0))
    assert (p * p.inverse()).is_identity()
    assert p.order() == 3 and p.is_full_cycle()
    assert Permutation.from_cycles(3, (0, 1)).images == (1, 0, 2)


def test_closure_orders():
    assert closure(group(4, C4)).order == 4
    s3 = group(3, Permutation.from_cycles(3, (0, 1)), Permutation.from_cycles(3, (1, 2)))
    assert closure(s3).order == 6
    s6 = group(6, Permutation.from_cycles(6, (0, 1, 2, 3, 4, 5)), Permutation.from_cycles(6, (0, 1)))
    assert closure(s6).order == 720
    with pytest.raises(ClosureCapExceeded):
        closure(group(10, Permutation.from_cycles(10, tuple(range(10)))))


def test_transitivity():
    assert is_transitive(group(4, C4)) and not is_two_transitive(group(4, C4))
    s4 = group(4, C4, Permutation.from_cycles(4, (0, 1)))
    assert is_transitive(s4) and is_two_transitive(s4)
    assert not is_transitive(group(3, Permutation.from_cycles(3, (0, 1))))


def test_block_systems():
    assert block_systems(group(4, C4)) == [((0, 2), (1, 3))]
    assert block_systems(group(4, C4, Permutation.from_cycles(4, (0, 1)))) == []
    c6 = group(6, Permutation.from_cycles(6, tuple(range(6))))
    assert block_systems(c6) == [((0, 2, 4), (1, 3, 5)), ((0, 3), (1, 4), (2, 5))]


def test_classify_prime_degree():
    c5 = Permutation.from_cycles(5, (0, 1, 2, 3, 4))
    neg = Permutation((0, 4, 3, 2, 1))  # x -> -x mod 5
    assert classify(group(5, c5, neg)).tag == "DihedralChebyshev"
    dbl = Permutation((0, 2, 4, 1, 3))  # x -> 2x mod 5, the full affine group
    assert classify(group(5, c5, dbl)).tag == "TwoTransitive"
    c7 = Permutation.from_cycles(7, tuple(range(7)))
    sq = Permutation(tuple(2 * x % 7 for x in range(7)))  # order 3: affine group of order 21
    with pytest.raises(UnexpectedPrimitive):
        classify(group(7, c7, sq))


def test_loop_basis_examples():
    basis = loop_basis([0])
    assert len(basis.petals) == 1 and basis.base_t == 2
    basis = loop_basis([-2, 2])
    assert basis.values == (2, -2)
    assert loop_basis([]).petals == ()
    with pytest.raises(DegenerateConfiguration):
        loop_basis([1, 1 + 1e-12])


def test_monodromy_examples():
    g = monodromy_at(Deformation(P(0, 0, 0, 0, 0, 1), P(0)), 0)
    assert len(g.generators) == 1 and g.generators[0].is_full_cycle()
    assert classify(g).tag == "CyclicPrime"
    t3 = monodromy_at(Deformation(P(0, -3, 0, 4), P(0)), 0)
    assert len(t3.generators) == 2 and all(s.order() == 2 for s in t3.generators)
    assert closure(t3).order == 6
    s4 = monodromy_at(Deformation(P(0, 1, 0, 0, 1), P(0)), 0)
    assert closure(s4).order == 24


def test_infinity_loop_is_full_cycle():
    for f in (P(0, 1, 0, 0, 1), P(1, -2, 3, 0, 0, 1), P(0, 0, 0, 0, 1)):
        g = monodromy_at(Deformation(f, P(0)), 0)
        assert g.infinity.is_full_cycle()


def test_classify_invariant_under_relabeling():
    g = monodromy_at(Deformation(P(0, 0, 0, 0, 0, 0, 1), P(0)), 0)
    pi = Permutation((3, 0, 5, 1, 4, 2))
    moved = PermGroup(6, tuple(s.conjugate_by(pi) for s in g.generators))
    assert classify(g).tag == classify(moved).tag == "Imprimitive"
    assert closure(g).order == closure(moved).order


def test_deformation_group_examples():
    g = deformation_group(Deformation(P(0, 0, 0, 0, 0, 0, 1), P(0, 0, 1, 1)))
    assert classify(g).tag == "TwoTransitive" and g.order == 720
    g = deformation_group(Deformation(P(0, 0, 0, 0, 1), P(1, 0, 1, 0, 1)))
    cls = classify(g)
    assert cls.tag == "Imprimitive" and all(len(b) == 2 for b in cls.blocks)
    g = deformation_group(Deformation(P(0, 0, 0, 0, 0, 1), P(0, 0, 0, 0, 0, 1)))
    assert str(classify(g)) == "CyclicPrime(5)"
    assert g.provenance["eps_samples"] == ["1/7", "1/5"]
