import random
from itertools import product

import pytest

from connsite import (
    MalformedInputError,
    Presheaf,
    Sieve,
    amalgamations,
    constant_presheaf,
    covering_table,
    enumerate_sieves,
    is_sheaf,
    maps_presheaf,
    matching_families,
    terminal_presheaf,
    validate_presheaf,
)
from connsite.errors import EnumerationCapError


@pytest.fixture(scope="module")
def table1(K1):
    return covering_table(K1)


def cover_abcd(K):
    return Sieve(K.mask("abcd"), (K.mask(m) for m in ("", "a", "b", "c", "d", "ab", "bcd")))


def naive_matching(F, c):
    """Every assignment tuple over the members of ``c``, filtered for compatibility."""
    K = F.structure
    members = c.ordered
    out = []
    for choice in product(*(F.sections[B] for B in members)):
        a = dict(zip(members, choice))
        if all(F.restrict(a[B], B, C) == a[C] for B in members for C in K.below(B)):
            out.append(a)
    return out


def relabel(F, rng):
    K = F.structure
    rename = {}
    for A in K.family:
        secs = list(F.sections[A])
        shuffled = [f"{x}~{A}" for x in secs]
        rng.shuffle(shuffled)
        rename[A] = dict(zip(secs, shuffled))
    sections = {A: tuple(rename[A][x] for x in F.sections[A]) for A in K.family}
    maps = {
        (A, B): {rename[A][x]: rename[B][y] for x, y in m.items()}
        for (A, B), m in F.restrictions.items()
    }
    return Presheaf(K, sections, maps)


# ---- validate_presheaf ---------------------------------------------------

def test_constant_and_maps_are_presheaves(K1):
    assert validate_presheaf(constant_presheaf(K1, ["s", "t"])).ok
    assert validate_presheaf(maps_presheaf(K1)).ok


def test_path_dependence_reported(K1):
    F = constant_presheaf(K1, ["s", "t"])
    maps = dict(F.restrictions)
    maps[(K1.mask("abcd"), K1.mask("ab"))] = {"s": "t", "t": "s"}
    report = validate_presheaf(Presheaf(K1, F.sections, maps))
    assert not report.ok
    v = next(v for v in report.violations if v.lower == K1.mask("b"))
    assert v.upper == K1.mask("abcd")
    assert {v.path1[1], v.path2[1]} == {K1.mask("ab"), K1.mask("bcd")}
    assert v.image1 != v.image2


def test_malformed_presheaves(K1):
    F = terminal_presheaf(K1)
    sections = dict(F.sections)
    del sections[K1.mask("e")]
    with pytest.raises(MalformedInputError):
        validate_presheaf(Presheaf(K1, sections, F.restrictions))
    maps = dict(F.restrictions)
    del maps[(K1.mask("ab"), K1.mask("a"))]
    with pytest.raises(MalformedInputError):
        validate_presheaf(Presheaf(K1, F.sections, maps))
    maps = dict(F.restrictions)
    maps[(K1.mask("ab"), K1.mask("a"))] = {"*": "nope"}
    with pytest.raises(MalformedInputError):
        validate_presheaf(Presheaf(K1, F.sections, maps))


# ---- matching families and amalgamations ---------------------------------

def test_empty_sieve_has_one_family(K1):
    F = maps_presheaf(K1)
    fams = matching_families(F, Sieve(K1.mask("abcd")))
    assert len(fams) == 1 and dict(fams[0].assignment) == {}


def test_maps_presheaf_families_on_cover(K1):
    F = maps_presheaf(K1)
    c = cover_abcd(K1)
    fams = matching_families(F, c)
    # 4 functions on {a,b} times 8 on {b,c,d}, agreeing at b
    assert len(fams) == 16
    assert sorted(map(sorted, (m.assignment.items() for m in fams))) == sorted(
        map(sorted, (a.items() for a in naive_matching(F, c)))
    )
    for m in fams:
        glued = amalgamations(F, m)
        assert len(glued) == 1
        x = glued[0]
        assert all(F.restrict(x, c.base, B) == v for B, v in m.assignment.items())


def test_constant_presheaf_families(K1):
    fams = matching_families(constant_presheaf(K1, ["s", "t"]), cover_abcd(K1))
    assert sorted(set(m.assignment.values()) for m in fams) == [{"s"}, {"t"}]


def test_matching_family_cap(K1):
    with pytest.raises(EnumerationCapError):
        matching_families(maps_presheaf(K1), cover_abcd(K1), cap=3)


def test_amalgamations_vacuous(K1):
    F = constant_presheaf(K1, ["s", "t"])
    (m,) = matching_families(F, Sieve(0))
    assert amalgamations(F, m) == ["s", "t"]


def test_matching_families_match_naive_oracle(K1, small_corpus):
    rng = random.Random(11)
    checked = 0
    for K in [K1, *small_corpus[:12]]:
        F = maps_presheaf(K, ("0", "1")) if K.ground.size <= 4 else constant_presheaf(K, ["s", "t", "u"])
        for A in K.family:
            for c in enumerate_sieves(K, A):
                total = 1
                for B in c.members:
                    total *= len(F.sections[B])
                if total > 2_000 or rng.random() > 0.3:
                    continue
                got = sorted(sorted(m.assignment.items()) for m in matching_families(F, c))
                want = sorted(sorted(a.items()) for a in naive_matching(F, c))
                assert got == want
                checked += 1
    assert checked > 50


def test_terminal_always_one_amalgamation(K1, table1):
    F = terminal_presheaf(K1)
    for A in K1.family:
        for c in enumerate_sieves(K1, A):
            for m in matching_families(F, c):
                assert amalgamations(F, m) == ["*"]


def test_identity_member_shortcut(K1, table1):
    F = maps_presheaf(K1)
    for A in K1.family:
        for c in table1[A]:
            if A in c.members:
                for m in matching_families(F, c):
                    assert amalgamations(F, m) == [m.assignment[A]]


# ---- is_sheaf ------------------------------------------------------------

def test_terminal_is_sheaf(K1, table1):
    assert is_sheaf(terminal_presheaf(K1), table1).is_sheaf


def test_constant_is_not_sheaf(K1, table1):
    verdict = is_sheaf(constant_presheaf(K1, ["s", "t"]), table1)
    ce = verdict.counterexample
    assert not verdict.is_sheaf
    assert ce.obj == 0 and ce.sieve == Sieve(0) and ce.amalgamations == 2
    assert verdict == is_sheaf(constant_presheaf(K1, ["s", "t"]), table1)


def test_maps_presheaf_is_sheaf_on_exemple1(K1, table1):
    assert is_sheaf(maps_presheaf(K1), table1).is_sheaf


def test_terminal_is_sheaf_on_corpus(small_corpus):
    for K in small_corpus:
        assert is_sheaf(terminal_presheaf(K), covering_table(K)).is_sheaf


def test_sheaf_forces_singleton_over_empty(small_corpus):
    for K in small_corpus:
        table = covering_table(K)
        for labels in (["s", "t"], []):
            F = constant_presheaf(K, labels)
            ce = is_sheaf(F, table).counterexample
            assert ce is not None and ce.obj == 0 and ce.amalgamations == len(labels)


def test_verdict_stable_under_relabelling(K1, table1, small_corpus):
    rng = random.Random(3)
    cases = [(K1, table1, maps_presheaf(K1)), (K1, table1, constant_presheaf(K1, ["s", "t"]))]
    cases += [(K, covering_table(K), terminal_presheaf(K)) for K in small_corpus[:10]]
    for K, table, F in cases:
        G = relabel(F, rng)
        assert validate_presheaf(G).ok
        a, b = is_sheaf(F, table), is_sheaf(G, table)
        assert a.is_sheaf == b.is_sheaf
        if not a.is_sheaf:
            assert (a.counterexample.obj, a.counterexample.sieve) == (b.counterexample.obj, b.counterexample.sieve)
