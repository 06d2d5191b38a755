import random
from fractions import Fraction

import pytest

from qlat.equivalence import BasisChange, apply_rule, compose_bases, decorate_points
from qlat.errors import DegenerateEigen, NotSelfSimilar
from qlat.geometry import cut_and_project, singular_point, tile_lengths
from qlat.numeric import PHI, QuadraticNumber as Q
from qlat.selfsim import (
    catalog, catalog_entry, count_selfsame, cycle_table, eigen_tau, enumerate_selfsame, f_sequence,
    inflate_params, is_self_similar, n_selfsame, selfsame_params, solve_umklaap,
)

SQ2, SQ3, SQ5 = Q.sqrt(2), Q.sqrt(3), Q.sqrt(5)
DET_MINUS = [e for e in catalog() if e.tau.det == -1]
DET_PLUS = [e for e in catalog() if e.tau.det == 1]


def test_eigen_examples():
    e = eigen_tau(BasisChange(0, 1, 1, 1))
    assert (e.lambda_par, e.lambda_perp) == (PHI, 1 - PHI)
    e = eigen_tau(BasisChange(1, 1, 2, 1))
    assert (e.lambda_par, e.lambda_perp, e.v_par, e.v_perp) == (1 + SQ2, 1 - SQ2, SQ2, -SQ2)
    e = eigen_tau(BasisChange(2, 1, 5, 2))
    assert (e.lambda_par, e.v_par, e.v_perp) == (2 + SQ5, SQ5, -SQ5)


@pytest.mark.parametrize("entry", catalog(), ids=lambda e: e.case_id)
def test_eigen_invariants(entry):
    e, t = entry.eigen, entry.tau
    assert e.lambda_par * e.lambda_perp == t.det
    assert e.lambda_par + e.lambda_perp == t.trace
    assert e.lambda_perp.sign() == t.det
    assert e.lambda_par > 1 and abs(e.lambda_perp) < 1


def test_degenerate_eigen():
    for t in (BasisChange(1, 0, 0, 1), BasisChange(1, 1, 0, 1), BasisChange(2, 1, 1, 1) ** 0):
        with pytest.raises(DegenerateEigen):
            eigen_tau(t)


def test_is_self_similar():
    spec = catalog_entry("1").spec
    assert is_self_similar(spec, BasisChange(0, 1, 1, 1))
    assert not is_self_similar(spec, BasisChange(1, 1, 2, 1))
    assert not is_self_similar(spec, BasisChange(1, 0, 0, 1))


def test_inflate_requires_self_similarity():
    with pytest.raises(NotSelfSimilar):
        inflate_params(catalog_entry("1").spec, BasisChange(1, 1, 2, 1), 1)


@pytest.mark.parametrize("entry", catalog(), ids=lambda e: e.case_id)
def test_inflation_group_action(entry):
    spec, tau = entry.spec, entry.tau
    assert inflate_params(spec, tau, 0) == spec
    one = inflate_params(spec, tau, 1)
    assert inflate_params(spec, tau, 2) == inflate_params(one, tau, 1)
    assert inflate_params(spec, tau, 3) == inflate_params(inflate_params(one, tau, 1), tau, 1)


@pytest.mark.parametrize("entry", catalog(), ids=lambda e: e.case_id)
@pytest.mark.parametrize("s", [1, 2, 3])
def test_inflated_sequence_is_rescaled_sparse_sequence(entry, s):
    # the sparse quasilattice of basis tau^s m, rescaled by lambda^-s, is the inflated one
    spec, tau = entry.spec, entry.tau
    lam = entry.eigen.lambda_par ** s
    sparse = cut_and_project(compose_bases(spec, tau ** s), (-60, 60))
    infl = cut_and_project(inflate_params(spec, tau, s), (-60, 60))
    assert tuple(x / lam for x in sparse.xs) == infl.xs


def decorated_run(entry, window=300):
    spec, tau = entry.spec, entry.tau
    S, L = tile_lengths(spec)
    lam = entry.eigen.lambda_par
    infl = cut_and_project(inflate_params(spec, tau, 1), (-window, window))
    pts = decorate_points(entry.rule, [x * lam for x in infl.xs], infl.word, S, L)
    return infl, pts


@pytest.mark.parametrize("entry", catalog(), ids=lambda e: e.case_id)
def test_substitution_commutes_with_inflation(entry):
    spec = entry.spec
    infl, pts = decorated_run(entry, 120)
    base = cut_and_project(spec, (-800, 800))
    i0 = base.xs.index(pts[0])
    assert list(base.xs[i0:i0 + len(pts)]) == pts
    image = apply_rule(entry.rule, infl.word)
    assert image.letters in base.word


def test_selfsame_origin_is_singular():
    e = catalog_entry("1")
    spec = selfsame_params(e.tau, e.spec, 1, 0, 0)
    assert spec.q0_par == 0 and spec.q0_perp == 0
    assert singular_point(spec) is not None


@pytest.mark.parametrize("entry", catalog(), ids=lambda e: e.case_id)
def test_selfsame_is_umklaap_fixed(entry):
    rng = random.Random(entry.case_id)
    for _ in range(8):
        s, n1, n2 = rng.randint(1, 4), rng.randint(-3, 3), rng.randint(-3, 3)
        spec = selfsame_params(entry.tau, entry.spec, s, n1, n2)
        k1, k2 = solve_umklaap(spec, inflate_params(spec, entry.tau, s))
        assert spec.umklaap(k1, k2) == inflate_params(spec, entry.tau, s)


def test_case1_two_fold_classes():
    e = catalog_entry("1")
    en = enumerate_selfsame(e.spec, e.tau, 2)
    nonsing = [c for c in en.classes if not c.singular]
    assert len(nonsing) == 0 and en.singular_variants == 2
    assert en.N_s == 2 and en.irreducible == 2 and en.cycles == 1


def test_f_sequence_examples():
    assert f_sequence(BasisChange(0, 1, 1, 1), 11) == [1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144]
    assert f_sequence(BasisChange(1, 1, 2, 1), 11) == [1, 2, 5, 12, 29, 70, 169, 408, 985, 2378, 5741, 13860]
    lam = 2 + SQ3
    F = f_sequence(BasisChange(1, 2, 1, 3), 2)
    assert lam ** 2 == F[1] * lam - F[0] * 1


@pytest.mark.parametrize("entry", catalog(), ids=lambda e: e.case_id)
def test_power_expansion(entry):
    F = [0] + f_sequence(entry.tau, 12)
    lam, det = entry.eigen.lambda_par, entry.tau.det
    for s in range(1, 13):
        assert lam ** s == F[s] * lam - F[s - 1] * det


def test_counts_examples():
    assert [c.cycles for c in cycle_table(BasisChange(0, 1, 1, 1), 12)] == [0, 1, 1, 1, 2, 2, 4, 5, 8, 11, 18, 25]
    assert [c.cycles for c in cycle_table(BasisChange(1, 2, 1, 3), 12)] == [
        2, 5, 16, 45, 144, 440, 1440, 4680, 15600, 52344, 177840, 608160]
    c2 = count_selfsame(BasisChange(0, 1, 1, 1), 2)
    assert c2.N_s == 2 and c2.irreducible == 2


@pytest.mark.parametrize("entry", catalog(), ids=lambda e: e.case_id)
def test_irreducible_sum_over_divisors(entry):
    for s in range(1, 25):
        c = count_selfsame(entry.tau, s)
        assert c.irreducible % s == 0
        assert c.N_s == sum(count_selfsame(entry.tau, r).irreducible for r in range(1, s + 1) if s % r == 0)


def test_count_s_cap():
    with pytest.raises(ValueError):
        count_selfsame(BasisChange(0, 1, 1, 1), 65)
    assert count_selfsame(BasisChange(0, 1, 1, 1), 64).cycles > 0


# -- OEIS cross references: fixtures built from each sequence's own definition ----

def _linear(a, b, c0, c1, n):
    out = [c0, c1]
    while len(out) < n:
        out.append(a * out[-1] + b * out[-2])
    return out


def _mobius(n):
    out, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            out = -out
        p += 1
    return -out if n > 1 else out


def _primitive_cyclic(T, n):
    """Lyndon words of length n whose cyclic adjacencies are allowed by the 0/1 matrix T."""
    def trace_pow(k):
        size = len(T)
        M = [[int(i == j) for j in range(size)] for i in range(size)]
        for _ in range(k):
            M = [[sum(M[i][l] * T[l][j] for l in range(size)) for j in range(size)] for i in range(size)]
        return sum(M[i][i] for i in range(size))
    return sum(_mobius(n // d) * trace_pow(d) for d in range(1, n + 1) if n % d == 0) // n


def _brute_lyndon(alphabet, n, ok):
    from itertools import product
    count = 0
    for w in product(alphabet, repeat=n):
        rots = [w[i:] + w[:i] for i in range(n)]
        if all(w < r for r in rots[1:]) and all(ok(w[i], w[(i + 1) % n]) for i in range(n)):
            count += 1
    return count


def test_necklace_formula_against_brute_force():
    no00 = [[0, 1], [1, 1]]
    smooth3 = [[1, 1, 0], [1, 1, 1], [0, 1, 1]]
    for n in range(2, 9):
        assert _primitive_cyclic(no00, n) == _brute_lyndon((0, 1), n, lambda a, b: a or b)
        assert _primitive_cyclic(smooth3, n) == _brute_lyndon((0, 1, 2), n, lambda a, b: abs(a - b) <= 1)


def test_oeis_columns():
    cols = {f: cycle_table(catalog_entry(f).tau, 12) for f in "1234"}
    F = {f: [c.F[c.s - 1] for c in cols[f]] for f in cols}
    cyc = {f: [c.cycles for c in cols[f]] for f in cols}
    assert F["1"] == _linear(1, 1, 0, 1, 13)[1:]      # A000045
    assert F["2"] == _linear(2, 1, 0, 1, 13)[1:]      # A000129
    assert F["3"] == _linear(4, -1, 0, 1, 13)[1:]     # A001353
    assert F["4"] == _linear(4, 1, 0, 1, 13)[1:]      # A001076
    # necklace columns agree from length 2 on
    assert cyc["1"][1:] == [_primitive_cyclic([[0, 1], [1, 1]], n) for n in range(2, 13)]        # A006206
    assert cyc["2"][1:] == [_primitive_cyclic([[1, 1, 0], [1, 1, 1], [0, 1, 1]], n) for n in range(2, 13)]  # A215335


# -- brute-force class enumeration ----------------------------------------

@pytest.mark.parametrize("entry", DET_MINUS, ids=lambda e: e.case_id)
@pytest.mark.parametrize("s", [1, 2, 3, 4])
def test_enumeration_matches_count_det_minus(entry, s):
    en = enumerate_selfsame(entry.spec, entry.tau, s)
    c = count_selfsame(entry.tau, s)
    assert (en.N_s, en.irreducible, en.cycles) == (c.N_s, c.irreducible, c.cycles)


@pytest.mark.parametrize("entry", DET_PLUS, ids=lambda e: e.case_id)
@pytest.mark.parametrize("s", [1, 2, 3, 4])
def test_enumeration_det_plus_counts_both_singular_variants(entry, s):
    # with det = +1 each singular sign variant is fixed on its own, giving one
    # quasilattice more than the closed-form count
    en = enumerate_selfsame(entry.spec, entry.tau, s)
    c = count_selfsame(entry.tau, s)
    assert en.singular_variants == 2
    assert en.N_s == c.N_s + 1
    assert len(en.classes) == c.N_s


def test_catalog_entries():
    e = catalog_entry("4d")
    assert e.tau == BasisChange(0, 1, 1, 4)
    assert (e.eigen.v_par, e.eigen.v_perp) == (2 + SQ5, 2 - SQ5)
    assert (str(e.rule.word_S), str(e.rule.word_L)) == ("L", "LLSLL")
    e = catalog_entry("4a")
    assert (str(e.rule.word_S), str(e.rule.word_L)) == ("lSSSl", "lSSSSl")
    assert catalog_entry(3).case_id == "3a"
    with pytest.raises(KeyError):
        catalog_entry("5")


def test_subcases_by_increasing_ratio():
    by_family = {}
    for e in catalog():
        S, L = tile_lengths(e.spec)
        by_family.setdefault(e.family, []).append(L / S)
    for ratios in by_family.values():
        assert ratios == sorted(ratios)
