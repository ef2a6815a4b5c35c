import random
from fractions import Fraction

import pytest

from minflow.errors import AmbiguityError, DomainError, NoParseError
from minflow.factors import (OdometerAddress, address, desubstitute,
                             fiber_census, point_address,
                             recognizability_length, word_frequencies)
from minflow.points import fixed_point, point_from_address, seam_points
from minflow.words import flip_word


def test_odometer_address_arithmetic():
    a = OdometerAddress((1, 1, 1))
    assert a.to_int() == 7
    assert a.plus(1).digits == (0, 0, 0)
    assert a.plus(2).digits == (1, 0, 0)
    assert OdometerAddress.from_int(5, 4).digits == (1, 0, 1, 0)
    assert a.truncate(2).digits == (1, 1)
    assert str(OdometerAddress((0, 1, 0))) == "010"
    with pytest.raises(DomainError):
        OdometerAddress((0, 2))


def test_recognizability_lengths(morse, pd):
    assert recognizability_length(morse) == 4
    assert recognizability_length(pd) == 3


def test_desubstitute_examples(morse, pd):
    assert desubstitute(morse, "01101001") == ("0110", 0)
    assert desubstitute(pd, "01000101") == ("0100", 0)


def test_desubstitute_odd_alignment(morse):
    mu = fixed_point(morse)
    word = mu.window(1, 12)
    preimage, offset = desubstitute(morse, word)
    assert offset == 1
    # full blocks cover coordinates 2..11, which desubstitute to the
    # fixed point's coordinates 1..5
    assert preimage == mu.window(1, 5)


def test_desubstitute_errors(morse):
    with pytest.raises(AmbiguityError):
        desubstitute(morse, "01")
    with pytest.raises(NoParseError):
        desubstitute(morse, "0000")
    with pytest.raises(DomainError):
        from minflow.words import get_system
        desubstitute(get_system("fibonacci"), "0100")


def test_address_examples(morse):
    mu = fixed_point(morse)
    for k in (1, 4, 10):
        assert address(morse, mu, k).digits == (0,) * k
    assert address(morse, mu.shift(1), 3).digits == (1, 0, 0)
    assert address(morse, mu.shift(5), 4).digits == (1, 0, 1, 0)
    assert address(morse, mu, 0).digits == ()


def test_address_equivariance_sampled(morse):
    mu = fixed_point(morse)
    rng = random.Random(11)
    base = {k: address(morse, mu, k) for k in range(1, 11)}
    for _ in range(300):
        k = rng.randint(1, 10)
        m = rng.randint(-4096, 4096)
        assert address(morse, mu.shift(m), k).digits == base[k].plus(m).digits


def test_address_truncation_coherence(morse):
    p = fixed_point(morse).shift(1337)
    a8 = address(morse, p, 8)
    for j in (1, 3, 5, 8):
        assert address(morse, p, j).digits == a8.truncate(j).digits


def test_address_of_address_point_round_trips(morse):
    digits = tuple(j % 2 for j in range(14))
    p = point_from_address(morse, digits, "0")
    assert address(morse, p, 10).digits == digits[:10]
    assert point_address(p, 14).digits == digits
    assert point_address(p.shift(3), 14).digits == \
        OdometerAddress(digits).plus(3).digits
    assert point_address(p.flip(), 14).digits == digits


def test_fiber_census_values(morse, pd):
    seam = fiber_census(morse, OdometerAddress((0,) * 12), 16)
    assert seam.cardinality == 4 and seam.quotient_cardinality == 2
    assert seam.stabilized
    alt = fiber_census(morse, OdometerAddress(tuple(j % 2 for j in range(12))), 16)
    assert alt.cardinality == 2 and alt.quotient_cardinality == 1
    assert alt.stabilized
    rng = random.Random(3)
    generic = fiber_census(
        pd, OdometerAddress(tuple(rng.randint(0, 1) for _ in range(14))), 16)
    assert generic.cardinality == 1
    assert generic.quotient_cardinality is None


def test_seam_census_windows_are_the_splice_windows(morse):
    census = fiber_census(morse, OdometerAddress((0,) * 12), 16)
    expected = {p.window(-16, 16) for p in seam_points(morse).values()}
    assert set(census.windows) == expected


def test_census_cardinality_monotone_in_level(morse):
    addr = OdometerAddress(tuple(j % 2 for j in range(14)))
    cards = [fiber_census(morse, addr.truncate(j), 8).cardinality
             for j in (4, 8, 12, 14)]
    assert cards == sorted(cards, reverse=True)


def test_census_flip_symmetry_at_seam(morse):
    census = fiber_census(morse, OdometerAddress((0,) * 10), 8)
    wins = set(census.windows)
    assert {flip_word(w) for w in wins} == wins


def test_word_frequencies_morse(morse):
    table = word_frequencies(morse, 1, 1024)
    assert table.frequency("0") == Fraction(1, 2)
    assert table.frequency("1") == Fraction(1, 2)
    table = word_frequencies(morse, 2, 1 << 12)
    counts = dict(table.counts)
    assert sum(counts.values()) == 1 << 12
    for w, c in counts.items():
        assert abs(c - counts[flip_word(w)]) <= 2


def test_word_frequencies_fibonacci(fib):
    table = word_frequencies(fib, 1, 10 ** 5)
    golden = (1 + 5 ** 0.5) / 2
    assert abs(table.frequency("0") - 1 / golden) < 0.01


def test_frequency_invariance_under_automorphisms(morse):
    # the pushforward of the unique invariant measure is itself, so the
    # image orbit must reproduce the frequency table within 2(r+1)/steps
    from minflow.codes import enumerate_endomorphisms
    n, steps = 2, 1 << 14
    base = dict(word_frequencies(morse, n, steps).counts)
    prefix = morse.test_word(steps + n + 4)
    for radius in (0, 1):
        for code in enumerate_endomorphisms(morse, radius):
            image = code.apply(prefix)
            counts = {}
            for i in range(steps):
                w = image[i:i + n]
                counts[w] = counts.get(w, 0) + 1
            for w in set(base) | set(counts):
                delta = abs(counts.get(w, 0) - base.get(w, 0))
                assert delta <= 2 * (radius + 1)


def test_split_point_dichotomy(morse):
    # eventually-constant addresses (the integer orbit of the seam) have
    # flip-quotient 2; others have quotient 1
    seven = OdometerAddress.from_int(7, 12)
    census = fiber_census(morse, seven, 16)
    assert census.quotient_cardinality == 2 and census.cardinality == 4
    minus_two = OdometerAddress.from_int(-2, 12)  # constant-1 tail
    census = fiber_census(morse, minus_two, 16)
    assert census.quotient_cardinality == 2
    generic = OdometerAddress(tuple(int(c) for c in "011010011001"))
    assert fiber_census(morse, generic, 16).quotient_cardinality == 1


def test_frequency_table_formats(morse):
    table = word_frequencies(morse, 2, 256)
    tsv = table.to_tsv()
    lines = tsv.strip().split("\n")
    assert [l.split("\t")[0] for l in lines] == sorted(dict(table.counts))
    word, count, freq = lines[0].split("\t")
    assert int(count) == dict(table.counts)[word]
    assert len(freq.split(".")[1]) == 6
    obj = table.to_json()
    assert obj["words"][0]["total"] == 256
