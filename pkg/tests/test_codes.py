import json

import pytest

from minflow.codes import (SlidingBlockCode, apply_code, classify_aut_group,
                           compose, enumerate_endomorphisms, flip_code,
                           identity_code, invert, is_identity, shift_code,
                           verify_endomorphism)
from minflow.errors import DomainError


def test_apply_examples(morse):
    assert apply_code(identity_code(morse), "0110") == "0110"
    assert apply_code(flip_code(morse), "0110") == "1001"
    # image length is |w| - 2r; the three windows of 01101 read 1, 0, 1
    assert apply_code(shift_code(morse, 1), "01101") == "101"


def test_apply_errors(morse):
    code = shift_code(morse, 1)
    with pytest.raises(DomainError):
        apply_code(code, "01")            # shorter than the window
    with pytest.raises(DomainError):
        apply_code(code, "00011")         # contains the inadmissible 000


def test_compose_examples(morse):
    kappa = flip_code(morse)
    assert compose(kappa, kappa) == identity_code(morse)
    assert compose(shift_code(morse, 1), kappa).normal_form == (1, 1)
    s2 = compose(shift_code(morse, 1), shift_code(morse, 1))
    assert s2.radius == 2
    assert s2 == shift_code(morse, 2)


def test_code_equality_pads_radii(morse):
    assert identity_code(morse) == identity_code(morse, radius=2)
    assert flip_code(morse) == flip_code(morse, radius=1)
    assert identity_code(morse) != flip_code(morse)


def test_enumerate_morse_r0(morse):
    codes = enumerate_endomorphisms(morse, 0)
    assert len(codes) == 2
    assert {c.normal_form for c in codes} == {(0, 0), (0, 1)}


def test_enumerate_morse_r1(morse):
    codes = enumerate_endomorphisms(morse, 1, check_len=4096)
    assert len(codes) == 6
    assert {c.normal_form for c in codes} == \
        {(k, e) for k in (-1, 0, 1) for e in (0, 1)}
    assert all(c.certified_len == 4096 for c in codes)


def test_enumerate_fibonacci(fib):
    assert len(enumerate_endomorphisms(fib, 0)) == 1
    codes = enumerate_endomorphisms(fib, 1, check_len=4096)
    assert {c.normal_form for c in codes} == {(-1, 0), (0, 0), (1, 0)}


def test_enumerate_counts_follow_radius(morse, fib):
    for r in (0, 1, 2):
        assert len(enumerate_endomorphisms(morse, r)) == 2 * (2 * r + 1)
        assert len(enumerate_endomorphisms(fib, r)) == 2 * r + 1


def test_radius_r_codes_embed_in_radius_r_plus_1(morse):
    small = enumerate_endomorphisms(morse, 1)
    large = enumerate_endomorphisms(morse, 2)
    for c in small:
        assert sum(c == d for d in large) == 1


def test_closure_under_composition(morse):
    r1 = enumerate_endomorphisms(morse, 1)
    r2 = enumerate_endomorphisms(morse, 2)
    for c1 in r1:
        for c2 in r1:
            composed = compose(c1, c2)
            assert sum(composed == d for d in r2) == 1


def test_closure_under_flip_and_unit_shifts(morse):
    # composing with kappa keeps the radius; with shift^{+-1} it grows by
    # one, so the result must appear in the next enumeration
    kappa = flip_code(morse)
    r1 = enumerate_endomorphisms(morse, 1)
    r2 = enumerate_endomorphisms(morse, 2)
    for c in r1:
        assert any(compose(kappa, c) == d for d in r1)
        for k in (-1, 1):
            assert any(compose(shift_code(morse, k), c) == d for d in r2)


def test_shift_commutation_is_structural(morse):
    word = morse.test_word(600)
    for code in enumerate_endomorphisms(morse, 1, check_len=1024):
        assert code.apply(word)[1:] == code.apply(word[1:])


def test_invert(morse):
    kappa = flip_code(morse)
    assert invert(kappa, max_radius=2) == kappa
    s2 = shift_code(morse, 2)
    inv = invert(s2, max_radius=2)
    assert inv == shift_code(morse, -2)
    for code in enumerate_endomorphisms(morse, 2):
        assert invert(code, max_radius=4) is not None


def test_invert_absence_is_a_value(full_shift):
    blocks = sorted(full_shift.language(1))
    constant = SlidingBlockCode(full_shift, 0, {b: "0" for b in blocks})
    assert invert(constant, max_radius=2, check_len=512) is None


def test_verify_endomorphism(morse, full_shift):
    assert verify_endomorphism(shift_code(morse, 1))
    blocks = sorted(morse.language(1))
    constant = SlidingBlockCode(morse, 0, {b: "0" for b in blocks})
    assert not verify_endomorphism(constant)   # 000 is not admissible


def test_full_shift_enumeration_contains_constants(full_shift):
    codes = enumerate_endomorphisms(full_shift, 0, check_len=512)
    assert len(codes) == 4          # every rule works on the full shift
    assert sum(1 for c in codes if is_identity(c)) == 1


def test_classify_group_shapes(morse, fib):
    report = classify_aut_group(enumerate_endomorphisms(morse, 2), morse)
    assert report.shape == "Z ⊕ Z/2"
    assert report.forms == tuple(sorted(
        (k, e) for k in range(-2, 3) for e in (0, 1)))
    report = classify_aut_group(enumerate_endomorphisms(fib, 2), fib)
    assert report.shape == "Z"
    assert classify_aut_group([], morse).shape == "trivial"
    assert classify_aut_group([identity_code(morse)], morse).shape == "trivial"


def test_rule_must_be_total(morse):
    with pytest.raises(DomainError):
        SlidingBlockCode(morse, 0, {"0": "0"})
    with pytest.raises(DomainError):
        SlidingBlockCode(morse, 0, {"0": "0", "1": "2"})


def test_serialization_round_trip(morse):
    code = compose(shift_code(morse, 1), flip_code(morse))
    blob = json.dumps(code.to_json(), sort_keys=True)
    again = SlidingBlockCode.from_json(morse, json.loads(blob))
    assert again == code
    assert json.dumps(again.to_json(), sort_keys=True) == blob
    obj = code.to_json()
    assert obj["blocks"] == sorted(obj["blocks"])
