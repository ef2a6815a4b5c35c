import itertools

import pytest

from minflow.errors import DomainError, UndeterminedError
from minflow.pairs import (DISTAL, DOUBLE, NEGATIVE, POSITIVE, PROXIMAL,
                           asymptotic_collapse, classify_pair,
                           distal_certificate)
from minflow.points import point_from_address, seam_points


@pytest.fixture(scope="module")
def seam(morse):
    return seam_points(morse)


def test_seam_pair_verdicts(seam):
    mu, nu, mu_p = seam["mu"], seam["nu"], seam["mu_prime"]
    got = classify_pair(mu, nu, 4096, 16)
    assert got.verdict == POSITIVE and got.witness_time == 16
    got = classify_pair(nu, mu_p, 4096, 16)
    assert got.verdict == NEGATIVE and got.witness_time == -17
    got = classify_pair(mu, mu.flip(), 4096, 16)
    assert got.verdict == DISTAL and got.separation == 33


def test_identical_points_are_doubly_asymptotic(seam):
    assert classify_pair(seam["mu"], seam["mu"], 512, 8).verdict == DOUBLE


def test_proximal_without_asymptotic_under_short_horizon(seam):
    # agreement starts at window L=64, too late for H/2 = 48: the verdict
    # degrades to the weaker proximality claim with the witness recorded
    got = classify_pair(seam["mu"], seam["nu"], 96, 64)
    assert got.verdict == PROXIMAL and got.witness_time == 64


def test_classification_is_symmetric(seam):
    for p, q in itertools.combinations(seam.values(), 2):
        a = classify_pair(p, q, 1024, 16)
        b = classify_pair(q, p, 1024, 16)
        assert a.verdict == b.verdict


def test_proximal_evidence_is_monotone(seam):
    base = classify_pair(seam["mu"], seam["nu"], 96, 64)
    assert base.verdict == PROXIMAL
    for horizon, resolution in ((96, 32), (512, 64), (1024, 16)):
        v = classify_pair(seam["mu"], seam["nu"], horizon, resolution).verdict
        assert v in (PROXIMAL, POSITIVE, NEGATIVE, DOUBLE)


def test_asymptotic_verdict_survives_shifting(seam):
    mu, nu = seam["mu"], seam["nu"]
    for k in (-5, 3, 17):
        v = classify_pair(mu.shift(k), nu.shift(k), 1024 - abs(k), 16)
        assert v.verdict == POSITIVE


def test_different_systems_rejected(morse, fib):
    from minflow.points import fixed_point
    with pytest.raises(DomainError):
        classify_pair(fixed_point(morse), fixed_point(fib))


def test_partial_points_raise_undetermined(morse, seam):
    tiny = point_from_address(morse, (0, 1, 0, 1), "0")
    with pytest.raises(UndeterminedError):
        classify_pair(seam["mu"], tiny, 4096, 16)


def test_collapse_patterns(seam):
    fwd = asymptotic_collapse(seam, "forward", 4096, 16)
    bwd = asymptotic_collapse(seam, "backward", 4096, 16)
    assert fwd.classes == ((("mu", "nu"), ("mu_prime", "nu_prime")))
    assert bwd.classes == ((("mu", "nu_prime"), ("mu_prime", "nu")))
    assert fwd.classes != bwd.classes
    assert all(len(c) == 2 for c in fwd.classes + bwd.classes)


def test_collapse_of_distal_fiber_is_discrete(seam):
    mu = seam["mu"]
    fiber = {"a": mu, "b": mu.shift(1), "c": mu.flip(),
             "d": mu.shift(1).flip()}
    got = asymptotic_collapse(fiber, "forward", 1024, 16)
    assert got.classes == (("a",), ("b",), ("c",), ("d",))


def test_collapse_rejects_bad_direction(seam):
    with pytest.raises(DomainError):
        asymptotic_collapse(seam, "sideways")


def test_distal_certificate_granted_off_seam(morse):
    p = point_from_address(morse, tuple(j % 2 for j in range(12)), "0")
    cert = distal_certificate(p, level=12)
    assert cert.granted
    assert cert.effective_horizon == 1301
    assert [r[0] for r in cert.records] == ["flip"]
    assert cert.records[0][1] == DISTAL


def test_distal_certificate_denied_at_seam(seam):
    cert = distal_certificate(seam["mu"], horizon=4096, level=12)
    assert not cert.granted
    verdicts = dict(cert.records)
    assert POSITIVE in verdicts.values()


def test_distal_certificate_trivial_for_almost_automorphic(pd):
    p = point_from_address(pd, (1, 0, 1, 1, 0, 1, 0, 0, 1, 0, 1, 0), "0")
    cert = distal_certificate(p, level=12)
    assert cert.granted
    assert cert.records == ()
    assert "singleton" in cert.reason
