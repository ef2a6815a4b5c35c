import random

import pytest

from minflow import kernels


def naive_apply(word, radius, table, base):
    width = 2 * radius + 1
    out = []
    for i in range(len(word) - width + 1):
        code = 0
        for c in word[i:i + width]:
            code = code * base + (c - 48)
        t = table[code]
        if t == 0xFF:
            raise ValueError
        out.append(t)
    return bytes(out)


def naive_diffs(a, b, width):
    return [sum(x != y for x, y in zip(a[i:i + width], b[i:i + width]))
            for i in range(len(a) - width + 1)]


def test_backend_selection():
    assert kernels.BACKEND in ("pure", "compiled")
    assert "pure" in kernels.backends()


@pytest.mark.parametrize("name", sorted(kernels.backends()))
def test_apply_rule_matches_naive(name):
    impl = kernels.backends()[name]
    rng = random.Random(0)
    for radius in (0, 1, 2):
        width = 2 * radius + 1
        table = bytes(rng.randrange(2) + 48 for _ in range(2 ** width))
        word = bytes(rng.randrange(2) + 48 for _ in range(200))
        assert impl.apply_rule(word, radius, table, 2) == \
            naive_apply(word, radius, table, 2)


@pytest.mark.parametrize("name", sorted(kernels.backends()))
def test_apply_rule_errors(name):
    impl = kernels.backends()[name]
    with pytest.raises(ValueError):
        impl.apply_rule(b"01", 1, bytes(8), 2)          # too short
    with pytest.raises(ValueError):
        impl.apply_rule(b"0120", 0, b"00", 2)           # foreign symbol
    table = bytes([48, 0xFF])
    with pytest.raises(ValueError):
        impl.apply_rule(b"001", 0, table, 2)            # unmapped block


@pytest.mark.parametrize("name", sorted(kernels.backends()))
def test_window_diffs_matches_naive(name):
    impl = kernels.backends()[name]
    rng = random.Random(1)
    a = bytes(rng.randrange(2) + 48 for _ in range(300))
    b = bytes(rng.randrange(2) + 48 for _ in range(300))
    for width in (1, 7, 33):
        assert impl.window_diffs(a, b, width) == naive_diffs(a, b, width)
    assert impl.window_diffs(a, a, 9) == [0] * 292
    with pytest.raises(ValueError):
        impl.window_diffs(a, b[:-1], 3)
    with pytest.raises(ValueError):
        impl.window_diffs(a, b, 0)


@pytest.mark.parametrize("name", sorted(kernels.backends()))
def test_decode_blocks(name):
    impl = kernels.backends()[name]
    # Thue-Morse inverse table: 01 -> 0, 10 -> 1
    table = bytearray(b"\xff" * 4)
    table[0b01] = ord("0")
    table[0b10] = ord("1")
    table = bytes(table)
    assert impl.decode_blocks(b"01101001", 0, 2, table, 2) == b"0110"
    assert impl.decode_blocks(b"101101001", 1, 2, table, 2) == b"0110"
    assert impl.decode_blocks(b"0110100", 0, 2, table, 2) == b"011"
    with pytest.raises(ValueError):
        impl.decode_blocks(b"0110", 0, 2, b"\xff" * 4, 2)
    with pytest.raises(ValueError):
        impl.decode_blocks(b"0011", 0, 2, table, 2)     # 00 not an image


def test_backends_agree_on_random_workloads():
    impls = kernels.backends()
    if len(impls) < 2:
        pytest.skip("compiled backend unavailable")
    rng = random.Random(2)
    word = bytes(rng.randrange(2) + 48 for _ in range(5000))
    other = bytes(rng.randrange(2) + 48 for _ in range(5000))
    table = bytes(rng.randrange(2) + 48 for _ in range(32))
    results = set()
    for impl in impls.values():
        results.add((impl.apply_rule(word, 2, table, 2),
                     tuple(impl.window_diffs(word, other, 65))))
    assert len(results) == 1
