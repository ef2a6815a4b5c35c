"""Pure-Python kernels.

Reference implementations of the three hot loops; `_speedups.pyx` mirrors
these exactly.  Words travel as ASCII digit bytes, rule tables as flat
byte arrays indexed by the base-`base` value of a block (most significant
symbol first), with 0xFF marking entries outside the admissible set.
"""

UNSET = 0xFF


def apply_rule(word: bytes, radius: int, table: bytes, base: int) -> bytes:
    """Slide a radius-`radius` local rule along `word`.

    Returns the image of length len(word) - 2*radius.  Raises ValueError
    on a symbol outside the alphabet or a block with no table entry.
    """
    width = 2 * radius + 1
    n = len(word)
    if n < width:
        raise ValueError("word shorter than the rule window")
    high = base ** (width - 1)
    code = 0
    for j in range(width):
        d = word[j] - 48
        if d < 0 or d >= base:
            raise ValueError("symbol outside alphabet at %d" % j)
        code = code * base + d
    out = bytearray(n - width + 1)
    i = 0
    while True:
        t = table[code]
        if t == UNSET:
            raise ValueError("block with no rule entry at %d" % i)
        out[i] = t
        i += 1
        if i + width > n:
            break
        d = word[i + width - 1] - 48
        if d < 0 or d >= base:
            raise ValueError("symbol outside alphabet at %d" % (i + width - 1))
        code = (code % high) * base + d
    return bytes(out)


def window_diffs(a: bytes, b: bytes, width: int) -> list:
    """Mismatch count of a vs b in every length-`width` window.

    Returns a list of len(a)-width+1 counts (a and b must have equal
    length >= width).
    """
    n = len(a)
    if len(b) != n:
        raise ValueError("length mismatch")
    if width < 1 or width > n:
        raise ValueError("bad window width")
    run = 0
    for i in range(width):
        if a[i] != b[i]:
            run += 1
    out = [0] * (n - width + 1)
    out[0] = run
    for i in range(1, n - width + 1):
        if a[i - 1] != b[i - 1]:
            run -= 1
        if a[i + width - 1] != b[i + width - 1]:
            run += 1
        out[i] = run
    return out


def decode_blocks(word: bytes, start: int, block_len: int, table: bytes,
                  base: int) -> bytes:
    """Decode the full `block_len`-blocks of `word` beginning at `start`.

    Trailing symbols that do not fill a block are ignored.  Raises
    ValueError on a block that is not a substitution image.
    """
    n = len(word)
    if start < 0 or start > n:
        raise ValueError("bad start")
    count = (n - start) // block_len
    out = bytearray(count)
    pos = start
    for i in range(count):
        code = 0
        for j in range(block_len):
            d = word[pos + j] - 48
            if d < 0 or d >= base:
                raise ValueError("symbol outside alphabet at %d" % (pos + j))
            code = code * base + d
        t = table[code]
        if t == UNSET:
            raise ValueError("block %d is not a substitution image" % i)
        out[i] = t
        pos += block_len
    return bytes(out)
