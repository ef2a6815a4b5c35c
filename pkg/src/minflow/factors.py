"""Factor structure over the dyadic odometer.

Desubstitution parses a window of a constant-length-2 subshift uniquely
into substitution blocks once the window reaches the system's
recognizability length; iterating the parse assigns every point a string
of 2-adic digits (the odometer address, least significant first), which
realizes the maximal equicontinuous factor map.  The fiber census
reconstructs which centered windows are compatible with a given address,
and word frequencies realize the invariant-measure checks.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import kernels
from .errors import (AmbiguityError, DomainError, IntegrityError,
                     NoParseError, ResourceError)
from .points import AddressPoint, FlippedPoint, ShiftedPoint
from .words import flip_word

RECOG_CAP = 64
_CENSUS_BLOCK_CAP = 1 << 22


@dataclass(frozen=True)
class OdometerAddress:
    """Level-k digit string of the dyadic (base-l) odometer, lsb first."""

    digits: tuple
    base: int = 2

    def __post_init__(self):
        if any(d < 0 or d >= self.base for d in self.digits):
            raise DomainError("digits out of range for base %d" % self.base)

    @property
    def level(self):
        return len(self.digits)

    def to_int(self) -> int:
        return sum(d * self.base ** j for j, d in enumerate(self.digits))

    @classmethod
    def from_int(cls, value, level, base=2):
        value %= base ** level
        digits = []
        for _ in range(level):
            digits.append(value % base)
            value //= base
        return cls(tuple(digits), base)

    def plus(self, m: int) -> "OdometerAddress":
        """Add-one iterated: (self + m) mod base^level."""
        return self.from_int(self.to_int() + m, self.level, self.base)

    def truncate(self, j: int) -> "OdometerAddress":
        if j > self.level:
            raise DomainError("cannot truncate level %d to %d" % (self.level, j))
        return OdometerAddress(self.digits[:j], self.base)

    def digit_string(self) -> str:
        return "".join(str(d) for d in self.digits)

    def __str__(self):
        return self.digit_string()


# -- desubstitution ----------------------------------------------------

def _require_cl2(system):
    if system.constant_length != 2:
        raise DomainError("desubstitution needs a constant-length-2 system, "
                          "%r is not" % system.name)


def _phase_parses(system, word):
    """Valid parses of `word`: list of (offset, core_preimage).

    offset d means position 0 of `word` sits at offset d of its block.
    A parse is valid when the full blocks decode and some completion of
    the cut edge blocks yields an admissible preimage.
    """
    rule = system.substitution.rule
    inverse = {img: a for a, img in rule.items()}
    out = []
    for d in (0, 1):
        start = d
        core = []
        ok = True
        i = start
        while i + 2 <= len(word):
            a = inverse.get(word[i:i + 2])
            if a is None:
                ok = False
                break
            core.append(a)
            i += 2
        if not ok:
            continue
        lefts = [""]
        if start == 1:
            lefts = [a for a in system.alphabet if rule[a].endswith(word[0])]
        rights = [""]
        if i < len(word):
            rights = [a for a in system.alphabet if rule[a].startswith(word[i:])]
        core_word = "".join(core)
        if any(system.is_admissible(l + core_word + r)
               for l in lefts for r in rights):
            out.append((d, core_word))
    return out


def recognizability_length(system) -> int:
    """Smallest n such that every admissible length-n word parses uniquely.

    Determined empirically at first use and cached; asserted <= 64.
    """
    _require_cl2(system)
    if system._recog_len is None:
        for n in range(1, RECOG_CAP + 1):
            if all(len(_phase_parses(system, w)) == 1
                   for w in system.language(n)):
                system._recog_len = n
                break
        else:
            raise IntegrityError("no recognizability length <= %d for %r"
                                 % (RECOG_CAP, system.name))
    return system._recog_len


def desubstitute(system, word: str):
    """Unique parse of `word` into substitution 2-blocks.

    Returns (preimage of the full blocks, phase offset of position 0).
    """
    _require_cl2(system)
    parses = _phase_parses(system, word)
    if not parses:
        raise NoParseError("%r has no substitution parse" % word)
    if len(parses) > 1:
        raise AmbiguityError(
            "%r parses at offsets %s; window below recognizability length %d"
            % (word, sorted(d for d, _ in parses),
               recognizability_length(system)))
    return parses[0][1], parses[0][0]


# -- addresses ---------------------------------------------------------

def address(system, point, k: int) -> OdometerAddress:
    """Level-k odometer address of `point`, read off its windows.

    digit j is the phase offset of coordinate 0 at desubstitution level
    j; shifting the point by one advances the address by one with carry.
    """
    _require_cl2(system)
    if k < 0:
        raise DomainError("levels must be >= 0")
    if k == 0:
        return OdometerAddress(())
    r = recognizability_length(system)
    h = r + 2
    half = max(64, (r + 4) << (k - 1))
    word = point.window(-half, half).encode()
    origin = half
    table = system._block_decode_table()
    digits = []
    for j in range(k):
        if origin - h < 0 or origin + h >= len(word):
            raise AmbiguityError(
                "window too short to determine digit at level %d" % j,
                level=j)
        local = word[origin - h:origin + h + 1].decode()
        parses = _phase_parses(system, local)
        if not parses:
            raise IntegrityError("point window has no parse at level %d" % j)
        if len(parses) > 1:
            raise AmbiguityError("ambiguous parse at level %d" % j, level=j)
        off = parses[0][0]
        digit = (off + h) % 2
        start = (off + origin + h) % 2
        digits.append(digit)
        word = kernels.decode_blocks(word, start, 2, table, 2)
        origin = (origin - digit - start) // 2
    return OdometerAddress(tuple(digits))


def point_address(point, k: int) -> OdometerAddress:
    """Address of a point, using construction digits when the window
    parse cannot reach level k (partial address-constructed points)."""
    shift = 0
    base = point
    while True:
        if isinstance(base, ShiftedPoint):
            shift += base.k
            base = base.base
        elif isinstance(base, FlippedPoint) and base.system.flip_closed:
            # flip commutes with the substitution for flip-closed systems,
            # so it does not move block boundaries
            base = base.base
        else:
            break
    if isinstance(base, AddressPoint) and base.level >= k:
        return OdometerAddress.from_int(base.offset + shift, k,
                                        base.system.constant_length)
    return address(point.system, point, k)


# -- fiber census ------------------------------------------------------

@dataclass(frozen=True)
class FiberCensus:
    address: OdometerAddress
    level: int
    resolution: int
    windows: tuple
    cardinality: int
    quotient_cardinality: object   # None when flip is not a system map
    stabilized: bool

    def to_json(self):
        return {
            "address": self.address.digit_string(),
            "level": self.level,
            "resolution": self.resolution,
            "windows": list(self.windows),
            "cardinality": self.cardinality,
            "quotient_cardinality": self.quotient_cardinality,
            "stabilized": self.stabilized,
        }


def fiber_census(system, addr: OdometerAddress, resolution: int) -> FiberCensus:
    """Stabilized set of centered (2L+1)-windows compatible with `addr`.

    At level j the window is cut from the image of an admissible word
    spanning the level-j blocks that cover [-L, L] around the addressed
    position; the census is the set of distinct cuts.  Cardinality is
    nonincreasing in the level; `stabilized` records that the last two
    levels agree.
    """
    ell = system.constant_length
    if ell is None:
        raise DomainError("fiber census needs a constant-length system")
    k = addr.level
    if k < 1:
        raise DomainError("census needs at least one digit")
    L = resolution
    if ell ** k > _CENSUS_BLOCK_CAP:
        raise ResourceError("level-%d blocks exceed cap" % k)
    images = {a: a for a in system.alphabet}
    levels = []
    for j in range(1, k + 1):
        images = {a: system.substitution.apply(w) for a, w in images.items()}
        block = ell ** j
        rj = addr.truncate(j).to_int()
        t0 = (rj - L) // block
        t1 = (rj + L) // block
        span = t1 - t0 + 1
        cut = rj - L - t0 * block
        wins = frozenset(
            "".join(images[c] for c in v)[cut:cut + 2 * L + 1]
            for v in system.language(span))
        if levels and len(wins) > len(levels[-1]):
            raise IntegrityError("census cardinality increased at level %d" % j)
        levels.append(wins)
    final = levels[-1]
    stabilized = len(levels) >= 2 and levels[-1] == levels[-2]
    if system.flip_closed:
        quotient = len({frozenset((w, flip_word(w))) for w in final})
    else:
        quotient = None
    return FiberCensus(addr, k, L, tuple(sorted(final)), len(final),
                       quotient, stabilized)


# -- word frequencies --------------------------------------------------

@dataclass(frozen=True)
class FrequencyTable:
    system_name: str
    length: int
    steps: int
    counts: tuple   # ((word, count), ...) sorted lexicographically

    def frequency(self, word) -> Fraction:
        return Fraction(dict(self.counts).get(word, 0), self.steps)

    def to_tsv(self) -> str:
        lines = ["%s\t%d\t%.6f" % (w, c, c / self.steps)
                 for w, c in self.counts]
        return "\n".join(lines) + "\n"

    def to_json(self):
        return {
            "system": self.system_name,
            "length": self.length,
            "steps": self.steps,
            "words": [{"word": w, "count": c, "total": self.steps,
                       "frequency": "%.6f" % (c / self.steps)}
                      for w, c in self.counts],
        }


def word_frequencies(system, n: int, steps: int) -> FrequencyTable:
    """Empirical frequency of every admissible length-n word along a
    generated orbit prefix of length steps + n."""
    if n < 1 or steps < 1:
        raise DomainError("need n >= 1 and steps >= 1")
    prefix = system.test_word(steps + n)
    counts = {}
    for i in range(steps):
        w = prefix[i:i + n]
        counts[w] = counts.get(w, 0) + 1
    assert sum(counts.values()) == steps
    return FrequencyTable(system.name, n, steps, tuple(sorted(counts.items())))
