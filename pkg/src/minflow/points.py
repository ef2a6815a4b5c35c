"""Bi-infinite points of a subshift as lazy window evaluators.

A point is a constructor tree: a splice of two one-sided fixed-point
specs, a shift or flip of another point, or a partial point pinned by an
odometer address.  Every materialized window is checked against the
system language, so an inconsistent construction fails loudly with the
offending window instead of silently emitting junk.
"""

from .errors import (DomainError, IntegrityError, ResourceError,
                     UndeterminedError)
from .words import fixed_point_prefix, flip_word

HORIZON_CAP = 1 << 20
_ADDRESS_BLOCK_CAP = 1 << 22


class OneSidedSpec:
    """A one-sided sequence: the system's fixed point from `seed`,
    optionally flipped; `reversed_` marks left-half orientation."""

    def __init__(self, system, seed=None, flipped=False, reversed_=False):
        self.system = system
        self.seed = system.seed if seed is None else seed
        if self.seed not in system.alphabet:
            raise DomainError("seed %r outside alphabet" % self.seed)
        self.flipped = flipped
        self.reversed_ = reversed_
        if flipped and system.alphabet != "01":
            raise DomainError("flip is defined for binary alphabets only")

    def rev(self):
        return OneSidedSpec(self.system, self.seed, self.flipped,
                            not self.reversed_)

    def flip(self):
        return OneSidedSpec(self.system, self.seed, not self.flipped,
                            self.reversed_)

    def prefix(self, n: int) -> str:
        s = self.system.fixed_prefix(self.seed, n)
        return flip_word(s) if self.flipped else s

    def label(self):
        core = "fix(%s)" % self.seed
        if self.flipped:
            core = "flip(%s)" % core
        return "rev(%s)" % core if self.reversed_ else core


class Point:
    """Abstract window evaluator over a subshift system."""

    system = None

    def window(self, lo: int, hi: int) -> str:
        """Symbols at coordinates lo..hi inclusive."""
        if lo > hi:
            raise DomainError("window lo > hi")
        if max(abs(lo), abs(hi)) > HORIZON_CAP:
            raise ResourceError("window exceeds horizon cap %d" % HORIZON_CAP)
        dlo, dhi = self.determined_range()
        if lo < dlo or hi > dhi:
            raise UndeterminedError(
                "window [%d,%d] outside determined range [%d,%d]"
                % (lo, hi, dlo, dhi))
        return self._eval(lo, hi)

    def _eval(self, lo, hi):
        raise NotImplementedError

    def determined_range(self):
        return (-HORIZON_CAP, HORIZON_CAP)

    def shift(self, k: int):
        """The point n -> self(n + k)."""
        if k == 0:
            return self
        return ShiftedPoint(self, k)

    def flip(self):
        if self.system.alphabet != "01":
            raise DomainError("flip is defined for binary alphabets only")
        return FlippedPoint(self)

    def label(self):
        return repr(self)


def _find_violation(system, word, base_coord):
    """Locate a short inadmissible factor to name in an error message."""
    for m in range(2, min(len(word), 64) + 1):
        lang = system.language(m)
        for i in range(len(word) - m + 1):
            if word[i:i + m] not in lang:
                return word[i:i + m], base_coord + i
    return word, base_coord


class SplicePoint(Point):
    """p(n) = right(n) for n >= 0 and p(n) = left(-1-n) for n < 0.

    The left spec must carry the reversed orientation: the grammar writes
    the left half as rev(...) because it is read rightwards from the seam
    outwards.
    """

    def __init__(self, left: OneSidedSpec, right: OneSidedSpec):
        if not left.reversed_ or right.reversed_:
            raise DomainError("splice needs a rev(...) left half and a plain "
                              "right half")
        if left.system is not right.system:
            raise DomainError("splice halves live in different systems")
        self.system = left.system
        self.left = left
        self.right = right
        self._half = 0
        self._buf = ""

    def _ensure(self, half):
        if half <= self._half:
            return
        target = 64
        while target < half:
            target *= 2
        buf = self.left.prefix(target)[::-1] + self.right.prefix(target + 1)
        if not self.system.is_admissible(buf):
            bad, at = _find_violation(self.system, buf, -target)
            raise IntegrityError(
                "splice %s produced inadmissible window %r at coordinate %d"
                % (self.label(), bad, at))
        # publish the buffer before the watermark so concurrent readers
        # never slice a stale buffer with a new half-width
        self._buf = buf
        self._half = target

    def _eval(self, lo, hi):
        self._ensure(max(abs(lo), abs(hi)))
        return self._buf[lo + self._half:hi + self._half + 1]

    def label(self):
        return "splice(%s,%s)" % (self.left.label(), self.right.label())


class ShiftedPoint(Point):
    """p(n) = base(n + k); nested shifts collapse to a single offset."""

    def __init__(self, base, k):
        if isinstance(base, ShiftedPoint):
            k += base.k
            base = base.base
        self.base = base
        self.k = k
        self.system = base.system

    def _eval(self, lo, hi):
        return self.base.window(lo + self.k, hi + self.k)

    def determined_range(self):
        dlo, dhi = self.base.determined_range()
        return (dlo - self.k, dhi - self.k)

    def shift(self, k):
        if self.k + k == 0:
            return self.base
        return ShiftedPoint(self.base, self.k + k)

    def label(self):
        return "shift(%s,%d)" % (self.base.label(), self.k)


class FlippedPoint(Point):
    """Coordinatewise 0<->1 exchange of the base point."""

    def __init__(self, base):
        self.base = base
        self.system = base.system
        self._checked = (0, -1)

    def flip(self):
        return self.base

    def _eval(self, lo, hi):
        out = flip_word(self.base.window(lo, hi))
        if not self.system.flip_closed:
            clo, chi = self._checked
            if lo < clo or hi > chi:
                lo2, hi2 = min(lo, clo), max(hi, chi)
                span = flip_word(self.base.window(lo2, hi2))
                if not self.system.is_admissible(span):
                    bad, at = _find_violation(self.system, span, lo2)
                    raise IntegrityError(
                        "flip of %s produced inadmissible window %r at %d"
                        % (self.base.label(), bad, at))
                self._checked = (lo2, hi2)
        return out

    def determined_range(self):
        return self.base.determined_range()

    def label(self):
        return "flip(%s)" % self.base.label()


class AddressPoint(Point):
    """A partial point pinned by a level-k odometer address.

    digits d0..d_{k-1} (least significant first) place coordinate 0 at
    offset sum(d_j * l^j) inside a level-k substitution block, the image
    of `sheet`.  Coordinates inside that block are determined, queries
    beyond it raise UndeterminedError.
    """

    def __init__(self, system, digits, sheet):
        ell = system.constant_length
        if ell is None:
            raise DomainError("address points need a constant-length system")
        digits = tuple(int(d) for d in digits)
        if any(d < 0 or d >= ell for d in digits):
            raise DomainError("digits must lie in 0..%d" % (ell - 1))
        if sheet not in system.alphabet:
            raise DomainError("sheet %r outside alphabet" % sheet)
        if ell ** len(digits) > _ADDRESS_BLOCK_CAP:
            raise ResourceError("level-%d block exceeds cap" % len(digits))
        self.system = system
        self.digits = digits
        self.sheet = sheet
        self.level = len(digits)
        self.offset = sum(d * ell ** j for j, d in enumerate(digits))
        self._block = None

    def _ensure(self):
        if self._block is None:
            sub = self.system.substitution
            s = self.sheet
            for _ in range(self.level):
                s = sub.apply(s)
            self._block = s
        return self._block

    def determined_range(self):
        size = self.system.constant_length ** self.level
        return (-self.offset, size - self.offset - 1)

    def _eval(self, lo, hi):
        block = self._ensure()
        return block[lo + self.offset:hi + self.offset + 1]

    def label(self):
        return "addr(%s,%s)" % ("".join(map(str, self.digits)), self.sheet)


# -- constructors -------------------------------------------------------

def splice(left: OneSidedSpec, right: OneSidedSpec) -> Point:
    return SplicePoint(left, right)


def point_from_address(system, digits, sheet) -> Point:
    return AddressPoint(system, digits, sheet)


def fixed_point(system, seed=None, flipped=False) -> Point:
    """The seam splice rev(fix seed) + fix seed (two-sided fixed point)."""
    spec = OneSidedSpec(system, seed, flipped=flipped)
    return SplicePoint(spec.rev(), spec)


def seam_points(system) -> dict:
    """The four seam splices over the all-zeros address.

    mu = rev(Q)+Q, mu_prime = rev(Q')+Q', nu = rev(Q')+Q and
    nu_prime = rev(Q)+Q', where Q is the one-sided fixed point and Q' its
    flip.  Requires a flip-closed system.
    """
    if not system.flip_closed:
        raise DomainError("seam splices need a flip-closed system")
    q = OneSidedSpec(system)
    qp = q.flip()
    return {
        "mu": SplicePoint(q.rev(), q),
        "mu_prime": SplicePoint(qp.rev(), qp),
        "nu": SplicePoint(qp.rev(), q),
        "nu_prime": SplicePoint(q.rev(), qp),
    }


# -- point-spec mini-grammar --------------------------------------------
#
#   point := fix(SYM) | fixSYM | splice(one, one) | shift(point, INT)
#          | flip(point) | addr(DIGITS, SYM)
#   one   := fix(SYM) | fixSYM | rev(one) | flip(one)
#
# A bare fix(s) point denotes the seam splice splice(rev(fix(s)), fix(s)).

def parse_point_spec(system, text: str) -> Point:
    parser = _SpecParser(system, text)
    point = parser.parse_point()
    parser.expect_end()
    return point


class _SpecParser:
    def __init__(self, system, text):
        self.system = system
        self.text = text.replace(" ", "")
        self.pos = 0

    def error(self, what):
        raise DomainError("bad point spec %r: %s (at %d)"
                          % (self.text, what, self.pos))

    def peek_name(self):
        i = self.pos
        while i < len(self.text) and self.text[i].isalpha():
            i += 1
        return self.text[self.pos:i]

    def take(self, tok):
        if not self.text.startswith(tok, self.pos):
            self.error("expected %r" % tok)
        self.pos += len(tok)

    def take_int(self):
        i = self.pos
        if i < len(self.text) and self.text[i] in "+-":
            i += 1
        while i < len(self.text) and self.text[i].isdigit():
            i += 1
        if i == self.pos:
            self.error("expected integer")
        val = int(self.text[self.pos:i])
        self.pos = i
        return val

    def take_digits(self):
        i = self.pos
        while i < len(self.text) and self.text[i].isdigit():
            i += 1
        if i == self.pos:
            self.error("expected digit string")
        out = self.text[self.pos:i]
        self.pos = i
        return out

    def expect_end(self):
        if self.pos != len(self.text):
            self.error("trailing input")

    def parse_point(self):
        name = self.peek_name()
        if name == "splice":
            self.take("splice(")
            left = self.parse_one()
            self.take(",")
            right = self.parse_one()
            self.take(")")
            return SplicePoint(left, right)
        if name == "shift":
            self.take("shift(")
            base = self.parse_point()
            self.take(",")
            k = self.take_int()
            self.take(")")
            return base.shift(k)
        if name == "flip":
            self.take("flip(")
            base = self.parse_point()
            self.take(")")
            return base.flip()
        if name == "addr":
            self.take("addr(")
            digits = self.take_digits()
            self.take(",")
            sheet = self.take_digits()
            self.take(")")
            if len(sheet) != 1:
                self.error("sheet must be a single symbol")
            return AddressPoint(self.system, digits, sheet)
        if name == "fix":
            spec = self.parse_fix()
            return SplicePoint(spec.rev(), spec)
        self.error("unknown constructor %r" % name)

    def parse_fix(self):
        self.take("fix")
        if self.text.startswith("(", self.pos):
            self.take("(")
            sym = self.take_digits()
            self.take(")")
        else:
            sym = self.take_digits()
        if len(sym) != 1:
            self.error("fix takes a single symbol")
        return OneSidedSpec(self.system, sym)

    def parse_one(self):
        name = self.peek_name()
        if name == "rev":
            self.take("rev(")
            spec = self.parse_one()
            self.take(")")
            return spec.rev()
        if name == "flip":
            self.take("flip(")
            spec = self.parse_one()
            self.take(")")
            return spec.flip()
        if name == "fix":
            return self.parse_fix()
        self.error("unknown one-sided constructor %r" % name)
