"""Alphabets, finite words, substitutions and factor languages.

Words are plain Python strings over an alphabet of ASCII digits.  A
subshift is presented by a primitive substitution iterated from a
prolongable seed; its language cache is built by collecting factors of a
long generated prefix (exact for primitive substitutions in the cached
range, since every factor occurs in every sufficiently long image block).

Admissibility of words longer than the cache bound is decided exactly by
a desubstitution certificate: a word is admissible iff it decomposes as
(suffix of an image) + image of an admissible word + (prefix of an
image), recursively.
"""

import itertools
import threading

from . import kernels
from .errors import ConstructionError, DomainError, IntegrityError, ResourceError

MAX_ALPHABET = 10
LANGUAGE_CAP = 256        # longest n the language cache will enumerate
SHORT_WORD_LEN = 64       # direct membership below, parse certificate above
_PARSE_DEPTH_CAP = 64
_PARSE_BRANCH_CAP = 64

FLIP = str.maketrans("01", "10")


def flip_word(word: str) -> str:
    return word.translate(FLIP)


class Substitution:
    """A map from symbols to nonempty words over a digit alphabet."""

    def __init__(self, rule: dict):
        alphabet = "".join(sorted(rule))
        if not alphabet:
            raise DomainError("empty alphabet")
        if len(alphabet) > MAX_ALPHABET:
            raise DomainError("alphabet capped at %d symbols" % MAX_ALPHABET)
        for sym, image in rule.items():
            if len(sym) != 1 or not sym.isdigit():
                raise DomainError("symbols must be single ASCII digits, got %r" % sym)
            if not image:
                raise DomainError("empty image for symbol %r" % sym)
            for c in image:
                if c not in rule:
                    raise DomainError("image symbol %r outside alphabet" % c)
        self.alphabet = alphabet
        self.rule = dict(rule)

    def apply(self, word: str) -> str:
        rule = self.rule
        try:
            return "".join(rule[c] for c in word)
        except KeyError as exc:
            raise DomainError("symbol %s outside alphabet" % exc) from None

    __call__ = apply

    @property
    def is_constant_length(self) -> bool:
        lens = {len(v) for v in self.rule.values()}
        return len(lens) == 1

    @property
    def constant_length(self):
        """The common image length, or None if images vary."""
        lens = {len(v) for v in self.rule.values()}
        return lens.pop() if len(lens) == 1 else None

    @property
    def is_primitive(self) -> bool:
        # some power of the incidence relation is strictly positive;
        # Wielandt: index <= (n-1)^2 + 1 suffices
        syms = self.alphabet
        reach = {a: frozenset(self.rule[a]) for a in syms}
        full = frozenset(syms)
        for _ in range((len(syms) - 1) ** 2 + 1):
            if all(reach[a] == full for a in syms):
                return True
            reach = {a: frozenset().union(*(reach[b] for b in reach[a]))
                     for a in syms}
        return all(reach[a] == full for a in syms)

    def __repr__(self):
        body = ",".join("%s->%s" % kv for kv in sorted(self.rule.items()))
        return "Substitution(%s)" % body


def substitute(sub: Substitution, word: str) -> str:
    """Concatenate the rule images of `word`, in order."""
    return sub.apply(word)


def fixed_point_prefix(sub: Substitution, seed: str, n: int) -> str:
    """First n symbols of the one-sided fixed point grown from `seed`.

    Requires rule(seed) to begin with seed and be longer than it
    (prolongable), so the prefix is stable under further substitution.
    """
    if n < 1:
        raise DomainError("prefix length must be >= 1")
    image = sub.rule.get(seed)
    if image is None:
        raise DomainError("seed %r outside alphabet" % seed)
    if image[0] != seed or len(image) < 2:
        raise ConstructionError("seed %r is not prolongable" % seed)
    s = seed
    while len(s) < n:
        s = sub.apply(s)
    return s[:n]


class SubshiftSystem:
    """A named substitution subshift with a cached factor language.

    Language caches are built once under a lock and then shared
    read-only, so concurrent readers are safe.
    """

    def __init__(self, name, substitution, seed, language_cap=LANGUAGE_CAP,
                 almost_automorphic=False):
        if not substitution.is_primitive:
            raise ConstructionError("substitution %r is not primitive" % substitution)
        self.name = name
        self.substitution = substitution
        self.alphabet = substitution.alphabet
        self.seed = seed
        self.language_cap = language_cap
        self.almost_automorphic = almost_automorphic
        self._lang = {}
        self._lock = threading.RLock()
        self._flip_closed = None
        self._recog_len = None
        self._prefix = {}
        self._decode = None
        fixed_point_prefix(substitution, seed, 2)  # validate prolongable now

    # -- language ----------------------------------------------------

    @property
    def constant_length(self):
        return self.substitution.constant_length

    def fixed_prefix(self, seed: str, n: int) -> str:
        """Cached fixed-point prefix; grows geometrically and serves slices."""
        with self._lock:
            have = self._prefix.get(seed, "")
            if len(have) < n:
                have = fixed_point_prefix(self.substitution, seed,
                                          max(n, 2 * len(have), 4096))
                self._prefix[seed] = have
            return have[:n]

    def test_word(self, length: int) -> str:
        """A generated admissible word of the given length (orbit prefix)."""
        return self.fixed_prefix(self.seed, length)

    def language(self, n: int) -> frozenset:
        """Exactly the admissible words of length n, as a frozenset."""
        if n < 1:
            raise DomainError("language length must be >= 1")
        if n > self.language_cap:
            raise ResourceError("language(%d) exceeds cap %d"
                                % (n, self.language_cap))
        got = self._lang.get(n)
        if got is not None:
            return got
        with self._lock:
            if n not in self._lang:
                self._build_language(n)
            return self._lang[n]

    def _collect_factors(self, n):
        prefix = self.test_word(max(4096, 8 * n))
        return frozenset(prefix[i:i + n] for i in range(len(prefix) - n + 1))

    def _build_language(self, n):
        # build upward so the closure/extendability assertions run for
        # every new level
        start = max([1] + [m for m in self._lang if m < n])
        for m in range(start, n + 1):
            if m in self._lang:
                continue
            words_m = self._collect_factors(m)
            if m > 1:
                prev = self._lang.get(m - 1) or self._collect_factors(m - 1)
                self._lang.setdefault(m - 1, prev)
                subs = frozenset(w[i:i + m - 1] for w in words_m for i in (0, 1))
                if not subs <= prev:
                    raise IntegrityError("factor closure failed at n=%d" % m)
                if not prev <= subs:
                    raise IntegrityError("extendability failed at n=%d" % (m - 1))
                if len(words_m) < len(prev):
                    raise IntegrityError("complexity not monotone at n=%d" % m)
            self._lang[m] = words_m

    def complexity(self, n: int) -> int:
        return len(self.language(n))

    # -- admissibility -----------------------------------------------

    def is_admissible(self, word: str) -> bool:
        """True iff `word` is a factor of the subshift's language."""
        if word == "":
            return True
        if any(c not in self.alphabet for c in word):
            return False
        if len(word) <= min(SHORT_WORD_LEN, self.language_cap):
            return word in self.language(len(word))
        return self._admissible_by_parse(word, 0)

    def _admissible_by_parse(self, word, depth):
        if depth > _PARSE_DEPTH_CAP:
            raise IntegrityError("parse recursion too deep")
        if len(word) <= min(SHORT_WORD_LEN, self.language_cap):
            return word in self.language(len(word))
        ell = self.constant_length
        if ell is not None:
            preimages = self._cl_decompositions(word, ell)
        else:
            preimages = self._decompositions(word)
        for preimage in preimages:
            if self._admissible_by_parse(preimage, depth + 1):
                return True
        return False

    def _block_decode_table(self):
        """image block -> letter, as a flat kernel table (constant length)."""
        if self._decode is None:
            ell = self.constant_length
            base = len(self.alphabet)
            table = bytearray(b"\xff" * base ** ell)
            for a, img in self.substitution.rule.items():
                code = 0
                for c in img:
                    code = code * base + (ord(c) - 48)
                table[code] = ord(a)
            self._decode = bytes(table)
        return self._decode

    def _cl_decompositions(self, word, ell):
        """Constant-length decompositions, decoded by the kernel."""
        rule = self.substitution.rule
        table = self._block_decode_table()
        base = len(self.alphabet)
        raw = word.encode()
        n = len(word)
        out = []
        for start in range(ell):
            try:
                core = kernels.decode_blocks(raw, start, ell, table,
                                             base).decode()
            except ValueError:
                continue
            lefts = [""]
            if start:
                lefts = [a for a in self.alphabet
                         if rule[a].endswith(word[:start])]
            tail = n - (n - start) % ell
            rights = [""]
            if tail < n:
                rights = [a for a in self.alphabet
                          if rule[a].startswith(word[tail:])]
            out.extend(l + core + r for l in lefts for r in rights)
        return out

    def _decompositions(self, word):
        """Preimage candidates: word = (image suffix) + images + (image prefix)."""
        rule = self.substitution.rule
        n = len(word)
        starts = [(0, "")]
        for a, img in rule.items():
            for p in range(1, len(img)):
                if word[:p] == img[-p:]:
                    starts.append((p, a))
        out = []
        for p0, left in starts:
            # full-block chains from p0; branching is tiny for
            # recognizable substitutions but handled generally
            stack = [(p0, "")]
            while stack:
                pos, letters = stack.pop()
                if pos == n:
                    out.append(left + letters)
                    continue
                for a, img in rule.items():
                    k = len(img)
                    if pos + k <= n:
                        if word[pos:pos + k] == img:
                            stack.append((pos + k, letters + a))
                    elif img.startswith(word[pos:]):
                        out.append(left + letters + a)
                if len(out) > _PARSE_BRANCH_CAP:
                    raise ResourceError("decomposition branch cap exceeded")
        return out

    # -- structure flags ----------------------------------------------

    @property
    def flip_closed(self) -> bool:
        """Whether the 0<->1 exchange preserves the language (binary only)."""
        if self._flip_closed is None:
            if self.alphabet != "01":
                self._flip_closed = False
            else:
                lang8 = self.language(min(8, self.language_cap))
                ok = all(flip_word(w) in lang8 for w in lang8)
                if ok:
                    ok = self.is_admissible(flip_word(self.test_word(4096)))
                self._flip_closed = ok
        return self._flip_closed

    def __repr__(self):
        return "SubshiftSystem(%r)" % self.name


class FullShiftSystem(SubshiftSystem):
    """The full shift over a digit alphabet (synthetic test system).

    Not substitutive; every word is admissible.  Used as a foil for
    coalescence checks (it has non-invertible endomorphisms).
    """

    def __init__(self, alphabet="01", language_cap=24):
        if len(alphabet) > MAX_ALPHABET:
            raise DomainError("alphabet capped at %d symbols" % MAX_ALPHABET)
        self.name = "full-shift-%s" % alphabet
        self.substitution = None
        self.alphabet = "".join(sorted(alphabet))
        self.seed = self.alphabet[0]
        self.language_cap = language_cap
        self.almost_automorphic = False
        self._lang = {}
        self._lock = threading.RLock()
        self._flip_closed = self.alphabet == "01"
        self._recog_len = None
        self._prefix = {}
        self._decode = None

    @property
    def constant_length(self):
        return None

    def fixed_prefix(self, seed, n):
        return self.test_word(n)

    def language(self, n):
        if n < 1:
            raise DomainError("language length must be >= 1")
        if n > self.language_cap or len(self.alphabet) ** n > 1 << 22:
            raise ResourceError("language(%d) exceeds cap" % n)
        got = self._lang.get(n)
        if got is None:
            got = frozenset("".join(t) for t in
                            itertools.product(self.alphabet, repeat=n))
            self._lang[n] = got
        return got

    def is_admissible(self, word):
        return all(c in self.alphabet for c in word)

    def test_word(self, length):
        # a de Bruijn cycle of order ~log covers every short block
        k = len(self.alphabet)
        order = 1
        while k ** order < length:
            order += 1
        order = min(order + 1, 16)
        seq = _de_bruijn(self.alphabet, order)
        reps = length // len(seq) + 2
        return (seq * reps)[:length]

    @property
    def flip_closed(self):
        return self._flip_closed


def _de_bruijn(alphabet, order):
    """Standard de Bruijn sequence B(k, order) as a string."""
    k = len(alphabet)
    a = [0] * k * order
    seq = []

    def db(t, p):
        if t > order:
            if order % p == 0:
                seq.extend(a[1:p + 1])
        else:
            a[t] = a[t - p]
            db(t + 1, p)
            for j in range(a[t - p] + 1, k):
                a[t] = j
                db(t + 1, t)

    db(1, 1)
    s = "".join(alphabet[i] for i in seq)
    return s + s[:order - 1]


# -- registry ---------------------------------------------------------

def thue_morse():
    return SubshiftSystem("morse", Substitution({"0": "01", "1": "10"}), "0")


def fibonacci():
    return SubshiftSystem("fibonacci", Substitution({"0": "01", "1": "0"}), "0",
                          almost_automorphic=True)


def period_doubling():
    return SubshiftSystem("period-doubling",
                          Substitution({"0": "01", "1": "00"}), "0",
                          almost_automorphic=True)


REGISTRY = {
    "morse": thue_morse,
    "fibonacci": fibonacci,
    "period-doubling": period_doubling,
}

_instances = {}
_registry_lock = threading.Lock()


def get_system(name: str) -> SubshiftSystem:
    """Shared instance of a built-in system (language caches are reused)."""
    if name not in REGISTRY:
        raise DomainError("unknown system %r (known: %s)"
                          % (name, ", ".join(sorted(REGISTRY))))
    with _registry_lock:
        if name not in _instances:
            _instances[name] = REGISTRY[name]()
        return _instances[name]
