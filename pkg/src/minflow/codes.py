"""Endomorphisms and automorphisms of subshifts as sliding block codes.

A code is a total local rule on the admissible (2r+1)-blocks of its
system.  Enumeration searches the rule space depth-first in block
first-appearance order along a generated test word, pruning as soon as a
determined stretch of the image stops being admissible; survivors are
verified exactly against the full test corpus, so the published list is
certified up to the check length.
"""

from dataclasses import dataclass

from . import kernels
from .errors import DomainError, IntegrityError, ResourceError
from .words import flip_word

DEFAULT_CHECK_LEN = 4096
_PRUNE_WINDOW = 16
_NODE_CAP = 2_000_000


class SlidingBlockCode:
    """A radius-r local rule on the admissible (2r+1)-blocks of a system."""

    def __init__(self, system, radius, rule):
        blocks = system.language(2 * radius + 1)
        if set(rule) != set(blocks):
            raise DomainError("rule must be total on the admissible "
                              "%d-blocks" % (2 * radius + 1))
        for out in rule.values():
            if len(out) != 1 or out not in system.alphabet:
                raise DomainError("rule output %r outside alphabet" % out)
        self.system = system
        self.radius = radius
        self.rule = dict(rule)
        self._table = None

    # -- evaluation ----------------------------------------------------

    def _rule_table(self):
        if self._table is None:
            base = len(self.system.alphabet)
            if self.system.alphabet != "0123456789"[:base]:
                raise IntegrityError("alphabet must be contiguous digits")
            width = 2 * self.radius + 1
            table = bytearray(b"\xff" * base ** width)
            for block, out in self.rule.items():
                code = 0
                for c in block:
                    code = code * base + (ord(c) - 48)
                table[code] = ord(out)
            self._table = bytes(table)
        return self._table

    def apply(self, word: str) -> str:
        """Image word of length len(word) - 2r (Curtis-Hedlund-Lyndon)."""
        if len(word) < 2 * self.radius + 1:
            raise DomainError("word shorter than the code window")
        try:
            out = kernels.apply_rule(word.encode(), self.radius,
                                     self._rule_table(),
                                     len(self.system.alphabet))
        except ValueError as exc:
            raise DomainError(str(exc)) from None
        return out.decode()

    # -- structure -----------------------------------------------------

    def pad_to(self, radius):
        """The same map presented at a larger radius."""
        if radius < self.radius:
            raise DomainError("cannot pad to a smaller radius")
        if radius == self.radius:
            return self
        d = radius - self.radius
        rule = {b: self.rule[b[d:len(b) - d]]
                for b in self.system.language(2 * radius + 1)}
        return SlidingBlockCode(self.system, radius, rule)

    def __eq__(self, other):
        if not isinstance(other, SlidingBlockCode):
            return NotImplemented
        if self.system is not other.system:
            return False
        r = max(self.radius, other.radius)
        return self.pad_to(r).rule == other.pad_to(r).rule

    __hash__ = None

    @property
    def normal_form(self):
        """(k, eps) when the code equals shift^k . flip^eps, else None."""
        r = self.radius
        flips = (0, 1) if self.system.flip_closed else (0,)
        for k in range(-r, r + 1):
            for eps in flips:
                if all(self.rule[b] == (flip_word(b[r + k]) if eps
                                        else b[r + k])
                       for b in self.rule):
                    return (k, eps)
        return None

    def to_json(self):
        return {"radius": self.radius,
                "blocks": [[b, self.rule[b]] for b in sorted(self.rule)]}

    @classmethod
    def from_json(cls, system, obj):
        return cls(system, obj["radius"], dict(tuple(kv) for kv in obj["blocks"]))

    def __repr__(self):
        nf = self.normal_form
        tag = " shift^%d.flip^%d" % nf if nf else ""
        return "<SlidingBlockCode r=%d%s>" % (self.radius, tag)


# -- constructors -------------------------------------------------------

def identity_code(system, radius=0):
    return shift_code(system, 0, radius)


def shift_code(system, k, radius=None):
    """The shift-by-k map as a radius-|k| (or wider) code."""
    r = abs(k) if radius is None else radius
    if r < abs(k):
        raise DomainError("radius %d too small for shift %d" % (r, k))
    rule = {b: b[r + k] for b in system.language(2 * r + 1)}
    return SlidingBlockCode(system, r, rule)


def flip_code(system, radius=0):
    if not system.flip_closed:
        raise DomainError("%r is not closed under the symbol flip"
                          % system.name)
    rule = {b: flip_word(b[radius]) for b in system.language(2 * radius + 1)}
    return SlidingBlockCode(system, radius, rule)


# -- operations ----------------------------------------------------------

def apply_code(code: SlidingBlockCode, word: str) -> str:
    return code.apply(word)


def compose(c1: SlidingBlockCode, c2: SlidingBlockCode) -> SlidingBlockCode:
    """The code w -> c1(c2(w)), presented at radius r1 + r2."""
    if c1.system is not c2.system:
        raise DomainError("codes live in different systems")
    system = c1.system
    r = c1.radius + c2.radius
    rule = {}
    for b in system.language(2 * r + 1):
        mid = c2.apply(b)
        rule[b] = c1.rule.get(mid)
        if rule[b] is None:
            raise DomainError("composition hits block %r outside the left "
                              "rule's domain" % mid)
    return SlidingBlockCode(system, r, rule)


def is_identity(code: SlidingBlockCode) -> bool:
    r = code.radius
    return all(out == b[r] for b, out in code.rule.items())


def verify_endomorphism(code: SlidingBlockCode,
                        check_len=DEFAULT_CHECK_LEN) -> bool:
    """Exact corpus check: every admissible word of length 2r+8 maps to an
    admissible word, and so does a generated prefix of length check_len."""
    system = code.system
    short_len = min(2 * code.radius + 8, system.language_cap)
    out_lang = system.language(short_len - 2 * code.radius)
    for w in system.language(short_len):
        if code.apply(w) not in out_lang:
            return False
    image = code.apply(system.test_word(check_len))
    return system.is_admissible(image)


def enumerate_endomorphisms(system, radius, check_len=DEFAULT_CHECK_LEN,
                            node_cap=_NODE_CAP):
    """All radius-`radius` sliding block codes of the system into itself,
    certified up to `check_len`; canonically sorted.

    The search assigns outputs block-by-block in order of first
    appearance along the test word, so the determined image grows as a
    prefix; a prefix that stops being admissible prunes the subtree.
    """
    width = 2 * radius + 1
    blocks = sorted(system.language(width))
    block_id = {b: i for i, b in enumerate(blocks)}
    master = system.test_word(check_len)
    idx = [block_id[master[i:i + width]]
           for i in range(len(master) - width + 1)]
    order, first_pos, seen = [], [], set()
    for pos, bid in enumerate(idx):
        if bid not in seen:
            seen.add(bid)
            order.append(bid)
            first_pos.append(pos)
    if len(seen) != len(blocks):
        raise IntegrityError("test word of length %d misses %d admissible "
                             "blocks" % (check_len, len(blocks) - len(seen)))
    first_pos.append(len(idx))

    prune_w = min(_PRUNE_WINDOW, check_len - width + 1)
    lang_bytes = [None] + [frozenset(w.encode() for w in system.language(m))
                           for m in range(1, prune_w + 1)]
    outs = [ord(a) for a in system.alphabet]
    image = bytearray(len(idx))
    assign = [0] * len(blocks)
    results = []
    nodes = 0

    def admissible_prefix(begin, end):
        for p in range(begin, end):
            image[p] = assign[idx[p]]
            m = min(prune_w, p + 1)
            if bytes(image[p - m + 1:p + 1]) not in lang_bytes[m]:
                return False
        return True

    def dfs(j, prefix_end):
        nonlocal nodes
        if j == len(order):
            rule = {blocks[i]: chr(assign[i]) for i in range(len(blocks))}
            code = SlidingBlockCode(system, radius, rule)
            if _final_verify(code, image, system):
                results.append(code)
            return
        new_end = first_pos[j + 1]
        for out in outs:
            nodes += 1
            if nodes > node_cap:
                raise ResourceError("enumeration node cap exceeded",
                                    partial=_sorted_codes(results, blocks))
            assign[order[j]] = out
            if admissible_prefix(prefix_end, new_end):
                dfs(j + 1, new_end)

    def _final_verify(code, image, system):
        if not system.is_admissible(bytes(image).decode()):
            return False
        short_len = min(2 * radius + 8, system.language_cap)
        out_lang = system.language(short_len - 2 * radius)
        return all(code.apply(w) in out_lang
                   for w in system.language(short_len))

    dfs(0, 0)
    codes = _sorted_codes(results, blocks)
    for c in codes:
        c.certified_len = check_len
    return codes


def _sorted_codes(codes, blocks):
    return sorted(codes, key=lambda c: tuple(c.rule[b] for b in blocks))


def invert(code: SlidingBlockCode, max_radius,
           check_len=DEFAULT_CHECK_LEN):
    """A two-sided inverse code of radius <= max_radius, or None.

    The candidate rule is read off the graph (image, preimage) along a
    test word; it must be total on the admissible blocks and compose to
    the identity with `code` in both orders.
    """
    system = code.system
    r = code.radius
    master = system.test_word(check_len)
    u = code.apply(master)
    for rp in range(max_radius + 1):
        width = 2 * rp + 1
        if len(u) < width:
            continue
        mapping = {}
        ok = True
        for i in range(len(u) - width + 1):
            b = u[i:i + width]
            t = master[i + rp + r]
            if mapping.setdefault(b, t) != t:
                ok = False
                break
        if not ok:
            continue
        if set(mapping) != set(system.language(width)):
            continue
        cand = SlidingBlockCode(system, rp, mapping)
        if is_identity(compose(cand, code)) and is_identity(compose(code, cand)):
            return cand
    return None


# -- group shape ---------------------------------------------------------

@dataclass(frozen=True)
class GroupShapeReport:
    shape: str
    forms: tuple            # sorted (k, eps) normal forms
    unrecognized: int
    count: int

    def to_json(self):
        return {"shape": self.shape, "count": self.count,
                "forms": [list(f) for f in self.forms],
                "unrecognized": self.unrecognized}


def classify_aut_group(codes, system) -> GroupShapeReport:
    """Assign normal forms shift^k . flip^eps and name the group shape."""
    forms = []
    unrecognized = 0
    for c in codes:
        nf = c.normal_form
        if nf is None:
            unrecognized += 1
        else:
            forms.append(nf)
    forms.sort()
    if unrecognized:
        shape = "unrecognized: %d extra codes" % unrecognized
    elif not forms or all(f == (0, 0) for f in forms):
        shape = "trivial"
    elif all(eps == 0 for _, eps in forms):
        shape = "Z"
    else:
        shape = "Z ⊕ Z/2"
    return GroupShapeReport(shape, tuple(forms), unrecognized, len(codes))
