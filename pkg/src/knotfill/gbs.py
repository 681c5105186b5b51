"""Generalized Baumslag-Solitar relators and the slope threshold test.

The relator pattern over generators a, b is

    (w1 a^m w1^-1) b^-r (w2^-1 a^n w2) b^(r-k)

with m, n >= 0, k >= 0, r in Z and w1, w2 arbitrary words.  A two-
generator one-relator group carrying this pattern, a meridian a and a
longitude a^-s w a^-t (w positive, containing b) has non-left-orderable
p/q fillings whenever q != 0 and p/q >= s + t; ``check_theorem`` tests
exactly those hypotheses and ``slope_threshold`` returns s + t.

The two verifiers at the bottom machine-check the symbolic identities
that argument rests on, one over the commuting block alphabet {a, w}
and one at the free-group level.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .presentations import PeripheralSystem, Presentation, Slope
from .words import (
    Word,
    cyclic_reduce,
    least_cyclic_form,
    letter_key,
    power,
    render_word,
    rotations,
    word_stats,
)


@dataclass(frozen=True)
class GBSData:
    """A parse of the generalized Baumslag-Solitar pattern.

    ``relator`` is the word the parameters claim to factor; it defaults
    to the assembled pattern.  The parse is not unique (trailing powers
    of a migrate between w1 and the central block, w2 is defined up to
    leading powers of a, and the rotation start is free); values
    produced by :func:`match_gbs` use the canonicalization documented
    there.
    """

    a: str
    b: str
    w1: Word
    m: int
    r: int
    w2: Word
    n: int
    k: int
    relator: Word = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.m < 0 or self.n < 0 or self.k < 0:
            raise ValueError("GBS pattern requires m, n, k >= 0")
        if self.relator is None:
            object.__setattr__(self, "relator", self.assemble())

    def assemble(self) -> Word:
        """reduce(w1 a^m w1^-1 b^-r w2^-1 a^n w2 b^(r-k))."""
        alpha = self.w1.alphabet
        ga, gb = alpha.gen(self.a), alpha.gen(self.b)
        return (
            self.w1
            * power(ga, self.m)
            * self.w1.inverse()
            * power(gb, -self.r)
            * self.w2.inverse()
            * power(ga, self.n)
            * self.w2
            * power(gb, self.r - self.k)
        )

    def is_consistent(self) -> bool:
        """Whether the parameters really factor the claimed relator."""
        return least_cyclic_form(self.assemble()) == least_cyclic_form(self.relator)

    def to_struct(self) -> dict:
        return {
            "w1": render_word(self.w1),
            "m": self.m,
            "r": self.r,
            "w2": render_word(self.w2),
            "n": self.n,
            "k": self.k,
        }


def _peel_conjugate(seg: tuple[int, ...], center: int) -> tuple[tuple[int, ...], int] | None:
    """Factor a reduced segment as P center^e P^-1 with e >= 0.

    Returns (P, e) or None.  The peel is forced: ends are stripped while
    mutually inverse, and the remaining middle must be a nonnegative
    power of ``center``.
    """
    lo, hi = 0, len(seg)
    while hi - lo >= 2 and seg[lo] == -seg[hi - 1]:
        lo += 1
        hi -= 1
    middle = seg[lo:hi]
    if any(x != center for x in middle):
        return None
    if not middle and lo:
        # a reduced segment cannot peel to nothing unless it was empty
        return None
    return seg[:lo], len(middle)


def _peel_power_conjugate(seg: tuple[int, ...], letter: int, e: int):
    """Factor a reduced word as P letter^e P^-1; return P or None."""
    target = (letter,) * e if e >= 0 else (-letter,) * (-e)
    lo, hi = 0, len(seg)
    while hi - lo > abs(e) and seg[lo] == -seg[hi - 1]:
        lo += 1
        hi -= 1
    if seg[lo:hi] != target:
        return None
    return seg[:lo]


def _reduce_concat(*parts: tuple[int, ...]) -> tuple[int, ...]:
    out: list[int] = []
    for part in parts:
        for x in part:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return tuple(out)


def _candidates_by_conjugacy(letters, la, lb, k_of_side):
    """Complete parse enumeration via the conjugacy criterion.

    Conjugating the assembled pattern by w1^-1 gives a^m A a^n B with
    A = w1^-1 b^-r w2^-1 and B = w2 b^(r-k) w1, so reduce(A B) must
    equal w1^-1 b^-k w1 and, once w1 and r are chosen, w2 is forced to
    reduce(A^-1 w1^-1 b^-r).  Scanning every rotation, every split of
    the a-letters into m + n and every cut point between A and B covers
    all parses, including those whose blocks partially cancel into the
    conjugating words (which the visible-split scan cannot see).
    """
    out = set()
    for side, base in enumerate((letters, tuple(-x for x in reversed(letters)))):
        n_total = len(base)
        a_sum = sum(1 if x == la else -1 if x == -la else 0 for x in base)
        k = -sum(1 if x == lb else -1 if x == -lb else 0 for x in base)
        if k < 0 or a_sum < 0:
            continue
        max_run = 1
        run = 0
        for x in base:
            run = run + 1 if abs(x) == abs(lb) else 0
            max_run = max(max_run, run)
        t_window = range(-(max_run + k + 2), max_run + k + 3)
        pairs = set()
        for shift in range(n_total):
            rho = base[shift:] + base[:shift]
            for m in range(a_sum + 1):
                n = a_sum - m
                z = _reduce_concat((-la,) * m, rho)
                for p in range(len(z) + 1):
                    seg_a = z[:p]
                    seg_b = _reduce_concat((-la,) * n, z[p:])
                    c = _reduce_concat(seg_a, seg_b)
                    peeled = _peel_power_conjugate(c, lb, -k)
                    if peeled is None:
                        continue
                    pairs.add((m, n, peeled, seg_a))
        for m, n, peeled, seg_a in pairs:
            seg_a_inv = tuple(-x for x in reversed(seg_a))
            for t in t_window:
                w1_inv = _reduce_concat(peeled, (lb,) * t if t >= 0 else (-lb,) * (-t))
                w1 = tuple(-x for x in reversed(w1_inv))
                w2_base = _reduce_concat(seg_a_inv, w1_inv)
                run0 = 0
                for x in reversed(w2_base):
                    if x == lb and run0 >= 0:
                        run0 += 1
                    elif x == -lb and run0 <= 0:
                        run0 -= 1
                    else:
                        break
                width = max_run + k + 3
                lo = min(0, run0) - width
                hi = max(0, run0) + width
                for r in range(lo, hi + 1):
                    w2 = _reduce_concat(w2_base, (-lb,) * r if r >= 0 else (lb,) * (-r))
                    out.add((w1, m, r, w2, n, k))
    return out


def match_gbs(relator: Word, a: str = "a", b: str = "b") -> GBSData | None:
    """Recognize the GBS pattern in any rotation of ``relator`` or its
    inverse, returning the canonical parse or None.

    The factorization is never unique: b-powers at the block boundaries
    can wrap into the conjugating words, trailing a-powers migrate
    between w1 and the central block, and the rotation start is free.
    The canonical parse is selected by, in order:

      1. fewest inverse letters in w1 and w2 (prefer positive
         conjugators, which is how the pattern arises in knot groups);
      2. w1 nonempty and beginning with a letter other than a^+-1 (the
         cut between the trailing b-power and the first conjugate is
         placed so the conjugator leads with b); w2 empty or likewise;
      3. maximal r;
      4. maximal central blocks (larger m, then n), then shorter and
         letter-wise least conjugating words.

    Within a parse, w2 carries no leading a-power (its peel is minimal)
    while w1 absorbs the central block (w1 ends in a^m) whenever the
    conjugating word is nontrivial, matching the customary way the
    pattern is written.  Every returned parse reassembles to the given
    relator exactly.
    """
    alpha = relator.alphabet
    la, lb = alpha.letter(a), alpha.letter(b)
    core, _ = cyclic_reduce(relator)
    letters = core.letters
    if not letters:
        empty = Word(alpha)
        return GBSData(a, b, empty, 0, 0, empty, 0, 0, relator=relator)

    best = None
    best_key = None
    for side, base in enumerate((letters, tuple(-x for x in reversed(letters)))):
        n_total = len(base)
        a_sum = sum(1 if x == la else -1 if x == -la else 0 for x in base)
        b_sum = sum(1 if x == lb else -1 if x == -lb else 0 for x in base)
        k = -b_sum
        if k < 0 or a_sum < 0:
            continue
        for shift in range(n_total):
            rho = base[shift:] + base[:shift]
            for i1 in range(n_total + 1):
                parsed1 = _peel_conjugate(rho[:i1], la)
                if parsed1 is None:
                    continue
                w1_0, m = parsed1
                # S2: a uniform b-run starting at i1
                run = 0
                while i1 + run < n_total and abs(rho[i1 + run]) == abs(lb) and (
                    run == 0 or rho[i1 + run] == rho[i1]
                ):
                    run += 1
                for j in range(run + 1):
                    r = 0 if j == 0 else (-j if rho[i1] == lb else j)
                    e4 = r - k
                    i3 = n_total - abs(e4)
                    if i3 < i1 + j:
                        continue
                    s4 = (lb,) * e4 if e4 > 0 else (-lb,) * (-e4)
                    if rho[i3:] != s4:
                        continue
                    parsed2 = _peel_conjugate(rho[i1 + j : i3], la)
                    if parsed2 is None:
                        continue
                    w2_inv, n = parsed2
                    w1 = w1_0 + (la,) * m if w1_0 else w1_0
                    w2 = tuple(-x for x in reversed(w2_inv))
                    key = _parse_key(w1, m, r, w2, n, la) + (side, shift)
                    if best_key is None or key < best_key:
                        best_key = key
                        best = (w1, m, r, w2, n, k)

    if best is None:
        # no visible split: fall back to the complete conjugacy search,
        # which also finds parses hidden by junction cancellation
        target = set(
            w.letters for w in rotations(core) + rotations(core.inverse())
        )
        survivors = []
        for w1, m, r, w2, n, k in _candidates_by_conjugacy(letters, la, lb, None):
            data = GBSData(a, b, Word(alpha, w1), m, r, Word(alpha, w2), n, k)
            assembled_core, _ = cyclic_reduce(data.assemble())
            if assembled_core.letters in target:
                survivors.append((w1, m, r, w2, n, k))
        for w1, m, r, w2, n, k in survivors:
            key = _parse_key(w1, m, r, w2, n, la) + (0, 0)
            if best_key is None or key < best_key:
                best_key = key
                best = (w1, m, r, w2, n, k)

    if best is None:
        return None
    w1, m, r, w2, n, k = best
    data = GBSData(a, b, Word(alpha, w1), m, r, Word(alpha, w2), n, k, relator=relator)
    if not data.is_consistent():
        raise AssertionError("internal error: GBS parse failed reassembly")
    return data


def _parse_key(w1, m, r, w2, n, la):
    """Canonicalization order for competing parses; see match_gbs."""
    return (
        sum(1 for x in w1 if x < 0) + sum(1 for x in w2 if x < 0),
        0 if w1 and abs(w1[0]) != abs(la) else 1,
        0 if not w2 or abs(w2[0]) != abs(la) else 1,
        -r,
        -m,
        -n,
        len(w1) + len(w2),
        tuple(letter_key(x) for x in w1),
        tuple(letter_key(x) for x in w2),
    )


def slope_threshold(peripheral: PeripheralSystem) -> int:
    """The slope bound s + t, as an exact integer."""
    return peripheral.s + peripheral.t


@dataclass(frozen=True)
class TheoremReport:
    """Hypothesis-by-hypothesis applicability check.

    The positivity condition on w is stated in two strengths in the
    source material: the weak reading only excludes a^-1 and b^-1, the
    strict reading additionally requires at least one b.  Both flags are
    reported; ``applies`` follows ``require_b_in_w``.
    """

    gbs: GBSData | None
    meridian_ok: bool
    w_positive: bool
    w_contains_b: bool
    q_nonzero: bool
    slope_ok: bool
    degenerate_mn: bool
    threshold: int
    slope: Slope
    require_b_in_w: bool
    failed: tuple[str, ...] = field(default_factory=tuple)

    @property
    def applies(self) -> bool:
        return not self.failed

    def to_struct(self) -> dict:
        return {
            "gbs": self.gbs.to_struct() if self.gbs else None,
            "gbs_matched": self.gbs is not None,
            "meridian_ok": self.meridian_ok,
            "w_positive": self.w_positive,
            "w_contains_b": self.w_contains_b,
            "q_nonzero": self.q_nonzero,
            "slope_ok": self.slope_ok,
            "degenerate_mn": self.degenerate_mn,
            "threshold": self.threshold,
            "slope": {"p": self.slope.p, "q": self.slope.q},
            "require_b_in_w": self.require_b_in_w,
            "verdict": "applies" if self.applies else "does-not-apply",
            "failed": list(self.failed),
        }


def check_theorem(
    pres: Presentation,
    peripheral: PeripheralSystem,
    slope: Slope,
    require_b_in_w: bool = True,
) -> TheoremReport:
    """Check every hypothesis of the non-left-orderable filling test.

    Failures are report fields, never exceptions.  ``require_b_in_w``
    selects the strict reading of the positivity condition (default) or
    the weak one.
    """
    if len(pres.alphabet) != 2 or len(pres.relators) != 1:
        raise ValueError("theorem check needs exactly 2 generators and 1 relator")
    a = peripheral.meridian_generator
    (b,) = [g for g in pres.alphabet if g != a]
    meridian_ok = (
        peripheral.meridian.alphabet == pres.alphabet
        and len(peripheral.meridian.letters) == 1
    )
    gbs = match_gbs(pres.relators[0], a, b) if meridian_ok else None
    stats = word_stats(peripheral.w)
    w_positive = stats.is_positive
    w_contains_b = stats.occurrences.get(b, 0) >= 1
    q_nonzero = slope.q != 0
    threshold = slope_threshold(peripheral)
    slope_ok = q_nonzero and slope.p >= threshold * slope.q
    degenerate = gbs is not None and (gbs.m == 0 or gbs.n == 0)

    failed = []
    if gbs is None:
        failed.append("gbs_matched")
    if not meridian_ok:
        failed.append("meridian_ok")
    if not w_positive:
        failed.append("w_positive")
    if require_b_in_w and not w_contains_b:
        failed.append("w_contains_b")
    if not q_nonzero:
        failed.append("q_nonzero")
    if not slope_ok:
        failed.append("slope_ok")
    return TheoremReport(
        gbs,
        meridian_ok,
        w_positive,
        w_contains_b,
        q_nonzero,
        slope_ok,
        degenerate,
        threshold,
        slope,
        require_b_in_w,
        tuple(failed),
    )


@dataclass(frozen=True)
class MLIdentityResult:
    """Collected form of a^p (a^-s w a^-t)^q over commuting blocks a, w."""

    a_exponent: int
    w_exponent: int
    expected_a: int
    expected_w: int

    @property
    def ok(self) -> bool:
        return (self.a_exponent, self.w_exponent) == (self.expected_a, self.expected_w)


def verify_ml_identity(s: int, t: int, p: int, q: int) -> MLIdentityResult:
    """Expand M^p L^q = a^p (a^-s w a^-t)^q over the two-letter block
    alphabet {a, w} and collect exponents.

    Commuting a past w is justified in the filled group by the relator
    M L M^-1 L^-1, which makes a commute with the longitude and hence
    with w.  The collected form must be a^(p-(s+t)q) w^q; negative q is
    handled by expanding the inverted blocks.
    """
    runs: list[tuple[str, int]] = [("a", p)]
    if q >= 0:
        for _ in range(q):
            runs.extend([("a", -s), ("w", 1), ("a", -t)])
    else:
        for _ in range(-q):
            runs.extend([("a", t), ("w", -1), ("a", s)])
    a_exp = sum(e for sym, e in runs if sym == "a")
    w_exp = sum(e for sym, e in runs if sym == "w")
    return MLIdentityResult(a_exp, w_exp, p - (s + t) * q, q)


@dataclass(frozen=True)
class RearrangementWitness:
    """Conjugacy witness for the rearranged relator identity."""

    ok: bool
    rotation: int | None = None
    inverted: bool | None = None
    message: str = ""


def verify_relator_rearrangement(gbs: GBSData) -> RearrangementWitness:
    """Check a^n w2 b^(r-k) w1 a^m = w2 b^r w1 against the relator.

    Forms U V^-1 for the two sides and verifies it is freely conjugate
    to the claimed relator or its inverse, returning the rotation and
    orientation that witness the conjugacy.  Failure means the GBSData
    does not satisfy its own invariant.
    """
    alpha = gbs.w1.alphabet
    ga, gb = alpha.gen(gbs.a), alpha.gen(gbs.b)
    u = power(ga, gbs.n) * gbs.w2 * power(gb, gbs.r - gbs.k) * gbs.w1 * power(ga, gbs.m)
    v = gbs.w2 * power(gb, gbs.r) * gbs.w1
    diff = u * v.inverse()
    core_diff, _ = cyclic_reduce(diff)
    core_rel, _ = cyclic_reduce(gbs.relator)
    if len(core_diff) != len(core_rel):
        return RearrangementWitness(False, message="core lengths differ")
    for inverted, target in ((False, core_rel), (True, core_rel.inverse())):
        for rot, candidate in enumerate(rotations(target)):
            if candidate == core_diff:
                return RearrangementWitness(True, rot, inverted)
    return RearrangementWitness(False, message="no rotation of the relator matches")
