"""Knot groups of positively u-twisted (3, 3v+2)-torus knots.

Starting from the standard two-generator presentation of these knot
groups over {x, y}, the derivation replayed here changes generators to
a = y^(v+1) x^-1 (a meridian) and then b = y a^-1, producing a
one-relator presentation over {a, b} whose relator carries the
generalized Baumslag-Solitar pattern with

    m = n = 1,  r = u + 1,  k = 1,  w1 = (ba)^(v+1),  w2 = (ba)^v.

Every line of the transformation is recorded as a DerivationTrace step
and machine-verified at the free-group level, so a failure pinpoints
the exact line that diverged.

Longitude conventions: the ``paper`` convention uses

    s = 2u + 3(3v+2) + 1,  t = -1,  w = ((ba)^v b^(u+1))^2 (ba)^v b,

whose abelianized class works out to 2u times the meridian class.  A
preferred longitude must be null-homologous, so for u > 0 this package
also offers the ``h1`` convention, s = 4u + 3(3v+2) + 1, whose class is
zero.  Both decompositions satisfy longitude = a^-s w a^-t with the
same positive w; neither is silently preferred, and the homology module
reports the discrepancy explicitly.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .derivation import DerivationStep, DerivationTrace
from .gbs import GBSData, check_theorem, match_gbs, slope_threshold
from .homology import longitude_class
from .presentations import (
    PeripheralSystem,
    Presentation,
    Slope,
    change_generators,
)
from .words import Alphabet, Word, exponent_sum, least_cyclic_form, power, word_stats

XY = Alphabet(("x", "y"))
AY = Alphabet(("a", "y"))
AB = Alphabet(("a", "b"))

_X, _Y = 1, 2
_A = 1
_B = 2

CONVENTIONS = ("paper", "h1")


@dataclass(frozen=True)
class TwistParams:
    """Twist count u and torus parameter v, both nonnegative."""

    u: int
    v: int

    def __post_init__(self):
        if self.u < 0 or self.v < 0:
            raise ValueError("twisted torus parameters require u, v >= 0")


def _pw(block: list[int], e: int) -> list[int]:
    """Raw letters of block^e, expanding negative powers via inversion."""
    if e >= 0:
        return block * e
    inv = [-x for x in reversed(block)]
    return inv * (-e)


def cw_presentation(u: int, v: int) -> tuple[Presentation, Word, Word]:
    """The {x, y} knot-group presentation with its peripheral words.

    Returns (presentation, meridian, longitude_word); the longitude
    word is the surface-framed one, before the meridian-power
    correction that makes it null-homologous.
    """
    TwistParams(u, v)
    yvx = [-_Y] * v + [_X]
    relator = (
        [_X, _X]
        + _pw(yvx, u)
        + [_X]
        + [-_Y] * (v + 1)
        + _pw(yvx, -u)
        + [-_Y] * (2 * v + 1)
    )
    meridian = Word(XY, [_Y] * (v + 1) + [-_X])
    longitude = Word(XY, [_X, _X] + _pw(yvx, u) + [_X] + _pw(yvx, u))
    return Presentation(XY, [Word(XY, relator)]), meridian, longitude


def _relator_chain(u: int, v: int) -> DerivationTrace:
    """The displayed relator transformation, line by line."""
    sa = [-_A] + [_Y] * (v + 1)            # image of x
    sb = [-_Y] * v + sa                    # image of y^-v x
    sb_inv = [-x for x in reversed(sb)]
    images_x = {"x": Word(AY, sa), "y": Word(AY, [_Y])}
    images_y = {"a": Word(AB, [_A]), "y": Word(AB, [_B, _A])}
    ya = [_Y, -_A]
    ba = [_B, _A]

    line0 = (
        [_X, _X]
        + _pw([-_Y] * v + [_X], u)
        + [_X]
        + [-_Y] * (v + 1)
        + _pw([-_Y] * v + [_X], -u)
        + [-_Y] * (2 * v + 1)
    )
    line1 = (
        sa + sa + _pw(sb, u) + [-_A] + [_Y] * (v + 1) + [-_Y] * (v + 1)
        + _pw(sb, -u) + [-_Y] * (2 * v + 1)
    )
    line2 = sa + sa + _pw(sb, u) + [-_A] + _pw(sb, -u) + [-_Y] * (2 * v + 1)
    line4 = (
        sa + [-_A] + _pw(ya, u) + [_Y] * (v + 1) + [-_A] + _pw(sb, -u)
        + [-_Y] * (2 * v + 1)
    )
    line5 = (
        [-_A] + [_Y] * v + _pw(ya, u + 1) + [_Y] * (v + 1) + [-_A]
        + _pw(sb, -u) + [-_Y] * (2 * v + 1)
    )
    line6 = (
        [-_A] + [_Y] * v + _pw(ya, u + 1) + [_Y] * (v + 1) + [-_A]
        + _pw(sb_inv, u) + [-_Y] * (2 * v + 1)
    )
    line8 = (
        [-_A] + [_Y] * v + _pw(ya, u + 1) + [_Y] * (v + 1) + [-_A]
        + [-_Y] * (v + 1) + _pw([_A, -_Y], u) + [-_Y] * v
    )
    line10 = (
        [-_A] + [_Y] * v + _pw(ya, u + 1) + [_Y] * (v + 1) + [-_A]
        + [-_Y] * (v + 1) + _pw(ya, -u) + [-_Y] * v
    )
    tail = 2 * u + v                       # letters moved to the front
    line11 = (
        _pw(ya, -u) + [-_Y] * v + [-_A] + [_Y] * v + _pw(ya, u + 1)
        + [_Y] * (v + 1) + [-_A] + [-_Y] * (v + 1)
    )
    line12 = (
        [-_B] * u + _pw(ba, -v) + [-_A] + _pw(ba, v) + [_B] * (u + 1)
        + _pw(ba, v + 1) + [-_A] + _pw(ba, -(v + 1))
    )
    line13 = (
        _pw(ba, v + 1) + [_A] + _pw(ba, -(v + 1)) + [-_B] * (u + 1)
        + _pw(ba, -v) + [_A] + _pw(ba, v) + [_B] * u
    )

    n10 = len(Word(AY, line10).letters)
    steps = (
        DerivationStep(XY, tuple(line0), "start", note="relator over x, y"),
        DerivationStep(AY, tuple(line1), "substitution", images=images_x,
                       note="x = a^-1 y^(v+1)"),
        DerivationStep(AY, tuple(line2), "free-reduction",
                       note="cancel y^(v+1) y^-(v+1), expand the square"),
        DerivationStep(AY, tuple(line2), "power-expansion",
                       note="write out the u-fold block"),
        DerivationStep(AY, tuple(line4), "free-reduction",
                       note="telescope the first blocks"),
        DerivationStep(AY, tuple(line5), "free-reduction",
                       note="regroup as a^-1 y^v (y a^-1)^(u+1)"),
        DerivationStep(AY, tuple(line6), "power-expansion",
                       note="rewrite the inverse block"),
        DerivationStep(AY, tuple(line6), "power-expansion",
                       note="write out the inverse block"),
        DerivationStep(AY, tuple(line8), "free-reduction",
                       note="telescope the tail blocks"),
        DerivationStep(AY, tuple(line8), "free-reduction",
                       note="regroup as y^-(v+1) (a y^-1)^u"),
        DerivationStep(AY, tuple(line10), "power-expansion",
                       note="rewrite (a y^-1)^u = (y a^-1)^-u"),
        DerivationStep(AY, tuple(line11), "cyclic-permutation",
                       rotation=(n10 - tail) % n10 if n10 else 0,
                       note="rotate the trailing blocks to the front"),
        DerivationStep(AB, tuple(line12), "substitution", images=images_y,
                       note="y = b a"),
        DerivationStep(AB, tuple(line13), "inversion",
                       note="invert to the final relator"),
    )
    return DerivationTrace(steps)


def derive_ab_presentation(u: int, v: int) -> tuple[Presentation, GBSData, DerivationTrace]:
    """Replay the relator derivation and parse the resulting relator.

    The trace is verified step by step; a verification failure means a
    bug in the chain, never bad input.
    """
    TwistParams(u, v)
    trace = _relator_chain(u, v)
    trace.verify()
    pres = Presentation(AB, [trace.final])
    gbs = match_gbs(pres.relators[0], "a", "b")
    if gbs is None:
        raise AssertionError("derived relator lost the GBS pattern")
    return pres, gbs, trace


def _longitude_chain(u: int, v: int) -> DerivationTrace:
    sa = [-_A] + [_Y] * (v + 1)
    sb = [-_Y] * v + sa
    images_x = {"x": Word(AY, sa), "y": Word(AY, [_Y])}
    images_y = {"a": Word(AB, [_A]), "y": Word(AB, [_B, _A])}
    ya = [_Y, -_A]
    ba = [_B, _A]

    line0 = [_X, _X] + _pw([-_Y] * v + [_X], u) + [_X] + _pw([-_Y] * v + [_X], u)
    line1 = sa + sa + _pw(sb, u) + sa + _pw(sb, u)
    line3 = (
        [-_A] + [_Y] * v + _pw(ya, u + 1) + [_Y] * v + _pw(ya, u + 1)
        + [_Y] * (v + 1)
    )
    line4 = (
        [-_A] + _pw(ba, v) + [_B] * (u + 1) + _pw(ba, v) + [_B] * (u + 1)
        + _pw(ba, v + 1)
    )
    steps = (
        DerivationStep(XY, tuple(line0), "start", note="surface-framed longitude"),
        DerivationStep(AY, tuple(line1), "substitution", images=images_x,
                       note="x = a^-1 y^(v+1)"),
        DerivationStep(AY, tuple(line1), "power-expansion",
                       note="write out the blocks"),
        DerivationStep(AY, tuple(line3), "free-reduction",
                       note="telescope"),
        DerivationStep(AB, tuple(line4), "substitution", images=images_y,
                       note="y = b a"),
    )
    return DerivationTrace(steps)


def longitude_w(u: int, v: int) -> Word:
    """The positive word w in the longitude decomposition."""
    ba = [_B, _A]
    return Word(AB, (_pw(ba, v) + [_B] * (u + 1)) * 2 + _pw(ba, v) + [_B])


def derive_longitude(
    u: int, v: int, convention: str = "paper"
) -> tuple[Word, tuple[int, Word, int], DerivationTrace]:
    """Longitude over {a, b} with its a^-s w a^-t decomposition.

    Under ``paper`` s = 2u + 3(3v+2) + 1; under ``h1`` s is raised by 2u
    so the longitude becomes null-homologous.  t = -1 and w is the same
    positive word either way.
    """
    TwistParams(u, v)
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown longitude convention {convention!r}")
    trace = _longitude_chain(u, v)
    trace.verify()
    offset = 3 * (3 * v + 2) + 2 * u
    if convention == "h1":
        offset += 2 * u
    s, t = offset + 1, -1
    w = longitude_w(u, v)
    longitude = power(Word(AB, [_A]), -offset) * trace.final
    gen_a = Word(AB, [_A])
    assert power(gen_a, -s) * w * power(gen_a, -t) == longitude
    return longitude, (s, w, t), trace


def peripheral_system(u: int, v: int, convention: str = "paper") -> PeripheralSystem:
    """Meridian a plus the longitude under the chosen convention.

    Warns when the paper convention is used with u > 0, where the
    longitude's homology class is 2u times the meridian rather than 0.
    """
    longitude, (s, w, t), _ = derive_longitude(u, v, convention)
    if convention == "paper" and u > 0:
        warnings.warn(
            f"paper longitude convention at u={u}: abelianized longitude "
            f"class is {2 * u}, not 0; pass convention='h1' for the "
            "null-homologous framing",
            stacklevel=2,
        )
    return PeripheralSystem(Word(AB, [_A]), longitude, s, w, t)


@dataclass(frozen=True)
class TwistedTorusKnot:
    """Everything this package derives for one (u, v) pair."""

    u: int
    v: int
    convention: str
    xy_presentation: Presentation
    xy_meridian: Word
    xy_longitude: Word
    presentation: Presentation
    gbs: GBSData
    peripheral: PeripheralSystem
    threshold: int
    pretzel: tuple[int, int, int] | None
    relator_trace: DerivationTrace
    longitude_trace: DerivationTrace


def knot_data(u: int, v: int, convention: str = "paper") -> TwistedTorusKnot:
    """Bundle the full derivation output for one knot."""
    xy_pres, xy_mer, xy_long = cw_presentation(u, v)
    pres, gbs, rel_trace = derive_ab_presentation(u, v)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        peri = peripheral_system(u, v, convention)
    _, _, long_trace = derive_longitude(u, v, convention)
    # the u-twisted (3,5)-torus knot (v = 1) is the (-2, 3, 5+2u) pretzel
    pretzel = (-2, 3, 5 + 2 * u) if v == 1 else None
    return TwistedTorusKnot(
        u,
        v,
        convention,
        xy_pres,
        xy_mer,
        xy_long,
        pres,
        gbs,
        peri,
        slope_threshold(peri),
        pretzel,
        rel_trace,
        long_trace,
    )


@dataclass(frozen=True)
class Prop31Report:
    """Stage-by-stage result of the end-to-end derivation check."""

    u: int
    v: int
    stages: dict[str, bool]
    threshold: int
    pretzel: tuple[int, int, int] | None

    @property
    def all_ok(self) -> bool:
        return all(self.stages.values())

    def to_struct(self) -> dict:
        return {
            "u": self.u,
            "v": self.v,
            "stages": dict(self.stages),
            "all_ok": self.all_ok,
            "threshold": self.threshold,
            "pretzel": list(self.pretzel) if self.pretzel else None,
        }


def expected_gbs(u: int, v: int) -> GBSData:
    """The closed-form parse the derivation must reproduce."""
    ba = Word(AB, [_B, _A])
    return GBSData("a", "b", power(ba, v + 1), 1, u + 1, power(ba, v), 1, 1)


def verify_prop31(u: int, v: int) -> Prop31Report:
    """Run every stage of the derivation and check each against its
    closed form: presentation, generator changes, trace replay, GBS
    parse, longitude decomposition, and the slope-threshold test at the
    threshold slope itself."""
    stages: dict[str, bool] = {}
    xy_pres, xy_mer, xy_qlong = cw_presentation(u, v)
    stats = word_stats(xy_pres.relators[0])
    stages["xy_presentation"] = (
        stats.exponent_sum == {"x": 3, "y": -(3 * v + 2)}
        and xy_mer == Word(XY, [_Y] * (v + 1) + [-_X])
    )

    pres, gbs, trace = derive_ab_presentation(u, v)
    try:
        trace.verify()
        stages["trace_replay"] = True
    except Exception:
        stages["trace_replay"] = False

    # independent route: two verified generator changes
    step1, _ = change_generators(
        xy_pres,
        {"x": Word(AY, [-_A] + [_Y] * (v + 1)), "y": Word(AY, [_Y])},
        {"a": Word(XY, [_Y] * (v + 1) + [-_X]), "y": Word(XY, [_Y])},
    )
    step2, _ = change_generators(
        step1,
        {"a": Word(AB, [_A]), "y": Word(AB, [_B, _A])},
        {"a": Word(AY, [_A]), "b": Word(AY, [_Y, -_A])},
    )
    stages["change_generators"] = step2 == pres

    want = expected_gbs(u, v)
    stages["gbs_parse"] = (
        (gbs.w1, gbs.m, gbs.r, gbs.w2, gbs.n, gbs.k)
        == (want.w1, want.m, want.r, want.w2, want.n, want.k)
    )
    stages["relator_closed_form"] = least_cyclic_form(want.assemble()) == pres.relators[0]

    longitude, (s, w, t), _ = derive_longitude(u, v, "paper")
    stages["longitude_decomposition"] = (
        s == 2 * u + 3 * (3 * v + 2) + 1
        and t == -1
        and w == longitude_w(u, v)
        and power(Word(AB, [_A]), -s) * w * power(Word(AB, [_A]), -t) == longitude
    )

    peri = PeripheralSystem(Word(AB, [_A]), longitude, s, w, t)
    threshold = slope_threshold(peri)
    report = check_theorem(pres, peri, Slope(threshold, 1))
    stages["theorem_at_threshold"] = report.applies

    stages["meridian_generates_h1"] = (
        longitude_class(pres, peri.meridian, power(peri.meridian, 0)) == 0
    )

    pretzel = (-2, 3, 5 + 2 * u) if v == 1 else None
    return Prop31Report(u, v, stages, threshold, pretzel)
