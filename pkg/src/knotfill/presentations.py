"""Finitely presented groups, verified generator changes, Dehn filling.

Relators are stored in a canonical form: cyclically reduced, then the
lexicographically least letter sequence among all rotations of the
relator and of its inverse.  Two presentations differing only by
rotation or inversion of relators therefore render identically.

Text grammar (whitespace insensitive around punctuation):

    presentation := '<' name* '|' relators? '>'
    relators     := word (',' word)*

Structured (JSON-shaped) export uses the fields ``generators``,
``relators``, ``peripheral {meridian, longitude, s, t, w}`` and
``slope {p, q}``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd

from .derivation import DerivationStep, DerivationTrace
from .words import (
    Alphabet,
    Word,
    WordSyntaxError,
    exponent_sum,
    least_cyclic_form,
    parse_word,
    power,
    render_word,
    substitute,
)


class DegenerateFillingError(ValueError):
    """A filling relator reduced to the empty word."""


class MissingMapError(ValueError):
    """A generator-change map does not cover every generator."""


class InverseMapError(ValueError):
    """Generator-change maps failed the mutual-inverse round trip."""


class Presentation:
    """Generators plus canonicalized, nonempty relators."""

    __slots__ = ("alphabet", "relators")

    def __init__(self, alphabet: Alphabet, relators=()):
        canonical = []
        for rel in relators:
            if rel.alphabet != alphabet:
                raise WordSyntaxError(f"relator {rel} is not over {alphabet}")
            rel = least_cyclic_form(rel)
            if rel.is_identity:
                raise ValueError("empty relator (reduces to the identity)")
            canonical.append(rel)
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "relators", tuple(canonical))

    def __setattr__(self, *_):
        raise AttributeError("Presentation is immutable")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Presentation)
            and self.alphabet == other.alphabet
            and self.relators == other.relators
        )

    def __hash__(self) -> int:
        return hash((self.alphabet, self.relators))

    def __repr__(self) -> str:
        return f"Presentation({render_presentation(self)!r})"

    def __str__(self) -> str:
        return render_presentation(self)


@dataclass(frozen=True)
class PeripheralSystem:
    """Meridian and longitude words with the (s, w, t) decomposition.

    The meridian must be a single generator to the power +-1, and the
    longitude must factor exactly as m^-s * w * m^-t over the meridian
    generator m.
    """

    meridian: Word
    longitude: Word
    s: int
    w: Word
    t: int

    def __post_init__(self):
        if len(self.meridian.letters) != 1:
            raise ValueError("meridian must be a single generator to the power +-1")
        alpha = self.meridian.alphabet
        if self.longitude.alphabet != alpha or self.w.alphabet != alpha:
            raise ValueError("peripheral words must share one alphabet")
        gen = Word(alpha, (abs(self.meridian.letters[0]),))
        rebuilt = power(gen, -self.s) * self.w * power(gen, -self.t)
        if rebuilt != self.longitude:
            raise ValueError(
                f"decomposition mismatch: m^-{self.s} w m^-{self.t} = "
                f"{rebuilt}, longitude = {self.longitude}"
            )

    @property
    def meridian_generator(self) -> str:
        return self.meridian.alphabet.name_of(self.meridian.letters[0])


@dataclass(frozen=True)
class Slope:
    """Surgery coefficient p/q in lowest terms, sign carried by p.

    q = 0 (the meridional slope 1/0) is constructible but lies outside
    the hypotheses of every slope comparison; those must check q != 0.
    """

    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if p == 0 and q == 0:
            raise ValueError("slope 0/0 is undefined")
        if q < 0:
            p, q = -p, -q
        g = gcd(abs(p), q)
        if g > 1:
            p, q = p // g, q // g
        if q == 0:
            p = 1
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @classmethod
    def parse(cls, text: str) -> "Slope":
        text = text.strip()
        if "/" in text:
            a, b = text.split("/", 1)
            return cls(int(a), int(b))
        return cls(int(text), 1)

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


@dataclass(frozen=True)
class FilledPresentation:
    """A presentation with the two Dehn-filling relators appended.

    ``relators`` is always the base relators followed by exactly two
    filling relators: the peripheral commutator M L M^-1 L^-1 and the
    surgery relator M^p L^q.
    """

    base: Presentation
    peripheral: PeripheralSystem
    slope: Slope
    relators: tuple[Word, ...]

    def presentation(self) -> Presentation:
        return Presentation(self.base.alphabet, self.relators)


def dehn_fill(pres: Presentation, peripheral: PeripheralSystem, slope: Slope) -> FilledPresentation:
    """Append the filling relators M L M^-1 L^-1 and M^p L^q."""
    m, ell = peripheral.meridian, peripheral.longitude
    if m.alphabet != pres.alphabet:
        raise WordSyntaxError("peripheral words must be over the presentation alphabet")
    commutator = m * ell * m.inverse() * ell.inverse()
    surgery = power(m, slope.p) * power(ell, slope.q)
    filling = []
    for rel in (commutator, surgery):
        rel = least_cyclic_form(rel)
        if rel.is_identity:
            raise DegenerateFillingError(
                "filling relator reduces to the identity; peripheral system is degenerate"
            )
        filling.append(rel)
    return FilledPresentation(pres, peripheral, slope, pres.relators + tuple(filling))


def change_generators(
    pres: Presentation,
    old_in_new: dict[str, Word],
    new_in_old: dict[str, Word],
    one_sided: bool = False,
) -> tuple[Presentation, list[DerivationTrace]]:
    """Rewrite a presentation through a verified change of generators.

    ``old_in_new`` maps each old generator to a word over the new
    alphabet; ``new_in_old`` maps each new generator back.  The two maps
    are checked to be mutually inverse by round-trip reduction (group
    isomorphism then follows), unless ``one_sided`` explicitly requests
    the unchecked degenerate mode.

    Returns the rewritten presentation and one trace per relator.
    """
    old_alpha = pres.alphabet
    new_alpha = None
    for img in old_in_new.values():
        new_alpha = img.alphabet
        break
    if new_alpha is None:
        raise ValueError("old_in_new must map every old generator")
    for name in old_alpha:
        if name not in old_in_new:
            raise MissingMapError(f"old generator {name!r} has no image")
    if not one_sided:
        for name in new_alpha:
            if name not in new_in_old:
                raise MissingMapError(f"new generator {name!r} has no preimage")
        for name in old_alpha:
            back = substitute(old_in_new[name], new_in_old)
            if back != old_alpha.gen(name):
                raise InverseMapError(
                    f"round trip failed on old generator {name!r}: got {back}"
                )
        for name in new_alpha:
            forth = substitute(new_in_old[name], old_in_new)
            if forth != new_alpha.gen(name):
                raise InverseMapError(
                    f"round trip failed on new generator {name!r}: got {forth}"
                )

    new_relators = []
    traces = []
    for rel in pres.relators:
        image = substitute(rel, old_in_new)
        raw: list[int] = []
        for x in rel.letters:
            img = old_in_new[old_alpha.name_of(x)].letters
            raw.extend(img if x > 0 else tuple(-y for y in reversed(img)))
        trace = DerivationTrace(
            (
                DerivationStep(old_alpha, rel.letters, "start"),
                DerivationStep(
                    new_alpha, tuple(raw), "substitution", images=dict(old_in_new)
                ),
            )
        )
        trace.verify()
        new_relators.append(image)
        traces.append(trace)
    return Presentation(new_alpha, new_relators), traces


_TOKEN_RE = re.compile(r"[<>|,]|[A-Za-z][A-Za-z0-9_]*(?:\^-?\d+)?|\S")


def parse_presentation(text: str) -> Presentation:
    """Parse ``< a b | rel, rel >`` text into a canonical presentation."""
    tokens = _TOKEN_RE.findall(text)
    pos = 0

    def fail(msg: str):
        seen = " ".join(tokens[:pos])
        raise WordSyntaxError(f"{msg} (after {seen!r})")

    if not tokens or tokens[0] != "<":
        raise WordSyntaxError("presentation must start with '<'")
    pos = 1
    names = []
    while pos < len(tokens) and tokens[pos] not in ("|", ">"):
        if tokens[pos] in ("<", ","):
            fail(f"unexpected {tokens[pos]!r} in generator list")
        if "^" in tokens[pos]:
            fail("generator names cannot carry exponents")
        names.append(tokens[pos])
        pos += 1
    if pos >= len(tokens):
        fail("unterminated presentation")
    alphabet = Alphabet(names)
    relators = []
    if tokens[pos] == "|":
        pos += 1
        current: list[str] = []

        def close_relator():
            if not current:
                fail("empty relator")
            relators.append(parse_word(alphabet, " ".join(current)))
            current.clear()

        while pos < len(tokens) and tokens[pos] != ">":
            if tokens[pos] == ",":
                close_relator()
            elif tokens[pos] in ("<", "|"):
                fail(f"unexpected {tokens[pos]!r} in relator list")
            else:
                current.append(tokens[pos])
            pos += 1
        if pos >= len(tokens):
            fail("unterminated presentation")
        if current:
            close_relator()
        elif relators:
            fail("trailing comma in relator list")
    if tokens[pos] != ">":
        fail("expected '>'")
    if pos != len(tokens) - 1:
        fail("trailing input after '>'")
    return Presentation(alphabet, relators)


def render_presentation(pres: Presentation) -> str:
    gens = " ".join(pres.alphabet.names)
    rels = ", ".join(render_word(r) for r in pres.relators)
    return f"< {gens} | {rels} >"


def presentation_to_struct(pres: Presentation) -> dict:
    return {
        "generators": list(pres.alphabet.names),
        "relators": [render_word(r) for r in pres.relators],
    }


def peripheral_to_struct(peri: PeripheralSystem) -> dict:
    return {
        "meridian": render_word(peri.meridian),
        "longitude": render_word(peri.longitude),
        "s": peri.s,
        "t": peri.t,
        "w": render_word(peri.w),
    }


def slope_to_struct(slope: Slope) -> dict:
    return {"p": slope.p, "q": slope.q}


def filled_to_struct(filled: FilledPresentation) -> dict:
    return {
        "generators": list(filled.base.alphabet.names),
        "relators": [render_word(r) for r in filled.relators],
        "peripheral": peripheral_to_struct(filled.peripheral),
        "slope": slope_to_struct(filled.slope),
    }


CAS_DIALECTS = ("gap",)


def render_cas(pres: Presentation, dialect: str = "gap") -> str:
    """Emit presentation input for a computer-algebra system.

    The one built-in dialect, ``gap``, writes ``F := FreeGroup(...)``
    assignments with ``*``-separated relator words.
    """
    if dialect not in CAS_DIALECTS:
        raise ValueError(f"unknown CAS dialect {dialect!r}; known: {CAS_DIALECTS}")
    names = pres.alphabet.names
    quoted = ", ".join(f'"{n}"' for n in names)
    lines = [f"F := FreeGroup({quoted});;"]
    lines.append("AssignGeneratorVariables(F);;")
    rels = []
    for rel in pres.relators:
        factors = []
        run_letter, run_len = 0, 0

        def flush():
            if run_len:
                name = pres.alphabet.name_of(run_letter)
                e = run_len if run_letter > 0 else -run_len
                factors.append(name if e == 1 else f"{name}^{e}")

        for x in rel.letters:
            if x == run_letter:
                run_len += 1
            else:
                flush()
                run_letter, run_len = x, 1
        flush()
        rels.append("*".join(factors))
    lines.append("rels := [ " + ", ".join(rels) + " ];;")
    return "\n".join(lines) + "\n"


def abelianized_filling_row(peripheral: PeripheralSystem, slope: Slope) -> dict[str, int]:
    """Exponent-sum vector of M^p L^q, for cross-checks against homology."""
    alpha = peripheral.meridian.alphabet
    return {
        name: slope.p * exponent_sum(peripheral.meridian, name)
        + slope.q * exponent_sum(peripheral.longitude, name)
        for name in alpha
    }
