"""Replayable traces of elementary free-group word moves.

A trace records a chain of displayed word forms together with the move
that justifies each line.  Every consecutive pair is machine-verified at
the free-group level; no group relations are ever used.  A failing step
therefore pinpoints the exact line of a derivation that diverged.

Steps store the *raw* letter sequence as displayed, which may be
unreduced; verification always compares fully reduced forms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .words import Alphabet, Word, is_cyclically_reduced, rotate, substitute

JUSTIFICATIONS = (
    "start",
    "substitution",
    "free-reduction",
    "power-expansion",
    "cyclic-permutation",
    "inversion",
)


class TraceError(ValueError):
    """A trace step does not follow from its predecessor by its rule."""


@dataclass(frozen=True)
class DerivationStep:
    """One displayed line of a derivation.

    rule semantics, relative to the previous step's reduced word w:
      start             -- first line, nothing to check
      substitution      -- this word equals substitute(w, images)
      free-reduction    -- same group element, re-displayed after cancelling
      power-expansion   -- same group element, powers expanded or regrouped
      cyclic-permutation-- this word is rotate(w, rotation)
      inversion         -- this word is w^-1
    """

    alphabet: Alphabet
    raw: tuple[int, ...]
    rule: str
    images: Mapping[str, Word] | None = None
    rotation: int | None = None
    note: str = ""

    def __post_init__(self):
        if self.rule not in JUSTIFICATIONS:
            raise ValueError(f"unknown justification {self.rule!r}")

    @property
    def word(self) -> Word:
        return Word(self.alphabet, self.raw)


@dataclass(frozen=True)
class DerivationTrace:
    """A verified chain of derivation steps."""

    steps: tuple[DerivationStep, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def final(self) -> Word:
        return self.steps[-1].word

    def verify(self) -> None:
        """Replay the whole chain; raise :class:`TraceError` on the first
        step whose rule does not yield it from its predecessor."""
        if not self.steps:
            raise TraceError("empty trace")
        if self.steps[0].rule != "start":
            raise TraceError("step 0 must be a start step")
        prev = self.steps[0].word
        for i, step in enumerate(self.steps[1:], start=1):
            cur = step.word
            if step.rule == "start":
                raise TraceError(f"step {i}: start may only open a trace")
            elif step.rule == "substitution":
                if step.images is None:
                    raise TraceError(f"step {i}: substitution without images")
                expected = substitute(prev, step.images)
                if cur != expected:
                    raise TraceError(
                        f"step {i}: substitution yields {expected}, line shows {cur}"
                    )
            elif step.rule in ("free-reduction", "power-expansion"):
                if cur != prev:
                    raise TraceError(
                        f"step {i}: {step.rule} changed the element "
                        f"({prev} -> {cur})"
                    )
            elif step.rule == "cyclic-permutation":
                if step.rotation is None:
                    raise TraceError(f"step {i}: cyclic-permutation without amount")
                if not is_cyclically_reduced(prev):
                    raise TraceError(f"step {i}: rotating a non-cyclically-reduced word")
                expected = rotate(prev, step.rotation)
                if cur != expected:
                    raise TraceError(
                        f"step {i}: rotation by {step.rotation} yields "
                        f"{expected}, line shows {cur}"
                    )
            elif step.rule == "inversion":
                if cur != prev.inverse():
                    raise TraceError(f"step {i}: line is not the inverse of step {i-1}")
            prev = cur

    def words(self) -> list[Word]:
        return [s.word for s in self.steps]
