"""Exact free-group word arithmetic over named generator alphabets.

A word is an immutable, freely reduced sequence of letters.  Letters are
signed integers: generator ``i`` of the alphabet is ``+(i + 1)`` and its
inverse is ``-(i + 1)``.  The empty sequence is the group identity.  All
equality in this module is literal sequence equality, which decides the
free-group word problem because reduction is canonical.

Words carry their alphabet, and mixing alphabets is an error rather than
a coercion: several derivations in this package move through distinct
alphabets ({x,y}, {a,y}, {a,b}) and silent mixing is the likeliest bug.

Text grammar (used by every CLI flag and file format):

    word   := factor*
    factor := name ('^' integer)?
    name   := [A-Za-z][A-Za-z0-9_]*

Factors are whitespace separated; empty input denotes the identity.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

_NAME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")
_FACTOR_RE = re.compile(r"^([A-Za-z][A-Za-z0-9_]*)(?:\^(-?\d+))?$")


class AlphabetMismatchError(ValueError):
    """Raised when an operation mixes words over different alphabets."""


class MissingImageError(ValueError):
    """Raised when a substitution lacks an image for a generator in use."""


class WordSyntaxError(ValueError):
    """Raised on malformed word or presentation text."""


class Alphabet:
    """Immutable symbol table of generator names."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        for name in names:
            if not _NAME_RE.match(name):
                raise ValueError(f"invalid generator name: {name!r}")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names: {names}")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})

    def __setattr__(self, *_):
        raise AttributeError("Alphabet is immutable")

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"Alphabet({', '.join(self.names)})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise WordSyntaxError(f"unknown generator {name!r}") from None

    def letter(self, name: str, sign: int = 1) -> int:
        """Signed-integer letter for a generator name."""
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        return sign * (self.index(name) + 1)

    def name_of(self, letter: int) -> str:
        return self.names[abs(letter) - 1]

    def gen(self, name: str) -> "Word":
        return Word(self, (self.letter(name),))

    def gens(self) -> tuple["Word", ...]:
        return tuple(Word(self, (i + 1,)) for i in range(len(self.names)))

    def word(self, text: str) -> "Word":
        return parse_word(self, text)


def reduce_letters(letters: Iterable[int]) -> tuple[int, ...]:
    """Freely reduce a raw letter sequence (stack cancellation)."""
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def letter_key(letter: int) -> tuple[int, int]:
    """Total order on letters: a < a^-1 < b < b^-1 < ..."""
    return (abs(letter), 0 if letter > 0 else 1)


class Word:
    """A freely reduced word over a fixed alphabet.

    Construction reduces the given letters, so ``Word`` is closed under
    every operation below and ``reduce`` is idempotent by construction.
    """

    __slots__ = ("alphabet", "letters")

    def __init__(self, alphabet: Alphabet, letters: Iterable[int] = ()):
        letters = tuple(letters)
        n = len(alphabet)
        for x in letters:
            if not isinstance(x, int) or x == 0 or abs(x) > n:
                raise ValueError(f"letter {x!r} outside alphabet of size {n}")
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "letters", reduce_letters(letters))

    @classmethod
    def _reduced(cls, alphabet: Alphabet, letters: tuple[int, ...]) -> "Word":
        """Internal fast path for letters already known to be reduced."""
        w = cls.__new__(cls)
        object.__setattr__(w, "alphabet", alphabet)
        object.__setattr__(w, "letters", letters)
        return w

    def __setattr__(self, *_):
        raise AttributeError("Word is immutable")

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Word)
            and self.alphabet == other.alphabet
            and self.letters == other.letters
        )

    def __hash__(self) -> int:
        return hash((self.alphabet, self.letters))

    def __mul__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        if self.alphabet != other.alphabet:
            raise AlphabetMismatchError(
                f"cannot multiply words over {self.alphabet} and {other.alphabet}"
            )
        return Word._reduced(self.alphabet, reduce_letters(self.letters + other.letters))

    def __pow__(self, e: int) -> "Word":
        return power(self, e)

    def __invert__(self) -> "Word":
        return self.inverse()

    def inverse(self) -> "Word":
        return Word._reduced(self.alphabet, tuple(-x for x in reversed(self.letters)))

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def __str__(self) -> str:
        return render_word(self)

    def __repr__(self) -> str:
        return f"Word({render_word(self)!r})" if self.letters else "Word('')"

    def key(self) -> tuple:
        """Deterministic sort key: by length, then letter order."""
        return (len(self.letters), tuple(letter_key(x) for x in self.letters))


@dataclass(frozen=True)
class WordStats:
    """Letter census of a word.

    ``exponent_sum`` is the abelianized exponent vector; ``occurrences``
    counts letters regardless of sign.  The empty word is positive
    vacuously; callers that need "contains at least one b" must check
    ``occurrences`` separately, because positivity and occurrence are
    independent conditions.
    """

    exponent_sum: dict[str, int]
    occurrences: dict[str, int]
    is_positive: bool
    length: int


def concat(*words: Word) -> Word:
    """Reduced product of any number of words over one alphabet."""
    if not words:
        raise ValueError("concat needs at least one word")
    out = words[0]
    for w in words[1:]:
        out = out * w
    return out


def invert(word: Word) -> Word:
    return word.inverse()


def power(word: Word, e: int) -> Word:
    """e-fold reduced product; negative e inverts."""
    if e < 0:
        return power(word.inverse(), -e)
    out: list[int] = []
    for _ in range(e):
        for x in word.letters:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return Word._reduced(word.alphabet, tuple(out))


def substitute(word: Word, images: Mapping[str, Word]) -> Word:
    """Apply the homomorphism sending each generator to its image word.

    Every generator occurring in ``word`` must have an image, and all
    images must share one target alphabet.
    """
    target: Alphabet | None = None
    for img in images.values():
        if target is None:
            target = img.alphabet
        elif img.alphabet != target:
            raise AlphabetMismatchError("substitution images span multiple alphabets")
    out: list[int] = []
    for x in word.letters:
        name = word.alphabet.name_of(x)
        if name not in images:
            raise MissingImageError(f"no image for generator {name!r}")
        img = images[name].letters
        seq = img if x > 0 else tuple(-y for y in reversed(img))
        for y in seq:
            if out and out[-1] == -y:
                out.pop()
            else:
                out.append(y)
    if target is None:
        if word.letters:
            raise MissingImageError("empty image map for a nonempty word")
        return word
    return Word._reduced(target, tuple(out))


def cyclic_reduce(word: Word) -> tuple[Word, Word]:
    """Split ``word`` as ``g * core * g^-1`` with ``core`` cyclically reduced.

    Returns ``(core, g)``.
    """
    letters = word.letters
    i, j = 0, len(letters)
    while j - i >= 2 and letters[i] == -letters[j - 1]:
        i += 1
        j -= 1
    core = Word._reduced(word.alphabet, letters[i:j])
    conj = Word._reduced(word.alphabet, letters[:i])
    return core, conj


def is_cyclically_reduced(word: Word) -> bool:
    letters = word.letters
    return len(letters) < 2 or letters[0] != -letters[-1]


def rotate(word: Word, k: int) -> Word:
    """Left-rotate a cyclically reduced word by ``k`` letters."""
    if not is_cyclically_reduced(word):
        raise ValueError("rotation requires a cyclically reduced word")
    letters = word.letters
    if not letters:
        return word
    k %= len(letters)
    return Word._reduced(word.alphabet, letters[k:] + letters[:k])


def rotations(word: Word) -> list[Word]:
    """All left rotations of a cyclically reduced word."""
    if not word.letters:
        return [word]
    return [rotate(word, k) for k in range(len(word.letters))]


def least_cyclic_form(word: Word) -> Word:
    """Canonical relator form: cyclically reduce, then take the
    lexicographically least rotation of the core or of its inverse."""
    core, _ = cyclic_reduce(word)
    if not core.letters:
        return core
    candidates = rotations(core) + rotations(core.inverse())
    return min(candidates, key=lambda w: tuple(letter_key(x) for x in w.letters))


def word_stats(word: Word) -> WordStats:
    exponent = {name: 0 for name in word.alphabet}
    occurs = {name: 0 for name in word.alphabet}
    positive = True
    for x in word.letters:
        name = word.alphabet.name_of(x)
        exponent[name] += 1 if x > 0 else -1
        occurs[name] += 1
        if x < 0:
            positive = False
    return WordStats(exponent, occurs, positive, len(word.letters))


def exponent_sum(word: Word, name: str) -> int:
    i = word.alphabet.letter(name)
    return sum(1 if x == i else -1 if x == -i else 0 for x in word.letters)


def parse_word(alphabet: Alphabet, text: str) -> Word:
    """Parse the word grammar; empty input is the identity."""
    letters: list[int] = []
    for factor in text.split():
        m = _FACTOR_RE.match(factor)
        if not m:
            raise WordSyntaxError(f"malformed factor {factor!r}")
        name, exp = m.group(1), m.group(2)
        e = 1 if exp is None else int(exp)
        x = alphabet.letter(name)
        letters.extend([x if e > 0 else -x] * abs(e))
    return Word(alphabet, letters)


def render_word(word: Word) -> str:
    """Inverse of :func:`parse_word` up to reduction: ``a^-3 b`` style."""
    parts: list[str] = []
    run_letter = 0
    run_len = 0

    def flush():
        if run_len == 0:
            return
        name = word.alphabet.name_of(run_letter)
        e = run_len if run_letter > 0 else -run_len
        parts.append(name if e == 1 else f"{name}^{e}")

    for x in word.letters:
        if x == run_letter:
            run_len += 1
        else:
            flush()
            run_letter, run_len = x, 1
    flush()
    return " ".join(parts)
