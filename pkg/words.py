"""
Word core for the Hawaiian earring group
Letters, unreduced monoid words X_n, free-group reduction q_n, level
retraction R_n, the shortlex order and inessential-subword deletion.
"""

import itertools
import re
from dataclasses import dataclass
from enum import IntEnum
from functools import cached_property, lru_cache
from typing import FrozenSet, Iterable, Iterator, List, Tuple

from errors import InputError, WordSyntaxError


class Comparison(IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1

    @classmethod
    def of(cls, left, right) -> 'Comparison':
        if left < right:
            return cls.LESS
        if left > right:
            return cls.GREATER
        return cls.EQUAL


@dataclass(frozen=True)
class Letter:
    index: int
    sign: int = 1

    def __post_init__(self):
        if self.index < 1:
            raise InputError(f"generator index must be >= 1, got {self.index}")
        if self.sign not in (1, -1):
            raise InputError(f"letter sign must be +1 or -1, got {self.sign}")

    def inverse(self) -> 'Letter':
        return Letter(self.index, -self.sign)

    @property
    def key(self) -> Tuple[int, int]:
        # x_i < X_i < x_{i+1}
        return (self.index, 0 if self.sign > 0 else 1)

    def __str__(self):
        return f"{'x' if self.sign > 0 else 'X'}{self.index}"


@dataclass(frozen=True)
class MonoidWord:
    """Finite unreduced word; an element of X_n for every n >= level"""

    letters: Tuple[Letter, ...] = ()

    @classmethod
    def from_ints(cls, values: Iterable[int]) -> 'MonoidWord':
        return cls(tuple(Letter(abs(v), 1 if v > 0 else -1) for v in values))

    @cached_property
    def level(self) -> int:
        return max((l.index for l in self.letters), default=0)

    @cached_property
    def key(self) -> Tuple[Tuple[int, int], ...]:
        return tuple(l.key for l in self.letters)

    def inverse(self) -> 'MonoidWord':
        return MonoidWord(tuple(l.inverse() for l in reversed(self.letters)))

    def __add__(self, other: 'MonoidWord') -> 'MonoidWord':
        return MonoidWord(self.letters + other.letters)

    def __len__(self):
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __bool__(self):
        return bool(self.letters)

    def __str__(self):
        return ' '.join(str(l) for l in self.letters) if self.letters else 'e'


EMPTY = MonoidWord()


@dataclass(frozen=True)
class GroupWord:
    """Maximally reduced word; an element of the free group G_n"""

    word: MonoidWord = EMPTY

    def __post_init__(self):
        letters = self.word.letters
        for left, right in zip(letters, letters[1:]):
            if left == right.inverse():
                raise InputError(f"'{self.word}' is not reduced")

    @property
    def letters(self) -> Tuple[Letter, ...]:
        return self.word.letters

    @property
    def level(self) -> int:
        return self.word.level

    def __mul__(self, other: 'GroupWord') -> 'GroupWord':
        return multiply(self, other)

    def __len__(self):
        return len(self.word)

    def __bool__(self):
        return bool(self.word)

    def __str__(self):
        return str(self.word)


IDENTITY = GroupWord()


# Grammar: word := "e" | term+ ; term := letter | "(" term+ ")" "^" nat
# Tail templates additionally allow %n, %{n+c}, %{n-c} as index or exponent.

_LEVEL_EXPR = r'%n|%\{\s*n\s*[+-]\s*\d+\s*\}'
_TOKEN = re.compile(
    r'(?P<space>\s+)'
    r'|(?P<letter>[xX](?:\d+|' + _LEVEL_EXPR + r'))'
    r'|(?P<open>\()'
    r'|(?P<close>\))'
    r'|(?P<power>\^\s*(?:-?\d+|' + _LEVEL_EXPR + r'))'
    r'|(?P<identity>e\b)'
)


@dataclass(frozen=True)
class LevelExpr:
    """coef * n + const"""

    coef: int
    const: int

    def value(self, n: int) -> int:
        return self.coef * n + self.const

    @property
    def is_level(self) -> bool:
        return self.coef == 1 and self.const == 0


@dataclass(frozen=True)
class _Atom:
    index: LevelExpr
    sign: int


@dataclass(frozen=True)
class _Group:
    body: tuple
    exponent: LevelExpr


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> List[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match:
            raise WordSyntaxError(f"unexpected character '{text[pos]}'", pos)
        if match.lastgroup != 'space':
            tokens.append(_Token(match.lastgroup, match.group(), pos))
        pos = match.end()
    return tokens


def _level_expr(text: str, pos: int, what: str) -> LevelExpr:
    text = text.replace(' ', '')
    if text == '%n':
        return LevelExpr(1, 0)
    if text.startswith('%{'):
        inner = text[3:-1]
        sign = 1 if inner[0] == '+' else -1
        return LevelExpr(1, sign * int(inner[1:]))
    value = int(text)
    if what == 'index' and value < 1:
        raise WordSyntaxError(f"generator index must be >= 1, got {value}", pos)
    if what == 'exponent' and value < 0:
        raise WordSyntaxError(f"exponent must be non-negative, got {value}", pos)
    return LevelExpr(0, value)


def _parse_terms(tokens: List[_Token], i: int, text: str) -> Tuple[tuple, int]:
    nodes = []
    while i < len(tokens) and tokens[i].kind in ('letter', 'open'):
        tok = tokens[i]
        if tok.kind == 'letter':
            sign = 1 if tok.text[0] == 'x' else -1
            nodes.append(_Atom(_level_expr(tok.text[1:], tok.pos + 1, 'index'), sign))
            i += 1
            continue
        body, i = _parse_terms(tokens, i + 1, text)
        if i >= len(tokens) or tokens[i].kind != 'close':
            where = tokens[i].pos if i < len(tokens) else len(text)
            raise WordSyntaxError("expected ')'", where)
        i += 1
        if i >= len(tokens) or tokens[i].kind != 'power':
            where = tokens[i].pos if i < len(tokens) else len(text)
            raise WordSyntaxError("expected '^<exponent>' after ')'", where)
        power = tokens[i]
        nodes.append(_Group(body, _level_expr(power.text[1:].strip(), power.pos + 1, 'exponent')))
        i += 1
    if not nodes:
        where = tokens[i].pos if i < len(tokens) else len(text)
        raise WordSyntaxError("expected a letter or '('", where)
    return tuple(nodes), i


@dataclass(frozen=True)
class Template:
    """Parsed word, possibly parameterized by the level variable n"""

    source: str
    nodes: tuple = ()

    def instantiate(self, n: int = 0) -> MonoidWord:
        letters: List[Letter] = []
        self._expand(self.nodes, n, letters)
        return MonoidWord(tuple(letters))

    def _expand(self, nodes: tuple, n: int, out: List[Letter]) -> None:
        for node in nodes:
            if isinstance(node, _Atom):
                index = node.index.value(n)
                if index < 1:
                    raise InputError(f"template '{self.source}' gives index {index} at n={n}")
                out.append(Letter(index, node.sign))
            else:
                times = node.exponent.value(n)
                if times < 0:
                    raise InputError(f"template '{self.source}' gives exponent {times} at n={n}")
                for _ in range(times):
                    self._expand(node.body, n, out)

    def _exprs(self, nodes: tuple = None) -> Iterator[Tuple[str, LevelExpr]]:
        for node in self.nodes if nodes is None else nodes:
            if isinstance(node, _Atom):
                yield 'index', node.index
            else:
                yield 'exponent', node.exponent
                yield from self._exprs(node.body)

    @property
    def is_constant(self) -> bool:
        return all(expr.coef == 0 for _, expr in self._exprs())

    @property
    def indices_are_level(self) -> bool:
        """Every letter uses index exactly n"""
        return all(expr.is_level for kind, expr in self._exprs() if kind == 'index')

    def __str__(self):
        return self.source


def parse_template(text: str) -> Template:
    tokens = _tokenize(text)
    if not tokens:
        raise WordSyntaxError("empty word; write 'e' for the identity", 0)
    if tokens[0].kind == 'identity':
        if len(tokens) > 1:
            raise WordSyntaxError("'e' must stand alone", tokens[1].pos)
        return Template(text.strip())
    nodes, i = _parse_terms(tokens, 0, text)
    if i != len(tokens):
        tok = tokens[i]
        message = "'e' must stand alone" if tok.kind == 'identity' else f"unexpected '{tok.text}'"
        raise WordSyntaxError(message, tok.pos)
    return Template(text.strip(), nodes)


def parse_word(text: str) -> MonoidWord:
    template = parse_template(text)
    if not template.is_constant:
        raise WordSyntaxError("'%n' is only allowed in tail templates", text.find('%'))
    return template.instantiate()


def reduce(w: MonoidWord) -> GroupWord:
    stack: List[Letter] = []
    for letter in w.letters:
        if stack and stack[-1] == letter.inverse():
            stack.pop()
        else:
            stack.append(letter)
    return GroupWord(MonoidWord(tuple(stack)))


def retract(w: MonoidWord, level: int) -> MonoidWord:
    if level < 0:
        raise InputError(f"level must be >= 0, got {level}")
    if w.level <= level:
        return w
    return MonoidWord(tuple(l for l in w.letters if l.index <= level))


def multiply(g: GroupWord, h: GroupWord) -> GroupWord:
    return reduce(g.word + h.word)


def invert(g: GroupWord) -> GroupWord:
    return GroupWord(g.word.inverse())


def shortlex_key(g: GroupWord) -> Tuple[int, Tuple[Tuple[int, int], ...]]:
    return (len(g.word), g.word.key)


def fiber_key(w: MonoidWord) -> Tuple[int, Tuple[Tuple[int, int], ...]]:
    """(length, letterwise lex): the well order on q_n-fibers of X_n"""
    return (len(w), w.key)


def shortlex_cmp(g: GroupWord, h: GroupWord) -> Comparison:
    return Comparison.of(shortlex_key(g), shortlex_key(h))


def letter_count(w: MonoidWord, level: int) -> int:
    """c(w, N): occurrences of x_N and X_N in R_N(w)"""
    if level < 1:
        raise InputError(f"letter_count needs level >= 1, got {level}")
    return sum(1 for l in w.letters if l.index == level)


def exponent_sum(w: MonoidWord, index: int) -> int:
    return sum(l.sign for l in w.letters if l.index == index)


def delete_inessential(w: MonoidWord) -> FrozenSet[MonoidWord]:
    """All words obtained by deleting one nonempty contiguous subword reducing to e"""
    letters = w.letters
    results = set()
    for start in range(len(letters)):
        stack: List[Letter] = []
        for stop in range(start, len(letters)):
            letter = letters[stop]
            if stack and stack[-1] == letter.inverse():
                stack.pop()
            else:
                stack.append(letter)
            if not stack:
                results.add(MonoidWord(letters[:start] + letters[stop + 1:]))
    return frozenset(results)


@lru_cache(maxsize=200_000)
def maximal_reductions(w: MonoidWord) -> FrozenSet[MonoidWord]:
    """Endpoints of every maximal chain of delete_inessential steps"""
    successors = delete_inessential(w)
    if not successors:
        return frozenset([w])
    ends = set()
    for successor in successors:
        ends |= maximal_reductions(successor)
    return frozenset(ends)


def _alphabet(max_index: int) -> List[Letter]:
    return [Letter(i, s) for i in range(1, max_index + 1) for s in (1, -1)]


def enumerate_words(max_length: int, max_index: int) -> Iterator[MonoidWord]:
    alphabet = _alphabet(max_index)
    for length in range(max_length + 1):
        for letters in itertools.product(alphabet, repeat=length):
            yield MonoidWord(letters)


def enumerate_reduced(max_length: int, max_index: int) -> Iterator[GroupWord]:
    """Reduced words in shortlex order"""
    alphabet = _alphabet(max_index)
    layer: List[Tuple[Letter, ...]] = [()]
    for length in range(max_length + 1):
        for letters in layer:
            yield GroupWord(MonoidWord(letters))
        if length == max_length:
            break
        layer = [
            letters + (letter,)
            for letters in layer
            for letter in alphabet
            if not letters or letters[-1] != letter.inverse()
        ]


def read_word_file(path: str) -> List[MonoidWord]:
    """Set file: one word per line, '#' starts a comment line"""
    words = []
    with open(path, 'r', encoding='utf-8') as f:
        for lineno, line in enumerate(f, 1):
            line = line.strip()
            if not line or line.startswith('#'):
                continue
            try:
                words.append(parse_word(line))
            except WordSyntaxError as e:
                raise WordSyntaxError(f"{path}:{lineno}: {e.reason}", e.position) from e
    return words
