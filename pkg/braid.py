import json
import logging
from dataclasses import dataclass, field

logger = logging.getLogger(__name__)


class BraidParseError(ValueError):
    """Raised for malformed braid text; ``position`` is the 1-based token index."""

    def __init__(self, message, position):
        super().__init__(f"{message} (token {position})")
        self.position = position


@dataclass(frozen=True)
class BraidWord:
    """
    A braid on ``n`` strands; letter +k is sigma_k and -k its inverse.
    """
    n: int
    letters: tuple = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"A braid needs at least one strand, got n={self.n}")
        for pos, letter in enumerate(self.letters, 1):
            if letter == 0 or abs(letter) > self.n - 1:
                raise BraidParseError(f"Letter {letter} is not a generator on {self.n} strands", pos)

    def __len__(self):
        return len(self.letters)

    def __mul__(self, other):
        n = max(self.n, other.n)
        return BraidWord(n, self.letters + other.letters)

    def __str__(self):
        return ' '.join(str(x) for x in self.letters)

    def writhe(self):
        return sum(1 if x > 0 else -1 for x in self.letters)

    def with_strands(self, n):
        return BraidWord(n, self.letters)

    def to_dict(self):
        return {'n': self.n, 'letters': list(self.letters)}


@dataclass(frozen=True)
class ClosureInfo:
    """
    Combinatorics of a braid closure.

    Strands are numbered 1..n. ``perm[i-1]`` is beta(i), obtained by applying
    the letters from the last to the first; components are the cycles of
    beta numbered by their leftmost strand.
    """
    n: int
    perm: tuple
    components: tuple
    component_of: tuple
    wr_total: int
    self_wr: tuple
    mixed_wr: int
    d: tuple
    leftmost: tuple
    letters: tuple = field(default=())

    @property
    def r(self):
        return len(self.components)

    def is_knot(self):
        return len(self.components) == 1

    def beta(self, i):
        return self.perm[i - 1]

    def comp(self, i):
        """0-based component index of strand i."""
        return self.component_of[i - 1]

    def dist(self, i):
        return self.d[i - 1]

    def k(self, i, j):
        return self.d[j - 1] - self.d[i - 1]

    def sizes(self):
        return tuple(len(c) for c in self.components)

    def to_dict(self):
        return {
            'n': self.n,
            'perm': list(self.perm),
            'components': [list(c) for c in self.components],
            'wr_total': self.wr_total,
            'self_wr': list(self.self_wr),
            'mixed_wr': self.mixed_wr,
            'd': list(self.d),
            'leftmost': list(self.leftmost),
        }

    def to_json(self):
        return json.dumps(self.to_dict())


def parse(text, n=None):
    """
    Parse whitespace separated nonzero integers into a BraidWord.

    Args:
        text (str): Braid letters, e.g. "1 -2 1 -2"
        n (int, optional): Strand count; inferred as max|letter| + 1 when omitted

    Returns:
        BraidWord: The parsed word

    Raises:
        BraidParseError: On a non-integer, zero, or out-of-range letter
    """
    letters = []
    for pos, token in enumerate(text.replace(',', ' ').split(), 1):
        try:
            letter = int(token)
        except ValueError:
            raise BraidParseError(f"Braid letter {token!r} is not an integer", pos) from None
        if letter == 0:
            raise BraidParseError("Braid letter 0 is not a generator", pos)
        if n is not None and abs(letter) >= n:
            raise BraidParseError(f"Letter {letter} needs more than {n} strands", pos)
        letters.append(letter)
    if n is None:
        n = max((abs(x) for x in letters), default=0) + 1
    logger.debug(f"Parsed braid {letters} on {n} strands")
    return BraidWord(n, tuple(letters))


def _transpose(k, i):
    if i == k:
        return k + 1
    if i == k + 1:
        return k
    return i


def permutation(b):
    """beta(i) for i = 1..n, letters applied right to left."""
    perm = []
    for i in range(1, b.n + 1):
        x = i
        for letter in reversed(b.letters):
            x = _transpose(abs(letter), x)
        perm.append(x)
    return tuple(perm)


def closure(b):
    """
    Compute the closure statistics of a braid word.

    Args:
        b (BraidWord): The braid

    Returns:
        ClosureInfo: Permutation, components, writhes and d-statistics
    """
    perm = permutation(b)
    seen = set()
    cycles = []
    for start in range(1, b.n + 1):
        if start in seen:
            continue
        cycle = []
        x = start
        while x not in seen:
            seen.add(x)
            cycle.append(x)
            x = perm[x - 1]
        cycles.append(tuple(sorted(cycle)))
    cycles.sort(key=min)
    component_of = [0] * b.n
    for c, cycle in enumerate(cycles):
        for i in cycle:
            component_of[i - 1] = c
    leftmost = tuple(min(c) for c in cycles)

    # positional tracking: the occupant of each position carries its component
    occupant = list(component_of)
    self_wr = [0] * len(cycles)
    mixed = 0
    for letter in b.letters:
        k = abs(letter)
        sign = 1 if letter > 0 else -1
        left, right = occupant[k - 1], occupant[k]
        if left == right:
            self_wr[left] += sign
        else:
            mixed += sign
        occupant[k - 1], occupant[k] = right, left

    d = []
    for i in range(1, b.n + 1):
        target = leftmost[component_of[i - 1]]
        steps = 0
        x = i
        while x != target:
            x = perm[x - 1]
            steps += 1
        d.append(steps)

    return ClosureInfo(
        n=b.n,
        perm=perm,
        components=tuple(cycles),
        component_of=tuple(component_of),
        wr_total=b.writhe(),
        self_wr=tuple(self_wr),
        mixed_wr=mixed,
        d=tuple(d),
        leftmost=leftmost,
        letters=b.letters,
    )


def inverse(b):
    return BraidWord(b.n, tuple(-x for x in reversed(b.letters)))


def mirror(b):
    return BraidWord(b.n, tuple(-x for x in b.letters))


def conjugate(b, word):
    """
    Literal conjugate word * b * word^-1; no free reduction is performed.

    Args:
        b (BraidWord): The braid to conjugate
        word (BraidWord | iterable of int): The conjugating word

    Returns:
        BraidWord: The concatenation
    """
    if not isinstance(word, BraidWord):
        letters = tuple(word)
        word = BraidWord(max([b.n] + [abs(x) + 1 for x in letters]), letters)
    n = max(b.n, word.n)
    return BraidWord(n, word.letters + b.letters + inverse(word).letters)


def stabilize(b, sign):
    """Markov stabilization: add strand n+1 and append sigma_n^(+-1)."""
    if sign not in (1, -1):
        raise ValueError(f"Stabilization sign must be +1 or -1, got {sign}")
    return BraidWord(b.n + 1, b.letters + (sign * b.n,))


def resolve(b, index):
    """
    Crossing-resolution triple at a letter position.

    Returns:
        tuple: (L+, L-, L0) braid words with the letter made positive,
            made negative, and removed
    """
    k = abs(b.letters[index])
    before, after = b.letters[:index], b.letters[index + 1:]
    return (BraidWord(b.n, before + (k,) + after),
            BraidWord(b.n, before + (-k,) + after),
            BraidWord(b.n, before + after))
