"""Exact counting: Raney numbers, first-return and boundary-avoiding path
counts, and the paths <-> manila-folder correspondence.

Lattice conventions.  A path starts at ((k-1)n, n) and ends at (0, 0); ``D``
is a unit south step and ``L`` a unit west step.  A path is valid while every
visited point (x, y) satisfies (k-1)y <= x, i.e. it stays weakly below the
boundary line (k-1)y = x.  The revisit count ``i`` of a path is the number of
lattice points strictly between the two endpoints that lie on the boundary.
Manila configurations with i+1 visible spines correspond to paths with ``i``
revisits; :attr:`ManilaConfig.index` is the single place that conversion
happens.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterator, List, Tuple, Union

from .numeric import binomial

ENUMERATION_LIMIT = 24
EPSILON = "ε"


class EnumerationTooLarge(ValueError):
    pass


def _integral(x: Fraction, what: str) -> int:
    if x.denominator != 1:
        raise ArithmeticError(f"{what} is not integral: {x}")
    return x.numerator


def raney(c: int, r: int, ell: int) -> int:
    """Raney_{c,r}(ell) = r/(ell*c + r) * C(ell*c + r, ell)."""
    if ell < 0:
        raise ValueError("ell must be nonnegative")
    m = ell * c + r
    if m <= 0:
        raise ValueError("ell*c + r must be positive")
    return _integral(Fraction(r, m) * binomial(m, ell), "Raney number")


def s_count(k: int, i: int) -> int:
    """Number of first diagonal returns of order ``i`` for ``k`` boxes."""
    if k < 2 or i < 1:
        raise ValueError("s_count needs k >= 2 and i >= 1")
    return raney(k, k - 1, i - 1)


def t_table(k: int, n: int) -> List[int]:
    """Coefficients t_{n,0} .. t_{n,(k-1)n-k} of the reversed d-table row.

    Row 2 is k-1 ones; each later row is the running sum of the previous row,
    continued while the previous row has run out (so its final value repeats
    k-1 more times).
    """
    if k < 2 or n < 2:
        raise ValueError("t_table needs k >= 2 and n >= 2")
    row = [1] * (k - 1)
    for m in range(3, n + 1):
        length = (k - 1) * m - k + 1
        new = []
        acc = 0
        for j in range(length):
            acc += row[j] if j < len(row) else 0
            new.append(acc)
        row = new
    return row


def d_count(k: int, n: int, j: int) -> int:
    """Paths ((k-1)n, n-1) -> (j, 1) -> (j, 0) that never touch the boundary.

    Inclusion-exclusion over the first boundary contact at ((k-1)(n-l), n-l).
    """
    if n < 2:
        raise ValueError("d_count needs n >= 2")
    if not k <= j <= (k - 1) * n:
        return 0
    total = binomial(k * n - 2 - j, n - 2)
    ceil_ratio = -(-j // (k - 1))
    for ell in range(1, n - ceil_ratio + 1):
        total -= s_count(k, ell) * binomial(k * (n - ell) - 1 - j, n - ell - 1)
    return total


def paths_count(k: int, n: int, i: int) -> int:
    """Paths from ((k-1)n, n) to the origin revisiting the boundary ``i`` times."""
    if n < 1 or not 0 <= i <= n - 1:
        raise ValueError("paths_count needs n >= 1 and 0 <= i <= n-1")
    value = Fraction(i + 1, n) * binomial(k * n - i - 2, n - i - 1)
    return _integral(value, "paths_count")


# ---------------------------------------------------------------------------
# Path words


def _guard(k: int, n: int) -> None:
    if k < 2 or n < 0:
        raise ValueError("need k >= 2 and n >= 0")
    if k * n > ENUMERATION_LIMIT:
        raise EnumerationTooLarge(f"k*n = {k * n} exceeds {ENUMERATION_LIMIT}")


def path_revisits(word: str, k: int) -> int:
    """Validate ``word`` as a member of Paths_k(n) and return its revisit count."""
    n = word.count("D")
    if word.count("L") != (k - 1) * n or len(word) != k * n:
        raise ValueError(f"{word!r} is not a path word for k={k}")
    x, y = (k - 1) * n, n
    revisits = 0
    for pos, step in enumerate(word):
        if step == "D":
            y -= 1
        elif step == "L":
            x -= 1
        else:
            raise ValueError(f"bad letter {step!r} in {word!r}")
        if y < 0 or x < 0 or (k - 1) * y > x:
            raise ValueError(f"{word!r} leaves the region below the boundary")
        if (k - 1) * y == x and pos < len(word) - 1:
            revisits += 1
    return revisits


def enumerate_paths(k: int, n: int) -> List[Tuple[str, int]]:
    """Every word of Paths_k(n) with its revisit count (brute force)."""
    _guard(k, n)
    if n == 0:
        return [("", -1)]
    out: List[Tuple[str, int]] = []
    buf: List[str] = []

    def walk(x: int, y: int, hits: int) -> None:
        if x == 0 and y == 0:
            out.append(("".join(buf), hits))
            return
        for step, nx, ny in (("D", x, y - 1), ("L", x - 1, y)):
            if nx < 0 or ny < 0 or (k - 1) * ny > nx:
                continue
            buf.append(step)
            on_line = (k - 1) * ny == nx and (nx, ny) != (0, 0)
            walk(nx, ny, hits + on_line)
            buf.pop()

    walk((k - 1) * n, n, 0)
    return out


def count_first_returns(k: int, i: int) -> int:
    """Brute-force count of paths of order ``i`` touching the boundary only at
    their endpoints."""
    return sum(1 for _, hits in enumerate_paths(k, i) if hits == 0)


def count_boundary_avoiding(k: int, n: int, j: int) -> int:
    """Lattice DP for d_count: paths from ((k-1)n, n-1) to (j, 1) strictly below
    the boundary, then one step down to (j, 0)."""
    if n < 2 or j < 0:
        return 0
    x0, y0 = (k - 1) * n, n - 1
    if not (k - 1) * 1 < j <= x0:
        return 0
    ways = {(x0, y0): 1}
    for y in range(y0, 0, -1):
        # west moves along row y, then a south move to row y-1
        row = {}
        for x in range(x0, j - 1, -1):
            if (k - 1) * y >= x:
                continue
            v = ways.get((x, y), 0) + row.get(x + 1, 0)
            row[x] = v
        if y == 1:
            return row.get(j, 0)
        ways = {(x, y - 1): v for x, v in row.items() if v}
    return 0


# ---------------------------------------------------------------------------
# Manila folder configurations


@dataclass(frozen=True)
class Empty:
    """No folder at all."""

    folders = 0
    spines = 0

    def __str__(self) -> str:
        return EPSILON


@dataclass(frozen=True)
class Folder:
    """One folder whose k-1 compartments each hold a configuration."""

    children: Tuple["ManilaConfig", ...]

    @property
    def folders(self) -> int:
        return 1 + sum(c.folders for c in self.children)

    @property
    def spines(self) -> int:
        return 1

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.children) + ")"


@dataclass(frozen=True)
class Row:
    """Two or more folders side by side."""

    items: Tuple[Folder, ...]

    def __post_init__(self) -> None:
        if len(self.items) < 2 or not all(isinstance(f, Folder) for f in self.items):
            raise ValueError("a row holds at least two folders and nothing else")

    @property
    def folders(self) -> int:
        return sum(f.folders for f in self.items)

    @property
    def spines(self) -> int:
        return len(self.items)

    def __str__(self) -> str:
        return "".join(str(f) for f in self.items)


ManilaConfig = Union[Empty, Folder, Row]


def manila_index(config: ManilaConfig) -> int:
    """Visible spines minus one: the ``i`` of Manila_k(n, i)."""
    return config.spines - 1


def parse_manila(text: str) -> ManilaConfig:
    """Parse the bracketed-epsilon notation, e.g. ``(ε,(ε,ε))``.

    ``e`` is accepted as an ASCII stand-in for ``ε``.
    """
    s = text.replace(" ", "").replace("e", EPSILON)
    pos = 0

    def item() -> ManilaConfig:
        nonlocal pos
        if pos < len(s) and s[pos] == EPSILON:
            pos += 1
            return Empty()
        folders = []
        while pos < len(s) and s[pos] == "(":
            folders.append(folder())
        if not folders:
            raise ValueError(f"unexpected input at {pos} in {text!r}")
        return folders[0] if len(folders) == 1 else Row(tuple(folders))

    def folder() -> Folder:
        nonlocal pos
        pos += 1  # "("
        kids = [item()]
        while pos < len(s) and s[pos] == ",":
            pos += 1
            kids.append(item())
        if pos >= len(s) or s[pos] != ")":
            raise ValueError(f"unbalanced parentheses in {text!r}")
        pos += 1
        return Folder(tuple(kids))

    result = item()
    if pos != len(s):
        raise ValueError(f"trailing input in {text!r}")
    return result


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _folders(k: int, n: int) -> Tuple[Folder, ...]:
    if n < 1:
        return ()
    out = []
    for sizes in _compositions(n - 1, k - 1):
        for kids in product(*(_configs(k, m) for m in sizes)):
            out.append(Folder(kids))
    return tuple(out)


@lru_cache(maxsize=None)
def _folder_sequences(k: int, n: int) -> Tuple[Tuple[Folder, ...], ...]:
    out = []
    for m in range(1, n + 1):
        for f in _folders(k, m):
            if m == n:
                out.append((f,))
            else:
                out.extend((f,) + rest for rest in _folder_sequences(k, n - m))
    return tuple(out)


@lru_cache(maxsize=None)
def _configs(k: int, n: int) -> Tuple[ManilaConfig, ...]:
    if n == 0:
        return (Empty(),)
    rows = tuple(Row(seq) for seq in _folder_sequences(k, n) if len(seq) > 1)
    return _folders(k, n) + rows


def enumerate_manila(k: int, n: int) -> List[ManilaConfig]:
    """All configurations of ``n`` folders with k-1 compartments each."""
    _guard(k, n)
    return list(_configs(k, n))


def mu_bijection(config: Union[ManilaConfig, str]) -> str:
    """Map a manila configuration to its path word.

    Reads the bracketed form right to left: ``)`` gives D, ``(`` and ``,``
    give L.
    """
    text = config if isinstance(config, str) else str(config)
    word = []
    for ch in reversed(text):
        if ch == ")":
            word.append("D")
        elif ch in "(,":
            word.append("L")
    return "".join(word)
