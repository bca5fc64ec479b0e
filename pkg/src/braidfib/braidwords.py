"""Symbolic braid-word algebra.

Words live in one of three generator schemes:

* ``artin``  -- generators s_1 .. s_{n-1}, s_i a positive half-twist of the
  strands in positions i, i+1;
* ``band``   -- Birman-Ko-Lee generators a_{i,j}, 1 <= i < j <= n, a positive
  half-twist of the strands in positions i and j passing in front of the
  strands between them;
* ``tree``   -- one generator per edge of an embedded plane tree on n
  vertices (Rudolph's T-generators); the word carries its tree.

The inhomogeneity count ``beta`` is a *word* invariant, not a braid
invariant: inserting s_j s_j^-1 inflates it at will.  No attempt is made to
minimise over representatives.

Text grammar (one word per file/string)::

    n=<int> scheme=<artin|band|tree>
    s2 s3^-1 s2 ...          # artin / tree letters
    a1,3 a2,5^-1 ...         # band letters

Tree geometry is not part of the text form; supply a PlaneTree separately
when parsing a tree-scheme word.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

__all__ = [
    "Permutation",
    "PlaneTree",
    "BraidWord",
    "permutation_of",
    "closure_components",
    "is_homogeneous",
    "beta",
    "mn_upper_bound",
    "tree_edge_to_band",
    "parse_word",
    "format_word",
]

SCHEMES = ("artin", "band", "tree")


class SchemeError(ValueError):
    """Operation not defined for this generator scheme."""


@dataclass(frozen=True)
class Permutation:
    """A bijection of {1..n}, stored as the tuple of images of 1..n."""

    images: tuple

    def __post_init__(self):
        n = len(self.images)
        if sorted(self.images) != list(range(1, n + 1)):
            raise ValueError(f"not a permutation of 1..{n}: {self.images}")

    @staticmethod
    def identity(n):
        return Permutation(tuple(range(1, n + 1)))

    @staticmethod
    def transposition(n, a, b):
        im = list(range(1, n + 1))
        im[a - 1], im[b - 1] = b, a
        return Permutation(tuple(im))

    @staticmethod
    def cycle(n, *elements):
        """The cycle (e_1 e_2 ... e_k) on {1..n}."""
        im = list(range(1, n + 1))
        for a, b in zip(elements, elements[1:] + elements[:1]):
            im[a - 1] = b
        return Permutation(tuple(im))

    @property
    def n(self):
        return len(self.images)

    def __call__(self, x):
        return self.images[x - 1]

    def then(self, other):
        """The composite 'self first, then other'."""
        return Permutation(tuple(other.images[i - 1] for i in self.images))

    def inverse(self):
        im = [0] * self.n
        for x, y in enumerate(self.images, start=1):
            im[y - 1] = x
        return Permutation(tuple(im))

    def cycles(self):
        seen, out = set(), []
        for start in range(1, self.n + 1):
            if start in seen:
                continue
            cyc, x = [], start
            while x not in seen:
                seen.add(x)
                cyc.append(x)
                x = self(x)
            out.append(tuple(cyc))
        return out

    def cycle_count(self):
        return len(self.cycles())

    def is_identity(self):
        return all(self(i) == i for i in range(1, self.n + 1))


@dataclass(frozen=True)
class PlaneTree:
    """An embedded tree in C: vertex positions, signed edges, labels 1..n."""

    positions: tuple  # complex vertex coordinates, vertex v at positions[v-1]
    edges: tuple      # ((a, b, sign), ...) with vertex labels a < b, sign in {+1,-1}

    def __post_init__(self):
        n = len(self.positions)
        if len(self.edges) != n - 1:
            raise ValueError(f"a tree on {n} vertices needs {n - 1} edges")
        norm = []
        for a, b, s in self.edges:
            if not (1 <= a <= n and 1 <= b <= n and a != b):
                raise ValueError(f"bad edge ({a},{b})")
            if s not in (-1, 1):
                raise ValueError("edge sign must be +1 or -1")
            norm.append((min(a, b), max(a, b), s))
        object.__setattr__(self, "edges", tuple(norm))
        # connectivity via union-find
        parent = list(range(n + 1))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b, _ in self.edges:
            ra, rb = find(a), find(b)
            if ra == rb:
                raise ValueError("edges contain a cycle")
            parent[ra] = rb
        for i in range(n):
            for j in range(i + 1, n):
                if abs(self.positions[i] - self.positions[j]) < 1e-12:
                    raise ValueError("vertex positions must be pairwise distinct")

    @property
    def n(self):
        return len(self.positions)

    def edge_sign(self, k):
        return self.edges[k - 1][2]


@dataclass(frozen=True)
class BraidWord:
    """A braid word: strand count, scheme, and signed letters.

    Letters are ``(index, sign)`` with index a generator number 1..n-1 for
    the artin and tree schemes, or ``((i, j), sign)`` with 1 <= i < j <= n
    for the band scheme.  The empty word is allowed.
    """

    n: int
    letters: tuple
    scheme: str = "artin"
    tree: PlaneTree | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.n < 1:
            raise ValueError("strand count must be >= 1")
        if self.scheme == "tree":
            if self.tree is None:
                raise ValueError("tree-scheme words must carry their PlaneTree")
            if self.tree.n != self.n:
                raise ValueError("tree vertex count must equal strand count")
        letters = []
        for let in self.letters:
            idx, sign = let
            if sign not in (-1, 1):
                raise ValueError("letter sign must be +1 or -1")
            if self.scheme == "band":
                i, j = idx
                if not (1 <= i < j <= self.n):
                    raise ValueError(f"band index ({i},{j}) out of range for n={self.n}")
                letters.append(((int(i), int(j)), int(sign)))
            else:
                if not (1 <= idx <= self.n - 1):
                    raise ValueError(f"generator index {idx} out of range for n={self.n}")
                letters.append((int(idx), int(sign)))
        object.__setattr__(self, "letters", tuple(letters))

    @staticmethod
    def from_ints(n, ints, scheme="artin", tree=None):
        """Build from signed integers, e.g. [1, 2, 2, 2, 1, -2] for s1 s2^3 s1 s2^-1."""
        return BraidWord(n, tuple((abs(k), 1 if k > 0 else -1) for k in ints), scheme, tree)

    def as_ints(self):
        if self.scheme == "band":
            raise SchemeError("band letters do not reduce to single integers")
        return [idx * sign for idx, sign in self.letters]

    def __len__(self):
        return len(self.letters)

    def exponent_sum(self):
        return sum(sign for _, sign in self.letters)

    def inverse(self):
        return BraidWord(
            self.n,
            tuple((idx, -sign) for idx, sign in reversed(self.letters)),
            self.scheme,
            self.tree,
        )

    def __mul__(self, other):
        if (self.n, self.scheme) != (other.n, other.scheme):
            raise ValueError("cannot concatenate words with different n or scheme")
        return BraidWord(self.n, self.letters + other.letters, self.scheme, self.tree)

    def cyclic_rotations(self):
        L = list(self.letters)
        return [BraidWord(self.n, tuple(L[k:] + L[:k]), self.scheme, self.tree)
                for k in range(max(1, len(L)))]


# -- operations ------------------------------------------------------------


def permutation_of(w: BraidWord) -> Permutation:
    """Image of w in the symmetric group, letters applied left to right.

    Both a generator and its inverse swap the same pair of strand
    positions: s_i swaps positions i, i+1 and a_{i,j} swaps positions i, j.
    Tree-edge generators swap the positions given by the house tree-to-band
    labelling.
    """
    perm = Permutation.identity(w.n)
    pairs = _tree_band_pairs(w.tree) if w.scheme == "tree" else None
    for idx, _ in w.letters:
        if w.scheme == "artin":
            a, b = idx, idx + 1
        elif w.scheme == "band":
            a, b = idx
        else:
            a, b = pairs[idx - 1]
        perm = perm.then(Permutation.transposition(w.n, a, b))
    return perm


def closure_components(w: BraidWord) -> int:
    """Number of components of the closure = cycles of the permutation."""
    return permutation_of(w).cycle_count()


def is_homogeneous(w: BraidWord) -> bool:
    """Every generator occurs, and each with a single sign.

    Defined for the artin scheme and verbatim for tree-edge generators.
    The band scheme has no distinguished generating set of size n-1 and is
    rejected.
    """
    if w.scheme == "band":
        raise SchemeError("homogeneity needs a generator set of size n-1; "
                          "band scheme is rejected")
    signs = {}
    for idx, sign in w.letters:
        signs.setdefault(idx, set()).add(sign)
    if len(signs) < w.n - 1:
        return False
    return all(len(s) == 1 for s in signs.values())


def beta(w: BraidWord) -> int:
    """T-inhomogeneity of a word: cyclic sign changes plus 2 per absent generator.

    For each generator index, the signs of its occurrences are read
    cyclically around the word and each sign change counts 1; a generator
    that never occurs contributes 2.  beta(w) == 0 iff is_homogeneous(w).
    A single occurrence is a constant cyclic sequence and counts 0.
    """
    if w.scheme == "band":
        raise SchemeError("beta needs a generator set of size n-1; band scheme is rejected")
    occ = {i: [] for i in range(1, w.n)}
    for idx, sign in w.letters:
        occ[idx].append(sign)
    total = 0
    for signs in occ.values():
        if not signs:
            total += 2
            continue
        total += sum(1 for a, b in zip(signs, signs[1:] + signs[:1]) if a != b)
    return total


def mn_upper_bound(words) -> int:
    """min beta over the supplied words; an upper bound for MN of the common closure.

    The caller asserts all words close to the same link; this is not
    verified (word-problem solving is out of scope).
    """
    words = list(words)
    if not words:
        raise ValueError("mn_upper_bound needs at least one word")
    return min(beta(w) for w in words)


# -- tree edges to band generators ------------------------------------------


def _angular_labels(tree: PlaneTree):
    """Vertex labels 1..n by angle around the centroid, with documented fallbacks.

    Counterclockwise from angle 0; ties at equal angle broken by modulus.
    Collinear vertex sets fall back to the order along the line (so the
    line graph labels left to right and its edges become Artin pairs).
    Returns (labels dict vertex->label, metadata).
    """
    n = tree.n
    pts = list(tree.positions)
    meta = {"convention": "angular order around centroid, ccw from angle 0; "
                          "equals Rudolph's realisation only up to planar isotopy"}
    ctr = sum(pts) / n
    rel = [p - ctr for p in pts]

    def _collinear():
        if n <= 2:
            return True
        d = max(rel, key=abs)
        return all(abs((z.real * d.imag - z.imag * d.real)) < 1e-10 * (abs(d) + abs(z))
                   for z in rel)

    if _collinear():
        d = max(rel, key=abs)
        if d.real < 0 or (d.real == 0 and d.imag < 0):
            d = -d
        order = sorted(range(n), key=lambda v: rel[v].real * d.real + rel[v].imag * d.imag)
        meta["degenerate"] = "collinear vertices; ordered along the line"
    else:
        def key(v):
            ang = cmath.phase(rel[v]) % (2 * math.pi)
            return (ang, abs(rel[v]))

        order = sorted(range(n), key=key)
        angs = [cmath.phase(rel[v]) % (2 * math.pi) for v in order]
        if any(abs(a - b) < 1e-12 for a, b in zip(angs, angs[1:])):
            meta["ties"] = "equal centroid angles broken by modulus"
    labels = {v + 1: lab + 1 for lab, v in enumerate(order)}
    return labels, meta


def _tree_band_pairs(tree: PlaneTree):
    labels, _ = _angular_labels(tree)
    pairs = []
    for a, b, _ in tree.edges:
        la, lb = labels[a], labels[b]
        pairs.append((min(la, lb), max(la, lb)))
    return pairs


def tree_edge_to_band(tree: PlaneTree):
    """Map each tree edge to a band generator pair under the house labelling.

    Returns (pairs, metadata): pairs[k] is the (i, j) band index of edge
    k+1.  The metadata records the labelling convention and any tie/
    degeneracy fallback taken.
    """
    labels, meta = _angular_labels(tree)
    pairs = _tree_band_pairs(tree)
    meta = dict(meta, labels=labels)
    return pairs, meta


def to_band_word(w: BraidWord) -> BraidWord:
    """Rewrite an artin or tree word in the band scheme (letter for letter)."""
    if w.scheme == "band":
        return w
    if w.scheme == "artin":
        letters = tuple((((idx, idx + 1)), sign) for idx, sign in w.letters)
    else:
        pairs = _tree_band_pairs(w.tree)
        letters = tuple((pairs[idx - 1], sign) for idx, sign in w.letters)
    return BraidWord(w.n, letters, "band")


# -- text grammar ------------------------------------------------------------


def parse_word(text: str, tree: PlaneTree | None = None) -> BraidWord:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty braid word text")
    header = dict(part.split("=", 1) for part in lines[0].split())
    try:
        n = int(header["n"])
        scheme = header["scheme"]
    except (KeyError, ValueError) as exc:
        raise ValueError(f"bad header line {lines[0]!r}") from exc
    letters = []
    for tok in " ".join(lines[1:]).split():
        body, _, exp = tok.partition("^")
        sign = 1
        if exp:
            if exp not in ("-1", "1"):
                raise ValueError(f"bad exponent in token {tok!r}")
            sign = int(exp)
        if body.startswith("s"):
            letters.append((int(body[1:]), sign))
        elif body.startswith("a"):
            i, j = body[1:].split(",")
            letters.append(((int(i), int(j)), sign))
        else:
            raise ValueError(f"bad token {tok!r}")
    return BraidWord(n, tuple(letters), scheme, tree)


def format_word(w: BraidWord) -> str:
    toks = []
    for idx, sign in w.letters:
        body = f"a{idx[0]},{idx[1]}" if w.scheme == "band" else f"s{idx}"
        toks.append(body + ("^-1" if sign < 0 else ""))
    return f"n={w.n} scheme={w.scheme}\n" + " ".join(toks) + "\n"
