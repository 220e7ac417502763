"""Iterated wreath products ``Z^d wr ... wr Z^d wr leaf``.

An element of ``Z^d wr A`` is a pair ``(t, f)``: a base point ``t`` of the
lattice and a finitely supported lamp configuration ``f: Z^d -> A``.  The
product is

    (t1, f1)(t2, f2) = (t1 + t2, x -> f1(x) f2(x - t1)),

so right-multiplying by a lamp generator changes the lamp under the
current base point.  The leaf is ``Z/mZ`` (stored as residues) or ``Z``.
"""

from __future__ import annotations

import functools
import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .errors import DecodeError, ResourceError, SpecMismatchError

DEFAULT_BALL_CAP = 5_000_000
LAMP_ARROW = "↦"

Point = tuple  # (x,) or (x, y)


@dataclass(frozen=True)
class GroupSpec:
    """A tower ``Z^{d_1} wr (Z^{d_2} wr (... wr leaf))``.

    ``levels`` holds lattice dimensions (1 or 2), outermost first; ``leaf``
    is the cyclic order ``m >= 2`` or 0 for the infinite cyclic group.
    """

    levels: tuple = ()
    leaf: int = 2

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(int(d) for d in self.levels))
        if any(d not in (1, 2) for d in self.levels):
            raise ValueError(f"lattice levels must be Z or Z2, got {self.levels}")
        if self.leaf != 0 and self.leaf < 2:
            raise ValueError(f"leaf order must be 0 (Z) or >= 2, got {self.leaf}")

    @property
    def is_leaf(self) -> bool:
        return not self.levels

    @property
    def dim(self) -> int:
        return self.levels[0]

    @property
    def depth(self) -> int:
        return len(self.levels)

    @functools.cached_property
    def inner(self) -> "GroupSpec":
        return GroupSpec(self.levels[1:], self.leaf)

    @classmethod
    def parse(cls, text: str) -> "GroupSpec":
        """Parse ``"Z2 wr Z2 wr C2"``; the last token is the leaf."""
        tokens = [t.strip() for t in re.split(r"\bwr\b", text.strip())]
        if not tokens or any(not t for t in tokens):
            raise ValueError(f"cannot parse group spec {text!r}")
        *lattice, leaf = tokens
        levels = []
        for tok in lattice:
            if tok in ("Z", "Z1"):
                levels.append(1)
            elif tok == "Z2":
                levels.append(2)
            else:
                raise ValueError(f"unknown lattice {tok!r} in {text!r}")
        if leaf == "Z":
            order = 0
        elif re.fullmatch(r"C\d+", leaf):
            order = int(leaf[1:])
        else:
            raise ValueError(f"unknown leaf group {leaf!r} in {text!r}")
        return cls(tuple(levels), order)

    def __str__(self) -> str:
        parts = ["Z2" if d == 2 else "Z" for d in self.levels]
        parts.append("Z" if self.leaf == 0 else f"C{self.leaf}")
        return " wr ".join(parts)


class Element:
    """Immutable wreath-product element with canonical finite support.

    ``lamps`` is a tuple of ``(point, value)`` pairs sorted by point, with
    no identity values.  Use :func:`make_element` to build one from a
    mapping; the constructor trusts its input.
    """

    __slots__ = ("spec", "base", "lamps", "_hash")

    def __init__(self, spec: GroupSpec, base: Point, lamps: tuple = ()):
        self.spec = spec
        self.base = base
        self.lamps = lamps
        self._hash = None

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.base, self.lamps))
        return self._hash

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return (self.base == other.base and self.lamps == other.lamps
                and self.spec == other.spec)

    def __repr__(self):
        return f"Element({encode(self)!r})"

    @property
    def is_identity(self) -> bool:
        return not self.lamps and not any(self.base)

    @property
    def support(self) -> list:
        return [k for k, _ in self.lamps]

    def lamp(self, point: Point):
        for k, v in self.lamps:
            if k == point:
                return v
        return identity(self.spec.inner)


LampValue = Union[int, Element]


def _origin(dim: int) -> Point:
    return (0, 0) if dim == 2 else (0,)


def _is_inner_identity(v) -> bool:
    return v == 0 if isinstance(v, int) else v.is_identity


def identity(spec: GroupSpec) -> LampValue:
    """Identity of ``spec``; the integer 0 for a bare leaf."""
    if spec.is_leaf:
        return 0
    return Element(spec, _origin(spec.dim), ())


def make_element(spec: GroupSpec, base: Sequence[int], lamps: Mapping | Iterable = ()) -> Element:
    """Canonical element from a base point and a lamp mapping."""
    if spec.is_leaf:
        raise ValueError("a bare leaf has integer elements")
    base = tuple(int(b) for b in base)
    if len(base) != spec.dim:
        raise ValueError(f"base {base} does not match dimension {spec.dim}")
    items = lamps.items() if isinstance(lamps, Mapping) else lamps
    inner = spec.inner
    canon = {}
    for key, value in items:
        key = tuple(int(c) for c in key)
        if len(key) != spec.dim:
            raise ValueError(f"lamp key {key} does not match dimension {spec.dim}")
        if key in canon:
            raise ValueError(f"duplicate lamp key {key}")
        if inner.is_leaf:
            value = int(value) % inner.leaf if inner.leaf else int(value)
        elif not isinstance(value, Element) or value.spec != inner:
            raise SpecMismatchError(f"lamp value {value!r} is not in {inner}")
        if not _is_inner_identity(value):
            canon[key] = value
    return Element(spec, base, tuple(sorted(canon.items())))


def _leaf_mul(m: int, a: int, b: int) -> int:
    return (a + b) % m if m else a + b


def multiply(a: LampValue, b: LampValue, spec: GroupSpec | None = None) -> LampValue:
    """Group product ``a * b``.  Bare leaf integers need ``spec``."""
    if isinstance(a, int):
        if spec is None or not spec.is_leaf:
            raise SpecMismatchError("integer operands need a leaf spec")
        return _leaf_mul(spec.leaf, a, b)
    spec = a.spec
    if b.spec is not spec and b.spec != spec:
        raise SpecMismatchError(f"{a.spec} vs {b.spec}")
    ta, tb = a.base, b.base
    if len(ta) == 2:
        tx, ty = ta
        base = (tx + tb[0], ty + tb[1])
        shifted = [((kx + tx, ky + ty), v) for (kx, ky), v in b.lamps]
    else:
        tx = ta[0]
        base = (tx + tb[0],)
        shifted = [((kx + tx,), v) for (kx,), v in b.lamps]
    if not shifted:
        return Element(spec, base, a.lamps)
    if not a.lamps:
        return Element(spec, base, tuple(shifted))
    lamps = dict(a.lamps)
    inner = spec.inner
    if inner.is_leaf:
        m = inner.leaf
        for key, v in shifted:
            cur = lamps.get(key)
            if cur is None:
                lamps[key] = v
                continue
            r = (cur + v) % m if m else cur + v
            if r:
                lamps[key] = r
            else:
                del lamps[key]
    else:
        for key, v in shifted:
            cur = lamps.get(key)
            if cur is None:
                lamps[key] = v
                continue
            r = multiply(cur, v)
            if r.is_identity:
                del lamps[key]
            else:
                lamps[key] = r
    return Element(spec, base, tuple(sorted(lamps.items())))


def invert(a: LampValue, spec: GroupSpec | None = None) -> LampValue:
    """``(t, f)^-1 = (-t, x -> f(x + t)^-1)``."""
    if isinstance(a, int):
        if spec is None or not spec.is_leaf:
            raise SpecMismatchError("integer operands need a leaf spec")
        return (-a) % spec.leaf if spec.leaf else -a
    inner = a.spec.inner
    t = a.base
    base = tuple(-c for c in t)
    if inner.is_leaf:
        m = inner.leaf
        lamps = [(tuple(k - c for k, c in zip(key, t)), (-v) % m if m else -v) for key, v in a.lamps]
    else:
        lamps = [(tuple(k - c for k, c in zip(key, t)), invert(v)) for key, v in a.lamps]
    # Translation preserves the lexicographic key order.
    return Element(a.spec, base, tuple(lamps))


def power(a: LampValue, p: int, spec: GroupSpec | None = None) -> LampValue:
    spec = spec if isinstance(a, int) else a.spec
    out = identity(spec)
    step = a if p >= 0 else invert(a, spec)
    for _ in range(abs(p)):
        out = multiply(out, step, spec)
    return out


# -- canonical text --------------------------------------------------------

def _point_text(p: Point) -> str:
    return "(" + ",".join(str(c) for c in p) + ")"


def encode(a: LampValue) -> str:
    """Canonical text, e.g. ``(1,0)|{(0,0)↦1,(1,0)↦1}``."""
    if isinstance(a, int):
        return str(a)
    lamps = ",".join(_point_text(k) + LAMP_ARROW + encode(v) for k, v in a.lamps)
    return _point_text(a.base) + "|{" + lamps + "}"


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def fail(self, message: str):
        raise DecodeError(message, self.text, self.pos)

    def expect(self, token: str):
        if not self.text.startswith(token, self.pos):
            self.fail(f"expected {token!r}")
        self.pos += len(token)

    def integer(self) -> int:
        m = re.compile(r"-?\d+").match(self.text, self.pos)
        if not m:
            self.fail("expected an integer")
        self.pos = m.end()
        return int(m.group())

    def point(self, dim: int) -> Point:
        self.expect("(")
        coords = [self.integer()]
        while self.text.startswith(",", self.pos):
            self.pos += 1
            coords.append(self.integer())
        self.expect(")")
        if len(coords) != dim:
            self.fail(f"expected a {dim}-dimensional point")
        return tuple(coords)

    def element(self, spec: GroupSpec) -> LampValue:
        if spec.is_leaf:
            start = self.pos
            v = self.integer()
            if spec.leaf and not 0 <= v < spec.leaf:
                self.pos = start
                self.fail(f"residue {v} not canonical mod {spec.leaf}")
            return v
        base = self.point(spec.dim)
        self.expect("|{")
        lamps = []
        if not self.text.startswith("}", self.pos):
            while True:
                key_pos = self.pos
                key = self.point(spec.dim)
                if lamps and key <= lamps[-1][0]:
                    self.pos = key_pos
                    self.fail("lamp keys not strictly increasing")
                self.expect(LAMP_ARROW)
                val_pos = self.pos
                val = self.element(spec.inner)
                if _is_inner_identity(val):
                    self.pos = val_pos
                    self.fail("identity lamp value stored")
                lamps.append((key, val))
                if self.text.startswith(",", self.pos):
                    self.pos += 1
                    continue
                break
        self.expect("}")
        return Element(spec, base, tuple(lamps))


def decode(text: str, spec: GroupSpec) -> LampValue:
    """Inverse of :func:`encode`; rejects non-canonical input with a position."""
    parser = _Parser(text)
    value = parser.element(spec)
    if parser.pos != len(text):
        parser.fail("trailing characters")
    return value


# -- generators --------------------------------------------------------------

def unit_steps(dim: int) -> list[Point]:
    """``+e1, -e1, +e2, -e2`` (or ``+e1, -e1`` on Z)."""
    if dim == 2:
        return [(1, 0), (-1, 0), (0, 1), (0, -1)]
    return [(1,), (-1,)]


@dataclass(frozen=True)
class GeneratorSet:
    """Symmetric support of the step law and its weights.

    With ``semantics="elements"`` the law is uniform over distinct group
    elements; ``"words"`` weights each element by how many decorated
    words reduce to it.
    """

    spec: GroupSpec
    elements: tuple
    weights: tuple
    multiplicities: tuple
    semantics: str = "elements"

    def __len__(self):
        return len(self.elements)

    @property
    def total_multiplicity(self) -> int:
        return sum(self.multiplicities)


def lamp_generator(spec: GroupSpec, value: LampValue) -> Element:
    """``a^e``: lamp value ``a`` at the origin, base at the origin."""
    origin = _origin(spec.dim)
    if isinstance(value, int) and spec.inner.leaf:
        value %= spec.inner.leaf
    lamps = () if _is_inner_identity(value) else ((origin, value),)
    return Element(spec, origin, lamps)


def decorated_generator(spec: GroupSpec, before: LampValue, step: Point, after: LampValue) -> Element:
    """``a^e * step * b^e``: change the lamp here, move, change the lamp there."""
    move = Element(spec, tuple(step), ())
    return multiply(multiply(lamp_generator(spec, before), move), lamp_generator(spec, after))


def inner_generators(spec: GroupSpec) -> list:
    inner = spec.inner
    if inner.is_leaf:
        return [1]
    return list(build_generators(inner).elements)


def build_generators(spec: GroupSpec, semantics: str = "elements") -> GeneratorSet:
    """All words ``(a_j^e)^p e_s (a_n^e)^q`` with ``p, q in {-1, 0, 1}``."""
    if spec.is_leaf:
        raise ValueError("generators need at least one lattice level")
    if semantics not in ("elements", "words"):
        raise ValueError(f"unknown semantics {semantics!r}")
    gens = inner_generators(spec)
    if not gens:
        raise ValueError("empty inner generator list")
    inner = spec.inner
    decorations = [power(a, p, inner) for a in gens for p in (-1, 0, 1)]
    counts: dict[Element, int] = {}
    for before, step, after in itertools.product(decorations, unit_steps(spec.dim), decorations):
        g = decorated_generator(spec, before, step, after)
        if not g.is_identity:
            counts[g] = counts.get(g, 0) + 1
    ordered = sorted(counts, key=encode)
    if semantics == "elements":
        mult = tuple(1 for _ in ordered)
    else:
        mult = tuple(counts[g] for g in ordered)
    total = sum(mult)
    return GeneratorSet(spec, tuple(ordered), tuple(m / total for m in mult), mult, semantics)


# -- word metric ---------------------------------------------------------------

@dataclass
class Ball:
    """Exact word lengths of every element within ``radius``.

    ``lengths`` is keyed by :class:`Element`, whose canonical form is in
    one-to-one correspondence with its text encoding.
    """

    spec: GroupSpec
    radius: int
    lengths: dict
    counts: list = field(default_factory=list)

    def __len__(self):
        return len(self.lengths)

    def __contains__(self, g) -> bool:
        return g in self.lengths

    def length(self, g: "Element | str") -> int:
        if isinstance(g, str):
            g = decode(g, self.spec)
        return self.lengths[g]

    def sphere(self, r: int) -> list:
        return [g for g, l in self.lengths.items() if l == r]


def bfs_ball(
    spec: GroupSpec,
    radius: int,
    cap: int = DEFAULT_BALL_CAP,
    generators: GeneratorSet | None = None,
) -> Ball:
    """Breadth-first closure of the generating set out to ``radius``."""
    if radius < 0:
        raise ValueError("radius must be non-negative")
    gens = (generators or build_generators(spec)).elements
    e = identity(spec)
    lengths = {e: 0}
    counts = [1]
    frontier = [e]
    for r in range(1, radius + 1):
        nxt = []
        for g in frontier:
            for s in gens:
                h = multiply(g, s)
                if h not in lengths:
                    lengths[h] = r
                    nxt.append(h)
            if len(lengths) > cap:
                raise ResourceError(f"ball of radius {r} in {spec}", len(lengths), cap)
        counts.append(counts[-1] + len(nxt))
        frontier = nxt
    return Ball(spec, radius, lengths, counts)


def leaf_length(spec: GroupSpec, v: int) -> int:
    """Word length in the leaf for the single generator 1."""
    if spec.leaf:
        v %= spec.leaf
        return min(v, spec.leaf - v)
    return abs(v)


def _l1(p: Point, q: Point) -> int:
    return sum(abs(a - b) for a, b in zip(p, q))


def nearest_neighbour_tour(points: Sequence[Point], end: Point) -> int:
    """Length of the greedy lattice tour origin -> all ``points`` -> ``end``.

    Ties go to the lexicographically smallest point.
    """
    if len(points) > 64:
        from ._kernels import nn_tour_length

        arr = np.array([tuple(p) + (0,) * (2 - len(p)) for p in points], dtype=np.int64)
        e = tuple(end) + (0,) * (2 - len(end))
        return int(nn_tour_length(arr[:, 0].copy(), arr[:, 1].copy(), e[0], e[1]))
    remaining = set(points)
    cur = _origin(len(end))
    total = 0
    while remaining:
        nxt = min(remaining, key=lambda q: (_l1(cur, q), q))
        total += _l1(cur, nxt)
        remaining.remove(nxt)
        cur = nxt
    return total + _l1(cur, end)


def _bracket(spec: GroupSpec, a: LampValue) -> tuple[float, float]:
    if spec.is_leaf:
        c = float(leaf_length(spec, a))
        return c, c
    inner = spec.inner
    lo = up = 0.0
    for _, v in a.lamps:
        l, u = _bracket(inner, v)
        lo += l
        up += u
    tour = nearest_neighbour_tour(a.support, a.base)
    return 0.5 * lo, 2.0 * (up + tour)


def word_length_bracket(a: Element) -> tuple[float, float]:
    """Bounds ``lower <= l(a) <= upper`` on the word length.

    ``lower`` is half the total inner length of the lamps (a generator
    touches at most two lamps); ``upper`` doubles inner lengths plus the
    length of a greedy tour through the support ending at the base point.
    """
    return _bracket(a.spec, a)


# -- sampling ------------------------------------------------------------------

class _IntStream:
    """Small integers from a generator, drawn in blocks to cut call overhead."""

    def __init__(self, rng: np.random.Generator, block: int = 4096):
        self.rng = rng
        self.block = block
        self.buf = []

    def below(self, m: int) -> int:
        if not self.buf:
            self.buf = self.rng.integers(0, 1 << 62, size=self.block).tolist()
        return self.buf.pop() % m


def _random_value(spec: GroupSpec, src: _IntStream, max_support: int, box: int) -> LampValue:
    width = 2 * box + 1
    if spec.is_leaf:
        return src.below(spec.leaf) if spec.leaf else src.below(width) - box
    dim = spec.dim
    base = tuple(src.below(width) - box for _ in range(dim))
    lamps = {}
    for _ in range(src.below(max_support + 1)):
        key = tuple(src.below(width) - box for _ in range(dim))
        lamps[key] = _random_value(spec.inner, src, max(1, max_support - 1), box)
    return make_element(spec, base, lamps)


def random_element(
    spec: GroupSpec,
    rng: "np.random.Generator | _IntStream",
    max_support: int = 3,
    box: int = 3,
) -> LampValue:
    """A random element with small support, for property checks.

    Repeated lamp keys collapse, so the support may be smaller than drawn.
    """
    src = rng if isinstance(rng, _IntStream) else _IntStream(rng, 64)
    return _random_value(spec, src, max_support, box)


# -- verification suites ---------------------------------------------------------

@dataclass
class SuiteResult:
    name: str
    cases: int
    failures: int
    first_failure: str = ""

    @property
    def passed(self) -> bool:
        return self.failures == 0


def axiom_suite(spec: GroupSpec, triples: int, seed: int) -> list[SuiteResult]:
    """Associativity, inverse and identity on random ``(a, b, c)`` triples."""
    from .rng import trial_rng

    rng = _IntStream(trial_rng(seed, 0))
    e = identity(spec)
    results = {k: SuiteResult(k, triples, 0) for k in ("associativity", "inverse", "identity")}

    def fail(name, *elems):
        r = results[name]
        if not r.failures:
            r.first_failure = " ".join(encode(x) for x in elems)
        r.failures += 1

    for _ in range(triples):
        a = random_element(spec, rng)
        b = random_element(spec, rng)
        c = random_element(spec, rng)
        if multiply(multiply(a, b), c) != multiply(a, multiply(b, c)):
            fail("associativity", a, b, c)
        ai = invert(a)
        if multiply(a, ai) != e or multiply(ai, a) != e:
            fail("inverse", a)
        if multiply(e, b) != b or multiply(b, e) != b:
            fail("identity", b)
    return list(results.values())


def bracket_suite(spec: GroupSpec, radius: int, cap: int = DEFAULT_BALL_CAP) -> SuiteResult:
    """``lower <= l(g) <= upper`` over the whole ball of ``radius``."""
    ball = bfs_ball(spec, radius, cap)
    out = SuiteResult(f"bracket_r{radius}", len(ball), 0)
    for g, length in ball.lengths.items():
        lo, up = word_length_bracket(g)
        if not lo <= length <= up:
            if not out.failures:
                out.first_failure = f"{encode(g)} l={length} in [{lo}, {up}]"
            out.failures += 1
    return out


def verify_group(spec: GroupSpec, radius: int, triples: int, seed: int,
                 cap: int = DEFAULT_BALL_CAP) -> list[SuiteResult]:
    return axiom_suite(spec, triples, seed) + [bracket_suite(spec, radius, cap)]
