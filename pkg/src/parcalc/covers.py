"""Finite permutation groups, homomorphisms from surface groups, and the
integer-matrix representations used to test the V_s loci.

Permutations are tuples of images on {0, ..., d-1}; printed and parsed in
1-based cycle notation. Products compose right to left: ``mul(x, y)`` applies
``y`` first, so [x, y] = x y x^-1 y^-1 sends (12), (13) in S3 to (123).
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Mapping, Sequence

from .errors import CapExceeded, PreconditionError, StructuralError

Perm = tuple[int, ...]

DEFAULT_ELEMENT_CAP = 10**5
DEFAULT_HOM_CAP = 10**8


# -- permutations -------------------------------------------------------------


def identity(degree: int) -> Perm:
    return tuple(range(degree))


def mul(x: Perm, y: Perm) -> Perm:
    return tuple(x[i] for i in y)


def inv(x: Perm) -> Perm:
    out = [0] * len(x)
    for i, xi in enumerate(x):
        out[xi] = i
    return tuple(out)


def commutator(x: Perm, y: Perm) -> Perm:
    return mul(mul(x, y), mul(inv(x), inv(y)))


def conj(m: Perm, x: Perm) -> Perm:
    """m x m^-1."""
    return mul(mul(m, x), inv(m))


def order(x: Perm) -> int:
    seen, n = set(), 1
    for i in range(len(x)):
        if i in seen:
            continue
        length, j = 0, i
        while j not in seen:
            seen.add(j)
            j = x[j]
            length += 1
        n = math.lcm(n, length)
    return n


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(s: str, degree: int) -> Perm:
    """Parse 1-based cycle notation such as ``"(1,2)(3,4,5)"``, ``"(1 2 3)"`` or ``"(123)"``.

    Undelimited digit runs are read one digit per point, which only makes
    sense for degree <= 9.
    """
    text = s.strip()
    if text in ("", "()", "id", "e"):
        return identity(degree)
    if _CYCLE_RE.sub("", text).strip():
        raise StructuralError(f"cannot parse cycles {s!r}")
    perm = list(range(degree))
    for body in _CYCLE_RE.findall(text):
        body = body.strip()
        if not body:
            continue
        if re.fullmatch(r"\d+", body) and len(body) > 1:
            if degree > 9:
                raise StructuralError(f"ambiguous cycle {body!r} for degree {degree}")
            points = [int(ch) for ch in body]
        else:
            points = [int(tok) for tok in re.split(r"[,\s]+", body) if tok]
        if len(set(points)) != len(points) or any(not 1 <= p <= degree for p in points):
            raise StructuralError(f"bad cycle {body!r} for degree {degree}")
        images = list(range(degree))
        for a, b in zip(points, points[1:] + points[:1]):
            images[a - 1] = b - 1
        perm = list(mul(tuple(perm), tuple(images)))
    return tuple(perm)


def format_cycles(x: Perm) -> str:
    seen, out = set(), []
    for i in range(len(x)):
        if i in seen or x[i] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j + 1)
            j = x[j]
        out.append("(" + ",".join(map(str, cyc)) + ")")
    return "".join(out) or "()"


# -- groups -------------------------------------------------------------------


def closure(generators: Sequence[Perm], degree: int, cap: int = DEFAULT_ELEMENT_CAP) -> frozenset[Perm]:
    e = identity(degree)
    elems = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for s in generators:
                y = mul(s, x)
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
                    if len(elems) > cap:
                        raise CapExceeded(len(elems), cap, "group")
        frontier = nxt
    return frozenset(elems)


@dataclass(frozen=True)
class PermGroup:
    degree: int
    generators: tuple[Perm, ...] = ()
    name: str = field(default="", compare=False)
    element_cap: int = field(default=DEFAULT_ELEMENT_CAP, compare=False, repr=False)

    def __post_init__(self):
        if self.degree < 1:
            raise StructuralError("permutation degree must be positive")
        gens = tuple(tuple(g) for g in self.generators)
        for g in gens:
            if sorted(g) != list(range(self.degree)):
                raise StructuralError(f"{g} is not a permutation of degree {self.degree}")
        object.__setattr__(self, "generators", gens)

    @cached_property
    def elements(self) -> tuple[Perm, ...]:
        """All elements, sorted lexicographically."""
        return tuple(sorted(closure(self.generators, self.degree, self.element_cap)))

    @cached_property
    def element_set(self) -> frozenset[Perm]:
        return frozenset(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Perm:
        return identity(self.degree)

    def center(self) -> tuple[Perm, ...]:
        return tuple(z for z in self.elements if all(mul(z, s) == mul(s, z) for s in self.generators))

    def is_center_free(self) -> bool:
        return len(self.center()) == 1

    def is_abelian(self) -> bool:
        return all(mul(a, b) == mul(b, a) for a in self.generators for b in self.generators)

    def generated_by(self, elems) -> frozenset[Perm]:
        return closure(tuple(set(elems)), self.degree, self.element_cap)

    def label(self) -> str:
        return self.name or ";".join(format_cycles(g) for g in self.generators)


def symmetric(n: int) -> PermGroup:
    if n == 1:
        return PermGroup(1, (), "S1")
    gens = [tuple([1, 0] + list(range(2, n)))]
    if n > 2:
        gens.append(tuple(list(range(1, n)) + [0]))
    return PermGroup(n, tuple(gens), f"S{n}")


def alternating(n: int) -> PermGroup:
    if n < 3:
        return PermGroup(max(n, 1), (), f"A{n}")
    # 3-cycles (1 2 k) generate A_n.
    gens = []
    for k in range(2, n):
        p = list(range(n))
        p[0], p[1], p[k] = 1, k, 0
        gens.append(tuple(p))
    return PermGroup(n, tuple(gens), f"A{n}")


def cyclic(n: int) -> PermGroup:
    if n == 1:
        return PermGroup(1, (), "C1")
    return PermGroup(n, (tuple(list(range(1, n)) + [0]),), f"C{n}")


def trivial_group() -> PermGroup:
    return PermGroup(1, (), "1")


def named_group(text: str) -> PermGroup:
    """"S3", "A5", "C2", "1", or explicit generators ``"(1,2);(1,2,3)"``."""
    text = text.strip()
    m = re.fullmatch(r"([SAC])(\d+)", text)
    if m:
        kind, n = m.group(1), int(m.group(2))
        if n < 1:
            raise StructuralError(f"bad group {text!r}")
        return {"S": symmetric, "A": alternating, "C": cyclic}[kind](n)
    if text in ("1", "trivial"):
        return trivial_group()
    parts = [p for p in text.split(";") if p.strip()]
    if not parts:
        raise StructuralError(f"bad group {text!r}")
    pts = []
    for body in _CYCLE_RE.findall(text):
        body = body.strip()
        if re.fullmatch(r"\d{2,}", body):
            pts += [int(ch) for ch in body]
        else:
            pts += [int(tok) for tok in re.findall(r"\d+", body)]
    degree = max(pts, default=1)
    return PermGroup(degree, tuple(parse_cycles(p, degree) for p in parts), text)


# -- surface groups -----------------------------------------------------------


@dataclass(frozen=True)
class SurfacePresentation:
    """pi_1 of a genus-g surface with n punctures, relator prod [a_i, b_i] * prod c_j."""

    g: int
    n: int = 1

    def __post_init__(self):
        if self.g < 0 or self.n < 0:
            raise StructuralError("genus and puncture count must be non-negative")

    @property
    def labels(self) -> tuple[str, ...]:
        return (
            tuple(f"a{i}" for i in range(1, self.g + 1))
            + tuple(f"b{i}" for i in range(1, self.g + 1))
            + tuple(f"c{j}" for j in range(1, self.n + 1))
        )

    @property
    def free_labels(self) -> tuple[str, ...]:
        """Generators whose images can be chosen freely.

        With n >= 1 the last puncture loop is eliminated by the relator and
        the group is free of rank 2g + n - 1. With n = 0 all 2g generators
        are listed and the relator has to be checked separately.
        """
        return self.labels[:-1] if self.n >= 1 else self.labels

    def relator(self) -> tuple[tuple[str, int], ...]:
        word = []
        for i in range(1, self.g + 1):
            word += [(f"a{i}", 1), (f"b{i}", 1), (f"a{i}", -1), (f"b{i}", -1)]
        word += [(f"c{j}", 1) for j in range(1, self.n + 1)]
        return tuple(word)


def _eval_word(word, images: Mapping[str, Perm], degree: int) -> Perm:
    out = identity(degree)
    for label, e in word:
        x = images[label]
        out = mul(out, x if e > 0 else inv(x))
    return out


@dataclass(frozen=True)
class SurfaceHom:
    presentation: SurfacePresentation
    group: PermGroup
    images: tuple[Perm, ...]

    def __post_init__(self):
        if len(self.images) != len(self.presentation.free_labels):
            raise StructuralError(
                f"{len(self.images)} images for generators {self.presentation.free_labels}"
            )
        if self.presentation.n == 0:
            rel = _eval_word(self.presentation.relator(), self.image_map(), self.group.degree)
            if rel != self.group.identity:
                raise StructuralError("images do not satisfy the surface relation")

    def image_map(self) -> dict[str, Perm]:
        return dict(zip(self.presentation.free_labels, self.images))

    def full_image_map(self) -> dict[str, Perm]:
        """Images of every label, including the eliminated puncture loop."""
        m = self.image_map()
        p = self.presentation
        if p.n >= 1:
            last = f"c{p.n}"
            rest = _eval_word([w for w in p.relator() if w[0] != last], m, self.group.degree)
            m[last] = inv(rest)
        return m

    def is_surjective(self) -> bool:
        return len(self.group.generated_by(self.images + (self.group.identity,))) == self.group.order

    def conjugate(self, m: Perm) -> SurfaceHom:
        return SurfaceHom(self.presentation, self.group, tuple(conj(m, x) for x in self.images))


def _check_once_punctured(h: SurfaceHom) -> None:
    if h.presentation.n != 1:
        raise PreconditionError("expected the once-punctured presentation (n = 1)")


def enumerate_surface_homs(g: int, G: PermGroup, cap: int = DEFAULT_HOM_CAP) -> Iterator[SurfaceHom]:
    """All homs from the free group on a_1..a_g, b_1..b_g to G, lexicographically."""
    if g < 1:
        raise PreconditionError("genus must be at least 1")
    count = G.order ** (2 * g)
    if count > cap:
        raise CapExceeded(count, cap, "homomorphism enumeration")
    pres = SurfacePresentation(g, 1)
    for imgs in itertools.product(G.elements, repeat=2 * g):
        yield SurfaceHom(pres, G, imgs)


def boundary_image(h: SurfaceHom) -> Perm:
    """Image of the loop around the puncture, prod_i [phi(a_i), phi(b_i)]."""
    _check_once_punctured(h)
    m = h.image_map()
    out = h.group.identity
    for i in range(1, h.presentation.g + 1):
        out = mul(out, commutator(m[f"a{i}"], m[f"b{i}"]))
    return out


def kodaira_parshin_admissible(h: SurfaceHom) -> bool:
    _check_once_punctured(h)
    return h.group.is_center_free() and boundary_image(h) != h.group.identity and h.is_surjective()


@dataclass(frozen=True)
class NielsenClass:
    representative: SurfaceHom
    size: int


def nielsen_classify(homs: Sequence[SurfaceHom], surjective_only: bool = True) -> list[NielsenClass]:
    """Partition under simultaneous conjugation; representatives are lexicographic minima."""
    homs = list(homs)
    if not homs:
        return []
    G = homs[0].group
    if any(h.group != G or h.presentation != homs[0].presentation for h in homs):
        raise PreconditionError("all homomorphisms must share a presentation and target group")
    if surjective_only:
        homs = [h for h in homs if h.is_surjective()]
    sizes: dict[tuple[Perm, ...], int] = {}
    for h in homs:
        key = min(tuple(conj(m, x) for x in h.images) for m in G.elements)
        sizes[key] = sizes.get(key, 0) + 1
    pres = homs[0].presentation if homs else None
    return [NielsenClass(SurfaceHom(pres, G, k), n) for k, n in sorted(sizes.items())]


def conjugation_orbit_size(h: SurfaceHom) -> int:
    return len({tuple(conj(m, x) for x in h.images) for m in h.group.elements})


@dataclass(frozen=True)
class GammaIndexReport:
    hom_count: int
    epi_count: int
    nielsen_class_count: int


def gamma_index_report(g: int, G: PermGroup, cap: int = DEFAULT_HOM_CAP) -> GammaIndexReport:
    homs = list(enumerate_surface_homs(g, G, cap))
    surjective: dict[frozenset, bool] = {}
    epis = []
    for h in homs:
        key = frozenset(h.images)
        if key not in surjective:
            surjective[key] = h.is_surjective()
        if surjective[key]:
            epis.append(h)
    classes = nielsen_classify(epis, surjective_only=False)
    return GammaIndexReport(len(homs), len(epis), len(classes))


def riemann_hurwitz_genus(g_base: int, group_order: int, boundary_order: int) -> int:
    """Genus h of a connected G-cover of a genus g_base curve branched over one point.

    2h - 2 = |G| (2 g_base - 2) + |G| (1 - 1/e), e the order of the branch cycle.
    """
    if g_base < 0 or group_order < 1 or boundary_order < 1:
        raise PreconditionError("need g_base >= 0 and positive group and boundary orders")
    if group_order % boundary_order:
        raise StructuralError(f"boundary order {boundary_order} does not divide |G| = {group_order}")
    twice = group_order * (2 * g_base - 2) + group_order - group_order // boundary_order + 2
    if twice % 2 or twice < 0:
        raise StructuralError(f"Riemann-Hurwitz gives non-integral genus {twice}/2")
    return twice // 2


# -- integer matrix representations -------------------------------------------

Matrix = tuple[tuple[int, ...], ...]


def mat_identity(r: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(r)) for i in range(r))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def mat_pow(a: Matrix, s: int) -> Matrix:
    out, base = mat_identity(len(a)), a
    while s:
        if s & 1:
            out = mat_mul(out, base)
        base = mat_mul(base, base)
        s >>= 1
    return out


def mat_det(a: Matrix) -> int:
    """Bareiss fraction-free elimination."""
    m = [list(row) for row in a]
    n, sign, prev = len(m), 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[-1][-1] if n else 1


def mat_inv(a: Matrix) -> Matrix:
    """Inverse of a determinant +-1 integer matrix, via the adjugate."""
    n = len(a)
    d = mat_det(a)
    if d not in (1, -1):
        raise StructuralError(f"matrix has determinant {d}, not invertible over Z")
    if n == 1:
        return ((d,),)
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = tuple(tuple(a[r][c] for c in range(n) if c != j) for r in range(n) if r != i)
            adj[j][i] = (-1) ** (i + j) * mat_det(minor)
    return tuple(tuple(x * d for x in row) for row in adj)


def block_pad(a: Matrix, r: int) -> Matrix:
    """a (+) identity of size r - len(a)."""
    k = len(a)
    return tuple(
        tuple(a[i][j] if i < k and j < k else int(i == j) for j in range(r)) for i in range(r)
    )


UPPER_UNIPOTENT: Matrix = ((1, 1), (0, 1))
LOWER_UNIPOTENT: Matrix = ((1, 0), (1, 1))


@dataclass(frozen=True)
class IntMatrixRep:
    """Images in GL_r(Z) of the free generators of a surface presentation."""

    presentation: SurfacePresentation
    rank: int
    images: tuple[tuple[str, Matrix], ...]

    def __post_init__(self):
        labels = [k for k, _ in self.images]
        if labels != list(self.presentation.free_labels):
            raise StructuralError(f"images must be given for {self.presentation.free_labels}")
        for k, m in self.images:
            if len(m) != self.rank or any(len(row) != self.rank for row in m):
                raise StructuralError(f"image of {k} is not {self.rank}x{self.rank}")
            if mat_det(m) not in (1, -1):
                raise StructuralError(f"image of {k} is not invertible over Z")

    def image_map(self) -> dict[str, Matrix]:
        return dict(self.images)


def relator_image(rep: IntMatrixRep) -> Matrix:
    """Image of prod [a_i, b_i] * prod c_j (with the eliminated loop left out when n >= 1).

    For n = 0 this must be the identity for ``rep`` to define a representation
    of the closed surface group; for n >= 1 the group is free and it is the
    inverse of the image assigned to the last puncture loop.
    """
    p = rep.presentation
    m = rep.image_map()
    out = mat_identity(rep.rank)
    for label, e in p.relator():
        if label not in m:
            continue
        x = m[label]
        out = mat_mul(out, x if e > 0 else mat_inv(x))
    return out


def explicit_nondensity_rep(g: int, n: int, r: int) -> IntMatrixRep:
    """Unipotent (1 1; 0 1), (1 0; 1 1) on two free generators, padded by an identity block.

    For g >= 2 the matrices go to a_1 and a_2 (all b_i map to the identity,
    so the surface relation holds even when n = 0); for g = 1 they go to a_1
    and b_1, which are free because n > 0.
    """
    if g < 1:
        raise PreconditionError("genus 0 is excluded")
    if r < 2:
        raise PreconditionError("rank must be at least 2")
    if not (g >= 2 or (g == 1 and n > 0)):
        raise PreconditionError(f"(g, n) = ({g}, {n}) is not hyperbolic")
    pres = SurfacePresentation(g, n)
    targets = {"a1": UPPER_UNIPOTENT, ("a2" if g >= 2 else "b1"): LOWER_UNIPOTENT}
    images = tuple((k, block_pad(targets.get(k, mat_identity(2)), r)) for k in pres.free_labels)
    rep = IntMatrixRep(pres, r, images)
    if n == 0 and relator_image(rep) != mat_identity(r):
        raise StructuralError("surface relation fails for the closed-surface assignment")
    return rep


Word = tuple[tuple[str, int], ...]


def format_word(w: Word) -> str:
    return " ".join(k if e > 0 else f"{k}^-1" for k, e in w)


def reduced_words(labels: Sequence[str], max_len: int) -> Iterator[Word]:
    """Freely reduced nonempty words in order of length, then generator order."""
    letters = [(k, e) for k in labels for e in (1, -1)]
    layer: list[Word] = [()]
    for _ in range(max_len):
        nxt = []
        for w in layer:
            for k, e in letters:
                if w and w[-1] == (k, -e):
                    continue
                nxt.append(w + ((k, e),))
        yield from nxt
        layer = nxt


@dataclass(frozen=True)
class VsWitness:
    x: Word
    y: Word
    word_length: int
    commutator: Matrix

    def labels(self) -> tuple[str, str]:
        return format_word(self.x), format_word(self.y)


def vs_test(rep: IntMatrixRep, s: int, word_length_bound: int = 1) -> VsWitness | None:
    """Look for x, y with [rho(x)^s, rho(y)^s] != 1.

    A witness proves rho lies outside V_s. ``None`` is inconclusive: V_s
    quantifies over the whole (infinite) group and only words up to the bound
    are tried. Generator pairs come first, then all reduced words.
    """
    if s < 1:
        raise PreconditionError("s must be positive")
    m = rep.image_map()
    labels = list(m)
    inv_m = {k: mat_inv(v) for k, v in m.items()}
    ident = mat_identity(rep.rank)

    def evaluate(w: Word) -> Matrix:
        out = ident
        for k, e in w:
            out = mat_mul(out, m[k] if e > 0 else inv_m[k])
        return out

    def check(x: Word, y: Word) -> VsWitness | None:
        X, Y = mat_pow(evaluate(x), s), mat_pow(evaluate(y), s)
        c = mat_mul(mat_mul(X, Y), mat_mul(mat_inv(X), mat_inv(Y)))
        if c != ident:
            return VsWitness(x, y, max(len(x), len(y)), c)
        return None

    if word_length_bound >= 1:
        for a, b in itertools.combinations(labels, 2):
            w = check(((a, 1),), ((b, 1),))
            if w:
                return w
    words = list(reduced_words(labels, word_length_bound))
    for length in range(1, word_length_bound + 1):
        for x in words:
            for y in words:
                if max(len(x), len(y)) != length or x >= y:
                    continue
                w = check(x, y)
                if w:
                    return w
    return None


# -- JSON ---------------------------------------------------------------------


def hom_to_json(h: SurfaceHom) -> dict:
    return {k: format_cycles(v) for k, v in h.image_map().items()}


def hom_from_json(d: Mapping[str, str], G: PermGroup, g: int, n: int = 1) -> SurfaceHom:
    pres = SurfacePresentation(g, n)
    try:
        images = tuple(parse_cycles(d[k], G.degree) for k in pres.free_labels)
    except KeyError as exc:
        raise StructuralError(f"missing image for {exc}") from exc
    for x in images:
        if x not in G.element_set:
            raise StructuralError(f"{format_cycles(x)} is not in {G.label()}")
    return SurfaceHom(pres, G, images)


def matrix_to_json(m: Matrix) -> list:
    return [list(row) for row in m]


def rep_to_json(rep: IntMatrixRep) -> dict:
    return {
        "g": rep.presentation.g,
        "n": rep.presentation.n,
        "rank": rep.rank,
        "images": {k: matrix_to_json(v) for k, v in rep.images},
    }


def witness_to_json(w: VsWitness | None) -> dict:
    if w is None:
        return {"witness": None, "result": "no witness found"}
    x, y = w.labels()
    return {
        "witness": {"x": x, "y": y},
        "word_length": w.word_length,
        "commutator": matrix_to_json(w.commutator),
        "result": "not in V_s",
    }
