"""Alternating algebras over GF(p) and their ideal/composition machinery.

An alternating algebra is a finite-dimensional GF(p) vector space with a
bilinear product satisfying [v,v] = 0 (hence [u,w] = -[w,u]).  It is stored
as a structure table: one coefficient vector per basis pair i < j.

Subspaces are canonicalized as reduced row-echelon bases, which gives a
unique representative per subspace, O(1) equality and a deterministic
enumeration order.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from powergroups.gfp import PrimeField

Vector = tuple[int, ...]

# exhaustive subspace enumeration stays comfortable up to these bounds
MAX_ENUM_DIM = 5
MAX_ENUM_PRIME = 7


# ---------------------------------------------------------------------------
# exact linear algebra mod p

def rref(rows: Iterable[Sequence[int]], p: int) -> tuple[Vector, ...]:
    """Reduced row-echelon form over GF(p); zero rows dropped."""
    mat = [list(r) for r in rows]
    if not mat:
        return ()
    ncols = len(mat[0])
    pivot_row = 0
    for col in range(ncols):
        pivot = None
        for r in range(pivot_row, len(mat)):
            if mat[r][col] % p != 0:
                pivot = r
                break
        if pivot is None:
            continue
        mat[pivot_row], mat[pivot] = mat[pivot], mat[pivot_row]
        inv = pow(mat[pivot_row][col] % p, -1, p)
        mat[pivot_row] = [(x * inv) % p for x in mat[pivot_row]]
        for r in range(len(mat)):
            if r != pivot_row and mat[r][col] % p != 0:
                f = mat[r][col] % p
                mat[r] = [(a - f * b) % p for a, b in zip(mat[r], mat[pivot_row])]
        pivot_row += 1
        if pivot_row == len(mat):
            break
    return tuple(tuple(x % p for x in row) for row in mat[:pivot_row]
                 if any(x % p for x in row))


def solve_in_span(rows: Sequence[Vector], vec: Vector, p: int) -> Vector | None:
    """Coordinates of vec in the span of RREF rows, or None if outside."""
    residue = [x % p for x in vec]
    coords = []
    for row in rows:
        lead = next(i for i, x in enumerate(row) if x)
        c = residue[lead] % p
        coords.append(c)
        if c:
            residue = [(a - c * b) % p for a, b in zip(residue, row)]
    if any(residue):
        return None
    return tuple(coords)


@dataclass(frozen=True)
class Subspace:
    """Subspace of GF(p)^d with a canonical reduced row-echelon basis."""

    p: int
    ambient_dim: int
    rows: tuple[Vector, ...]

    @staticmethod
    def span(p: int, ambient_dim: int, vectors: Iterable[Sequence[int]]) -> "Subspace":
        vecs = [tuple(v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise ValueError("vector length does not match ambient dimension")
        return Subspace(p, ambient_dim, rref(vecs, p))

    @staticmethod
    def zero(p: int, ambient_dim: int) -> "Subspace":
        return Subspace(p, ambient_dim, ())

    @staticmethod
    def full(p: int, ambient_dim: int) -> "Subspace":
        eye = tuple(tuple(1 if i == j else 0 for j in range(ambient_dim))
                    for i in range(ambient_dim))
        return Subspace(p, ambient_dim, eye)

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(i for i, x in enumerate(row) if x) for row in self.rows)

    def contains(self, vec: Sequence[int]) -> bool:
        return solve_in_span(self.rows, tuple(vec), self.p) is not None

    def coordinates(self, vec: Sequence[int]) -> Vector:
        coords = solve_in_span(self.rows, tuple(vec), self.p)
        if coords is None:
            raise ValueError("vector not in subspace")
        return coords

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.rows)

    def vectors(self) -> Iterator[Vector]:
        """All p^dim vectors of the subspace, in coefficient order."""
        for coeffs in itertools.product(range(self.p), repeat=self.dim):
            v = [0] * self.ambient_dim
            for c, row in zip(coeffs, self.rows):
                if c:
                    for i, x in enumerate(row):
                        v[i] = (v[i] + c * x) % self.p
            yield tuple(v)

    def sort_key(self) -> tuple:
        return (self.dim, self.rows)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    return Subspace.span(a.p, a.ambient_dim, a.rows + b.rows)


def subspace_intersection(a: Subspace, b: Subspace) -> Subspace:
    """Intersection via the kernel of the stacked-coordinates system."""
    p, d = a.p, a.ambient_dim
    if b.ambient_dim != d:
        raise ValueError("ambient dimension mismatch")
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(p, d)
    # x*A = y*B  <=>  (x, y) in kernel of [A^t | -B^t]
    n = a.dim + b.dim
    sys_rows = []
    for i in range(d):
        row = [a.rows[k][i] for k in range(a.dim)] + \
              [(-b.rows[k][i]) % p for k in range(b.dim)]
        sys_rows.append(row)
    ker = kernel_basis(sys_rows, n, p)
    vecs = []
    for sol in ker:
        v = [0] * d
        for c, row in zip(sol[:a.dim], a.rows):
            for i, x in enumerate(row):
                v[i] = (v[i] + c * x) % p
        vecs.append(tuple(v))
    return Subspace.span(p, d, vecs)


def kernel_basis(rows: Sequence[Sequence[int]], ncols: int, p: int) -> list[Vector]:
    """Basis of the right kernel of the matrix given by rows."""
    r = rref(rows, p)
    pivots = [next(i for i, x in enumerate(row) if x) for row in r]
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        sol = [0] * ncols
        sol[f] = 1
        for row, pc in zip(r, pivots):
            sol[pc] = (-row[f]) % p
        basis.append(tuple(sol))
    return basis


@lru_cache(maxsize=None)
def all_subspaces(p: int, dim: int) -> tuple[Subspace, ...]:
    """Every subspace of GF(p)^dim, ordered by (dimension, echelon rows).

    Enumerated directly as reduced echelon matrices: choose pivot columns,
    then fill the free entries.
    """
    if dim > MAX_ENUM_DIM or p > MAX_ENUM_PRIME:
        raise ValueError(f"subspace enumeration bound exceeded (p={p}, dim={dim})")
    spaces: list[Subspace] = [Subspace.zero(p, dim)]
    for k in range(1, dim + 1):
        layer = []
        for pivots in itertools.combinations(range(dim), k):
            # free positions: to the right of each pivot, excluding pivot columns
            free_pos = []
            for r, pc in enumerate(pivots):
                for c in range(pc + 1, dim):
                    if c not in pivots:
                        free_pos.append((r, c))
            for fill in itertools.product(range(p), repeat=len(free_pos)):
                mat = [[0] * dim for _ in range(k)]
                for r, pc in enumerate(pivots):
                    mat[r][pc] = 1
                for (r, c), val in zip(free_pos, fill):
                    mat[r][c] = val
                layer.append(Subspace(p, dim, tuple(tuple(row) for row in mat)))
        layer.sort(key=Subspace.sort_key)
        spaces.extend(layer)
    return tuple(spaces)


def subspaces_of(space: Subspace) -> list[Subspace]:
    """All subspaces of the given subspace, in deterministic order."""
    out = []
    for small in all_subspaces(space.p, space.dim):
        vecs = []
        for coeffs in small.rows:
            v = [0] * space.ambient_dim
            for c, row in zip(coeffs, space.rows):
                for i, x in enumerate(row):
                    v[i] = (v[i] + c * x) % space.p
            vecs.append(v)
        out.append(Subspace.span(space.p, space.ambient_dim, vecs))
    out.sort(key=Subspace.sort_key)
    return out


# ---------------------------------------------------------------------------
# alternating algebras

@dataclass(frozen=True)
class AltAlgebra:
    """Alternating algebra: bracket table c[i][j] in GF(p)^dim for i < j."""

    p: int
    dim: int
    table: tuple[Vector, ...]  # indexed by pair_index(i, j, dim)

    def __post_init__(self):
        expected = self.dim * (self.dim - 1) // 2
        if len(self.table) != expected:
            raise ValueError(f"table must have {expected} entries, got {len(self.table)}")
        for entry in self.table:
            if len(entry) != self.dim:
                raise ValueError("table entry has wrong length")

    @staticmethod
    def from_pairs(p: int, dim: int, pairs: dict[tuple[int, int], Sequence[int]]) -> "AltAlgebra":
        table = [tuple([0] * dim) for _ in range(dim * (dim - 1) // 2)]
        for (i, j), vec in pairs.items():
            if not 0 <= i < j < dim:
                raise ValueError(f"bad basis pair ({i}, {j})")
            table[pair_index(i, j, dim)] = tuple(x % p for x in vec)
        return AltAlgebra(p, dim, tuple(table))

    def bracket_basis(self, i: int, j: int) -> Vector:
        """[e_i, e_j] with sign handling for any i, j."""
        if i == j:
            return tuple([0] * self.dim)
        if i < j:
            return self.table[pair_index(i, j, self.dim)]
        return tuple((-x) % self.p for x in self.table[pair_index(j, i, self.dim)])

    def is_abelian(self) -> bool:
        return all(not any(entry) for entry in self.table)

    def field(self) -> PrimeField:
        return PrimeField(self.p)


def pair_index(i: int, j: int, dim: int) -> int:
    # pairs (i, j), i < j, ordered lexicographically
    return i * (2 * dim - i - 1) // 2 + (j - i - 1)


def bracket_vec(alg: AltAlgebra, u: Sequence[int], w: Sequence[int]) -> Vector:
    """Bilinear antisymmetric extension of the basis table."""
    if len(u) != alg.dim or len(w) != alg.dim:
        raise ValueError("vector length does not match algebra dimension")
    p = alg.p
    out = [0] * alg.dim
    for i in range(alg.dim):
        ui = u[i] % p
        wi = w[i] % p
        for j in range(i + 1, alg.dim):
            coeff = (ui * w[j] - u[j] * wi) % p
            if coeff:
                entry = alg.table[pair_index(i, j, alg.dim)]
                for k in range(alg.dim):
                    if entry[k]:
                        out[k] = (out[k] + coeff * entry[k]) % p
    return tuple(out)


def product_space(alg: AltAlgebra, left: Subspace, right: Subspace) -> Subspace:
    """Span of all [u, w] with u in left, w in right (correct by bilinearity)."""
    _check_space(alg, left)
    _check_space(alg, right)
    vecs = [bracket_vec(alg, u, w) for u in left.rows for w in right.rows]
    return Subspace.span(alg.p, alg.dim, vecs)


def is_ideal(alg: AltAlgebra, sub: Subspace, ambient: Subspace | None = None) -> bool:
    """True iff [sub, ambient] is contained in sub."""
    if ambient is None:
        ambient = Subspace.full(alg.p, alg.dim)
    elif not ambient.contains_space(sub):
        raise ValueError("sub must be contained in ambient")
    for u in sub.rows:
        for w in ambient.rows:
            if not sub.contains(bracket_vec(alg, u, w)):
                return False
    return True


def all_ideals(alg: AltAlgebra) -> list[Subspace]:
    """All ideals of the algebra, in deterministic order."""
    return [s for s in all_subspaces(alg.p, alg.dim) if is_ideal(alg, s)]


def ideals_in(alg: AltAlgebra, ambient: Subspace) -> list[Subspace]:
    """Ideals of the subalgebra spanned by ambient, as ambient-coordinates subspaces."""
    return [s for s in subspaces_of(ambient) if is_ideal(alg, s, ambient)]


def is_simple(alg: AltAlgebra) -> bool:
    """True iff dim >= 1 and the only ideals are 0 and the whole algebra.

    One-dimensional algebras are simple (they carry the zero product and
    have no proper nonzero subspaces at all).
    """
    if alg.dim == 0:
        return False
    if alg.dim == 1:
        return True
    full = Subspace.full(alg.p, alg.dim)
    for s in all_subspaces(alg.p, alg.dim):
        if 0 < s.dim < alg.dim and is_ideal(alg, s, full):
            return False
    return True


def subalgebra(alg: AltAlgebra, sub: Subspace) -> AltAlgebra:
    """Restricted structure table in the echelon basis of sub.

    Requires sub to be closed under the product.
    """
    _check_space(alg, sub)
    k = sub.dim
    pairs = {}
    for a in range(k):
        for b in range(a + 1, k):
            prod = bracket_vec(alg, sub.rows[a], sub.rows[b])
            coords = solve_in_span(sub.rows, prod, alg.p)
            if coords is None:
                raise ValueError("subspace is not closed under the product")
            pairs[(a, b)] = coords
    return AltAlgebra.from_pairs(alg.p, k, pairs)


def quotient(alg: AltAlgebra, ideal: Subspace) -> AltAlgebra:
    """Quotient algebra on a complement basis, bracket reduced mod the ideal."""
    _check_space(alg, ideal)
    if not is_ideal(alg, ideal):
        raise ValueError("subspace is not an ideal")
    p, d = alg.p, alg.dim
    pivots = set(ideal.pivots)
    comp_cols = [c for c in range(d) if c not in pivots]
    k = len(comp_cols)

    def project(vec: Vector) -> Vector:
        # reduce mod the ideal, then read off the complement coordinates
        v = list(vec)
        for row, pc in zip(ideal.rows, ideal.pivots):
            c = v[pc] % p
            if c:
                v = [(a - c * b) % p for a, b in zip(v, row)]
        return tuple(v[c] for c in comp_cols)

    basis = []
    for c in comp_cols:
        e = [0] * d
        e[c] = 1
        basis.append(tuple(e))
    pairs = {}
    for a in range(k):
        for b in range(a + 1, k):
            pairs[(a, b)] = project(bracket_vec(alg, basis[a], basis[b]))
    return AltAlgebra.from_pairs(p, k, pairs)


def _check_space(alg: AltAlgebra, s: Subspace) -> None:
    if s.ambient_dim != alg.dim or s.p != alg.p:
        raise ValueError("subspace does not match the algebra's ambient space")


# ---------------------------------------------------------------------------
# composition series

@dataclass(frozen=True)
class CompositionSeries:
    """Ascending chain 0 = U_0 < U_1 < ... < U_n = V with simple factors."""

    terms: tuple[Subspace, ...]
    factor_tags: tuple[object, ...]  # one tag per step: dim, or (dim, label) for dim 3

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    def factor_dims(self) -> tuple[int, ...]:
        return tuple(t[0] if isinstance(t, tuple) else t for t in self.factor_tags)


def maximal_ideals(alg: AltAlgebra, ambient: Subspace) -> list[Subspace]:
    """Maximal proper ideals of the subalgebra on ambient, deterministic order."""
    proper = [s for s in ideals_in(alg, ambient) if s.dim < ambient.dim]
    maxima = []
    for s in proper:
        if not any(t is not s and t.dim > s.dim and t.contains_space(s) for t in proper):
            maxima.append(s)
    return maxima


def factor_tag(alg: AltAlgebra, lower: Subspace, upper: Subspace) -> object:
    """Tag for the simple factor upper/lower: its dimension, plus the
    canonical dim-3 label where applicable.

    A 2-dimensional simple factor cannot occur (its product space has
    dimension at most 1, so a proper nonzero ideal always exists); hitting
    one means the series construction is broken.
    """
    k = upper.dim - lower.dim
    if k == 1:
        return 1
    if k == 2:
        raise AssertionError("2-dimensional simple factor is impossible")
    if k == 3:
        from powergroups.dim3class import algebra_to_matrix, canonical_form
        fac = quotient(subalgebra(alg, upper), _in_coordinates(lower, upper))
        return (3, canonical_form(algebra_to_matrix(fac)))
    return k


def _in_coordinates(sub: Subspace, ambient: Subspace) -> Subspace:
    """Rewrite sub (contained in ambient) in ambient's echelon coordinates."""
    coords = [ambient.coordinates(r) for r in sub.rows]
    return Subspace.span(ambient.p, ambient.dim, coords)


def composition_series(alg: AltAlgebra) -> CompositionSeries:
    """One composition series, built by repeatedly taking the first maximal ideal.

    The factor multiset is independent of the choices, so determinism here
    is purely for reproducibility.
    """
    chain = [Subspace.full(alg.p, alg.dim)]
    while chain[-1].dim > 0:
        chain.append(maximal_ideals(alg, chain[-1])[0])
    chain.reverse()
    tags = tuple(factor_tag(alg, chain[i], chain[i + 1]) for i in range(len(chain) - 1))
    return CompositionSeries(tuple(chain), tags)


def all_composition_series(alg: AltAlgebra) -> list[CompositionSeries]:
    """Exhaustively enumerate every composition series of the algebra."""
    memo: dict[Subspace, list[tuple[Subspace, ...]]] = {}

    def chains_down(space: Subspace) -> list[tuple[Subspace, ...]]:
        if space.dim == 0:
            return [(space,)]
        if space in memo:
            return memo[space]
        out = []
        for m in maximal_ideals(alg, space):
            for tail in chains_down(m):
                out.append((space,) + tail)
        memo[space] = out
        return out

    series = []
    for chain in chains_down(Subspace.full(alg.p, alg.dim)):
        terms = tuple(reversed(chain))
        tags = tuple(factor_tag(alg, terms[i], terms[i + 1]) for i in range(len(terms) - 1))
        series.append(CompositionSeries(terms, tags))
    return series


def is_composition_series(alg: AltAlgebra, series: CompositionSeries) -> bool:
    terms = series.terms
    if not terms or terms[0].dim != 0 or terms[-1].dim != alg.dim:
        return False
    for lower, upper in zip(terms, terms[1:]):
        if not upper.contains_space(lower) or lower.dim >= upper.dim:
            return False
        if not is_ideal(alg, lower, upper):
            return False
        if lower not in maximal_ideals(alg, upper):
            return False
    return True


def jordan_holder_check(alg: AltAlgebra, s1: CompositionSeries, s2: CompositionSeries) -> bool:
    """True iff the two series have equal length and factor multisets.

    1-dimensional factors are all equivalent; 3-dimensional factors compare
    via their canonical labels.
    """
    for s in (s1, s2):
        if not is_composition_series(alg, s):
            raise ValueError("not a valid composition series")
    if s1.length != s2.length:
        return False
    return sorted(map(_tag_key, s1.factor_tags)) == sorted(map(_tag_key, s2.factor_tags))


def _tag_key(tag: object) -> tuple:
    if isinstance(tag, tuple):
        dim, label = tag
        return (dim, str(label))
    return (tag, "")


# ---------------------------------------------------------------------------
# Zassenhaus-style interval projections

def zassenhaus_project(alg: AltAlgebra,
                       big_lower: Subspace, big_upper: Subspace,
                       small_lower: Subspace, small_upper: Subspace,
                       x: Subspace, direction: str) -> Subspace:
    """Interval projection between [small_lower, small_upper] and
    [big_lower, big_upper].

    direction="up":   x in the small interval, returns big_lower + (big_upper & x)
    direction="down": x in the big interval,   returns small_lower + (small_upper & x)

    Requires big_lower to be an ideal of big_upper and small_lower an ideal
    of small_upper; the projection then maps that ideal pair to an ideal
    pair on the other side.
    """
    if not is_ideal(alg, big_lower, big_upper):
        raise ValueError("big_lower is not an ideal of big_upper")
    if not is_ideal(alg, small_lower, small_upper):
        raise ValueError("small_lower is not an ideal of small_upper")
    if direction == "up":
        if not (x.contains_space(small_lower) and small_upper.contains_space(x)):
            raise ValueError("x outside the [small_lower, small_upper] interval")
        return subspace_sum(big_lower, subspace_intersection(big_upper, x))
    if direction == "down":
        if not (x.contains_space(big_lower) and big_upper.contains_space(x)):
            raise ValueError("x outside the [big_lower, big_upper] interval")
        return subspace_sum(small_lower, subspace_intersection(small_upper, x))
    raise ValueError(f"direction must be 'up' or 'down', got {direction!r}")


def factor_algebra(alg: AltAlgebra, lower: Subspace, upper: Subspace) -> AltAlgebra:
    """The algebra upper/lower for an ideal lower of the subalgebra upper."""
    return quotient(subalgebra(alg, upper), _in_coordinates(lower, upper))


def isomorphic_algebras(a: AltAlgebra, b: AltAlgebra) -> bool:
    """Brute-force isomorphism test by searching over invertible maps.

    Exponential in dim^2; intended for factors of dimension <= 3.
    """
    if a.p != b.p or a.dim != b.dim:
        return False
    p, d = a.p, a.dim
    if d <= 1:
        return True
    if d > 3:
        raise ValueError("brute-force isomorphism search capped at dimension 3")
    basis_pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
    for entries in itertools.product(range(p), repeat=d * d):
        mat = [entries[i * d:(i + 1) * d] for i in range(d)]
        if rref(mat, p) != Subspace.full(p, d).rows:
            continue
        # phi(e_i) = row i of mat; check phi([e_i,e_j]) = [phi(e_i), phi(e_j)]
        ok = True
        for (i, j) in basis_pairs:
            lhs = _apply(mat, a.bracket_basis(i, j), p)
            rhs = bracket_vec(b, mat[i], mat[j])
            if lhs != rhs:
                ok = False
                break
        if ok:
            return True
    return False


def _apply(mat: Sequence[Sequence[int]], vec: Vector, p: int) -> Vector:
    d = len(vec)
    out = [0] * d
    for i in range(d):
        if vec[i]:
            for k in range(d):
                out[k] = (out[k] + vec[i] * mat[i][k]) % p
    return tuple(out)


# ---------------------------------------------------------------------------
# generation and serialization

def random_algebra(p: int, dim: int, seed: int) -> AltAlgebra:
    """Deterministic pseudorandom structure table for the given seed."""
    import random as _random
    if dim > MAX_ENUM_DIM:
        raise ValueError(f"dimension {dim} exceeds the enumeration bound")
    rng = _random.Random((p, dim, seed).__repr__())
    pairs = {}
    for i in range(dim):
        for j in range(i + 1, dim):
            pairs[(i, j)] = tuple(rng.randrange(p) for _ in range(dim))
    return AltAlgebra.from_pairs(p, dim, pairs)


def algebra_to_json(alg: AltAlgebra) -> str:
    bracket = []
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            bracket.append([i, j, list(alg.table[pair_index(i, j, alg.dim)])])
    return json.dumps({"p": alg.p, "dim": alg.dim, "bracket": bracket}, sort_keys=True)


def algebra_from_json(text: str) -> AltAlgebra:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid algebra JSON: {exc}") from exc
    for key in ("p", "dim", "bracket"):
        if key not in data:
            raise ValueError(f"algebra JSON missing field {key!r}")
    p, dim = data["p"], data["dim"]
    PrimeField(p)  # validates the prime
    pairs = {}
    for entry in data["bracket"]:
        if len(entry) != 3:
            raise ValueError(f"bad bracket entry {entry!r}: want [i, j, coeffs]")
        i, j, coeffs = entry
        if not 0 <= i < j < dim:
            raise ValueError(f"bad bracket entry {entry!r}: need 0 <= i < j < dim")
        if len(coeffs) != dim or not all(0 <= c < p for c in coeffs):
            raise ValueError(f"bad bracket entry {entry!r}: coefficients out of range")
        pairs[(i, j)] = tuple(coeffs)
    return AltAlgebra.from_pairs(p, dim, pairs)
