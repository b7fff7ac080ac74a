"""Classification of 3-dimensional alternating algebras over GF(p).

A dim-3 algebra is encoded by a 3x3 structure matrix: column 1 holds the
coefficients of the product of the second and third basis vectors, column 2
those of the third and first, column 3 those of the first and second.  Two
matrices describe the same algebra in different bases exactly when they are
*twisted congruent*: B = (1/det P) P^t A P for some invertible P.

Classes are named A1..A6(alpha), B1..B7(alpha), C1, C2, D; there are
12 + 2(p-1) of them, of which the A's (5 + (p-2) many, exactly the matrices
of rank 3) correspond to the simple algebras.

Two independent classification routes are provided:

- an orbit oracle: connected components of the full p^9 matrix space under
  a generating set of GL(3,p) plus the scalar twists (p <= 5);
- a constructive canonical form implementing the symmetric/antisymmetric
  case analysis (any supported p).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from powergroups.altalg import AltAlgebra, pair_index
from powergroups.gfp import PrimeField

Mat = tuple[int, int, int, int, int, int, int, int, int]  # row-major 3x3

ORACLE_MAX_PRIME = 5


@dataclass(frozen=True)
class StructureMatrix:
    p: int
    entries: Mat

    def __post_init__(self):
        if len(self.entries) != 9:
            raise ValueError("need 9 row-major entries")
        if any(not 0 <= e < self.p for e in self.entries):
            raise ValueError("entries must be reduced mod p")

    @staticmethod
    def make(p: int, rows: Iterable[Iterable[int]]) -> "StructureMatrix":
        flat = tuple(x % p for row in rows for x in row)
        return StructureMatrix(p, flat)

    def at(self, i: int, j: int) -> int:
        return self.entries[3 * i + j]

    def rows(self) -> tuple[tuple[int, int, int], ...]:
        e = self.entries
        return ((e[0], e[1], e[2]), (e[3], e[4], e[5]), (e[6], e[7], e[8]))

    def transpose(self) -> "StructureMatrix":
        e = self.entries
        return StructureMatrix(self.p, (e[0], e[3], e[6], e[1], e[4], e[7], e[2], e[5], e[8]))

    def scale(self, c: int) -> "StructureMatrix":
        return StructureMatrix(self.p, tuple((c * x) % self.p for x in self.entries))

    def det(self) -> int:
        e, p = self.entries, self.p
        return (e[0] * (e[4] * e[8] - e[5] * e[7])
                - e[1] * (e[3] * e[8] - e[5] * e[6])
                + e[2] * (e[3] * e[7] - e[4] * e[6])) % p

    def rank(self) -> int:
        if self.det():
            return 3
        e, p = self.entries, self.p
        minors = (e[0] * e[4] - e[1] * e[3], e[0] * e[5] - e[2] * e[3],
                  e[1] * e[5] - e[2] * e[4], e[0] * e[7] - e[1] * e[6],
                  e[0] * e[8] - e[2] * e[6], e[1] * e[8] - e[2] * e[7],
                  e[3] * e[7] - e[4] * e[6], e[3] * e[8] - e[5] * e[6],
                  e[4] * e[8] - e[5] * e[7])
        if any(m % p for m in minors):
            return 2
        return 1 if any(self.entries) else 0

    def is_zero(self) -> bool:
        return not any(self.entries)


def mat_mul(a: Mat, b: Mat, p: int) -> Mat:
    out = [0] * 9
    for i in range(3):
        for j in range(3):
            out[3 * i + j] = (a[3 * i] * b[j] + a[3 * i + 1] * b[3 + j]
                              + a[3 * i + 2] * b[6 + j]) % p
    return tuple(out)


def mat_det(a: Mat, p: int) -> int:
    return StructureMatrix(p, tuple(x % p for x in a)).det()


def apply_twisted(P: Mat, A: StructureMatrix) -> StructureMatrix:
    """(1/det P) * P^t A P."""
    p = A.p
    d = mat_det(P, p)
    if d == 0:
        raise ValueError("P must be invertible")
    Pt = (P[0], P[3], P[6], P[1], P[4], P[7], P[2], P[5], P[8])
    prod = mat_mul(mat_mul(Pt, A.entries, p), P, p)
    dinv = pow(d, -1, p)
    return StructureMatrix(p, tuple((dinv * x) % p for x in prod))


# ---------------------------------------------------------------------------
# matrix <-> algebra

def matrix_to_algebra(A: StructureMatrix) -> AltAlgebra:
    """Dim-3 algebra with the products read off the matrix columns."""
    p = A.p
    col = lambda k: (A.at(0, k), A.at(1, k), A.at(2, k))
    pairs = {
        (1, 2): col(0),                                  # second * third
        (0, 2): tuple((-x) % p for x in col(1)),         # -(third * first)
        (0, 1): col(2),                                  # first * second
    }
    return AltAlgebra.from_pairs(p, 3, pairs)


def algebra_to_matrix(alg: AltAlgebra) -> StructureMatrix:
    if alg.dim != 3:
        raise ValueError("only 3-dimensional algebras have a structure matrix")
    p = alg.p
    c1 = alg.table[pair_index(1, 2, 3)]
    c2 = tuple((-x) % p for x in alg.table[pair_index(0, 2, 3)])
    c3 = alg.table[pair_index(0, 1, 3)]
    return StructureMatrix.make(p, [(c1[i], c2[i], c3[i]) for i in range(3)])


# ---------------------------------------------------------------------------
# symmetric / antisymmetric machinery

@dataclass(frozen=True)
class SymAntiDecomp:
    sym: StructureMatrix
    anti: StructureMatrix


def sym_anti_split(A: StructureMatrix) -> SymAntiDecomp:
    """Unique decomposition A = sym + anti (division by 2 valid, p odd)."""
    p = A.p
    half = pow(2, -1, p)
    At = A.transpose()
    sym = tuple((half * (a + b)) % p for a, b in zip(A.entries, At.entries))
    anti = tuple((half * (a - b)) % p for a, b in zip(A.entries, At.entries))
    return SymAntiDecomp(StructureMatrix(p, sym), StructureMatrix(p, anti))


def congruence_diagonalize(S: StructureMatrix) -> tuple[int, int, int]:
    """Diagonal entries of a congruence-diagonalization of symmetric S."""
    p = S.p
    m = [list(r) for r in S.rows()]
    for k in range(3):
        if m[k][k] % p == 0:
            # bring a nonzero entry onto the diagonal
            sw = next((i for i in range(k + 1, 3) if m[i][i] % p), None)
            if sw is not None:
                m[k], m[sw] = m[sw], m[k]
                for row in m:
                    row[k], row[sw] = row[sw], row[k]
            else:
                off = next((j for j in range(k + 1, 3) if m[k][j] % p), None)
                if off is None:
                    continue
                # row/col addition makes the pivot 2*m[k][off] != 0
                for j in range(3):
                    m[k][j] = (m[k][j] + m[off][j]) % p
                for i in range(3):
                    m[i][k] = (m[i][k] + m[i][off]) % p
        piv = m[k][k] % p
        if piv == 0:
            continue
        inv = pow(piv, -1, p)
        for i in range(k + 1, 3):
            f = (m[i][k] * inv) % p
            if f:
                for j in range(3):
                    m[i][j] = (m[i][j] - f * m[k][j]) % p
                for i2 in range(3):
                    m[i2][i] = (m[i2][i] - f * m[i2][k]) % p
    diag = tuple(m[i][i] % p for i in range(3))
    assert all(m[i][j] % p == 0 for i in range(3) for j in range(3) if i != j)
    return diag


def symmetric_canonical(S: StructureMatrix) -> StructureMatrix:
    """Canonical diagonal representative of symmetric S under twisted congruence.

    The five classes are diag(1,1,1), diag(1,1,0), diag(tau,1,0),
    diag(1,0,0) and 0: rank 3 and rank 1 collapse over the scalar twist,
    rank 2 splits by the discriminant mod squares.
    """
    if S.entries != S.transpose().entries:
        raise ValueError("matrix is not symmetric")
    field = PrimeField(S.p)
    diag = congruence_diagonalize(S)
    nonzero = [d for d in diag if d]
    rank = len(nonzero)
    if rank == 3:
        return StructureMatrix.make(S.p, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    if rank == 2:
        disc = (nonzero[0] * nonzero[1]) % S.p
        first = 1 if field.is_square(disc) else field.tau
        return StructureMatrix.make(S.p, [(first, 0, 0), (0, 1, 0), (0, 0, 0)])
    if rank == 1:
        return StructureMatrix.make(S.p, [(1, 0, 0), (0, 0, 0), (0, 0, 0)])
    return StructureMatrix.make(S.p, [(0, 0, 0), (0, 0, 0), (0, 0, 0)])


def antisymmetric_class(N: StructureMatrix) -> str:
    """Antisymmetric matrices fall into exactly two classes: zero / nonzero."""
    neg = tuple((-x) % N.p for x in N.transpose().entries)
    if N.entries != neg:
        raise ValueError("matrix is not antisymmetric")
    return "zero" if N.is_zero() else "nonzero"


# ---------------------------------------------------------------------------
# canonical labels

_FAMILIES = ("A", "B", "C", "D")
_PARAMETRIC = {"A6", "B7"}


@dataclass(frozen=True, order=True)
class CanonicalLabel:
    name: str
    param: Optional[int] = None
    tau: int = 0

    def __post_init__(self):
        if (self.name in _PARAMETRIC) != (self.param is not None):
            raise ValueError(f"param must be present exactly for {sorted(_PARAMETRIC)}")

    def __str__(self) -> str:
        if self.param is not None:
            return f"{self.name}({self.param})"
        return self.name


def all_labels(p: int) -> list[CanonicalLabel]:
    """The 12 + 2(p-1) class labels, in table order."""
    tau = PrimeField(p).tau
    out = [CanonicalLabel(f"A{k}", tau=tau) for k in range(1, 6)]
    out += [CanonicalLabel("A6", a, tau) for a in range(1, p - 1)]
    out += [CanonicalLabel(f"B{k}", tau=tau) for k in range(1, 7)]
    out += [CanonicalLabel("B7", a, tau) for a in range(1, p - 1)]
    out += [CanonicalLabel("C1", tau=tau), CanonicalLabel("C2", tau=tau),
            CanonicalLabel("D", tau=tau)]
    return out


def named_table(p: int) -> list[tuple[CanonicalLabel, StructureMatrix]]:
    """Representative structure matrices for every class, in table order."""
    field = PrimeField(p)
    t = field.tau
    m1 = p - 1
    reps = {
        "A1": [(1, 0, 0), (0, 1, 0), (0, 0, 1)],
        "A2": [(0, 1, 0), (m1, 0, 0), (0, 0, 1)],
        "A3": [(1, 1, 0), (m1, 0, 0), (0, 0, 1)],
        "A4": [(t, 1, 0), (m1, 0, 0), (0, 0, 1)],
        "A5": [(0, 1, 1), (m1, 1, 0), (1, 0, 0)],
        "B1": [(m1, 1, 0), (m1, 1, 0), (0, 0, 1)],
        "B2": [(1, 0, 0), (0, 1, 0), (0, 0, 0)],
        "B3": [(t, 0, 0), (0, 1, 0), (0, 0, 0)],
        "B4": [(0, 1, 0), (m1, 0, 0), (0, 0, 0)],
        "B5": [(1, 1, 0), (m1, 0, 0), (0, 0, 0)],
        "B6": [(0, 1, 1), (m1, 0, 0), (1, 0, 0)],
        "C1": [(m1, 1, 0), (m1, 1, 0), (0, 0, 0)],
        "C2": [(1, 0, 0), (0, 0, 0), (0, 0, 0)],
        "D": [(0, 0, 0), (0, 0, 0), (0, 0, 0)],
    }
    out = []
    for label in all_labels(p):
        if label.name == "A6":
            rows = [(label.param, 1, 0), (m1, 1, 0), (0, 0, 1)]
        elif label.name == "B7":
            rows = [(label.param, 1, 0), (m1, 1, 0), (0, 0, 0)]
        else:
            rows = reps[label.name]
        out.append((label, StructureMatrix.make(p, rows)))
    return out


def simple_classes(p: int) -> list[CanonicalLabel]:
    """Labels whose representatives have rank 3: the simple algebras."""
    return [label for label, rep in named_table(p) if rep.rank() == 3]


# ---------------------------------------------------------------------------
# constructive canonical form

def canonical_form(A: StructureMatrix) -> CanonicalLabel:
    """Classify one matrix by the symmetric/antisymmetric case analysis."""
    p = A.p
    field = PrimeField(p)
    tau = field.tau
    dec = sym_anti_split(A)
    S, N = dec.sym, dec.anti

    def label(name: str, param: int | None = None) -> CanonicalLabel:
        return CanonicalLabel(name, param, tau)

    if N.is_zero():
        # purely symmetric: five classes by rank and discriminant
        diag = congruence_diagonalize(S)
        nonzero = [d for d in diag if d]
        rank = len(nonzero)
        if rank == 3:
            return label("A1")
        if rank == 2:
            return label("B2") if field.is_square(nonzero[0] * nonzero[1]) else label("B3")
        return label("C2") if rank == 1 else label("D")

    # radical line of the alternating part: for N = [[0,a,b],[-a,0,c],...]
    # the kernel is spanned by (c, -b, a)
    a, b, c = N.at(0, 1), N.at(0, 2), N.at(1, 2)
    w = ((c % p), (-b) % p, (a % p))
    Sw = _matvec(S, w)
    s_w = sum(w[i] * Sw[i] for i in range(3)) % p

    if s_w != 0:
        # radical vector is anisotropic for the symmetric form
        u1, u2 = _functional_kernel_basis(Sw, p)
        return _binary_form_label(S, N, u1, u2, s_w, field, label,
                                  rank0="A2", rank1=("A3", "A4"),
                                  rank2=("A6", "B1"))
    if all(x == 0 for x in Sw):
        # radical vector also degenerate for the symmetric form
        k = next(i for i in range(3) if w[i])
        u1, u2 = (_unit(i, p) for i in range(3) if i != k)
        return _binary_form_label(S, N, u1, u2, None, field, label,
                                  rank0="B4", rank1=("B5", None),
                                  rank2=("B7", "C1"))
    # isotropic but not in the radical of the symmetric form
    rank = S.rank()
    assert rank >= 2, "rank-1 symmetric part cannot be isotropic on its image"
    return label("A5") if rank == 3 else label("B6")


def _binary_form_label(S, N, u1, u2, s_w, field, label, rank0, rank1, rank2):
    """Dispatch on the symmetric form restricted to span{u1, u2}."""
    p = field.p
    s11 = _bilinear(S, u1, u1)
    s12 = _bilinear(S, u1, u2)
    s22 = _bilinear(S, u2, u2)
    disc = (s11 * s22 - s12 * s12) % p
    if disc:
        cval = _bilinear(N, u1, u2)
        alpha = (disc * pow(cval * cval % p, -1, p)) % p
        a6, b1 = rank2
        if alpha == p - 1:
            return label(b1)
        return label(a6, alpha)
    if s11 == 0 and s12 == 0 and s22 == 0:
        return label(rank0)
    # rank 1: (0,s;s,0) would have nonzero discriminant, so a diagonal
    # value is nonzero and its square class is the invariant
    sigma = s11 if s11 else s22
    assert sigma, "rank-1 restricted form must have a nonzero diagonal value"
    plain, twisted = rank1
    if twisted is None:
        return label(plain)
    return label(plain) if field.is_square(sigma * s_w) else label(twisted)


def _matvec(M: StructureMatrix, v) -> tuple[int, int, int]:
    p = M.p
    return tuple(sum(M.at(i, j) * v[j] for j in range(3)) % p for i in range(3))


def _bilinear(M: StructureMatrix, u, v) -> int:
    p = M.p
    return sum(u[i] * M.at(i, j) * v[j] for i in range(3) for j in range(3)) % p


def _functional_kernel_basis(g, p: int):
    """Two independent vectors spanning {x : x . g = 0} for nonzero g."""
    k = next(i for i in range(3) if g[i])
    out = []
    for i in range(3):
        if i == k:
            continue
        v = [0, 0, 0]
        v[i] = g[k] % p
        v[k] = (-g[i]) % p
        out.append(tuple(v))
    return out


def _unit(i: int, p: int) -> tuple[int, int, int]:
    v = [0, 0, 0]
    v[i] = 1
    return tuple(v)


# ---------------------------------------------------------------------------
# orbit oracle over the full matrix space

def gl3_generators(p: int) -> list[Mat]:
    """Transvections plus a primitive-root diagonal: a generating set of GL(3,p)."""
    gens = []
    for i in range(3):
        for j in range(3):
            if i != j:
                m = [1, 0, 0, 0, 1, 0, 0, 0, 1]
                m[3 * i + j] = 1
                gens.append(tuple(m))
    g = _primitive_root(p)
    gens.append((g, 0, 0, 0, 1, 0, 0, 0, 1))
    return gens


def _primitive_root(p: int) -> int:
    for g in range(2, p):
        seen = set()
        x = 1
        for _ in range(p - 1):
            x = (x * g) % p
            seen.add(x)
        if len(seen) == p - 1:
            return g
    raise AssertionError("prime fields always have primitive roots")


def matrix_index(A: StructureMatrix) -> int:
    idx = 0
    for e in A.entries:
        idx = idx * A.p + e
    return idx


def index_matrix(idx: int, p: int) -> StructureMatrix:
    digits = []
    for _ in range(9):
        digits.append(idx % p)
        idx //= p
    return StructureMatrix(p, tuple(reversed(digits)))


def _twist_action_matrix(P: Mat, p: int) -> np.ndarray:
    """9x9 matrix over GF(p) of A -> (1/det P) P^t A P on flattened entries."""
    L = np.zeros((9, 9), dtype=np.int64)
    for k in range(9):
        basis = [0] * 9
        basis[k] = 1
        img = apply_twisted(P, StructureMatrix(p, tuple(basis)))
        L[:, k] = img.entries
    return L % p


@lru_cache(maxsize=None)
def _digit_table(p: int) -> np.ndarray:
    n = p ** 9
    idx = np.arange(n, dtype=np.int64)
    digits = np.empty((n, 9), dtype=np.int64)
    for k in range(8, -1, -1):
        digits[:, k] = idx % p
        idx //= p
    return digits


@lru_cache(maxsize=None)
def orbit_labels(p: int) -> tuple[np.ndarray, int]:
    """Connected-component id per matrix index under the twisted action.

    Components are computed from edges A -> g(A) for the GL(3,p) generators
    plus all scalar multiplications; this is the union-find closure of the
    equivalence relation.
    """
    if p > ORACLE_MAX_PRIME:
        raise ValueError(f"orbit oracle enumerates p^9 matrices; capped at p <= {ORACLE_MAX_PRIME}")
    n = p ** 9
    digits = _digit_table(p)
    powers = p ** np.arange(8, -1, -1, dtype=np.int64)
    maps = [_twist_action_matrix(P, p) for P in gl3_generators(p)]
    maps += [np.eye(9, dtype=np.int64) * lam for lam in range(2, p)]
    rows, cols = [], []
    src = np.arange(n, dtype=np.int64)
    for L in maps:
        dst = ((digits @ L.T) % p) @ powers
        rows.append(src)
        cols.append(dst)
    graph = coo_matrix(
        (np.ones(n * len(maps), dtype=np.int8),
         (np.concatenate(rows), np.concatenate(cols))),
        shape=(n, n),
    )
    count, labels = connected_components(graph, directed=False)
    return labels, count


def orbit_sizes(p: int) -> np.ndarray:
    labels, count = orbit_labels(p)
    return np.bincount(labels, minlength=count)


def oracle_class_of(p: int) -> dict[int, CanonicalLabel]:
    """Map component id -> named label; fails if the table misses an orbit."""
    labels, count = orbit_labels(p)
    table = named_table(p)
    if count != len(table):
        raise AssertionError(
            f"oracle found {count} orbits but the table names {len(table)} classes")
    out: dict[int, CanonicalLabel] = {}
    for label, rep in table:
        comp = int(labels[matrix_index(rep)])
        if comp in out:
            raise AssertionError(f"representatives of {out[comp]} and {label} share an orbit")
        out[comp] = label
    return out


# ---------------------------------------------------------------------------
# vectorized constructive sweep (used to classify the whole space quickly)

def constructive_labels(p: int) -> np.ndarray:
    """Canonical-form class per matrix index, vectorized over the p^9 space.

    Returns label ids that index into all_labels(p).
    """
    field = PrimeField(p)
    tau = field.tau
    labels_list = all_labels(p)
    label_id = {str(lab): i for i, lab in enumerate(labels_list)}
    sq = np.zeros(p, dtype=bool)
    for x in range(p):
        sq[(x * x) % p] = True

    digits = _digit_table(p)
    n = digits.shape[0]
    M = digits.reshape(n, 3, 3)
    Mt = M.transpose(0, 2, 1)
    half = pow(2, -1, p)
    S = ((M + Mt) * half) % p
    N = ((M - Mt) * half) % p

    out = np.full(n, -1, dtype=np.int32)

    def det3(X):
        return (X[:, 0, 0] * (X[:, 1, 1] * X[:, 2, 2] - X[:, 1, 2] * X[:, 2, 1])
                - X[:, 0, 1] * (X[:, 1, 0] * X[:, 2, 2] - X[:, 1, 2] * X[:, 2, 0])
                + X[:, 0, 2] * (X[:, 1, 0] * X[:, 2, 1] - X[:, 1, 1] * X[:, 2, 0])) % p

    def bilinear(X, u, v):
        return np.einsum("ni,nij,nj->n", u, X, v) % p

    # --- symmetric branch -------------------------------------------------
    anti_zero = (N == 0).all(axis=(1, 2))
    detS = det3(S)
    # principal 2x2 minors; for a symmetric matrix of rank 2 one of them is
    # nonzero and carries the discriminant class
    m01 = (S[:, 0, 0] * S[:, 1, 1] - S[:, 0, 1] * S[:, 1, 0]) % p
    m02 = (S[:, 0, 0] * S[:, 2, 2] - S[:, 0, 2] * S[:, 2, 0]) % p
    m12 = (S[:, 1, 1] * S[:, 2, 2] - S[:, 1, 2] * S[:, 2, 1]) % p
    any_minor = (m01 != 0) | (m02 != 0) | (m12 != 0)
    s_zero = (S == 0).all(axis=(1, 2))
    sym = anti_zero
    rank3 = sym & (detS != 0)
    rank2 = sym & (detS == 0) & any_minor
    rank1 = sym & (detS == 0) & ~any_minor & ~s_zero
    rank0 = sym & s_zero
    out[rank3] = label_id["A1"]
    disc = np.where(m01 != 0, m01, np.where(m02 != 0, m02, m12))
    out[rank2 & sq[disc]] = label_id["B2"]
    out[rank2 & ~sq[disc]] = label_id["B3"]
    out[rank1] = label_id["C2"]
    out[rank0] = label_id["D"]

    # --- antisymmetric part nonzero ---------------------------------------
    act = ~anti_zero
    w = np.stack([N[:, 1, 2] % p, (-N[:, 0, 2]) % p, N[:, 0, 1] % p], axis=1)
    Sw = np.einsum("nij,nj->ni", S, w) % p
    s_w = (w * Sw).sum(axis=1) % p

    def pick_kernel_basis(g):
        """Basis of {x : x.g = 0} for nonzero rows g, vectorized."""
        u1 = np.zeros_like(g)
        u2 = np.zeros_like(g)
        k0 = g[:, 0] != 0
        k1 = (~k0) & (g[:, 1] != 0)
        k2 = (~k0) & (g[:, 1] == 0)
        # k = 0: basis e1 - (g1/g0) e0, e2 - (g2/g0) e0, scaled by g0
        u1[k0, 0], u1[k0, 1] = (-g[k0, 1]) % p, g[k0, 0]
        u2[k0, 0], u2[k0, 2] = (-g[k0, 2]) % p, g[k0, 0]
        u1[k1, 0] = 1
        u2[k1, 1], u2[k1, 2] = (-g[k1, 2]) % p, g[k1, 1]
        u1[k2, 0] = 1
        u2[k2, 1] = 1
        return u1 % p, u2 % p

    case1 = act & (s_w != 0)
    if case1.any():
        u1, u2 = pick_kernel_basis(Sw[case1])
        Sc, Nc = S[case1], N[case1]
        s11 = bilinear(Sc, u1, u1)
        s12 = bilinear(Sc, u1, u2)
        s22 = bilinear(Sc, u2, u2)
        cval = bilinear(Nc, u1, u2)
        disc = (s11 * s22 - s12 * s12) % p
        sub = np.full(case1.sum(), -1, dtype=np.int32)
        r0 = (s11 == 0) & (s12 == 0) & (s22 == 0)
        r2 = disc != 0
        r1 = ~r0 & ~r2
        sub[r0] = label_id["A2"]
        sigma = np.where(s11 != 0, s11, s22)
        sclass = sq[(sigma * s_w[case1]) % p]
        sub[r1 & sclass] = label_id["A3"]
        sub[r1 & ~sclass] = label_id["A4"]
        inv_table = np.array([0] + [pow(x, -1, p) for x in range(1, p)], dtype=np.int64)
        alpha = (disc * inv_table[(cval * cval) % p]) % p
        for a in range(1, p - 1):
            sub[r2 & (alpha == a)] = label_id[f"A6({a})"]
        sub[r2 & (alpha == p - 1)] = label_id["B1"]
        out[case1] = sub

    sw_zero = (Sw == 0).all(axis=1)
    case2 = act & (s_w == 0) & sw_zero
    if case2.any():
        ws = w[case2]
        k = np.argmax(ws != 0, axis=1)
        u1 = np.zeros_like(ws)
        u2 = np.zeros_like(ws)
        others = np.array([[1, 2], [0, 2], [0, 1]])
        rows_idx = np.arange(len(ws))
        u1[rows_idx, others[k, 0]] = 1
        u2[rows_idx, others[k, 1]] = 1
        Sc, Nc = S[case2], N[case2]
        s11 = bilinear(Sc, u1, u1)
        s12 = bilinear(Sc, u1, u2)
        s22 = bilinear(Sc, u2, u2)
        cval = bilinear(Nc, u1, u2)
        disc = (s11 * s22 - s12 * s12) % p
        sub = np.full(case2.sum(), -1, dtype=np.int32)
        r0 = (s11 == 0) & (s12 == 0) & (s22 == 0)
        r2 = disc != 0
        r1 = ~r0 & ~r2
        sub[r0] = label_id["B4"]
        sub[r1] = label_id["B5"]
        inv_table = np.array([0] + [pow(x, -1, p) for x in range(1, p)], dtype=np.int64)
        alpha = (disc * inv_table[(cval * cval) % p]) % p
        for a in range(1, p - 1):
            sub[r2 & (alpha == a)] = label_id[f"B7({a})"]
        sub[r2 & (alpha == p - 1)] = label_id["C1"]
        out[case2] = sub

    case3 = act & (s_w == 0) & ~sw_zero
    if case3.any():
        detSc = det3(S[case3])
        sub = np.where(detSc != 0, label_id["A5"], label_id["B6"]).astype(np.int32)
        out[case3] = sub

    assert (out >= 0).all()
    return out


# ---------------------------------------------------------------------------
# public classification entry points

def classify_all(p: int, method: str = "constructive") -> list[tuple[CanonicalLabel, Optional[int]]]:
    """Class list with orbit sizes.

    method="oracle": connected components of the twisted action (p <= 5).
    method="constructive": canonical forms; orbit sizes come from sweeping
    the full space for p <= 5 and are omitted for larger p.
    """
    table_labels = all_labels(p)
    if method == "oracle":
        labels, count = orbit_labels(p)
        comp_to_label = oracle_class_of(p)
        sizes = orbit_sizes(p)
        by_label = {str(comp_to_label[c]): int(sizes[c]) for c in range(count)}
        return [(lab, by_label[str(lab)]) for lab in table_labels]
    if method == "constructive":
        if p <= ORACLE_MAX_PRIME:
            ids = constructive_labels(p)
            counts = np.bincount(ids, minlength=len(table_labels))
            return [(lab, int(counts[i])) for i, lab in enumerate(table_labels)]
        return [(lab, None) for lab in table_labels]
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# twisted congruence with witnesses

@dataclass(frozen=True)
class CongruenceResult:
    equivalent: bool
    witness: Optional[Mat]  # P with B = (1/det P) P^t A P, when computed


def twisted_congruent(A: StructureMatrix, B: StructureMatrix) -> CongruenceResult:
    """Decide equivalence; produce a witness P where feasible.

    Equivalence is decided by canonical form for any supported p.  Witnesses
    come from fast paths (equality, scalar multiples) or, for p <= 5, from
    an orbit search over generator applications.
    """
    if A.p != B.p:
        raise ValueError("matrices live over different primes")
    p = A.p
    ident: Mat = (1, 0, 0, 0, 1, 0, 0, 0, 1)
    if A.entries == B.entries:
        return CongruenceResult(True, ident)
    for lam in range(2, p):
        if B.entries == A.scale(lam).entries:
            # P = (1/lam) I sends A to lam * A
            c = pow(lam, -1, p)
            return CongruenceResult(True, (c, 0, 0, 0, c, 0, 0, 0, c))
    if canonical_form(A) != canonical_form(B):
        return CongruenceResult(False, None)
    if p > ORACLE_MAX_PRIME:
        return CongruenceResult(True, None)
    return CongruenceResult(True, _witness_search(A, B))


def _witness_search(A: StructureMatrix, B: StructureMatrix) -> Mat:
    """BFS over the orbit of A recording generator words."""
    p = A.p
    gens = gl3_generators(p)
    # scalar matrices realize the scalar twists and enrich the search
    gens += [tuple((lam if k in (0, 4, 8) else 0) for k in range(9)) for lam in range(2, p)]
    start = matrix_index(A)
    target = matrix_index(B)
    ident: Mat = (1, 0, 0, 0, 1, 0, 0, 0, 1)
    witness = {start: ident}
    frontier = [start]
    while frontier:
        nxt = []
        for idx in frontier:
            cur = index_matrix(idx, p)
            P0 = witness[idx]
            for g in gens:
                img = apply_twisted(g, cur)
                j = matrix_index(img)
                if j not in witness:
                    # phi_g(phi_P0(A)) = phi_{P0 g}(A)
                    witness[j] = mat_mul(P0, g, p)
                    if j == target:
                        W = witness[j]
                        assert apply_twisted(W, A).entries == B.entries
                        return W
                    nxt.append(j)
        frontier = nxt
    raise AssertionError("canonical forms matched but orbits differ")


# ---------------------------------------------------------------------------
# serialization

def format_matrix(A: StructureMatrix) -> str:
    return f"p={A.p}\n" + " ".join(str(x) for x in A.entries)


def parse_matrix(text: str) -> StructureMatrix:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if len(lines) != 2 or not lines[0].startswith("p="):
        raise ValueError("matrix file must be two lines: 'p=<int>' then 9 integers")
    try:
        p = int(lines[0][2:])
    except ValueError as exc:
        raise ValueError(f"bad prime in header {lines[0]!r}") from exc
    parts = lines[1].split()
    if len(parts) != 9:
        raise ValueError(f"expected 9 entries, got {len(parts)}")
    entries = []
    for k, tok in enumerate(parts):
        try:
            v = int(tok)
        except ValueError as exc:
            raise ValueError(f"field {k + 1}: {tok!r} is not an integer") from exc
        if not 0 <= v < p:
            raise ValueError(f"field {k + 1}: {v} out of range [0, {p})")
        entries.append(v)
    PrimeField(p)
    return StructureMatrix(p, tuple(entries))
