"""Exact integer linear algebra over Z and Z/n.

Everything here works on arbitrary-precision Python ints.  Dense routines
(:func:`snf`, :func:`solve`, :func:`kernel_basis`, :func:`hermite_rows`) are
meant for the small matrices that describe modules and maps; the sparse
:class:`LatticeEchelon` is the workhorse behind the cochain computations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import inf, prod
from typing import Iterable, Sequence

from sympy import factorint

__all__ = [
    "IntMatrix",
    "SNFResult",
    "AbelianInvariants",
    "NoSolution",
    "snf",
    "smith_diagonal",
    "cokernel_invariants",
    "kernel_basis",
    "solve",
    "hermite_rows",
    "xgcd",
    "LatticeEchelon",
    "echelon_invariants",
]


class NoSolution(ArithmeticError):
    """The linear system has no integer solution."""


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


# --------------------------------------------------------------------------
# Matrices


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix stored as a tuple of row tuples."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError(f"entries do not match shape {self.rows}x{self.cols}")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            if not data:
                raise ValueError("cannot infer column count of an empty matrix")
            cols = len(data[0])
        return cls(len(data), cols, data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def diagonal(cls, diag: Sequence[int], rows: int | None = None, cols: int | None = None) -> "IntMatrix":
        rows = len(diag) if rows is None else rows
        cols = len(diag) if cols is None else cols
        return cls(rows, cols, tuple(
            tuple(diag[i] if i == j and i < len(diag) else 0 for j in range(cols)) for i in range(rows)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.entries)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else
                         tuple(() for _ in range(self.cols)))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = list(zip(*other.entries)) if other.rows else [() for _ in range(other.cols)]
        return IntMatrix(self.rows, other.cols, tuple(
            tuple(sum(a * b for a, b in zip(r, c)) for c in ocols) for r in self.entries))

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(self.rows, self.cols, tuple(
            tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(self.rows, self.cols, tuple(
            tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)))

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(tuple(-a for a in r) for r in self.entries))

    def apply(self, vec: Sequence[int]) -> list[int]:
        """Matrix-vector product ``self @ vec``."""
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return [sum(a * b for a, b in zip(r, vec)) for r in self.entries]

    def is_zero(self) -> bool:
        return all(not a for r in self.entries for a in r)

    def is_diagonal(self) -> bool:
        return all(not a for i, r in enumerate(self.entries) for j, a in enumerate(r) if i != j)

    def diag(self) -> list[int]:
        return [self.entries[i][i] for i in range(min(self.rows, self.cols))]

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return IntMatrix(self.rows, self.cols + other.cols,
                         tuple(a + b for a, b in zip(self.entries, other.entries)))

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.cols:
            raise ValueError("column count mismatch")
        return IntMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = self.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1


# --------------------------------------------------------------------------
# Abelian groups


@dataclass(frozen=True, order=True)
class AbelianInvariants:
    """Isomorphism class of a finitely generated abelian group.

    ``factors`` is the invariant-factor chain d1 | d2 | ... with every
    d >= 2; ``free_rank`` counts the Z summands.
    """

    factors: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        f = tuple(int(d) for d in self.factors)
        object.__setattr__(self, "factors", f)
        if any(d < 2 for d in f):
            raise ValueError(f"invariant factors must be >= 2, got {f}")
        if any(f[i + 1] % f[i] for i in range(len(f) - 1)):
            raise ValueError(f"invariant factors must form a divisibility chain, got {f}")
        if self.free_rank < 0:
            raise ValueError("negative free rank")

    @classmethod
    def from_diagonal(cls, diag: Iterable[int], free_rank: int = 0) -> "AbelianInvariants":
        """Normalize an arbitrary list of cyclic orders (0 means Z) to invariant factors."""
        zeros = 0
        primes: dict[int, list[int]] = {}
        for d in diag:
            d = abs(int(d))
            if d == 0:
                zeros += 1
            elif d > 1:
                for p, e in factorint(d).items():
                    primes.setdefault(p, []).append(p ** e)
        width = max((len(v) for v in primes.values()), default=0)
        factors = [1] * width
        for pows in primes.values():
            pows.sort()
            for i, q in enumerate(pows):
                factors[width - len(pows) + i] *= q
        return cls(tuple(factors), free_rank + zeros)

    @classmethod
    def cyclic(cls, n: int) -> "AbelianInvariants":
        return cls.from_diagonal([n])

    @property
    def is_trivial(self) -> bool:
        return not self.factors and not self.free_rank

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int | float:
        """Number of elements; ``math.inf`` when there is a free part."""
        return inf if self.free_rank else prod(self.factors)

    @property
    def exponent(self) -> int:
        """Exponent of a finite group (0 for an infinite one)."""
        if self.free_rank:
            return 0
        return self.factors[-1] if self.factors else 1

    def killed_by(self, n: int) -> bool:
        return self.is_finite and n % self.exponent == 0

    def elementary_divisors(self) -> list[int]:
        out = []
        for d in self.factors:
            out.extend(p ** e for p, e in factorint(d).items())
        return sorted(out)

    def __add__(self, other: "AbelianInvariants") -> "AbelianInvariants":
        """Direct sum."""
        return AbelianInvariants.from_diagonal(self.factors + other.factors,
                                               self.free_rank + other.free_rank)

    def to_list(self) -> list[int]:
        return list(self.factors) + [0] * self.free_rank

    @classmethod
    def from_list(cls, values: Iterable[int]) -> "AbelianInvariants":
        return cls.from_diagonal(values)

    def __str__(self) -> str:
        return "[" + ",".join(str(d) for d in self.to_list()) + "]"


# --------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SNFResult:
    """``U @ M @ V == S`` with U, V unimodular and S in Smith form."""

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix
    Uinv: IntMatrix = field(repr=False, compare=False, default=None)
    Vinv: IntMatrix = field(repr=False, compare=False, default=None)

    @property
    def diagonal(self) -> list[int]:
        return self.S.diag()

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def _eye(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


class _Smith:
    """Dense Smith reduction with optional transform tracking."""

    def __init__(self, a: list[list[int]], m: int, n: int, track: bool):
        self.a, self.m, self.n, self.track = a, m, n, track
        if track:
            self.U, self.Uinv = _eye(m), _eye(m)
            self.V, self.Vinv = _eye(n), _eye(n)

    # row operations: U <- E U, Uinv <- Uinv E^-1
    def swap_rows(self, i, j):
        if i == j:
            return
        a = self.a
        a[i], a[j] = a[j], a[i]
        if self.track:
            self.U[i], self.U[j] = self.U[j], self.U[i]
            for r in self.Uinv:
                r[i], r[j] = r[j], r[i]

    def add_row(self, i, j, q):
        """row_i += q * row_j"""
        a = self.a
        ri, rj = a[i], a[j]
        for c in range(self.n):
            if rj[c]:
                ri[c] += q * rj[c]
        if self.track:
            ui, uj = self.U[i], self.U[j]
            for c in range(self.m):
                if uj[c]:
                    ui[c] += q * uj[c]
            for r in self.Uinv:
                if r[i]:
                    r[j] -= q * r[i]

    def neg_row(self, i):
        self.a[i] = [-x for x in self.a[i]]
        if self.track:
            self.U[i] = [-x for x in self.U[i]]
            for r in self.Uinv:
                r[i] = -r[i]

    # column operations: V <- V E, Vinv <- E^-1 Vinv
    def swap_cols(self, i, j):
        if i == j:
            return
        for r in self.a:
            r[i], r[j] = r[j], r[i]
        if self.track:
            for r in self.V:
                r[i], r[j] = r[j], r[i]
            self.Vinv[i], self.Vinv[j] = self.Vinv[j], self.Vinv[i]

    def add_col(self, i, j, q):
        """col_i += q * col_j"""
        for r in self.a:
            if r[j]:
                r[i] += q * r[j]
        if self.track:
            for r in self.V:
                if r[j]:
                    r[i] += q * r[j]
            vi, vj = self.Vinv[i], self.Vinv[j]
            for c in range(self.n):
                if vi[c]:
                    vj[c] -= q * vi[c]

    def run(self) -> list[int]:
        a, m, n = self.a, self.m, self.n
        for t in range(min(m, n)):
            # smallest nonzero magnitude in the trailing block; ties go to the lowest row, then column
            best = None
            for i in range(t, m):
                row = a[i]
                for j in range(t, n):
                    x = row[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                break
            self.swap_rows(t, best[1])
            self.swap_cols(t, best[2])
            while True:
                p = a[t][t]
                dirty = False
                for i in range(t + 1, m):
                    if a[i][t]:
                        self.add_row(i, t, -(a[i][t] // p))
                        dirty = dirty or a[i][t] != 0
                for j in range(t + 1, n):
                    if a[t][j]:
                        self.add_col(j, t, -(a[t][j] // p))
                        dirty = dirty or a[t][j] != 0
                if dirty:
                    best = None
                    for i in range(t, m):
                        if a[i][t] and (best is None or abs(a[i][t]) < best[0]):
                            best = (abs(a[i][t]), i, t)
                    for j in range(t + 1, n):
                        if a[t][j] and abs(a[t][j]) < best[0]:
                            best = (abs(a[t][j]), t, j)
                    self.swap_rows(t, best[1])
                    self.swap_cols(t, best[2])
                    continue
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if a[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                self.add_row(t, bad, 1)
            if a[t][t] < 0:
                self.neg_row(t)
        return [a[i][i] for i in range(min(m, n))]


def _as_rows(M) -> tuple[list[list[int]], int, int]:
    if isinstance(M, IntMatrix):
        return M.tolist(), M.rows, M.cols
    rows = [[int(x) for x in r] for r in M]
    return rows, len(rows), (len(rows[0]) if rows else 0)


def snf(M: IntMatrix) -> SNFResult:
    """Smith normal form with unimodular transforms (and their inverses)."""
    a, m, n = _as_rows(M)
    sm = _Smith(a, m, n, track=True)
    sm.run()
    return SNFResult(
        U=IntMatrix(m, m, tuple(map(tuple, sm.U))),
        S=IntMatrix(m, n, tuple(map(tuple, sm.a))),
        V=IntMatrix(n, n, tuple(map(tuple, sm.V))),
        Uinv=IntMatrix(m, m, tuple(map(tuple, sm.Uinv))),
        Vinv=IntMatrix(n, n, tuple(map(tuple, sm.Vinv))),
    )


def smith_diagonal(rows: Sequence[Sequence[int]], ncols: int) -> list[int]:
    """Smith diagonal only (no transforms); length ``min(len(rows), ncols)``."""
    a = [[int(x) for x in r] for r in rows]
    return _Smith(a, len(a), ncols, track=False).run()


def cokernel_invariants(R, ambient_rank: int) -> AbelianInvariants:
    """Invariants of ``Z^ambient_rank / rowspan(R)``."""
    rows, m, n = _as_rows(R)
    if m and n != ambient_rank:
        raise ValueError(f"relation matrix has {n} columns, expected {ambient_rank}")
    ech = LatticeEchelon()
    for r in rows:
        ech.add({j: x for j, x in enumerate(r) if x})
    return echelon_invariants(ech.rows(), ambient_rank)


# --------------------------------------------------------------------------
# Hermite form, kernels and solving


def hermite_rows(vectors: Iterable[Sequence[int]], ncols: int) -> list[list[int]]:
    """Row Hermite normal form of the lattice spanned by ``vectors``.

    Rows are returned in echelon order with positive pivots and the
    entries above each pivot reduced into ``[0, pivot)``.  The result is a
    basis of the lattice and depends only on the lattice.
    """
    ech = LatticeEchelon()
    for v in vectors:
        ech.add({j: int(x) for j, x in enumerate(v) if x})
    rows = [[r.get(j, 0) for j in range(ncols)] for _, r in ech.rows()]
    pivots = [next(j for j, x in enumerate(r) if x) for r in rows]
    for i, (r, c) in enumerate(zip(rows, pivots)):
        if r[c] < 0:
            rows[i] = r = [-x for x in r]
        for k in range(i):
            q = rows[k][c] // r[c]
            if q:
                rows[k] = [x - q * y for x, y in zip(rows[k], r)]
    return rows


def hermite_reduce(vec: Sequence[int], hnf: Sequence[Sequence[int]]) -> list[int]:
    """Reduce ``vec`` modulo the lattice whose Hermite basis is ``hnf``."""
    v = list(vec)
    for r in hnf:
        c = next(j for j, x in enumerate(r) if x)
        q = v[c] // r[c]
        if q:
            v = [x - q * y for x, y in zip(v, r)]
    return v


def kernel_basis(M: IntMatrix) -> IntMatrix:
    """Columns form a Z-basis of ``{x : M x = 0}``, in Hermite-reduced form."""
    res = snf(M)
    r = res.rank
    n = M.cols
    vecs = [list(res.V.col(j)) for j in range(r, n)]
    basis = hermite_rows(vecs, n)
    return IntMatrix(n, len(basis), tuple(zip(*basis)) if basis else tuple(() for _ in range(n)))


def solve(M: IntMatrix, b: Sequence[int], moduli: Sequence[int] | None = None) -> list[int]:
    """Solve ``M x == b`` (row i taken mod ``moduli[i]``; 0 means exact).

    Returns the Hermite-reduced representative of the solution coset, so
    the answer is a function of the system alone.  Raises
    :class:`NoSolution` when the system is inconsistent.
    """
    m, n = M.shape
    if len(b) != m:
        raise ValueError(f"right-hand side has length {len(b)}, expected {m}")
    if moduli is None:
        moduli = [0] * m
    if len(moduli) != m:
        raise ValueError("need one modulus per row")
    extra = [i for i, q in enumerate(moduli) if q]
    rows = [list(M.row(i)) + [(-moduli[i] if i == k else 0) for k in extra] for i in range(m)]
    N = n + len(extra)
    sm = _Smith(rows, m, N, track=True)
    diag = sm.run()
    c = [sum(u * x for u, x in zip(urow, b)) for urow in sm.U]
    z = [0] * N
    for i in range(m):
        d = diag[i] if i < len(diag) else 0
        if d:
            if c[i] % d:
                raise NoSolution("system is inconsistent")
            z[i] = c[i] // d
        elif c[i]:
            raise NoSolution("system is inconsistent")
    x = [sum(v * zz for v, zz in zip(sm.V[i], z)) for i in range(n)]
    rank = sum(1 for d in diag if d)
    homog = [[sm.V[i][j] for i in range(n)] for j in range(rank, N)]
    return hermite_reduce(x, hermite_rows(homog, n))


# --------------------------------------------------------------------------
# Sparse lattice echelon


class LatticeEchelon:
    """Incrementally maintained row-echelon basis of a sublattice of Z^N.

    Rows are sparse ``{column: value}`` dicts, one per pivot column.
    ``reducers`` maps a column c to m > 0 when m * e_c is known to lie in
    the lattice; entries in such columns are kept reduced mod m, which
    bounds coefficient growth.  The caller must make sure those vectors are
    in the lattice (typically by adding them).
    """

    def __init__(self, reducers: dict[int, int] | None = None):
        self.pivots: dict[int, dict[int, int]] = {}
        self.reducers = reducers or {}

    def _reduce_entries(self, v: dict[int, int], keep: int = -1) -> dict[int, int]:
        red = self.reducers
        if not red:
            return v
        out = {}
        for c, x in v.items():
            m = red.get(c)
            if m and c != keep:
                x %= m
                if 2 * x > m:
                    x -= m
            if x:
                out[c] = x
        return out

    @staticmethod
    def _axpy(v: dict[int, int], q: int, w: dict[int, int]) -> None:
        """v += q*w in place."""
        for c, x in w.items():
            y = v.get(c, 0) + q * x
            if y:
                v[c] = y
            else:
                v.pop(c, None)

    def add(self, vec: dict[int, int]) -> None:
        pending = [vec]
        piv = self.pivots
        while pending:
            v = self._reduce_entries(dict(pending.pop()))
            while v:
                c = min(v)
                p = piv.get(c)
                if p is None:
                    if v[c] < 0:
                        v = {k: -x for k, x in v.items()}
                    piv[c] = v
                    self._close(c, pending)
                    break
                a, b = p[c], v[c]
                if b % a == 0:
                    self._axpy(v, -(b // a), p)
                    v = self._reduce_entries(v)
                    continue
                if a % b == 0:
                    # the incoming vector has the smaller leading entry: swap roles
                    if b < 0:
                        v = {k: -x for k, x in v.items()}
                    piv[c], v = v, dict(p)
                    self._close(c, pending)
                    continue
                g, s, t = xgcd(a, b)
                ag, bg = a // g, b // g
                new, rest = {}, {}
                for k in p.keys() | v.keys():
                    x, y = p.get(k, 0), v.get(k, 0)
                    z = s * x + t * y
                    if z:
                        new[k] = z
                    z = bg * x - ag * y
                    if z:
                        rest[k] = z
                piv[c] = self._reduce_entries(new, keep=c)
                self._close(c, pending)
                v = self._reduce_entries(rest)

    def _close(self, c: int, pending: list) -> None:
        """Howell closure at a reduced column c.

        With m * e_c in the lattice and pivot entry a, the pivot is replaced
        by one with entry gcd(a, m), and the vector (m/g) * pivot with its
        leading entry removed is queued.  Afterwards the rows with pivot at
        or beyond any column, together with the reducer vectors there, span
        every lattice vector vanishing before that column.
        """
        m = self.reducers.get(c)
        if not m:
            return
        p = self.pivots[c]
        a = p[c]
        g, s, _ = xgcd(a, m)
        if g != a:
            new = {k: s * x for k, x in p.items()}
            new[c] = g
            self.pivots[c] = self._reduce_entries(new, keep=c)
        tail = {k: (m // g) * x for k, x in p.items() if k != c}
        if tail:
            pending.append(tail)

    def rows(self) -> list[tuple[int, dict[int, int]]]:
        return sorted(self.pivots.items())

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def coordinates(self, vec: dict[int, int], modular: bool = False) -> dict[int, int] | None:
        """Express ``vec`` in the current rows, keyed by pivot column.

        Returns None when ``vec`` is not in the lattice.  With ``modular``
        the answer is only up to the reducer vectors: entries are reduced by
        the reducers as the back-substitution proceeds.  Without it, entries
        are taken literally.
        """
        v = dict(vec)
        if modular:
            v = self._reduce_entries(v)
        coords = {}
        piv = self.pivots
        red = self.reducers if modular else {}
        while v:
            c = min(v)
            p = piv.get(c)
            if p is None or v[c] % p[c]:
                m = red.get(c)
                if m and v[c] % m == 0:
                    del v[c]
                    continue
                return None
            q = v[c] // p[c]
            coords[c] = q
            self._axpy(v, -q, p)
            if modular:
                v = self._reduce_entries(v)
        return coords


def echelon_invariants(rows: list[tuple[int, dict[int, int]]], ncols: int,
                       modulus: int = 0) -> AbelianInvariants:
    """Invariants of ``Z^ncols / L`` for ``L`` given by an echelon basis.

    Unit pivots are eliminated sparsely (back to front); whatever is left
    goes through the dense Smith routine.  ``modulus`` > 0 asserts that
    ``modulus * Z^ncols`` lies in ``L`` so entries may be reduced by it.
    """
    live = {c: dict(r) for c, r in rows}
    # column -> set of pivot columns of rows with a nonzero entry there
    colrows: dict[int, set[int]] = {}
    for c, r in live.items():
        for k in r:
            colrows.setdefault(k, set()).add(c)
    removed_cols = set()
    for c in sorted(live, reverse=True):
        r = live[c]
        if abs(r[c]) != 1:
            continue
        u = r[c]
        for k in sorted(colrows.get(c, ())):
            if k == c:
                continue
            other = live[k]
            q = other.get(c, 0) * u
            if not q:
                continue
            for col, x in r.items():
                y = other.get(col, 0) - q * x
                if modulus:
                    y %= modulus
                    if 2 * y > modulus:
                        y -= modulus
                if y:
                    if col not in other:
                        colrows.setdefault(col, set()).add(k)
                    other[col] = y
                else:
                    if col in other:
                        del other[col]
                        colrows[col].discard(k)
        for col in r:
            colrows[col].discard(c)
        del live[c]
        removed_cols.add(c)
    touched = set()
    for r in live.values():
        touched.update(r)
    keep_cols = sorted(touched)
    # columns no remaining row touches split off as Z/modulus (or Z) summands
    untouched = ncols - len(removed_cols) - len(keep_cols)
    index = {j: i for i, j in enumerate(keep_cols)}
    dense = []
    for c in sorted(live):
        row = [0] * len(keep_cols)
        for k, x in live[c].items():
            row[index[k]] = x
        dense.append(row)
    extra = []
    if modulus:
        extra = [[modulus if i == j else 0 for j in range(len(keep_cols))] for i in range(len(keep_cols))]
    diag = smith_diagonal(dense + extra, len(keep_cols))
    rank = sum(1 for d in diag if d)
    diag = [d for d in diag if d]
    if modulus:
        return AbelianInvariants.from_diagonal(diag + [modulus] * untouched)
    return AbelianInvariants.from_diagonal(diag, len(keep_cols) - rank + untouched)


def _local_pivot_valuations(vectors: Iterable[dict[int, int]], p: int, a: int) -> list[int]:
    """Smith valuations of the row span over Z/p^a (entries 0 mod p^a dropped).

    Sparse elimination over a local ring: a pivot of minimal valuation
    divides every other entry up to a unit, so clearing its column by row
    operations leaves a row whose remaining entries can be cleared by
    column operations without touching anything else.
    """
    q = p ** a
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for i, vec in enumerate(vectors):
        r = {c: x % q for c, x in vec.items() if x % q}
        if r:
            rows[i] = r
            for c in r:
                cols.setdefault(c, set()).add(i)
    vals = []
    for v in range(a):
        pv, step = p ** v, p ** (v + 1)
        while rows:
            best = None
            for i, r in rows.items():
                if best is not None and len(r) >= best[0]:
                    continue
                hit = None
                for c, x in r.items():
                    if x % step:
                        if hit is None or len(cols[c]) < len(cols[hit]):
                            hit = c
                if hit is not None:
                    best = (len(r), i, hit)
            if best is None:
                break
            _, i, c = best
            prow = rows.pop(i)
            for col in prow:
                cols[col].discard(i)
            inv_u = pow(prow[c] // pv, -1, q)
            for k in list(cols[c]):
                r = rows[k]
                t = (r[c] // pv) * inv_u % q
                for col, x in prow.items():
                    y = (r.get(col, 0) - t * x) % q
                    if y:
                        if col not in r:
                            cols.setdefault(col, set()).add(k)
                        r[col] = y
                    elif col in r:
                        del r[col]
                        cols[col].discard(k)
                if not r:
                    del rows[k]
            vals.append(v)
    return vals


def modular_invariants(vectors: Iterable[dict[int, int]], ncols: int, modulus: int) -> AbelianInvariants:
    """Invariants of ``Z^ncols / (span(vectors) + modulus * Z^ncols)``."""
    if modulus < 1:
        raise ValueError("modulus must be positive")
    vectors = list(vectors)
    elementary = []
    for p, a in factorint(modulus).items():
        vals = _local_pivot_valuations(vectors, p, a)
        elementary += [p ** v for v in vals if v]
        elementary += [p ** a] * (ncols - len(vals))
    return AbelianInvariants.from_diagonal(elementary)
