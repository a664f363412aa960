"""Exact linear algebra over F2.

Vectors are bit-packed integers with coordinate 1 stored in the least
significant bit.  Affine constraint systems  <x, a_i> = s_i  are kept in
reduced row echelon form: all rows nonzero, strictly increasing pivot
columns, pivot columns cleared in every other row.  This gives each
nonempty affine subspace of F2^n a unique representative, which the
enumeration, memoization and witness machinery elsewhere relies on.

Inconsistent systems are never represented as values; ``rref`` returns the
``INCONSISTENT`` sentinel instead.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Iterator

MAX_ENUM_AMBIENT = 16


class WidthMismatchError(ValueError):
    """Operands do not share an ambient dimension."""


class Inconsistent:
    """Sentinel for contradictory constraint systems (empty solution set)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Inconsistent"

    def __bool__(self) -> bool:
        return False


INCONSISTENT = Inconsistent()


def _lowbit_index(x: int) -> int:
    """1-based index of the least significant set bit of a nonzero int."""
    return (x & -x).bit_length()


@dataclass(frozen=True)
class F2Vector:
    """A vector in F2^width, bit-packed with coordinate 1 as the LSB."""

    width: int
    bits: int

    def __post_init__(self):
        if self.width < 1:
            raise ValueError(f"width must be >= 1, got {self.width}")
        if not 0 <= self.bits < (1 << self.width):
            raise ValueError(f"bits 0x{self.bits:x} out of range for width {self.width}")

    @classmethod
    def from_coords(cls, width: int, coords: Iterable[int]) -> "F2Vector":
        bits = 0
        for c in coords:
            if not 1 <= c <= width:
                raise ValueError(f"coordinate {c} outside 1..{width}")
            bits |= 1 << (c - 1)
        return cls(width, bits)

    @classmethod
    def from_string(cls, s: str) -> "F2Vector":
        """Parse '1010' style strings, coordinate 1 leftmost."""
        if not s or set(s) - {"0", "1"}:
            raise ValueError(f"not a bit string: {s!r}")
        bits = sum(1 << i for i, ch in enumerate(s) if ch == "1")
        return cls(len(s), bits)

    @classmethod
    def basis(cls, width: int, i: int) -> "F2Vector":
        return cls.from_coords(width, [i])

    @classmethod
    def zero(cls, width: int) -> "F2Vector":
        return cls(width, 0)

    def coord(self, i: int) -> int:
        if not 1 <= i <= self.width:
            raise ValueError(f"coordinate {i} outside 1..{self.width}")
        return (self.bits >> (i - 1)) & 1

    def dot(self, other: "F2Vector") -> int:
        if self.width != other.width:
            raise WidthMismatchError(f"widths {self.width} != {other.width}")
        return (self.bits & other.bits).bit_count() & 1

    def support(self) -> tuple[int, ...]:
        return tuple(i for i in range(1, self.width + 1) if (self.bits >> (i - 1)) & 1)

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def __xor__(self, other: "F2Vector") -> "F2Vector":
        if self.width != other.width:
            raise WidthMismatchError(f"widths {self.width} != {other.width}")
        return F2Vector(self.width, self.bits ^ other.bits)

    def __str__(self) -> str:
        return "".join(str((self.bits >> i) & 1) for i in range(self.width))

    def __repr__(self) -> str:
        return f"F2Vector({str(self)!r})"


@dataclass(frozen=True)
class AffineSystem:
    """A consistent system <x, a_i> = s_i over F2^ambient.

    When ``canonical`` is true the rows are in reduced row echelon form and
    the system is the unique representative of its solution set.
    """

    ambient: int
    rows: tuple[F2Vector, ...]
    rhs: tuple[int, ...]
    canonical: bool = False

    def __post_init__(self):
        if self.ambient < 1:
            raise ValueError("ambient must be >= 1")
        if len(self.rows) != len(self.rhs):
            raise ValueError("rows and rhs length differ")
        for r in self.rows:
            if r.width != self.ambient:
                raise WidthMismatchError(f"row width {r.width} != ambient {self.ambient}")

    @property
    def codim(self) -> int:
        return len(self.rows)

    @property
    def is_empty(self) -> bool:
        return not self.rows

    def pivots(self) -> tuple[int, ...]:
        """Pivot columns (1-based), meaningful for canonical systems."""
        return tuple(_lowbit_index(r.bits) for r in self.rows)

    def free_columns(self) -> tuple[int, ...]:
        piv = set(self.pivots())
        return tuple(c for c in range(1, self.ambient + 1) if c not in piv)

    def contains(self, x: F2Vector) -> int:
        if x.width != self.ambient:
            raise WidthMismatchError(f"point width {x.width} != ambient {self.ambient}")
        return int(all(r.dot(x) == s for r, s in zip(self.rows, self.rhs)))

    def key(self) -> tuple:
        """Hashable canonical serialization, used as a memoization key."""
        return (self.ambient, tuple(r.bits for r in self.rows), tuple(self.rhs))

    def point_indices(self) -> list[int]:
        """Table indices of every point, ascending; requires canonical form."""
        if not self.canonical:
            raise ValueError("point enumeration requires a canonical system")
        free = self.free_columns()
        piv = self.pivots()
        out = []
        for y in range(1 << len(free)):
            idx = 0
            for j, c in enumerate(free):
                if (y >> j) & 1:
                    idx |= 1 << (c - 1)
            for p, row, s in zip(piv, self.rows, self.rhs):
                # rows are zero at every other pivot column, so this dot
                # product only sees the free part of the row
                bit = s ^ ((row.bits & idx).bit_count() & 1)
                idx |= bit << (p - 1)
            out.append(idx)
        return sorted(out)

    def point_mask(self) -> int:
        """Solution set as a bitmask over table indices (bit i = point i)."""
        mask = 0
        for idx in self.point_indices():
            mask |= 1 << idx
        return mask

    def with_constraint(self, beta: F2Vector, b: int) -> "AffineSystem | None":
        """Canonical system for this one plus <x, beta> = b.

        Returns None when beta lies in the row span (the extra constraint is
        either redundant or contradictory, never a proper refinement).
        """
        if beta.width != self.ambient:
            raise WidthMismatchError("query width mismatch")
        r, s = beta.bits, int(b) & 1
        piv = {p: i for i, p in enumerate(self.pivots())}
        while r:
            p = _lowbit_index(r)
            if p not in piv:
                break
            i = piv[p]
            r ^= self.rows[i].bits
            s ^= self.rhs[i]
        if r == 0:
            return None
        p = _lowbit_index(r)
        new_rows = []
        new_rhs = []
        for row, rs in zip(self.rows, self.rhs):
            if (row.bits >> (p - 1)) & 1:
                new_rows.append(row.bits ^ r)
                new_rhs.append(rs ^ s)
            else:
                new_rows.append(row.bits)
                new_rhs.append(rs)
        new_rows.append(r)
        new_rhs.append(s)
        order = sorted(range(len(new_rows)), key=lambda i: _lowbit_index(new_rows[i]))
        return AffineSystem(
            self.ambient,
            tuple(F2Vector(self.ambient, new_rows[i]) for i in order),
            tuple(new_rhs[i] for i in order),
            True,
        )

    def to_line(self) -> str:
        rows_s = ",".join(format(r.bits, "x") for r in self.rows) or "-"
        rhs_s = "".join(str(s) for s in self.rhs) or "-"
        return f"n={self.ambient} d={self.codim} rows={rows_s} rhs={rhs_s}"

    _LINE_RE = re.compile(
        r"^n=(\d+) d=(\d+) rows=(-|[0-9a-f]+(?:,[0-9a-f]+)*) rhs=(-|[01]+)$"
    )

    @classmethod
    def from_line(cls, line: str) -> "AffineSystem":
        m = cls._LINE_RE.match(line.strip())
        if not m:
            raise ValueError(f"malformed affine system line: {line!r}")
        n, d = int(m.group(1)), int(m.group(2))
        row_bits = [] if m.group(3) == "-" else [int(t, 16) for t in m.group(3).split(",")]
        rhs = [] if m.group(4) == "-" else [int(ch) for ch in m.group(4)]
        if len(row_bits) != d or len(rhs) != d:
            raise ValueError(f"declared d={d} does not match row/rhs count in {line!r}")
        sys = rref([F2Vector(n, b) for b in row_bits], rhs, ambient=n)
        if sys is INCONSISTENT:
            raise ValueError(f"inconsistent system in line {line!r}")
        if tuple(r.bits for r in sys.rows) != tuple(row_bits) or tuple(sys.rhs) != tuple(rhs):
            raise ValueError(f"system line is not in canonical form: {line!r}")
        return sys


def rref(
    rows: Iterable[F2Vector], rhs: Iterable[int], ambient: int | None = None
) -> AffineSystem | Inconsistent:
    """Reduce an augmented system to canonical RREF.

    ``ambient`` is required when ``rows`` is empty (the empty system over
    F2^n is the full space and cannot infer n from its rows).
    """
    rows = list(rows)
    rhs = [int(b) & 1 for b in rhs]
    if len(rows) != len(rhs):
        raise ValueError("rows and rhs length differ")
    if ambient is None:
        if not rows:
            raise ValueError("ambient required for an empty row list")
        ambient = rows[0].width
    for r in rows:
        if r.width != ambient:
            raise WidthMismatchError(f"row width {r.width} != ambient {ambient}")

    piv: dict[int, tuple[int, int]] = {}
    for vec, b in zip(rows, rhs):
        r, s = vec.bits, b
        while r:
            p = _lowbit_index(r)
            if p not in piv:
                break
            pr, ps = piv[p]
            r ^= pr
            s ^= ps
        if r == 0:
            if s:
                return INCONSISTENT
            continue
        p = _lowbit_index(r)
        for q, (qr, qs) in piv.items():
            if (qr >> (p - 1)) & 1:
                piv[q] = (qr ^ r, qs ^ s)
        piv[p] = (r, s)

    ordered = sorted(piv.items())
    return AffineSystem(
        ambient,
        tuple(F2Vector(ambient, bits) for _, (bits, _) in ordered),
        tuple(s for _, (_, s) in ordered),
        True,
    )


def merge(a: AffineSystem, b: AffineSystem) -> AffineSystem | Inconsistent:
    """Canonical system for the intersection of two solution sets."""
    if a.ambient != b.ambient:
        raise WidthMismatchError("ambient mismatch")
    return rref(a.rows + b.rows, a.rhs + b.rhs, ambient=a.ambient)


def contains(system: AffineSystem, x: F2Vector) -> int:
    return system.contains(x)


def relevant_coordinates(system: AffineSystem) -> set[int]:
    """Coordinates i with some x in H, x + e_i not in H.

    For a canonical system this is exactly the union of row supports: a
    coordinate untouched by every row can be flipped freely, and flipping a
    touched coordinate breaks the row that touches it.
    """
    out: set[int] = set()
    for r in system.rows:
        out.update(r.support())
    return out


def gaussian_binomial(n: int, k: int) -> int:
    """Number of k-dimensional subspaces of F2^n."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= (1 << (n - i)) - 1
        den *= (1 << (k - i)) - 1
    return num // den


def count_systems(n: int, codim: int) -> int:
    """Number of canonical systems (= affine subspaces) of a codimension."""
    return gaussian_binomial(n, codim) << codim


def free_positions(n: int, pivots: tuple[int, ...]) -> list[tuple[int, int]]:
    """Free entry slots of the RREF shape for a pivot set, column-major.

    Position (i, c) is row i (0-based), column c (1-based).  Bit p of a free
    index fills the p-th slot of this list.
    """
    pivset = set(pivots)
    return [
        (i, c)
        for c in range(1, n + 1)
        if c not in pivset
        for i in range(len(pivots))
        if c > pivots[i]
    ]


def rows_for(n: int, pivots: tuple[int, ...], free_index: int) -> list[int]:
    """Row bitmasks of the canonical system for a pivot set and free index."""
    rows = [1 << (p - 1) for p in pivots]
    for bit, (i, c) in enumerate(free_positions(n, pivots)):
        if (free_index >> bit) & 1:
            rows[i] |= 1 << (c - 1)
    return rows


def enumerate_systems(
    n: int, codim: int, pivots: tuple[int, ...] | None = None
) -> Iterator[AffineSystem]:
    """Yield every canonical system of the given codimension exactly once.

    Order: lexicographic on pivot-column sets, then ascending free index
    (column-major slot layout), then ascending rhs.  Passing ``pivots``
    restricts to one pivot set, which is the deterministic unit of work for
    parallel consumers.
    """
    if not 0 <= codim <= n:
        raise ValueError(f"codim {codim} outside 0..{n}")
    if n > MAX_ENUM_AMBIENT:
        raise ValueError(f"enumeration supports ambient <= {MAX_ENUM_AMBIENT}")
    pivot_sets = [pivots] if pivots is not None else list(
        itertools.combinations(range(1, n + 1), codim)
    )
    for pv in pivot_sets:
        nfree = len(free_positions(n, pv))
        for g in range(1 << nfree):
            row_bits = rows_for(n, pv, g)
            rows = tuple(F2Vector(n, b) for b in row_bits)
            for sig in range(1 << codim):
                rhs = tuple((sig >> i) & 1 for i in range(codim))
                yield AffineSystem(n, rows, rhs, True)


@dataclass(frozen=True)
class ProductBasisPartition:
    """Normal form of an affine system over a product space F2^n x F2^k.

    ``left_transform`` / ``right_transform`` are invertible matrices given
    as row tuples acting on points: (Lx)_i = <row_i, x>.  Applying them to
    the input subspace yields exactly the solution set of ``system``, whose
    rows split into ``shared`` pairs (e_i, e_i), ``left_only`` rows (e_j, 0)
    and ``right_only`` rows (0, e_k).
    """

    left_transform: tuple[F2Vector, ...]
    right_transform: tuple[F2Vector, ...]
    shared: int
    left_only: int
    right_only: int
    system: AffineSystem

    @property
    def split(self) -> tuple[int, int]:
        return (len(self.left_transform), len(self.right_transform))

    def transform_point(self, xy: F2Vector) -> F2Vector:
        n, k = self.split
        if xy.width != n + k:
            raise WidthMismatchError("point width mismatch")
        x = F2Vector(n, xy.bits & ((1 << n) - 1))
        y = F2Vector(k, xy.bits >> n)
        xb = sum(row.dot(x) << i for i, row in enumerate(self.left_transform))
        yb = sum(row.dot(y) << i for i, row in enumerate(self.right_transform))
        return F2Vector(n + k, xb | (yb << n))


def _find_dependency(parts: list[tuple[int, int]]) -> frozenset[int] | None:
    """First linear dependency among (index, bits) pairs, scanning in order.

    Returns the index set of rows XOR-ing to zero, or None if independent.
    """
    basis: dict[int, tuple[int, frozenset[int]]] = {}
    for idx, bits in parts:
        v, combo = bits, frozenset([idx])
        while v:
            p = _lowbit_index(v)
            if p not in basis:
                basis[p] = (v, combo)
                break
            bv, bc = basis[p]
            v ^= bv
            combo ^= bc
        if v == 0:
            return combo
    return None


def _complete_rows(rows_bits: list[int], width: int) -> list[int]:
    """Extend independent rows to an invertible matrix's row list.

    Missing rows are filled with standard basis vectors in coordinate
    order, skipping any that fall in the current row span.
    """
    piv: dict[int, int] = {}

    def reduce(v: int) -> int:
        while v:
            p = _lowbit_index(v)
            if p not in piv:
                return v
            v ^= piv[p]
        return 0

    out = list(rows_bits)
    for b in rows_bits:
        r = reduce(b)
        if r == 0:
            raise ValueError("rows are not independent")
        piv[_lowbit_index(r)] = r
    for i in range(width):
        if len(out) == width:
            break
        cand = 1 << i
        r = reduce(cand)
        if r:
            out.append(cand)
            piv[_lowbit_index(r)] = r
    return out


def product_canonicalize(system: AffineSystem, split: tuple[int, int]) -> ProductBasisPartition:
    """Partition a product-space system into shared / left / right rows.

    Row replacements (substituting a row by the XOR of a dependent row set)
    are applied until the nonzero left parts and the nonzero right parts
    are each linearly independent; dependencies are located in row order
    and the latest row with a nonzero opposite part is replaced.  The row
    transforms then map the surviving parts onto standard basis vectors.
    """
    n, k = split
    if n < 1 or k < 1:
        raise ValueError("split dimensions must be >= 1")
    if system.ambient != n + k:
        raise WidthMismatchError(f"ambient {system.ambient} != n+k = {n + k}")
    lmask = (1 << n) - 1
    work = [((r.bits & lmask), (r.bits >> n), s) for r, s in zip(system.rows, system.rhs)]

    for _ in range(2 * len(work) + 2):
        dep = _find_dependency([(i, a) for i, (a, _, _) in enumerate(work) if a])
        side = 0
        if dep is None:
            dep = _find_dependency([(i, b) for i, (_, b, _) in enumerate(work) if b])
            side = 1
        if dep is None:
            break
        candidates = [i for i in sorted(dep) if work[i][1 - side] != 0]
        j = candidates[-1]
        asum = bsum = ssum = 0
        for i in dep:
            asum ^= work[i][0]
            bsum ^= work[i][1]
            ssum ^= work[i][2]
        work[j] = (0, bsum, ssum) if side == 0 else (asum, 0, ssum)
    else:
        raise RuntimeError("replacement loop failed to terminate")

    shared = [i for i, (a, b, _) in enumerate(work) if a and b]
    left = [i for i, (a, b, _) in enumerate(work) if a and not b]
    right = [i for i, (a, b, _) in enumerate(work) if b and not a]
    t = len(shared)

    lrows = [work[i][0] for i in shared + left]
    rrows = [work[i][1] for i in shared + right]
    ltrans = tuple(F2Vector(n, b) for b in _complete_rows(lrows, n))
    rtrans = tuple(F2Vector(k, b) for b in _complete_rows(rrows, k))

    new_rows: list[F2Vector] = []
    new_rhs: list[int] = []
    for q, i in enumerate(shared):
        new_rows.append(F2Vector(n + k, (1 << q) | (1 << (n + q))))
        new_rhs.append(work[i][2])
    for q, i in enumerate(left):
        new_rows.append(F2Vector(n + k, 1 << (t + q)))
        new_rhs.append(work[i][2])
    for q, i in enumerate(right):
        new_rows.append(F2Vector(n + k, 1 << (n + t + q)))
        new_rhs.append(work[i][2])
    out = rref(new_rows, new_rhs, ambient=n + k)
    assert not isinstance(out, Inconsistent)
    return ProductBasisPartition(ltrans, rtrans, t, len(left), len(right), out)
