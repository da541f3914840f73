"""Coxeter data, the bilinear form and reflection matrices.

All vectors are coefficient tuples over the simple roots, which form a
basis of the coordinate space, so the positivity condition (C2) of a root
basis holds automatically and canonical coefficients are literal entries.

Generator indices are 0-based in the Python API; the datum file format and
the CLI use 1-based indices.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

from .errors import C1Violation, DimensionMismatch, IndexOutOfRange, InvalidBond, ParseError
from .scalar import DEFAULT_EPS, FloatArithmetic, Ordering, make_arithmetic

INF = math.inf
MAX_FINITE_LABEL = 1000


@dataclass(frozen=True, eq=False)
class CoxeterDatum:
    rank: int
    bonds: dict  # (i, j) with i < j -> int label or INF; unlisted pairs commute (m = 2)
    gram: tuple
    arithmetic: object = field(default_factory=FloatArithmetic)
    infinity_values: dict = field(default_factory=dict)

    @classmethod
    def from_bonds(cls, rank, bonds=None, backend="float", eps=DEFAULT_EPS, infinity_values=None):
        """Build a datum from 0-based bond labels.

        ``bonds`` maps pairs ``(i, j)`` to an integer label ``m >= 2`` or
        ``math.inf``; ``infinity_values`` optionally gives the form value
        (<= -1) on infinite bonds, default -1.
        """
        arith = make_arithmetic(backend, eps)
        if rank < 1:
            raise InvalidBond("rank must be positive")
        labels = {}
        for (i, j), m in (bonds or {}).items():
            if i == j or not (0 <= i < rank and 0 <= j < rank):
                raise IndexOutOfRange(f"bond ({i}, {j}) out of range for rank {rank}")
            key = (min(i, j), max(i, j))
            if m != INF:
                if int(m) != m or m < 2:
                    raise InvalidBond(f"bond {key}: label must be an integer >= 2 or inf, got {m}")
                m = int(m)
            labels[key] = m
        inf_vals = {}
        for (i, j), value in (infinity_values or {}).items():
            key = (min(i, j), max(i, j))
            if labels.get(key) != INF:
                raise InvalidBond(f"bond ({key[0] + 1}, {key[1] + 1}): form value given for a finite bond")
            value = arith.scalar(value)
            if arith.compare(value, arith.scalar(-1)) == Ordering.GREATER:
                raise InvalidBond(f"bond ({key[0] + 1}, {key[1] + 1}): value {value} on an infinite bond must be <= -1")
            inf_vals[key] = value

        one, zero = arith.scalar(1), arith.scalar(0)
        rows = [[zero] * rank for _ in range(rank)]
        for i in range(rank):
            rows[i][i] = one
        for (i, j), m in labels.items():
            if m == INF:
                value = inf_vals.get((i, j), arith.scalar(-1))
            else:
                value = -arith.cos_pi_over(m)
            rows[i][j] = rows[j][i] = value
        gram = tuple(tuple(r) for r in rows)
        return cls(rank, labels, gram, arith, inf_vals)

    @classmethod
    def from_gram(cls, gram, backend="float", eps=DEFAULT_EPS):
        """Wrap an explicit Gram matrix; bond labels are inferred where possible.

        No validation happens here -- call :func:`validate_datum`.
        """
        arith = make_arithmetic(backend, eps)
        rank = len(gram)
        g = tuple(tuple(arith.scalar(v) for v in row) for row in gram)
        labels = {}
        inf_vals = {}
        for i in range(rank):
            for j in range(i + 1, rank):
                m = _infer_label(arith, g[i][j])
                if m is None:
                    continue
                if m != 2:
                    labels[(i, j)] = m
                if m == INF:
                    inf_vals[(i, j)] = g[i][j]
        return cls(rank, labels, g, arith, inf_vals)

    def label(self, i, j):
        if i == j:
            return 1
        return self.bonds.get((min(i, j), max(i, j)), 2)

    def simple_root(self, i):
        zero, one = self.arithmetic.scalar(0), self.arithmetic.scalar(1)
        return tuple(one if k == i else zero for k in range(self.rank))

    def zero_vector(self):
        return (self.arithmetic.scalar(0),) * self.rank

    def to_text(self):
        """Canonical datum-file rendering (1-based indices)."""
        lines = [f"rank {self.rank}"]
        for (i, j) in sorted(self.bonds):
            m = self.bonds[(i, j)]
            if m == INF:
                value = self.infinity_values.get((i, j))
                if value is None:
                    lines.append(f"bond {i + 1} {j + 1} inf")
                else:
                    lines.append(f"bond {i + 1} {j + 1} inf {self.arithmetic.export(value)}")
            else:
                lines.append(f"bond {i + 1} {j + 1} {m}")
        return "\n".join(lines) + "\n"

    def fingerprint(self):
        text = f"backend={self.arithmetic.name}\n" + self.to_text()
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    @property
    def is_finite_form(self):
        """True if the form is positive definite, i.e. the group is finite."""
        g = [[self.arithmetic.to_float(v) for v in row] for row in self.gram]
        # Cholesky-style test on leading minors
        n = self.rank
        a = [row[:] for row in g]
        for k in range(n):
            pivot = a[k][k]
            if pivot <= 1e-12:
                return False
            for i in range(k + 1, n):
                f = a[i][k] / pivot
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
        return True


def _infer_label(arith, value):
    if arith.compare(value, arith.scalar(-1)) != Ordering.GREATER:
        return INF
    for m in range(2, MAX_FINITE_LABEL + 1):
        try:
            c = arith.cos_pi_over(m)
        except Exception:
            continue
        if arith.compare(value, -c) == Ordering.EQUAL:
            return m
    return None


def load_datum(text: str, backend: str = "float", eps: float = DEFAULT_EPS) -> CoxeterDatum:
    """Parse the line-oriented datum format.

    ``rank N`` on the first significant line, then ``bond i j m`` lines with
    1-based indices, ``m`` an integer >= 2 or ``inf`` optionally followed by
    the form value (<= -1). ``#`` starts a comment.
    """
    rank = None
    bonds = {}
    inf_values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if rank is None:
            if parts[0] != "rank" or len(parts) != 2:
                raise ParseError("expected 'rank N' as the first statement", lineno)
            try:
                rank = int(parts[1])
            except ValueError:
                raise ParseError(f"bad rank {parts[1]!r}", lineno) from None
            if rank < 1:
                raise ParseError("rank must be positive", lineno)
            continue
        if parts[0] != "bond" or len(parts) not in (4, 5):
            raise ParseError(f"expected 'bond i j m [value]', got {line!r}", lineno)
        try:
            i, j = int(parts[1]) - 1, int(parts[2]) - 1
        except ValueError:
            raise ParseError("bond indices must be integers", lineno) from None
        if i == j or not (0 <= i < rank and 0 <= j < rank):
            raise ParseError(f"bond indices {parts[1]} {parts[2]} out of range 1..{rank}", lineno)
        key = (min(i, j), max(i, j))
        if parts[3] == "inf":
            m = INF
        else:
            try:
                m = int(parts[3])
            except ValueError:
                raise ParseError(f"bad bond label {parts[3]!r}", lineno) from None
            if m < 2:
                raise InvalidBond(f"line {lineno}: bond label must be >= 2, got {m}")
        if len(parts) == 5:
            if m != INF:
                raise ParseError("a form value is only allowed on an inf bond", lineno)
            try:
                value = parts[4]
                float(value.split("/")[0])
            except ValueError:
                raise ParseError(f"bad form value {parts[4]!r}", lineno) from None
            inf_values[key] = value
        if key in bonds and bonds[key] != m:
            raise ParseError(f"conflicting labels for bond {parts[1]} {parts[2]}", lineno)
        bonds[key] = m
    if rank is None:
        raise ParseError("empty datum: missing 'rank N'")
    datum = CoxeterDatum.from_bonds(rank, bonds, backend=backend, eps=eps, infinity_values=inf_values)
    validate_datum(datum)
    return datum


def load_datum_file(path, backend="float", eps=DEFAULT_EPS) -> CoxeterDatum:
    with open(path, encoding="utf-8") as fh:
        return load_datum(fh.read(), backend=backend, eps=eps)


def validate_datum(d: CoxeterDatum) -> dict:
    arith = d.arithmetic
    one = arith.scalar(1)
    if len(d.gram) != d.rank or any(len(row) != d.rank for row in d.gram):
        raise DimensionMismatch("Gram matrix shape does not match the rank")
    for i in range(d.rank):
        if arith.compare(d.gram[i][i], one) != Ordering.EQUAL:
            raise C1Violation(f"gram[{i + 1}][{i + 1}] = {d.gram[i][i]} != 1", pair=(i, i))
    for i in range(d.rank):
        for j in range(i + 1, d.rank):
            v = d.gram[i][j]
            if arith.compare(v, d.gram[j][i]) != Ordering.EQUAL:
                raise C1Violation(f"Gram matrix not symmetric at ({i + 1}, {j + 1})", pair=(i, j))
            m = d.label(i, j)
            if m == INF:
                ok = arith.compare(v, -one) != Ordering.GREATER
            else:
                ok = arith.compare(v, -arith.cos_pi_over(m)) == Ordering.EQUAL
            if not ok:
                raise C1Violation(
                    f"form value {v} on bond ({i + 1}, {j + 1}) does not match label {m}", pair=(i, j)
                )
    return {
        "valid": True,
        "rank": d.rank,
        "backend": arith.name,
        "C1": "holds",
        "C2": "holds by construction: simple roots are a basis of the coordinate space",
        "finite_group": d.is_finite_form,
    }


def _check_dim(d, *vectors):
    for v in vectors:
        if len(v) != d.rank:
            raise DimensionMismatch(f"vector of length {len(v)} for rank {d.rank}")


def bilinear(d: CoxeterDatum, u, v):
    _check_dim(d, u, v)
    g = d.gram
    total = d.arithmetic.scalar(0)
    for i, ui in enumerate(u):
        if ui:
            row = g[i]
            total += ui * sum(row[j] * vj for j, vj in enumerate(v) if vj)
    return total


def pairings(d: CoxeterDatum, v):
    """(v, alpha_a) for every simple root, as a tuple."""
    _check_dim(d, v)
    zero = d.arithmetic.scalar(0)
    return tuple(sum((row[j] * vj for j, vj in enumerate(v) if vj), zero) for row in d.gram)


def reflect_simple(d: CoxeterDatum, v, a: int):
    """r_a v = v - 2 (v, alpha_a) alpha_a; only coordinate ``a`` changes."""
    row = d.gram[a]
    p = sum(row[j] * vj for j, vj in enumerate(v) if vj)
    out = list(v)
    out[a] = v[a] - 2 * p
    return tuple(out)


def reflect(d: CoxeterDatum, v, x):
    """r_x v = v - 2 (v, x) x for an arbitrary root ``x``."""
    c = 2 * bilinear(d, v, x)
    return tuple(vi - c * xi for vi, xi in zip(v, x))


def reflection_matrix(d: CoxeterDatum, a: int):
    if not 0 <= a < d.rank:
        raise IndexOutOfRange(f"generator {a} out of range 0..{d.rank - 1}")
    one, zero = d.arithmetic.scalar(1), d.arithmetic.scalar(0)
    rows = []
    for i in range(d.rank):
        row = []
        for j in range(d.rank):
            e = one if i == j else zero
            if i == a:
                e = e - 2 * d.gram[a][j]
            row.append(e)
        rows.append(tuple(row))
    return tuple(rows)


def root_reflection_matrix(d: CoxeterDatum, x):
    """Matrix of r_x for a root x: identity minus 2 x (Gx)^T."""
    gx = pairings(d, x)
    one, zero = d.arithmetic.scalar(1), d.arithmetic.scalar(0)
    return tuple(
        tuple((one if i == j else zero) - 2 * x[i] * gx[j] for j in range(d.rank)) for i in range(d.rank)
    )


def identity_matrix(d: CoxeterDatum):
    cached = d.__dict__.get("_identity")
    if cached is None:
        one, zero = d.arithmetic.scalar(1), d.arithmetic.scalar(0)
        cached = tuple(tuple(one if i == j else zero for j in range(d.rank)) for i in range(d.rank))
        object.__setattr__(d, "_identity", cached)  # the datum is frozen; the matrix is immutable
    return cached


def mat_vec(m, v):
    return tuple(sum(mij * vj for mij, vj in zip(row, v)) for row in m)


def mul_simple(d: CoxeterDatum, m, a: int):
    """m r_a, touching only what r_a changes: row i gains -2 m[i][a] G[a]."""
    g = d.gram[a]
    out = []
    for row in m:
        c = 2 * row[a]
        out.append(tuple(mij - c * gj for mij, gj in zip(row, g)) if c else row)
    return tuple(out)


def mat_mul(a, b):
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def matrices_equal(arith, a, b) -> bool:
    return all(arith.vectors_equal(ra, rb) for ra, rb in zip(a, b))


def chain_coefficient(theta: float, i: int) -> float:
    """sinh(i theta) / sinh(theta), or ``i`` when theta = 0."""
    if abs(theta) <= DEFAULT_EPS:
        return float(i)
    return math.sinh(i * theta) / math.sinh(theta)


def chain_coefficients(cosh_theta, count: int, arithmetic=None):
    """c_0 .. c_{count-1} via c_{i+1} = 2 cosh(theta) c_i - c_{i-1}.

    Exact whenever ``cosh_theta`` is (e.g. a Fraction).
    """
    arith = arithmetic or FloatArithmetic()
    c = [arith.scalar(0), arith.scalar(1)]
    two_ch = 2 * cosh_theta
    while len(c) < count:
        c.append(two_ch * c[-1] - c[-2])
    return c[:count]


def vector_sign(arith, v) -> int:
    """+1 if all coefficients are >= 0 (and one is > 0), -1 for the mirror
    case, 0 for zero or mixed-sign vectors."""
    pos = neg = False
    for c in v:
        s = arith.sign(c)
        if s > 0:
            pos = True
        elif s < 0:
            neg = True
    if pos and not neg:
        return 1
    if neg and not pos:
        return -1
    return 0


def negate(v):
    return tuple(-c for c in v)
