"""Exact evaluation of the two character sums T and S in Z[zeta_p].

T(alpha, beta) sums zeta_p**Tr(alpha x**(p**k+1) + beta x**2) over the whole
field; S(alpha, beta) adds the twisted companion T(pi**((p**k+1)/2) alpha,
-pi beta).  Every value is computed exactly, either

* directly, as a vector of integer coefficients in the basis
  {1, zeta, ..., zeta**(p-2)} of Z[zeta_p] (no floating point anywhere), or
* through the quadratic-form fast path: diagonalize the Gram matrix, read
  rank r and discriminant character eps, and emit the closed value
  eps * G**r * q**(s-r), where G is the quadratic Gauss sum of GF(q).

The two routes are symbolically different but must agree element-by-element;
the test suite checks this exhaustively on small fields.  Symbolic values
are normal forms (a + b*sqrt(q*)) * p**e with q* = (-1)**((q-1)/2) q, and
sqrt(q*) is pinned to the canonical cyclotomic representative
g_p * p**((d-1)/2) (odd d), so symbolic-vs-direct comparisons are exact.

The module also houses the closed-form value distributions of T and S, the
solution counts E1/E2 of the two overdetermined systems, and the power-sum
identity checks that the S-distribution rests on.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    BudgetExceeded,
    InexactDivision,
    InternalInconsistency,
    NonRationalSum,
    ParameterError,
    UnsupportedCase,
)
from .gf import FiniteField
from .quadforms import (
    Case,
    CodeParams,
    diagonalize,
    discriminant_character,
    gram_matrix,
    twist_pair,
)

DEFAULT_DIRECT_BUDGET = 20_000_000   # p**(3m) terms for direct censuses
DEFAULT_PAIR_BUDGET = 50_000_000     # p**(2m) pairs for fast censuses
DEFAULT_E1_BUDGET = 50_000_000       # (x, y) pairs
DEFAULT_E2_BUDGET = 1_000_000        # (x, y, z) triples (p**m <= 100 or so)


class CyclotomicInteger:
    """An element of Z[zeta_p] in the basis {1, zeta, ..., zeta**(p-2)}.

    The missing power zeta**(p-1) is eliminated through
    1 + zeta + ... + zeta**(p-1) = 0, which makes the representation unique.
    All arithmetic is exact integer arithmetic followed by that reduction.
    """

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs) -> None:
        cs = tuple(int(c) for c in coeffs)
        if len(cs) != p - 1:
            raise ParameterError(f"need {p - 1} coefficients, got {len(cs)}")
        self.p = p
        self.coeffs = cs

    @classmethod
    def zero(cls, p: int) -> CyclotomicInteger:
        return cls(p, (0,) * (p - 1))

    @classmethod
    def from_int(cls, p: int, n: int) -> CyclotomicInteger:
        return cls(p, (n,) + (0,) * (p - 2))

    @classmethod
    def from_counts(cls, p: int, counts) -> CyclotomicInteger:
        """sum counts[j] * zeta**j for j in [0, p)."""
        last = counts[p - 1]
        return cls(p, tuple(counts[j] - last for j in range(p - 1)))

    @classmethod
    def root_power(cls, p: int, j: int) -> CyclotomicInteger:
        counts = [0] * p
        counts[j % p] = 1
        return cls.from_counts(p, counts)

    def __add__(self, other: CyclotomicInteger) -> CyclotomicInteger:
        return CyclotomicInteger(
            self.p, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other: CyclotomicInteger) -> CyclotomicInteger:
        return CyclotomicInteger(
            self.p, tuple(a - b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __neg__(self) -> CyclotomicInteger:
        return CyclotomicInteger(self.p, tuple(-a for a in self.coeffs))

    def __mul__(self, other) -> CyclotomicInteger:
        if isinstance(other, int):
            return CyclotomicInteger(self.p, tuple(a * other for a in self.coeffs))
        p = self.p
        conv = [0] * p
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        conv[(i + j) % p] += a * b
        return CyclotomicInteger.from_counts(p, conv)

    __rmul__ = __mul__

    def galois(self, t: int) -> CyclotomicInteger:
        """The automorphism zeta -> zeta**t (t coprime to p)."""
        counts = [0] * self.p
        for i, c in enumerate(self.coeffs):
            counts[(i * t) % self.p] += c
        return CyclotomicInteger.from_counts(self.p, counts)

    def conjugate(self) -> CyclotomicInteger:
        """Complex conjugation zeta -> zeta**(-1) (coefficient reversal)."""
        return self.galois(self.p - 1)

    @property
    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> int:
        if not self.is_rational:
            raise NonRationalSum(f"{self!r} is not rational")
        return self.coeffs[0]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CyclotomicInteger)
            and self.p == other.p
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.p, self.coeffs))

    def __repr__(self) -> str:
        return f"CyclotomicInteger(p={self.p}, {list(self.coeffs)})"


def gauss_sum(p: int) -> CyclotomicInteger:
    """g_p = sum over GF(p) of zeta_p**(x**2); satisfies g_p**2 = p*."""
    counts = [0] * p
    for x in range(p):
        counts[x * x % p] += 1
    return CyclotomicInteger.from_counts(p, counts)


@dataclass(frozen=True)
class SymbolicSumValue:
    """Normal form (a + b*sqrt(q*)) * p**e with q = p**d.

    Invariants: for even d, sqrt(q*) = p**(d/2) is rational and is folded
    into a (so b = 0); e is the largest power of p dividing both parts; the
    zero value is (0, 0, 0).  Construct through :meth:`from_parts`.
    """

    p: int
    d: int
    a: int
    b: int
    e: int

    @classmethod
    def from_parts(cls, p: int, d: int, rational: int, irrational: int = 0) -> SymbolicSumValue:
        if d % 2 == 0:
            rational += irrational * p ** (d // 2)
            irrational = 0
        if rational == 0 and irrational == 0:
            return cls(p, d, 0, 0, 0)
        e = 0
        while rational % p == 0 and irrational % p == 0:
            rational //= p
            irrational //= p
            e += 1
        return cls(p, d, rational, irrational, e)

    @property
    def q_star(self) -> int:
        q = self.p**self.d
        return q if (q - 1) // 2 % 2 == 0 else -q

    def expanded(self) -> tuple[int, int]:
        """(A, B) with value = A + B*sqrt(q*)."""
        scale = self.p**self.e
        return self.a * scale, self.b * scale

    def __add__(self, other: SymbolicSumValue) -> SymbolicSumValue:
        if (self.p, self.d) != (other.p, other.d):
            raise ParameterError("cannot add values from different contexts")
        a1, b1 = self.expanded()
        a2, b2 = other.expanded()
        return SymbolicSumValue.from_parts(self.p, self.d, a1 + a2, b1 + b2)

    def __neg__(self) -> SymbolicSumValue:
        a, b = self.expanded()
        return SymbolicSumValue.from_parts(self.p, self.d, -a, -b)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def rational_value(self) -> int:
        if self.b:
            raise NonRationalSum(f"{self} has an irrational part")
        return self.a * self.p**self.e

    def sort_key(self) -> tuple[int, int]:
        return self.expanded()

    def cyclotomic(self) -> CyclotomicInteger:
        """Exact image in Z[zeta_p] under sqrt(q*) -> g_p * p**((d-1)/2)."""
        a, b = self.expanded()
        out = CyclotomicInteger.from_int(self.p, a)
        if b:
            root = gauss_sum(self.p) * (self.p ** ((self.d - 1) // 2))
            out = out + root * b
        return out

    def embedding(self) -> complex:
        """Floating-point display value (never used in comparisons)."""
        a, b = self.expanded()
        qs = self.q_star
        root = complex(0, abs(qs) ** 0.5) if qs < 0 else complex(abs(qs) ** 0.5)
        return a + b * root

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a * self.p**self.e)
        core = f"({self.a} {'+' if self.b >= 0 else '-'} {abs(self.b)}*sqrt({self.q_star}))"
        return core if self.e == 0 else f"{core}*{self.p}^{self.e}"


def subfield_gauss_sum(p: int, d: int) -> SymbolicSumValue:
    """The quadratic Gauss sum G of GF(p**d), exactly.

    G = sum over GF(q) of zeta_p**(Tr_1^d(x**2)) equals (-1)**(d-1) g_p**d
    (Davenport-Hasse), which in the canonical sqrt(q*) normal form reads
    sigma * sqrt(q*) for odd d and a signed power of p for even d.  G**2 =
    q* either way, but the sign sigma is not always +1: the fast path needs
    it to match the direct path exactly.
    """
    half_p = (p - 1) // 2
    if d % 2:
        sigma = -1 if (half_p * ((d - 1) // 2)) % 2 else 1
        return SymbolicSumValue.from_parts(p, d, 0, sigma)
    sign = -1 if (half_p * (d // 2)) % 2 == 0 else 1
    return SymbolicSumValue.from_parts(p, d, sign * p ** (d // 2))


@lru_cache(maxsize=None)
def t_value(params: CodeParams, r: int, eps: int) -> SymbolicSumValue:
    """Closed value of T for a form of rank r and discriminant character eps.

    T = eps * G**r * q**(s-r) with G the subfield Gauss sum; rank 0 (the
    zero form, i.e. the (0,0) pair) gives p**m.
    """
    p, d, q, s = params.p, params.d, params.q, params.s
    core = eps * q ** (s - r) * params.q_star ** (r // 2)
    if r % 2 == 0:
        return SymbolicSumValue.from_parts(p, d, core)
    ga, gb = subfield_gauss_sum(p, d).expanded()
    return SymbolicSumValue.from_parts(p, d, core * ga, core * gb)


class ValueDistribution:
    """A sorted multiset of (SymbolicSumValue, frequency) rows."""

    __slots__ = ("rows",)

    def __init__(self, rows) -> None:
        self.rows = tuple(sorted(rows, key=lambda rf: rf[0].sort_key()))

    @classmethod
    def from_pairs(cls, pairs) -> ValueDistribution:
        """Build from (value, frequency) pairs, merging equal values."""
        merged: dict[tuple[int, int], tuple[SymbolicSumValue, int]] = {}
        for value, freq in pairs:
            key = value.expanded()
            if key in merged:
                merged[key] = (value, merged[key][1] + freq)
            else:
                merged[key] = (value, freq)
        return cls(rf for rf in merged.values() if rf[1])

    @property
    def total(self) -> int:
        return sum(f for _, f in self.rows)

    def weighted_sum(self) -> tuple[int, int]:
        """sum freq * value, expanded as (A, B)."""
        a = b = 0
        for v, f in self.rows:
            va, vb = v.expanded()
            a += f * va
            b += f * vb
        return a, b

    def cyclotomic_counts(self) -> dict[CyclotomicInteger, int]:
        return {v.cyclotomic(): f for v, f in self.rows}

    def __eq__(self, other) -> bool:
        if not isinstance(other, ValueDistribution):
            return NotImplemented
        mine = {v.expanded(): f for v, f in self.rows}
        theirs = {v.expanded(): f for v, f in other.rows}
        return mine == theirs

    def __iter__(self):
        return iter(self.rows)

    def __repr__(self) -> str:
        inner = ", ".join(f"{v}: {f}" for v, f in self.rows)
        return f"ValueDistribution({inner})"


# -- the sums themselves ----------------------------------------------------


def t_direct(field: FiniteField, params: CodeParams, alpha: int, beta: int) -> CyclotomicInteger:
    """T(alpha, beta) by full enumeration of the field.

    Counts how often each trace value in [0, p) occurs, then reduces the
    counts to a cyclotomic vector once: O(p**m) field operations and O(p)
    vector work.
    """
    p = params.p
    counts = [0] * p
    tr = field.trace_table
    n, exp, log = field.n, field.exp, field.log
    add = field.add
    e1 = (params.p**params.k + 1) % n
    la = log[alpha] if alpha else -1
    lb = log[beta] if beta else -1
    counts[0] += 1  # x = 0 contributes trace 0
    for t in range(n):
        u = exp[(la + t * e1) % n] if la >= 0 else 0
        w = exp[(lb + 2 * t) % n] if lb >= 0 else 0
        counts[tr[add(u, w)]] += 1
    return CyclotomicInteger.from_counts(p, counts)


def t_fast(field: FiniteField, params: CodeParams, alpha: int, beta: int) -> SymbolicSumValue:
    """T(alpha, beta) through Gram diagonalization (O(s**3) subfield ops)."""
    if alpha == 0 and beta == 0:
        return t_value(params, 0, 1)
    form = diagonalize(field, params.d, gram_matrix(field, params, alpha, beta))
    eps = discriminant_character(field, params.d, form)
    return t_value(params, form.rank, eps)


def s_direct(field: FiniteField, params: CodeParams, alpha: int, beta: int) -> CyclotomicInteger:
    a2, b2 = twist_pair(field, params, alpha, beta)
    return t_direct(field, params, alpha, beta) + t_direct(field, params, a2, b2)


def s_fast(field: FiniteField, params: CodeParams, alpha: int, beta: int) -> SymbolicSumValue:
    a2, b2 = twist_pair(field, params, alpha, beta)
    return t_fast(field, params, alpha, beta) + t_fast(field, params, a2, b2)


def s_sum(field: FiniteField, params: CodeParams, alpha: int, beta: int, mode: str = "direct"):
    """S(alpha, beta) = T(alpha, beta) + T(twisted pair), in either mode."""
    if mode == "direct":
        return s_direct(field, params, alpha, beta)
    if mode == "fast":
        return s_fast(field, params, alpha, beta)
    raise ParameterError(f"unknown mode {mode!r}")


# -- closed-form value distributions ----------------------------------------


def _exact_div(num: int, den: int) -> int:
    q, r = divmod(num, den)
    if r:
        raise InexactDivision(f"{num} / {den} is not exact")
    return q


def t_distribution_closed(params: CodeParams) -> ValueDistribution:
    """The closed-form value distribution of T over all p**(2m) pairs.

    One table for odd s, one for even s; frequencies must sum to p**(2m)
    (self-checked).  The two signs of an irrational row always share one
    frequency; the rational rows for even rank do not.
    """
    p, m, d, q, s = params.p, params.m, params.d, params.q, params.s
    pm = p**m

    def rat(value: int) -> SymbolicSumValue:
        return SymbolicSumValue.from_parts(p, d, value)

    def irr(units: int) -> SymbolicSumValue:
        return SymbolicSumValue.from_parts(p, d, 0, units)

    rows: list[tuple[SymbolicSumValue, int]] = [(rat(pm), 1)]
    if s % 2:
        f_full = _exact_div(
            p ** (2 * d)
            * (pm - p ** (m - d) - p ** (m - 2 * d) + 1)
            * (pm - 1),
            2 * (p ** (2 * d) - 1),
        )
        rows += [(irr(q ** ((s - 1) // 2)), f_full), (irr(-(q ** ((s - 1) // 2))), f_full)]
        h = p ** ((m - d) // 2)
        rows += [
            (rat(p ** ((m + d) // 2)), _exact_div(h * (h + 1) * (pm - 1), 2)),
            (rat(-(p ** ((m + d) // 2))), _exact_div(h * (h - 1) * (pm - 1), 2)),
        ]
        f_low = _exact_div((p ** (m - d) - 1) * (pm - 1), 2 * (p ** (2 * d) - 1))
        rows += [(irr(q ** ((s + 1) // 2)), f_low), (irr(-(q ** ((s + 1) // 2))), f_low)]
    else:
        root = p ** (m // 2)
        common = pm - p ** (m - d) - p ** (m - 2 * d)
        rows += [
            (
                rat(root),
                _exact_div(
                    p ** (2 * d)
                    * (common + root - p ** (m // 2 - d) + 1)
                    * (pm - 1),
                    2 * (p ** (2 * d) - 1),
                ),
            ),
            (
                rat(-root),
                _exact_div(
                    p ** (2 * d)
                    * (common - root + p ** (m // 2 - d) + 1)
                    * (pm - 1),
                    2 * (p ** (2 * d) - 1),
                ),
            ),
        ]
        f_mid = _exact_div(p ** (m - d) * (pm - 1), 2)
        rows += [(irr(q ** (s // 2)), f_mid), (irr(-(q ** (s // 2))), f_mid)]
        rows += [
            (
                rat(p ** (m // 2 + d)),
                _exact_div(
                    (root - 1) * (p ** (m // 2 - d) + 1) * (pm - 1),
                    2 * (p ** (2 * d) - 1),
                ),
            ),
            (
                rat(-(p ** (m // 2 + d))),
                _exact_div(
                    (root + 1) * (p ** (m // 2 - d) - 1) * (pm - 1),
                    2 * (p ** (2 * d) - 1),
                ),
            ),
        ]
    dist = ValueDistribution.from_pairs(rows)
    if dist.total != pm * pm:
        raise InternalInconsistency("T distribution frequencies do not sum to p^2m")
    return dist


def s_distribution_closed(params: CodeParams) -> ValueDistribution:
    """The closed-form value distribution of S over all p**(2m) pairs.

    Only the two supported case families have closed forms.  Rows written
    with paired signs bind top-with-top; rows whose values coincide
    numerically (which happens, e.g. (p**d - 1) = 2 makes the
    (p**d-1)p**(m/2) and 2p**(m/2) rows collide) are merged.
    """
    if not params.has_closed_forms:
        raise UnsupportedCase(f"no closed S distribution for case {params.case}")
    p, m, d = params.p, params.m, params.d
    pm = p**m
    root = p ** (m // 2)

    def rat(value: int) -> SymbolicSumValue:
        return SymbolicSumValue.from_parts(p, d, value)

    def mixed(rational: int, irrational: int) -> SymbolicSumValue:
        return SymbolicSumValue.from_parts(p, d, rational, irrational)

    zero_freq = _exact_div(
        (p ** (m + d) - 3 * pm + p**d + 1) * (pm - 1), 2 * (p**d - 1)
    )
    rows: list[tuple[SymbolicSumValue, int]] = [(rat(2 * pm), 1), (rat(0), zero_freq)]

    if params.case is Case.CASE_A:
        f_edge = _exact_div((p ** (m - d) - 1) * (pm - 1), p ** (2 * d) - 1)
        rows += [(rat((p**d - 1) * root), f_edge), (rat(-((p**d - 1) * root)), f_edge)]
        h = p ** ((m - d) // 2)
        rt = p ** (d // 2)  # sqrt(q*) = p**(d/2), rational: d is even in CaseA
        f_minus = _exact_div(h * (h - 1) * (pm - 1), 2)
        f_plus = _exact_div(h * (h + 1) * (pm - 1), 2)
        rows += [
            (rat((1 - rt) * root), f_minus),
            (rat((-1 - rt) * root), f_minus),
            (rat((1 + rt) * root), f_plus),
            (rat((-1 + rt) * root), f_plus),
        ]
        f_two = _exact_div((p**d - 1) * (pm * pm - 1), 4 * (p**d + 1))
        rows += [(rat(2 * root), f_two), (rat(-2 * root), f_two)]
    else:
        half = p ** (m // 2 - d)
        den = p ** (2 * d) - 1
        rows += [
            (rat((p**d - 1) * root), _exact_div((half + 1) * (root - 1) * (pm - 1), den)),
            (rat(-((p**d - 1) * root)), _exact_div((half - 1) * (root + 1) * (pm - 1), den)),
        ]
        f_minus = _exact_div(half * (root - 1) * (pm - 1), 2)
        f_plus = _exact_div(half * (root + 1) * (pm - 1), 2)
        rows += [
            (mixed(-root, root), f_minus),   # (+sqrt(q*) - 1) p**(m/2)
            (mixed(-root, -root), f_minus),  # (-sqrt(q*) - 1) p**(m/2)
            (mixed(root, root), f_plus),     # (+sqrt(q*) + 1) p**(m/2)
            (mixed(root, -root), f_plus),    # (-sqrt(q*) + 1) p**(m/2)
        ]
        rows += [
            (rat(2 * root), _exact_div((root + 1) ** 2 * (p**d - 1) * (pm - 1), 4 * (p**d + 1))),
            (rat(-2 * root), _exact_div((root - 1) ** 2 * (p**d - 1) * (pm - 1), 4 * (p**d + 1))),
        ]

    dist = ValueDistribution.from_pairs(rows)
    if dist.total != pm * pm:
        raise InternalInconsistency("S distribution frequencies do not sum to p^2m")
    return dist


# -- enumerated censuses -----------------------------------------------------


def t_census_direct(
    field: FiniteField, params: CodeParams, *, budget: int = DEFAULT_DIRECT_BUDGET
) -> dict[CyclotomicInteger, int]:
    """Census of T over all pairs by direct enumeration (p**(3m) terms)."""
    terms = params.pairs * field.order
    if terms > budget:
        raise BudgetExceeded(f"direct T census needs {terms} terms > budget {budget}")
    out: dict[CyclotomicInteger, int] = {}
    for alpha in range(field.order):
        for beta in range(field.order):
            v = t_direct(field, params, alpha, beta)
            out[v] = out.get(v, 0) + 1
    return out


def s_census_direct(
    field: FiniteField, params: CodeParams, *, budget: int = DEFAULT_DIRECT_BUDGET
) -> dict[CyclotomicInteger, int]:
    """Census of S over all pairs by direct enumeration (2 p**(3m) terms)."""
    terms = 2 * params.pairs * field.order
    if terms > budget:
        raise BudgetExceeded(f"direct S census needs {terms} terms > budget {budget}")
    out: dict[CyclotomicInteger, int] = {}
    for alpha in range(field.order):
        for beta in range(field.order):
            v = s_direct(field, params, alpha, beta)
            out[v] = out.get(v, 0) + 1
    return out


def _class_value(params: CodeParams, cls: int) -> SymbolicSumValue:
    """Symbolic T value of a (rank, sign) class code from the batch kernel."""
    if cls == 6:
        return t_value(params, 0, 1)
    r = params.s - cls // 2
    return t_value(params, r, 1 if cls % 2 == 0 else -1)


def t_census_fast(
    field: FiniteField,
    params: CodeParams,
    *,
    budget: int = DEFAULT_PAIR_BUDGET,
    workers: int = 1,
) -> ValueDistribution:
    """Census of T over all pairs through the vectorized Gram kernel."""
    if params.pairs > budget:
        raise BudgetExceeded(f"fast T census needs {params.pairs} pairs > budget {budget}")
    from . import batch

    hist = batch.class_histogram(batch.t_class_data(field, params, workers=workers))
    rows = [(_class_value(params, c), hist[c]) for c in range(7) if hist[c]]
    return ValueDistribution.from_pairs(rows)


def s_census_fast(
    field: FiniteField,
    params: CodeParams,
    *,
    budget: int = DEFAULT_PAIR_BUDGET,
    workers: int = 1,
) -> ValueDistribution:
    """Census of S over all pairs by joining the T class data with its twist."""
    if params.pairs > budget:
        raise BudgetExceeded(f"fast S census needs {params.pairs} pairs > budget {budget}")
    joint = joint_class_census(field, params, workers=workers)
    rows = []
    for (cf, cg), count in joint.items():
        rows.append((_class_value(params, cf) + _class_value(params, cg), count))
    return ValueDistribution.from_pairs(rows)


def joint_class_census(
    field: FiniteField, params: CodeParams, *, workers: int = 1
) -> dict[tuple[int, int], int]:
    """Counts of pairs by (class of f, class of g), classes as in the batch kernel."""
    from . import batch

    cls = batch.t_class_data(field, params, workers=workers)
    counts = batch.joint_histogram(field, params, cls, workers=workers)
    return {
        (cf, cg): counts[cf * 7 + cg]
        for cf in range(7)
        for cg in range(7)
        if counts[cf * 7 + cg]
    }


# -- E1 / E2 solution counts -------------------------------------------------


def count_e1(
    field: FiniteField,
    params: CodeParams,
    mode: str = "closed",
    *,
    budget: int = DEFAULT_E1_BUDGET,
) -> int:
    """Solutions (x, y) of x**2 + y**2 = 0 and x**(p**k+1) + y**(p**k+1) = 0.

    Closed form: 2 p**m - 1 under CaseA, and under CaseB when p**k = 1 mod 4;
    1 under CaseB when p**k = 3 mod 4.  Brute mode counts all p**(2m) pairs
    through a value-bucket join on (y**2, y**(p**k+1)).
    """
    p, m, k = params.p, params.m, params.k
    if mode == "closed":
        if params.case is Case.CASE_A:
            return 2 * p**m - 1
        if params.case in (Case.CASE_B_ODD_K, Case.CASE_B_EVEN_K):
            return 2 * p**m - 1 if pow(p, k, 4) == 1 else 1
        raise UnsupportedCase(f"no closed E1 for case {params.case}")
    if mode != "brute":
        raise ParameterError(f"unknown mode {mode!r}")
    if params.pairs > budget:
        raise BudgetExceeded(f"E1 brute force needs {params.pairs} pairs > budget {budget}")
    pk1 = p**k + 1
    buckets: dict[tuple[int, int], int] = {}
    for y in range(field.order):
        key = (field.pow(y, 2) if y else 0, field.pow(y, pk1) if y else 0)
        buckets[key] = buckets.get(key, 0) + 1
    total = 0
    for x in range(field.order):
        sq = field.pow(x, 2) if x else 0
        hi = field.pow(x, pk1) if x else 0
        total += buckets.get((field.neg(sq), field.neg(hi)), 0)
    return total


def count_e2(
    field: FiniteField,
    params: CodeParams,
    mode: str = "closed",
    *,
    budget: int = DEFAULT_E2_BUDGET,
) -> int:
    """Solutions (x, y, z) of x**2 + y**2 - pi z**2 = 0 and
    x**(p**k+1) + y**(p**k+1) + pi**((p**k+1)/2) z**(p**k+1) = 0.

    Closed form exists only under CaseB: 2 p**m - 1 when p**k = 1 mod 4,
    else 1.  Brute mode joins the p**(2m) pairs (x, y) against all z.
    """
    p, m, k = params.p, params.m, params.k
    if mode == "closed":
        if params.case in (Case.CASE_B_ODD_K, Case.CASE_B_EVEN_K):
            return 2 * p**m - 1 if pow(p, k, 4) == 1 else 1
        raise UnsupportedCase(f"no closed E2 for case {params.case}")
    if mode != "brute":
        raise ParameterError(f"unknown mode {mode!r}")
    triples = params.pairs * field.order
    if triples > budget:
        raise BudgetExceeded(f"E2 brute force needs {triples} triples > budget {budget}")
    pk1 = p**k + 1
    pi = field.primitive_element
    pi_e = field.pow(pi, params.twist_exponent)
    buckets: dict[tuple[int, int], int] = {}
    for x in range(field.order):
        x2, xh = field.pow(x, 2) if x else 0, field.pow(x, pk1) if x else 0
        for y in range(field.order):
            key = (
                field.add(x2, field.pow(y, 2) if y else 0),
                field.add(xh, field.pow(y, pk1) if y else 0),
            )
            buckets[key] = buckets.get(key, 0) + 1
    total = 0
    for z in range(field.order):
        z2, zh = field.pow(z, 2) if z else 0, field.pow(z, pk1) if z else 0
        key = (field.mul(pi, z2), field.neg(field.mul(pi_e, zh)))
        total += buckets.get(key, 0)
    return total


# -- power-sum identities ----------------------------------------------------


@dataclass(frozen=True)
class IdentityCheck:
    """One verified identity: both sides exactly, and the verdict."""

    name: str
    lhs: str
    rhs: str
    passed: bool

    def __str__(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"{mark} {self.name}: lhs = {self.lhs}, rhs = {self.rhs}"


def _pow_pair(a: int, b: int, q_star: int, t: int) -> tuple[int, int]:
    """(a + b sqrt(q*))**t expanded, for t in {1, 2, 3}."""
    if t == 1:
        return a, b
    if t == 2:
        return a * a + b * b * q_star, 2 * a * b
    if t == 3:
        return a**3 + 3 * a * b * b * q_star, 3 * a * a * b + b**3 * q_star
    raise ParameterError(f"unsupported power {t}")


def _identity_targets(params: CodeParams) -> list[tuple[str, int, str, int]]:
    """(name, S-power, restriction, exact right-hand side) per case.

    restriction is "all", "N1" or "N2"; N-restricted identities come as one
    combined check with the (p**d - 1) / (p**(2d) - 1) weights.
    """
    p, m, d, k = params.p, params.m, params.d, params.k
    pm, pd = p**m, p**d
    if params.case is Case.CASE_A:
        return [
            ("sum S^2 = 4p^3m", 2, "all", 4 * pm**3),
            (
                "weighted N1/N2 sum of S^2",
                2,
                "N",
                pm * (pm - 1) * (2 * pm * pd - 2 * pm + 2 * pd - pd * pd - 1),
            ),
        ]
    if params.case in (Case.CASE_B_ODD_K, Case.CASE_B_EVEN_K):
        one_mod_4 = pow(p, k, 4) == 1
        s3 = (
            2 * pm**2 * (7 * pm - 3) + 2 * pm**2 * pd * (pm - 1)
            if one_mod_4
            else 2 * pm**2 * (pm + 3) + 2 * pm**2 * pd * (pm - 1)
        )
        return [
            ("sum S = 2p^2m", 1, "all", 2 * pm**2),
            ("sum S^2", 2, "all", 4 * pm**3 if one_mod_4 else 4 * pm**2),
            ("sum S^3", 3, "all", s3),
            ("weighted N1/N2 sum of S", 1, "N", pm * (pd - 1) * (pm - 1)),
        ]
    raise UnsupportedCase(f"no closed identities for case {params.case}")


def verify_power_identities(
    field: FiniteField,
    params: CodeParams,
    mode: str = "auto",
    *,
    budget: int | None = None,
    workers: int = 1,
) -> list[IdentityCheck]:
    """Check the case's power-sum identities with exact arithmetic.

    CaseA has two identities (on S**2), CaseB four (on S, S**2, S**3 and the
    rank-restricted first moment).  mode="direct" accumulates S from the
    enumerated sums in Z[zeta_p]; mode="fast" drives everything off the
    joint (rank, sign) class census.  Both are exact.
    """
    targets = _identity_targets(params)
    if mode == "auto":
        mode = "direct" if params.pairs * field.order <= DEFAULT_DIRECT_BUDGET else "fast"

    sums: dict[tuple[int, str], tuple[int, int]] = {}
    if mode == "fast":
        pair_budget = budget if budget is not None else DEFAULT_PAIR_BUDGET
        if params.pairs > pair_budget:
            raise BudgetExceeded(f"identity check needs {params.pairs} pairs > {pair_budget}")
        joint = joint_class_census(field, params, workers=workers)
        for (cf, cg), count in joint.items():
            va, vb = (_class_value(params, cf) + _class_value(params, cg)).expanded()
            regions = ["all"]
            if cf in (2, 3):
                regions.append("N1")
            elif cf in (4, 5):
                regions.append("N2")
            for t in (1, 2, 3):
                pa, pb = _pow_pair(va, vb, params.q_star, t)
                for region in regions:
                    a0, b0 = sums.get((t, region), (0, 0))
                    sums[(t, region)] = (a0 + count * pa, b0 + count * pb)
    elif mode == "direct":
        terms = 2 * params.pairs * field.order
        if terms > (budget if budget is not None else DEFAULT_DIRECT_BUDGET):
            raise BudgetExceeded(f"direct identity check needs {terms} terms")
        from .quadforms import rank as rank_of

        acc: dict[tuple[int, str], CyclotomicInteger] = {}
        for alpha in range(field.order):
            for beta in range(field.order):
                s_val = s_direct(field, params, alpha, beta)
                regions = ["all"]
                if alpha or beta:
                    r = rank_of(field, params, alpha, beta)
                    if r == params.s - 1:
                        regions.append("N1")
                    elif r == params.s - 2:
                        regions.append("N2")
                power = s_val
                for t in (1, 2, 3):
                    if t > 1:
                        power = power * s_val
                    for region in regions:
                        key = (t, region)
                        acc[key] = acc.get(key, CyclotomicInteger.zero(params.p)) + power
        for key, val in acc.items():
            sums[key] = (val.rational_value(), 0)
    else:
        raise ParameterError(f"unknown mode {mode!r}")

    pd = params.p**params.d
    checks = []
    for name, t, region, rhs in targets:
        if region == "all":
            a, b = sums.get((t, "all"), (0, 0))
        else:
            a1, b1 = sums.get((t, "N1"), (0, 0))
            a2, b2 = sums.get((t, "N2"), (0, 0))
            a = (pd - 1) * a1 + (pd * pd - 1) * a2
            b = (pd - 1) * b1 + (pd * pd - 1) * b2
        if b:
            raise NonRationalSum(f"identity {name} accumulated an irrational part")
        checks.append(IdentityCheck(name=name, lhs=str(a), rhs=str(rhs), passed=a == rhs))
    return checks
