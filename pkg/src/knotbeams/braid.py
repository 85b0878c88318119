"""Braid words, closures, and the knot invariants used to verify traced curves.

A braid on s strands is written as a sequence of Artin generator letters
(j, sign) with 1 <= j <= s-1.  The text format is whitespace-separated signed
integers: "1 1 1" is sigma_1^3, "1 -2" is sigma_1 sigma_2^-1.

Two invariants of the braid closure are provided: the Alexander polynomial
(via the reduced Burau representation, exact integer arithmetic) and the
Jones polynomial (via the Kauffman bracket state sum).  Alexander is blind to
mirror images; Jones distinguishes them, which is what the verification
pipeline relies on.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class LaurentPoly:
    """Laurent polynomial in one variable with integer coefficients.

    Immutable; zero coefficients are never stored.  Jones polynomials are
    stored with exponents in units of t^(1/4), so an exponent of 4 means t^1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict[int, int] | None = None):
        object.__setattr__(self, "coeffs", {e: c for e, c in (coeffs or {}).items() if c != 0})

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({0: 1})

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "LaurentPoly":
        return cls({exponent: coeff})

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other):
        c = dict(self.coeffs)
        for e, v in other.coeffs.items():
            c[e] = c.get(e, 0) + v
        return LaurentPoly(c)

    def __sub__(self, other):
        c = dict(self.coeffs)
        for e, v in other.coeffs.items():
            c[e] = c.get(e, 0) - v
        return LaurentPoly(c)

    def __neg__(self):
        return LaurentPoly({e: -v for e, v in self.coeffs.items()})

    def __mul__(self, other):
        c: dict[int, int] = {}
        for e1, v1 in self.coeffs.items():
            for e2, v2 in other.coeffs.items():
                e = e1 + e2
                c[e] = c.get(e, 0) + v1 * v2
        return LaurentPoly(c)

    def shifted(self, exponent: int) -> "LaurentPoly":
        return LaurentPoly({e + exponent: v for e, v in self.coeffs.items()})

    def mirrored(self) -> "LaurentPoly":
        """Substitution t -> 1/t."""
        return LaurentPoly({-e: v for e, v in self.coeffs.items()})

    def __call__(self, value):
        return sum(v * value**e for e, v in self.coeffs.items())

    def min_exp(self) -> int:
        return min(self.coeffs)

    def max_exp(self) -> int:
        return max(self.coeffs)

    def divide_exact(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact division; raises ArithmeticError if the remainder is nonzero."""
        if not other:
            raise ZeroDivisionError("division by zero polynomial")
        rem = dict(self.coeffs)
        quo: dict[int, int] = {}
        lead_e = other.max_exp()
        lead_c = other.coeffs[lead_e]
        while rem:
            e = max(rem)
            q, r = divmod(rem[e], lead_c)
            if r != 0:
                raise ArithmeticError("inexact polynomial division")
            quo[e - lead_e] = q
            for oe, ov in other.coeffs.items():
                ne = oe + e - lead_e
                rem[ne] = rem.get(ne, 0) - ov * q
                if rem[ne] == 0:
                    del rem[ne]
        return LaurentPoly(quo)

    def as_pairs(self) -> list[tuple[int, int]]:
        """Sorted (exponent, coefficient) pairs; the canonical representation."""
        return sorted(self.coeffs.items())

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e, v in self.as_pairs():
            term = f"{v}" if e == 0 else (f"{v}*t^{e}" if abs(v) != 1 else f"{'-' if v < 0 else ''}t^{e}")
            parts.append(term)
        return " + ".join(parts).replace("+ -", "- ")


@dataclass(frozen=True)
class BraidWord:
    """A word in the Artin generators of the braid group on `strands` strands."""

    strands: int
    letters: tuple[tuple[int, int], ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.strands < 1:
            raise ValueError(f"strand count must be positive, got {self.strands}")
        for j, sign in self.letters:
            if not 1 <= j <= self.strands - 1:
                raise ValueError(f"generator index {j} out of range for {self.strands} strands")
            if sign not in (1, -1):
                raise ValueError(f"letter sign must be +1 or -1, got {sign}")

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return format_braid_word(self)


def parse_braid_word(text: str, strands: int) -> BraidWord:
    """Parse whitespace-separated signed generator indices into a braid word.

    "1 1 1" with strands=2 is sigma_1^3; the empty string is the trivial braid.
    """
    letters = []
    for tok in text.split():
        try:
            v = int(tok)
        except ValueError:
            raise ValueError(f"braid word token {tok!r} is not an integer") from None
        if v == 0:
            raise ValueError("braid word contains a zero entry")
        if abs(v) > strands - 1:
            raise ValueError(f"generator index {abs(v)} out of range for {strands} strands")
        letters.append((abs(v), 1 if v > 0 else -1))
    return BraidWord(strands, tuple(letters))


def format_braid_word(b: BraidWord) -> str:
    return " ".join(str(j * sign) for j, sign in b.letters)


def shift_braid(b: BraidWord) -> BraidWord:
    """Add a disjoint vertical strand in front: sigma_j -> sigma_{j+1} on s+1 strands.

    The closure of the result is the closure of `b` plus a split unknot.
    """
    return BraidWord(b.strands + 1, tuple((j + 1, sign) for j, sign in b.letters))


def mirror(b: BraidWord) -> BraidWord:
    """Negate all crossing signs; closes to the mirror image of the closure of b."""
    return BraidWord(b.strands, tuple((j, -sign) for j, sign in b.letters))


def closure_permutation(b: BraidWord) -> tuple[int, ...]:
    """Permutation of {0..s-1} mapping each starting position to its end position."""
    pos = list(range(b.strands))
    for j, _ in b.letters:
        pos[j - 1], pos[j] = pos[j], pos[j - 1]
    # pos[k] = which starting strand currently sits at position k; invert
    perm = [0] * b.strands
    for k, start in enumerate(pos):
        perm[start] = k
    return tuple(perm)


def permutation_cycles(perm: tuple[int, ...]) -> list[list[int]]:
    seen: set[int] = set()
    cycles = []
    for i in range(len(perm)):
        if i in seen:
            continue
        cyc = []
        while i not in seen:
            seen.add(i)
            cyc.append(i)
            i = perm[i]
        cycles.append(cyc)
    return cycles


def component_count(b: BraidWord) -> int:
    """Number of link components of the braid closure."""
    return len(permutation_cycles(closure_permutation(b)))


def _require_knot(b: BraidWord, what: str):
    n = component_count(b)
    if n != 1:
        raise ValueError(f"{what} requires a knot closure; this braid closes to {n} components")


# --- Alexander polynomial (reduced Burau) ------------------------------------

def _reduced_burau(j: int, s: int, inverse: bool) -> list[list[LaurentPoly]]:
    """Reduced Burau matrix of sigma_j^{+-1} in B_s, size (s-1) x (s-1)."""
    n = s - 1
    one = LaurentPoly.one()
    zero = LaurentPoly()
    m = [[one if a == b else zero for b in range(n)] for a in range(n)]
    i = j - 1
    if not inverse:
        m[i][i] = LaurentPoly({1: -1})
        if i > 0:
            m[i][i - 1] = LaurentPoly({1: 1})
        if i < n - 1:
            m[i][i + 1] = one
    else:
        m[i][i] = LaurentPoly({-1: -1})
        if i > 0:
            m[i][i - 1] = one
        if i < n - 1:
            m[i][i + 1] = LaurentPoly({-1: 1})
    return m


def _mat_mul(a, b):
    n = len(a)
    zero = LaurentPoly()
    out = []
    for r in range(n):
        row = []
        for c in range(n):
            acc = zero
            for k in range(n):
                if a[r][k] and b[k][c]:
                    acc = acc + a[r][k] * b[k][c]
            row.append(acc)
        out.append(row)
    return out


def _mat_det(m) -> LaurentPoly:
    n = len(m)
    if n == 0:
        return LaurentPoly.one()
    if n == 1:
        return m[0][0]
    out = LaurentPoly()
    for c in range(n):
        if not m[0][c]:
            continue
        minor = [row[:c] + row[c + 1:] for row in m[1:]]
        term = m[0][c] * _mat_det(minor)
        out = out + term if c % 2 == 0 else out - term
    return out


def alexander_polynomial(b: BraidWord) -> LaurentPoly:
    """Alexander polynomial of the braid closure, which must be a knot.

    Computed as det(rho(b) - I) over the reduced Burau representation,
    divided exactly by 1 + t + ... + t^(s-1).  The result is normalized to be
    symmetric under t <-> 1/t with value 1 at t = 1 (both conditions pin down
    the unit ambiguity of the Burau determinant).
    """
    _require_knot(b, "alexander_polynomial")
    s = b.strands
    n = s - 1
    one = LaurentPoly.one()
    m = [[one if a == c else LaurentPoly() for c in range(n)] for a in range(n)]
    for j, sign in b.letters:
        m = _mat_mul(m, _reduced_burau(j, s, sign < 0))
    mi = [[m[a][c] - (one if a == c else LaurentPoly()) for c in range(n)] for a in range(n)]
    det = _mat_det(mi)
    if not det:
        return LaurentPoly.one()
    quotient = det.divide_exact(LaurentPoly({e: 1 for e in range(s)}))
    span = quotient.min_exp() + quotient.max_exp()
    if span % 2 != 0:
        raise ArithmeticError("Alexander polynomial of a knot must have even exponent span")
    sym = quotient.shifted(-span // 2)
    at_one = sym(1)
    if abs(at_one) != 1:
        raise ArithmeticError(f"Alexander normalization failed: value at t=1 is {at_one}")
    return -sym if at_one < 0 else sym


# --- Jones polynomial (Kauffman bracket) --------------------------------------

MAX_JONES_LETTERS = 16


def jones_polynomial(b: BraidWord) -> LaurentPoly:
    """Jones polynomial of the braid closure via the Kauffman bracket state sum.

    Enumerates all 2^len(b) smoothings of the closed-braid diagram, counting
    loops per state by union-find.  The writhe-normalized bracket is returned
    in t^(1/4) units: exponent 4 means t^1.  V(unknot) = 1 and
    V of the mirror is V with t -> 1/t (exponent negation).

    The state sum is limited to braid words of at most MAX_JONES_LETTERS
    letters; longer words raise ValueError.
    """
    _require_knot(b, "jones_polynomial")
    ell = len(b.letters)
    if ell > MAX_JONES_LETTERS:
        raise ValueError(f"jones_polynomial limited to {MAX_JONES_LETTERS} letters, got {ell}")
    s = b.strands
    writhe = sum(sign for _, sign in b.letters)

    delta = LaurentPoly({2: -1, -2: -1})          # -A^2 - A^-2 per extra loop
    delta_pow = [LaurentPoly.one()]
    for _ in range(s + ell + 1):
        delta_pow.append(delta_pow[-1] * delta)

    n_nodes = (ell + 1) * s
    bracket: dict[int, int] = {}
    for state in range(1 << ell):
        parent = list(range(n_nodes))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        a_exp = 0
        for k, (j, sign) in enumerate(b.letters):
            cap = (state >> k) & 1          # 0: identity smoothing, 1: cup-cap
            if sign > 0:
                a_exp += 1 if cap == 0 else -1
            else:
                a_exp += -1 if cap == 0 else 1
            base, top = k * s, (k + 1) * s
            for p in range(s):
                if cap and p in (j - 1, j):
                    continue
                parent[find(base + p)] = find(top + p)
            if cap:
                parent[find(base + j - 1)] = find(base + j)
                parent[find(top + j - 1)] = find(top + j)
        for p in range(s):       # close the braid
            parent[find(ell * s + p)] = find(p)
        loops = len({find(x) for x in range(n_nodes)})
        for e, v in delta_pow[loops - 1].coeffs.items():
            bracket[e + a_exp] = bracket.get(e + a_exp, 0) + v

    # V = (-A)^{-3 writhe} * bracket, then A = t^(-1/4)
    v_in_a = LaurentPoly({-3 * writhe: -1 if writhe % 2 else 1}) * LaurentPoly(bracket)
    return LaurentPoly({-e: v for e, v in v_in_a.coeffs.items()})


def simplify_word(b: BraidWord, max_passes: int = 50) -> BraidWord:
    """Cancel sigma_j sigma_j^-1 pairs, moving letters past commuting neighbours.

    This is a cheap cleanup for words read off traced curves (which contain
    spurious Reidemeister-II pairs), not a normal form.  The braid element is
    unchanged, so closure invariants are preserved.
    """
    letters = list(b.letters)
    for _ in range(max_passes):
        changed = False
        i = 0
        while i < len(letters):
            j, sign = letters[i]
            k = i + 1
            while k < len(letters):
                jk, sk = letters[k]
                if jk == j and sk == -sign:
                    del letters[k]
                    del letters[i]
                    changed = True
                    break
                if abs(jk - j) <= 1:
                    break
                k += 1
            else:
                i += 1
                continue
            if changed:
                i = max(i - 1, 0)
                changed = False
                continue
            i += 1
        new = tuple(letters)
        if new == b.letters:
            break
        b = BraidWord(b.strands, new)
        letters = list(b.letters)
    return BraidWord(b.strands, tuple(letters))
