"""Small finite fields F_{p^n} and brute-force projective point counting.

Fields are represented as F_p[t]/(modulus) with elements stored as
coefficient tuples.  Models are lists of homogeneous integer polynomials
read from a small line-oriented file format (see load_model).  Counting
enumerates normalized projective representatives (first nonzero
coordinate 1) and checks every polynomial, with early exit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from pathlib import Path

from .arith import is_prime
from .errors import UsageError

BUDGET = 10**8


class ExtensionField:
    """F_{p^n} as polynomials over F_p modulo a monic irreducible."""

    def __init__(self, p: int, n: int, modulus=None):
        if not is_prime(p):
            raise UsageError("%d is not prime" % p)
        if n < 1 or p**n > BUDGET:
            raise UsageError("field size p^n out of budget")
        self.p = p
        self.n = n
        self.modulus = tuple(modulus) if modulus else find_irreducible(p, n)
        if len(self.modulus) != n + 1 or self.modulus[-1] != 1:
            raise UsageError("modulus must be monic of degree n")
        if not _is_irreducible(self.modulus, p):
            raise UsageError("modulus is reducible")
        self.zero = (0,) * n
        self.one = (1,) + (0,) * (n - 1)

    @property
    def order(self) -> int:
        return self.p**self.n

    def elements(self):
        return product(range(self.p), repeat=self.n)

    def from_int(self, a: int):
        return (a % self.p,) + (0,) * (self.n - 1)

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def mul(self, a, b):
        p, n = self.p, self.n
        prod_ = [0] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod_[i + j] += x * y
        # reduce modulo the (monic) modulus
        for k in range(2 * n - 2, n - 1, -1):
            c = prod_[k] % p
            if c:
                for j in range(n):
                    prod_[k - n + j] -= c * self.modulus[j]
            prod_[k] = 0
        return tuple(c % p for c in prod_[:n])

    def pow(self, a, e: int):
        result = self.one
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError
        return self.pow(a, self.order - 2)


def _polmulmod(a, b, mod, p):
    n = len(mod) - 1
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    for k in range(len(out) - 1, n - 1, -1):
        c = out[k]
        if c:
            for j in range(n):
                out[k - n + j] = (out[k - n + j] - c * mod[j]) % p
        out[k] = 0
    return tuple(out[:n])


def _frob_power(mod, p, k):
    """x^(p^k) modulo `mod`, as a coefficient tuple of length deg(mod)."""
    n = len(mod) - 1
    cur = tuple((1 if i == 1 else 0) for i in range(n))  # x
    for _ in range(k):
        # raise to the p-th power by square-and-multiply
        result = tuple((1 if i == 0 else 0) for i in range(n))
        base, e = cur, p
        while e:
            if e & 1:
                result = _polmulmod(result, base, mod, p)
            base = _polmulmod(base, base, mod, p)
            e >>= 1
        cur = result
    return cur


def _is_irreducible(mod, p) -> bool:
    n = len(mod) - 1
    if n == 1:
        return True
    if n <= 3:
        # no roots in F_p suffices up to degree 3
        return all(_eval_mod(mod, a, p) != 0 for a in range(p))
    x_poly = tuple((1 if i == 1 else 0) for i in range(n))
    if _frob_power(mod, p, n) != x_poly:
        return False
    for k in range(1, n // 2 + 1):
        if n % k == 0:
            diff = list(_frob_power(mod, p, k))
            diff[1] = (diff[1] - 1) % p
            if _poly_gcd_deg(tuple(diff), mod, p) > 0:
                return False
    return True


def _eval_mod(coeffs, a, p):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * a + c) % p
    return acc


def _poly_gcd_deg(a, b, p):
    a, b = list(a), list(b)

    def deg(u):
        for i in range(len(u) - 1, -1, -1):
            if u[i] % p:
                return i
        return -1

    while deg(a) >= 0:
        da, db = deg(a), deg(b)
        if da < db:
            a, b = b, a
            continue
        inv = pow(b[deg(b)], p - 2, p)
        c = a[deg(a)] * inv % p
        shift = deg(a) - deg(b)
        for i in range(deg(b) + 1):
            a[i + shift] = (a[i + shift] - c * b[i]) % p
    return deg(b)


def find_irreducible(p: int, n: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree n over F_p,
    ordering candidates by (a_{n-1}, ..., a_1, a_0)."""
    if p**n > BUDGET:
        raise UsageError("p^n exceeds the enumeration budget")
    if n == 1:
        return (0, 1)
    for high in product(range(p), repeat=n - 1):
        for a0 in range(p):
            mod = (a0,) + tuple(reversed(high)) + (1,)
            if _is_irreducible(mod, p):
                return mod
    raise AssertionError("no irreducible found")  # impossible


_TOKEN = re.compile(r"\s*(\d+|[A-Za-z_]\w*|\*\*|[-+*^()])")


@dataclass(frozen=True)
class ProjectiveModel:
    """Homogeneous integer polynomials cutting out a curve in P^k.

    Each polynomial is a tuple of terms (coefficient, exponent tuple).
    """

    nvars: int
    polynomials: tuple[tuple[tuple[int, tuple[int, ...]], ...], ...]
    level: int | None = None
    genus: int | None = None


def _parse_poly(expr: str, variables: list[str], lineno: int):
    """Recursive-descent parser for +, -, *, ^ over integers and variables."""
    tokens = []
    pos = 0
    while pos < len(expr):
        m = _TOKEN.match(expr, pos)
        if not m:
            raise UsageError("line %d, column %d: bad token" % (lineno, pos + 1))
        tokens.append(m.group(1))
        pos = m.end()
    tokens.append("$")
    idx = [0]

    def peek():
        return tokens[idx[0]]

    def take():
        idx[0] += 1
        return tokens[idx[0] - 1]

    def atom():
        t = take()
        if t == "(":
            e = expression()
            if take() != ")":
                raise UsageError("line %d: unbalanced parentheses" % lineno)
        elif t.isdigit():
            e = [(int(t), (0,) * len(variables))]
        elif t in variables:
            exps = [0] * len(variables)
            exps[variables.index(t)] = 1
            e = [(1, tuple(exps))]
        else:
            raise UsageError("line %d: unexpected %r" % (lineno, t))
        if peek() in ("^", "**"):
            take()
            k = take()
            if not k.isdigit():
                raise UsageError("line %d: exponent must be an integer" % lineno)
            base, e = e, [(1, (0,) * len(variables))]
            for _ in range(int(k)):
                e = _term_mul(e, base)
        return e

    def factor():
        e = atom()
        while peek() == "*":
            take()
            e = _term_mul(e, atom())
        return e

    def expression():
        if peek() == "-":
            take()
            e = [(-c, m) for c, m in factor()]
        else:
            if peek() == "+":
                take()
            e = factor()
        while peek() in ("+", "-"):
            op = take()
            rhs = factor()
            if op == "-":
                rhs = [(-c, m) for c, m in rhs]
            e = e + rhs
        return e

    terms = expression()
    if peek() != "$":
        raise UsageError("line %d: trailing input" % lineno)
    merged = {}
    for c, m in terms:
        merged[m] = merged.get(m, 0) + c
    return tuple((c, m) for m, c in sorted(merged.items()) if c != 0)


def _term_mul(a, b):
    return [(ca * cb, tuple(x + y for x, y in zip(ma, mb)))
            for ca, ma in a for cb, mb in b]


def load_model(path) -> ProjectiveModel:
    """Parse a model file: '#' comments, 'vars: x1 x2 ...', one
    'poly: <expr>' per polynomial; optional 'level:' and 'genus:'."""
    variables: list[str] = []
    polys = []
    level = genus = None
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise UsageError("line %d: expected 'key: value'" % lineno)
        key, _, value = line.partition(":")
        key = key.strip()
        if key == "vars":
            variables = value.split()
        elif key == "level":
            level = int(value)
        elif key == "genus":
            genus = int(value)
        elif key == "poly":
            if not variables:
                raise UsageError("line %d: 'vars:' must come first" % lineno)
            terms = _parse_poly(value, variables, lineno)
            if not terms:
                raise UsageError("line %d: zero polynomial" % lineno)
            degs = {sum(m) for _, m in terms}
            if len(degs) != 1:
                raise UsageError("line %d: polynomial is not homogeneous" % lineno)
            polys.append(terms)
        else:
            raise UsageError("line %d: unknown key %r" % (lineno, key))
    if not polys:
        raise UsageError("%s: no polynomials" % path)
    return ProjectiveModel(len(variables), tuple(polys), level, genus)


def count_projective_points(model: ProjectiveModel, field: ExtensionField) -> int:
    """Number of projective points of the model over the field, by direct
    enumeration of representatives with first nonzero coordinate 1."""
    p = field.p
    reduced = []
    for poly in model.polynomials:
        terms = [(c % p, m) for c, m in poly if c % p]
        if not terms:
            raise UsageError("a model polynomial vanishes identically mod %d" % p)
        reduced.append(terms)
    if field.order ** model.nvars > BUDGET:
        raise UsageError("enumeration budget exceeded")
    elems = list(field.elements())
    # precompute small power tables per element
    max_exp = max(e for poly in reduced for _, m in poly for e in m)
    powtab = {}
    for a in elems:
        row = [field.one]
        for _ in range(max_exp):
            row.append(field.mul(row[-1], a))
        powtab[a] = row
    count = 0
    for lead in range(model.nvars):
        # first nonzero coordinate is position `lead`, normalized to 1
        for tail in product(elems, repeat=model.nvars - lead - 1):
            point = (field.zero,) * lead + (field.one,) + tail
            ok = True
            for terms in reduced:
                acc = field.zero
                for c, m in terms:
                    val = field.from_int(c)
                    for var, e in enumerate(m):
                        if e:
                            val = field.mul(val, powtab[point[var]][e])
                    acc = field.add(acc, val)
                if acc != field.zero:
                    ok = False
                    break
            if ok:
                count += 1
    return count
