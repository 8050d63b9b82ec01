"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

from typing import Dict, Iterable, Sequence, Tuple

from .rational import ONE, ZERO, Rational, as_rational, fmt_rational

Exponent = Tuple[int, ...]

DEFAULT_NAMES = ("x", "y", "z")


def grlex_key(e: Exponent):
    """Sort key; larger means earlier in graded-lex order with x > y > z."""
    return (sum(e), e)


class MultiPoly:
    """A polynomial stored as ``{exponent tuple: nonzero mpq}``.

    Instances are treated as immutable.  ``nvars`` defaults to 3 (x, y, z);
    local germs in blow-up charts use two variables.
    """

    __slots__ = ("terms", "nvars", "_hash")

    def __init__(self, terms: Dict[Exponent, object] | None = None, nvars: int = 3):
        clean = {}
        if terms:
            for e, c in terms.items():
                c = as_rational(c)
                if c:
                    if len(e) != nvars:
                        raise ValueError(f"exponent {e} does not have {nvars} entries")
                    clean[tuple(e)] = c
        self.terms = clean
        self.nvars = nvars
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, nvars: int) -> "MultiPoly":
        # terms already normalized: tuple keys, nonzero mpq values
        p = cls.__new__(cls)
        p.terms = terms
        p.nvars = nvars
        p._hash = None
        return p

    @classmethod
    def const(cls, c, nvars: int = 3) -> "MultiPoly":
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def var(cls, i: int, nvars: int = 3) -> "MultiPoly":
        e = [0] * nvars
        e[i] = 1
        return cls._raw({tuple(e): ONE}, nvars)

    @classmethod
    def zero(cls, nvars: int = 3) -> "MultiPoly":
        return cls._raw({}, nvars)

    @classmethod
    def one(cls, nvars: int = 3) -> "MultiPoly":
        return cls.const(1, nvars)

    # -- basic queries -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, var: int) -> int:
        return max((e[var] for e in self.terms), default=-1)

    def order(self) -> int:
        """Minimal total degree among terms (order at the origin)."""
        if not self.terms:
            raise ValueError("order of the zero polynomial is undefined")
        return min(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def homogeneous_part(self, d: int) -> "MultiPoly":
        return MultiPoly._raw({e: c for e, c in self.terms.items() if sum(e) == d}, self.nvars)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda ec: grlex_key(ec[0]), reverse=True)

    def leading_coefficient(self) -> Rational:
        """First coefficient in graded-lex order."""
        if not self.terms:
            return ZERO
        return self.terms[max(self.terms, key=grlex_key)]

    def monic(self) -> "MultiPoly":
        lc = self.leading_coefficient()
        if not lc or lc == 1:
            return self
        return self.scale(1 / lc)

    def constant_term(self) -> Rational:
        return self.terms.get((0,) * self.nvars, ZERO)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return MultiPoly.const(other, self.nvars)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, ZERO) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MultiPoly._raw(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "MultiPoly":
        c = as_rational(c)
        if not c:
            return MultiPoly.zero(self.nvars)
        return MultiPoly._raw({e: v * c for e, v in self.terms.items()}, self.nvars)

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        other = self._coerce(other)
        if len(self.terms) < len(other.terms):
            a, b = self.terms, other.terms
        else:
            a, b = other.terms, self.terms
        out: dict = {}
        get = out.get
        n = self.nvars
        if n == 3:
            for (a0, a1, a2), ca in a.items():
                for (b0, b1, b2), cb in b.items():
                    e = (a0 + b0, a1 + b1, a2 + b2)
                    out[e] = get(e, ZERO) + ca * cb
        elif n == 2:
            for (a0, a1), ca in a.items():
                for (b0, b1), cb in b.items():
                    e = (a0 + b0, a1 + b1)
                    out[e] = get(e, ZERO) + ca * cb
        else:
            for ea, ca in a.items():
                for eb, cb in b.items():
                    e = tuple(i + j for i, j in zip(ea, eb))
                    out[e] = get(e, ZERO) + ca * cb
        return MultiPoly._raw({e: c for e, c in out.items() if c}, n)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Rational)):
            return self == MultiPoly.const(other, self.nvars)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # -- calculus and substitution ------------------------------------------

    def diff(self, var: int) -> "MultiPoly":
        out = {}
        for e, c in self.terms.items():
            k = e[var]
            if k:
                f = list(e)
                f[var] = k - 1
                out[tuple(f)] = c * k
        return MultiPoly._raw(out, self.nvars)

    def __call__(self, *values):
        return self.evaluate(values)

    def evaluate(self, values: Sequence) -> Rational:
        vals = [as_rational(v) for v in values]
        total = ZERO
        for e, c in self.terms.items():
            t = c
            for v, k in zip(vals, e):
                if k:
                    t *= v ** k
            total += t
        return total

    def substitute(self, images: Sequence["MultiPoly"]) -> "MultiPoly":
        """Replace variable i by ``images[i]`` (all images share one ring)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        target = images[0].nvars
        cache = [{0: MultiPoly.one(target), 1: img} for img in images]

        def power(i, k):
            table = cache[i]
            if k not in table:
                # build from the nearest cached lower power
                lower = max(j for j in table if j < k)
                table[k] = power(i, lower) * power(i, k - lower)
            return table[k]

        result = MultiPoly.zero(target)
        for e, c in self.sorted_terms():
            t = MultiPoly.const(c, target)
            for i, k in enumerate(e):
                if k:
                    t = t * power(i, k)
            result = result + t
        return result

    def map_exponents(self, fn, nvars: int | None = None) -> "MultiPoly":
        """Apply an exponent map (monomial substitution); ``fn`` must be injective."""
        n = self.nvars if nvars is None else nvars
        out = {}
        for e, c in self.terms.items():
            f = fn(e)
            out[f] = out.get(f, ZERO) + c
        return MultiPoly._raw({e: c for e, c in out.items() if c}, n)

    def divide_monomial(self, e: Exponent) -> "MultiPoly":
        out = {}
        for f, c in self.terms.items():
            g = tuple(a - b for a, b in zip(f, e))
            if min(g) < 0:
                raise ValueError("monomial does not divide polynomial")
            out[g] = c
        return MultiPoly._raw(out, self.nvars)

    def min_exponents(self) -> Exponent:
        return tuple(min(e[i] for e in self.terms) for i in range(self.nvars))

    def coefficients(self) -> Iterable[Rational]:
        return self.terms.values()

    # -- printing ------------------------------------------------------------

    def to_str(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = DEFAULT_NAMES if self.nvars == 3 else ("u", "v") if self.nvars == 2 else tuple(
                f"x{i}" for i in range(self.nvars))
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k
            )
            mag = abs(c)
            if not mono:
                body = fmt_rational(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{fmt_rational(mag)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"MultiPoly({self.to_str()!r})"


X = MultiPoly.var(0)
Y = MultiPoly.var(1)
Z = MultiPoly.var(2)
