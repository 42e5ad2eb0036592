"""Multivariate Laurent polynomials with integer coefficients.

Terms are stored as a dict mapping exponent tuples (negative exponents
allowed) to nonzero integer coefficients; the canonical form never keeps
zero coefficients, so equality is plain dict equality.
"""


class LaurentPoly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for expts, coeff in terms.items():
                if len(expts) != nvars:
                    raise ValueError("exponent tuple has wrong length")
                if coeff:
                    self.terms[tuple(expts)] = self.terms.get(tuple(expts), 0) + coeff
            self.terms = {e: c for e, c in self.terms.items() if c}

    @classmethod
    def zero(cls, nvars):
        return cls(nvars)

    @classmethod
    def constant(cls, nvars, value):
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def one(cls, nvars):
        return cls.constant(nvars, 1)

    @classmethod
    def variable(cls, nvars, index, power=1):
        expts = [0] * nvars
        expts[index] = power
        return cls(nvars, {tuple(expts): 1})

    @classmethod
    def monomial(cls, nvars, expts, coeff=1):
        return cls(nvars, {tuple(expts): coeff})

    def is_zero(self):
        return not self.terms

    def _check(self, other):
        if self.nvars != other.nvars:
            raise ValueError("polynomials in different rings")

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(self.nvars, other)
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        out = LaurentPoly(self.nvars)
        out.terms = terms
        return out

    __radd__ = __add__

    def __neg__(self):
        out = LaurentPoly(self.nvars)
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            out = LaurentPoly(self.nvars)
            if other:
                out.terms = {e: c * other for e, c in self.terms.items()}
            return out
        self._check(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e, 0) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    terms.pop(e, None)
        out = LaurentPoly(self.nvars)
        out.terms = terms
        return out

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        result = LaurentPoly.one(self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, expts):
        """Multiply by the monomial with the given exponent tuple."""
        out = LaurentPoly(self.nvars)
        out.terms = {tuple(a + b for a, b in zip(e, expts)): c
                     for e, c in self.terms.items()}
        return out

    def divide_by_one_plus_var(self, index):
        """Exact division by (1 + x_index); raises ValueError when the
        polynomial is not divisible."""
        # group terms into univariate slices over the other exponents
        slices = {}
        for e, c in self.terms.items():
            rest = e[:index] + e[index + 1:]
            slices.setdefault(rest, {})[e[index]] = c
        quotient_terms = {}
        for rest, coeffs in slices.items():
            # divisible iff the slice vanishes at x_index = -1
            if sum(c * (-1) ** d for d, c in coeffs.items()) != 0:
                raise ValueError("polynomial is not divisible by 1 + x")
            top = max(coeffs)
            cur = dict(coeffs)
            while cur:
                d = min(cur)
                assert d <= top
                c = cur.pop(d)
                expts = rest[:index] + (d,) + rest[index:]
                quotient_terms[expts] = c
                nxt = cur.get(d + 1, 0) - c
                if nxt:
                    cur[d + 1] = nxt
                else:
                    cur.pop(d + 1, None)
        out = LaurentPoly(self.nvars)
        out.terms = quotient_terms
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(self.nvars, other)
        return (isinstance(other, LaurentPoly)
                and self.nvars == other.nvars
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items()):
            factors = [] if c != 1 or not any(e) else ["1"]
            if c != 1:
                factors.append(str(c))
            for i, p in enumerate(e):
                if p == 1:
                    factors.append(f"x{i + 1}")
                elif p:
                    factors.append(f"x{i + 1}^{p}")
            parts.append("*".join(factors) if factors else "1")
        return " + ".join(parts)
