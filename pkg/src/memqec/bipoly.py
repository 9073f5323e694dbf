"""Exact sparse bivariate polynomials in (mu, p) with integer coefficients."""

import re
from fractions import Fraction

import numpy as np

from memqec import kernels

COEFF_LIMIT = 2**63


class BiPoly:
    """Immutable polynomial ``sum c[i, j] * mu^i * p^j``.

    Coefficients are Python ints keyed by ``(i, j)``; zero coefficients are
    never stored. Arithmetic raises ``OverflowError`` as soon as a coefficient
    leaves the signed 64-bit range.

    >>> str((BiPoly.mu() + 1) * BiPoly.p())
    'p + mu*p'
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        for (i, j), c in (terms or {}).items():
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent in term {(i, j)}")
            c = int(c)
            if c:
                _check(c)
                clean[(int(i), int(j))] = c
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    @classmethod
    def const(cls, c):
        return cls({(0, 0): c})

    @classmethod
    def mu(cls):
        return cls({(1, 0): 1})

    @classmethod
    def p(cls):
        return cls({(0, 1): 1})

    @classmethod
    def coerce(cls, other):
        if isinstance(other, BiPoly):
            return other
        if isinstance(other, (int, np.integer)):
            return cls.const(int(other))
        return NotImplemented

    @property
    def terms(self):
        return dict(self._terms)

    def coeff(self, i, j):
        return self._terms.get((i, j), 0)

    @property
    def degree_mu(self):
        return max((i for i, _ in self._terms), default=0)

    @property
    def degree_p(self):
        return max((j for _, j in self._terms), default=0)

    def is_zero(self):
        return not self._terms

    # ring operations

    def __add__(self, other):
        other = BiPoly.coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for key, c in other._terms.items():
            out[key] = out.get(key, 0) + c
        return BiPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return BiPoly({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = BiPoly.coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = BiPoly.coerce(other)
        if other is NotImplemented:
            return other
        out = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                key = (i1 + i2, j1 + j2)
                out[key] = out.get(key, 0) + c1 * c2
        return BiPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = BiPoly.const(1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        other = BiPoly.coerce(other)
        if other is NotImplemented:
            return other
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    # evaluation

    def __call__(self, mu, p):
        return self.eval(mu, p)

    def eval(self, mu, p):
        """Horner evaluation; exact for ints and ``Fraction`` inputs."""
        if not self._terms:
            return 0
        rows = self.to_rows()
        outer = 0
        for row in reversed(rows):
            inner = 0
            for c in reversed(row):
                inner = inner * p + c
            outer = outer * mu + inner
        return outer

    def eval_grid(self, mu, p):
        """Vectorised float evaluation over broadcast ``mu``/``p`` arrays."""
        mu, p = np.broadcast_arrays(np.asarray(mu, dtype=float), np.asarray(p, dtype=float))
        shape = mu.shape
        flat = kernels.poly_eval_grid(self.to_array(), mu.ravel(), p.ravel())
        return flat.reshape(shape)

    def to_rows(self):
        rows = [[0] * (self.degree_p + 1) for _ in range(self.degree_mu + 1)]
        for (i, j), c in self._terms.items():
            rows[i][j] = c
        return rows

    def to_array(self):
        return np.array(self.to_rows(), dtype=np.float64)

    def subs(self, mu=None, p=None):
        """Exact substitution of integer/Fraction values; result is a BiPoly."""
        out = {}
        for (i, j), c in self._terms.items():
            val = Fraction(c)
            if mu is not None:
                val *= Fraction(mu) ** i
                i = 0
            if p is not None:
                val *= Fraction(p) ** j
                j = 0
            out[(i, j)] = out.get((i, j), 0) + val
        for key, val in out.items():
            if val.denominator != 1:
                raise ValueError("substitution produced a non-integer coefficient")
            out[key] = val.numerator
        return BiPoly(out)

    def mu_coefficients(self):
        """Map ``i -> BiPoly`` in p alone, the coefficient of ``mu^i``."""
        out = {}
        for (i, j), c in self._terms.items():
            out.setdefault(i, {})[(0, j)] = c
        return {i: BiPoly(t) for i, t in out.items()}

    # text

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for (i, j), c in self._terms.items():
            factors = []
            if i:
                factors.append("mu" if i == 1 else f"mu^{i}")
            if j:
                factors.append("p" if j == 1 else f"p^{j}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"BiPoly('{self}')"

    @classmethod
    def parse(cls, text):
        """Inverse of ``str``; also accepts ``20p^7``, ``mu^2*p`` and ``**``."""
        s = text.replace("**", "^").replace(" ", "")
        if not s:
            raise ValueError("empty polynomial text")
        if s[0] not in "+-":
            s = "+" + s
        pos = 0
        out = {}
        for m in _TERM.finditer(s):
            if m.start() != pos:
                raise ValueError(f"cannot parse polynomial near {s[pos:]!r}")
            pos = m.end()
            sign, coeff, factors = m.group("sign"), m.group("coeff"), m.group("factors")
            if not coeff and not factors:
                raise ValueError(f"empty term in {text!r}")
            c = int(coeff) if coeff else 1
            i = j = 0
            for fm in _FACTOR.finditer(factors or ""):
                power = int(fm.group(2)) if fm.group(2) else 1
                if fm.group(1) == "mu":
                    i += power
                else:
                    j += power
            key = (i, j)
            out[key] = out.get(key, 0) + (-c if sign == "-" else c)
        if pos != len(s):
            raise ValueError(f"cannot parse polynomial near {s[pos:]!r}")
        return cls(out)


_FACTOR = re.compile(r"\*?(mu|p)(?:\^(\d+))?")
_TERM = re.compile(r"(?P<sign>[+-])(?P<coeff>\d+)?(?P<factors>(?:\*?(?:mu|p)(?:\^\d+)?)*)")


def _check(c):
    if not -COEFF_LIMIT <= c < COEFF_LIMIT:
        raise OverflowError(f"coefficient {c} exceeds the signed 64-bit range")


MU = BiPoly.mu()
P = BiPoly.p()
ONE = BiPoly.const(1)


def marginal(bit):
    """Single-qubit error probability: ``p_0 = 1 - p``, ``p_1 = p``."""
    if bit == 0:
        return ONE - P
    if bit == 1:
        return P
    raise ValueError(f"bit must be 0 or 1, got {bit!r}")


def transition_factor(from_bit, to_bit):
    """Markov factor ``p(to | from) = (1 - mu) p_to + mu * [to == from]``."""
    if from_bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {from_bit!r}")
    factor = (ONE - MU) * marginal(to_bit)
    if from_bit == to_bit:
        factor = factor + MU
    return factor
