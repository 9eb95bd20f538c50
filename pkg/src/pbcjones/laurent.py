"""Sparse Laurent polynomials in the bracket variable A.

A polynomial is a map from integer exponents to coefficients.  Two modes
exist: ``"exact"`` keeps int/Fraction coefficients and is used wherever a
single diagram is evaluated, ``"float"`` appears once sphere averaging is
involved.  Mixing modes in arithmetic promotes the result to float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, Mapping, Optional, Tuple, Union

Coeff = Union[int, Fraction, float]

EXACT = "exact"
FLOAT = "float"

# magnitude below which float-mode coefficients are dropped on construction
FLOAT_PRUNE = 1e-12


def _norm_exact(value: Coeff) -> Union[int, Fraction]:
    if isinstance(value, bool):
        raise TypeError("bool is not a polynomial coefficient")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else value
    raise TypeError(f"exact mode requires int or Fraction coefficients, got {type(value).__name__}")


class LaurentPoly:
    __slots__ = ("_c", "mode")

    def __init__(self, coeffs: Optional[Mapping[int, Coeff]] = None, mode: str = EXACT):
        if mode not in (EXACT, FLOAT):
            raise ValueError(f"unknown mode {mode!r}")
        self.mode = mode
        c: Dict[int, Coeff] = {}
        if coeffs:
            if mode == EXACT:
                for e, v in coeffs.items():
                    v = _norm_exact(v)
                    if v != 0:
                        c[int(e)] = v
            else:
                for e, v in coeffs.items():
                    v = float(v)
                    if abs(v) > FLOAT_PRUNE:
                        c[int(e)] = v
        self._c = c

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, mode: str = EXACT) -> "LaurentPoly":
        return cls({}, mode)

    @classmethod
    def one(cls, mode: str = EXACT) -> "LaurentPoly":
        return cls({0: 1}, mode)

    @classmethod
    def monomial(cls, coeff: Coeff, exp: int, mode: str = EXACT) -> "LaurentPoly":
        return cls({exp: coeff}, mode)

    # -- inspection -----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._c

    @property
    def min_exp(self) -> Optional[int]:
        return min(self._c) if self._c else None

    @property
    def max_exp(self) -> Optional[int]:
        return max(self._c) if self._c else None

    @property
    def span(self) -> int:
        """Width of the exponent range, 0 for the zero polynomial."""
        return (max(self._c) - min(self._c)) if self._c else 0

    def coefficient(self, exp: int) -> Coeff:
        return self._c.get(exp, 0)

    def terms(self) -> Iterator[Tuple[int, Coeff]]:
        """Yield (exponent, coefficient) in ascending exponent order."""
        for e in sorted(self._c):
            yield e, self._c[e]

    def __len__(self) -> int:
        return len(self._c)

    def __bool__(self) -> bool:
        return bool(self._c)

    # -- arithmetic -----------------------------------------------------

    def _join_mode(self, other: "LaurentPoly") -> str:
        return FLOAT if FLOAT in (self.mode, other.mode) else EXACT

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        mode = self._join_mode(other)
        c = dict(self._c)
        for e, v in other._c.items():
            c[e] = c.get(e, 0) + v
        return LaurentPoly(c, mode)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        mode = self._join_mode(other)
        c = dict(self._c)
        for e, v in other._c.items():
            c[e] = c.get(e, 0) - v
        return LaurentPoly(c, mode)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -v for e, v in self._c.items()}, self.mode)

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            mode = self._join_mode(other)
            c: Dict[int, Coeff] = {}
            for e1, v1 in self._c.items():
                for e2, v2 in other._c.items():
                    e = e1 + e2
                    c[e] = c.get(e, 0) + v1 * v2
            return LaurentPoly(c, mode)
        if isinstance(other, (int, Fraction, float)) and not isinstance(other, bool):
            mode = FLOAT if (self.mode == FLOAT or isinstance(other, float)) else EXACT
            return LaurentPoly({e: v * other for e, v in self._c.items()}, mode)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = LaurentPoly.one(self.mode)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale_exponents(self, factor: int) -> "LaurentPoly":
        """Substitute A -> A**factor."""
        return LaurentPoly({e * factor: v for e, v in self._c.items()}, self.mode)

    # -- comparison and conversion --------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.mode == other.mode and self._c == other._c

    def __hash__(self) -> int:
        # instances are never mutated after construction
        return hash((self.mode, tuple(sorted(self._c.items()))))

    def approx_eq(self, other: "LaurentPoly", tol: float = 1e-9) -> bool:
        exps = set(self._c) | set(other._c)
        return all(abs(float(self._c.get(e, 0)) - float(other._c.get(e, 0))) <= tol for e in exps)

    def to_float(self) -> "LaurentPoly":
        if self.mode == FLOAT:
            return self
        return LaurentPoly({e: float(v) for e, v in self._c.items()}, FLOAT)

    def pruned(self, eps: float) -> "LaurentPoly":
        """Drop coefficients of magnitude <= eps (any mode)."""
        return LaurentPoly({e: v for e, v in self._c.items() if abs(float(v)) > eps}, self.mode)

    def evaluate(self, x: complex) -> complex:
        return sum(v * x ** e for e, v in self._c.items())

    # -- serialization --------------------------------------------------

    def to_json_obj(self) -> dict:
        coeffs: Dict[str, Union[int, float, str]] = {}
        for e, v in self._c.items():
            if isinstance(v, Fraction):
                coeffs[str(e)] = f"{v.numerator}/{v.denominator}"
            else:
                coeffs[str(e)] = v
        return {"mode": self.mode, "coeffs": coeffs}

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "LaurentPoly":
        mode = obj.get("mode", EXACT)
        coeffs: Dict[int, Coeff] = {}
        for k, v in obj["coeffs"].items():
            if isinstance(v, str):
                v = Fraction(v)
            coeffs[int(k)] = v
        return cls(coeffs, mode)

    # -- display --------------------------------------------------------

    def _fmt_coeff(self, v: Coeff) -> str:
        if isinstance(v, float):
            return f"{v:.6g}"
        return str(v)

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for e in sorted(self._c):
            v = self._c[e]
            neg = (float(v) < 0)
            mag = -v if neg else v
            if e == 0:
                body = self._fmt_coeff(mag)
            else:
                a = "A" if e == 1 else f"A^{e}"
                body = a if mag == 1 else f"{self._fmt_coeff(mag)}*{a}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"LaurentPoly({self._c!r}, mode={self.mode!r})"


def d_poly() -> LaurentPoly:
    """The loop value -A^2 - A^-2."""
    return LaurentPoly({2: -1, -2: -1})


def d_power(k: int) -> LaurentPoly:
    if k < 0:
        raise ValueError("negative powers of the loop value are not polynomials")
    return d_poly() ** k


@dataclass(frozen=True)
class DivisionResult:
    quotient: LaurentPoly
    remainder: LaurentPoly
    remainder_span: int
    remainder_is_zero: bool


def _divide_class(coeffs: Dict[int, Coeff], k: int) -> Tuple[Dict[int, Coeff], Dict[int, Coeff]]:
    """Divide a polynomial in B (exponent->coeff) by (-B - B^-1)^k.

    Descending long division emitting quotient terms with nonnegative
    B exponents only; it stops as soon as the next quotient term would
    need a negative exponent and leaves the rest as the remainder.  This
    keeps the quotient in ordinary polynomial form and makes the split
    unique.
    """
    if not coeffs:
        return {}, {}
    sign = -1 if k & 1 else 1
    # (-B - B^-1)^k == sign * sum_j C(k,j) B^(2j-k), leading term sign * B^k
    divisor = {2 * j - k: sign * math.comb(k, j) for j in range(k + 1)}
    quot: Dict[int, Coeff] = {}
    work = dict(coeffs)
    while work:
        deg = max(work)
        qe = deg - k
        if qe < 0:
            break
        factor = work[deg] * sign  # divisor lead coefficient is `sign`, sign^2 == 1
        quot[qe] = factor
        del work[deg]  # cancels exactly by construction
        for de, dv in divisor.items():
            if de == k:
                continue
            e = qe + de
            nv = work.get(e, 0) - factor * dv
            if nv == 0:
                work.pop(e, None)
            else:
                work[e] = nv
    return quot, work


def divide_by_d_power(p: LaurentPoly, k: int, zero_tol: float = 1e-9) -> DivisionResult:
    """Split p as quotient * (-A^2 - A^-2)^k + remainder.

    The quotient is unique when the division is exact.  In float mode the
    remainder is tested against ``zero_tol`` and its span is measured after
    pruning at that tolerance.
    """
    if k < 0:
        raise ValueError("power must be nonnegative")
    if k == 0:
        return DivisionResult(p, LaurentPoly.zero(p.mode), 0, True)
    is_float = p.mode == FLOAT
    even: Dict[int, Coeff] = {}
    odd: Dict[int, Coeff] = {}
    for e, v in p._c.items():
        if e % 2 == 0:
            even[e // 2] = v
        else:
            odd[(e - 1) // 2] = v
    qc: Dict[int, Coeff] = {}
    rc: Dict[int, Coeff] = {}
    for parity, cls_coeffs in ((0, even), (1, odd)):
        q, r = _divide_class(cls_coeffs, k)
        for e, v in q.items():
            qc[2 * e + parity] = v
        for e, v in r.items():
            rc[2 * e + parity] = v
    quotient = LaurentPoly(qc, p.mode)
    remainder = LaurentPoly(rc, p.mode)
    if is_float:
        trimmed = remainder.pruned(zero_tol)
        return DivisionResult(quotient, remainder, trimmed.span, trimmed.is_zero)
    return DivisionResult(quotient, remainder, remainder.span, remainder.is_zero)
