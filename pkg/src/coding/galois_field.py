"""Table-based arithmetic over GF(2^m).

Elements are plain integers in ``[0, 2^m)`` whose bits are the coefficients of a
polynomial over GF(2).  Multiplication goes through log/antilog tables built from
a primitive polynomial, the same construction used by most RS implementations.
"""
import logging
from functools import lru_cache
from typing import Dict, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from ..utils.errors import FieldConstructionError

logger = logging.getLogger(__name__)


DEFAULT_PRIMITIVE_POLYNOMIALS: Dict[int, int] = {
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x89,
    8: 0x11D,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
}


def _multiplicative_order_of_x(poly: int, m: int) -> int:
    """Order of x modulo ``poly``; equals 2^m - 1 iff ``poly`` is primitive."""
    top = 1 << m
    x = 1
    for order in range(1, top):
        x <<= 1
        if x & top:
            x ^= poly
        if x == 1:
            return order
    return 0


class FieldSpec(BaseModel):
    """Extension degree and primitive polynomial of GF(2^m)."""

    model_config = ConfigDict(frozen=True)

    m: int = 8
    primitive_polynomial: int = 0x11D

    @model_validator(mode="after")
    def _check_primitive(self) -> "FieldSpec":
        if not 2 <= self.m <= 16:
            raise FieldConstructionError(f"m must lie in [2, 16], got {self.m}")
        if self.primitive_polynomial.bit_length() != self.m + 1:
            raise FieldConstructionError(
                f"polynomial {self.primitive_polynomial:#x} does not have degree {self.m}"
            )
        order = _multiplicative_order_of_x(self.primitive_polynomial, self.m)
        if order != (1 << self.m) - 1:
            raise FieldConstructionError(
                f"polynomial {self.primitive_polynomial:#x} is not primitive "
                f"(x has order {order}, need {(1 << self.m) - 1})"
            )
        return self

    @classmethod
    def default(cls, m: int) -> "FieldSpec":
        """Field with the conventional primitive polynomial for ``m``."""
        if m not in DEFAULT_PRIMITIVE_POLYNOMIALS:
            raise FieldConstructionError(f"no default primitive polynomial for m={m}")
        return cls(m=m, primitive_polynomial=DEFAULT_PRIMITIVE_POLYNOMIALS[m])


class GaloisField:
    """Arithmetic context for GF(2^m). Immutable after construction."""

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.m = spec.m
        self.size = 1 << spec.m
        self.order = self.size - 1

        exp_table = np.zeros(2 * self.order, dtype=np.int64)
        log_table = np.zeros(self.size, dtype=np.int64)
        x = 1
        for i in range(self.order):
            exp_table[i] = x
            log_table[x] = i
            x <<= 1
            if x & self.size:
                x ^= spec.primitive_polynomial
        # doubled so that log[a] + log[b] never needs a modulo
        exp_table[self.order:] = exp_table[: self.order]
        exp_table.setflags(write=False)
        log_table.setflags(write=False)
        self.exp_table = exp_table
        self.log_table = log_table
        # plain lists are much faster than numpy scalars in the decoder's inner loops
        self._exp = exp_table.tolist()
        self._log = log_table.tolist()
        logger.debug(f"Built GF(2^{self.m}) tables with polynomial {spec.primitive_polynomial:#x}")

    @property
    def alpha(self) -> int:
        return 2

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by zero in GF(2^m)")
        if a == 0:
            return 0
        return self._exp[self._log[a] - self._log[b] + self.order]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse in GF(2^m)")
        return self._exp[self.order - self._log[a]]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("zero has no inverse in GF(2^m)")
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % self.order]

    def exp(self, e: int) -> int:
        """alpha^e for any integer e."""
        return self._exp[e % self.order]

    def log(self, a: int) -> int:
        """Discrete logarithm to base alpha."""
        if a == 0:
            raise ValueError("log(0) is undefined")
        return self._log[a]

    def poly_eval(self, coeffs: Sequence[int], x: int) -> int:
        """Horner evaluation; ``coeffs[i]`` multiplies x^i."""
        y = 0
        for c in reversed(coeffs):
            y = self.mul(y, x) ^ c
        return y

    def poly_eval_powers(self, coeffs: Sequence[int], exponents: np.ndarray) -> np.ndarray:
        """Evaluate a polynomial at alpha^e for every e in ``exponents`` at once."""
        coeffs = np.asarray(coeffs, dtype=np.int64)
        exponents = np.asarray(exponents, dtype=np.int64)
        nz = np.nonzero(coeffs)[0]
        if nz.size == 0:
            return np.zeros(exponents.shape, dtype=np.int64)
        logs = self.log_table[coeffs[nz]]
        power = (logs[:, None] + np.outer(nz, exponents)) % self.order
        return np.bitwise_xor.reduce(self.exp_table[power], axis=0)


@lru_cache(maxsize=None)
def field_ops(spec: FieldSpec) -> GaloisField:
    """Shared arithmetic context for ``spec``."""
    return GaloisField(spec)
