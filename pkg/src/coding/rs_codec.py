"""Reed-Solomon encoder and bounded-minimum-distance errors-and-erasures decoder.

Codewords are indexed by polynomial degree: symbol ``j`` is the coefficient of x^j
and has locator alpha^j.  The generator has roots alpha^1 .. alpha^(d-1).  Encoding is
systematic with the information in the last k positions.  The decoder is the
Berlekamp-Massey algorithm started from the erasure locator, followed by Chien
search and Forney's formula.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from ..utils.errors import ParameterError
from .galois_field import FieldSpec, GaloisField, field_ops

logger = logging.getLogger(__name__)

ERASURE = -1


class OuterCode(BaseModel):
    """Parameters of an MDS (Reed-Solomon) outer code over GF(2^m)."""

    model_config = ConfigDict(frozen=True)

    field: FieldSpec = FieldSpec()
    n: int
    k: int
    d: int = 0

    @model_validator(mode="before")
    @classmethod
    def _fill_distance(cls, data):
        if isinstance(data, dict) and not data.get("d") and "n" in data and "k" in data:
            data = dict(data)
            data["d"] = data["n"] - data["k"] + 1
        return data

    @model_validator(mode="after")
    def _check_parameters(self) -> "OuterCode":
        if not 1 <= self.k <= self.n <= (1 << self.field.m) - 1:
            raise ParameterError(
                f"need 1 <= k <= n <= 2^m - 1, got n={self.n}, k={self.k}, m={self.field.m}"
            )
        if self.d != self.n - self.k + 1:
            raise ParameterError(f"RS codes are MDS: d must be {self.n - self.k + 1}, got {self.d}")
        return self

    @classmethod
    def rs(cls, n: int, k: int, m: int = 8, primitive_polynomial: Optional[int] = None) -> "OuterCode":
        spec = FieldSpec.default(m) if primitive_polynomial is None else FieldSpec(
            m=m, primitive_polynomial=primitive_polynomial
        )
        return cls(field=spec, n=n, k=k)

    def describe(self) -> str:
        return f"RS(2^{self.field.m}; {self.n},{self.k},{self.d})"


@dataclass(frozen=True)
class SymbolWord:
    """A received or transmitted word; ``ERASURE`` marks erased positions."""

    symbols: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.symbols)

    @property
    def erasure_positions(self) -> List[int]:
        return [j for j, s in enumerate(self.symbols) if s == ERASURE]

    @property
    def num_erasures(self) -> int:
        return sum(1 for s in self.symbols if s == ERASURE)

    def distance_to(self, other: "SymbolWord") -> int:
        """Hamming distance counted over positions unerased in both words."""
        return sum(
            1
            for a, b in zip(self.symbols, other.symbols)
            if a != ERASURE and b != ERASURE and a != b
        )


class ReedSolomonCodec:
    """Systematic RS encoder plus BMD errors-and-erasures decoder for one code."""

    def __init__(self, code: OuterCode):
        self.code = code
        self.gf: GaloisField = field_ops(code.field)
        self.n, self.k, self.d = code.n, code.k, code.d
        self.parity_len = self.n - self.k
        self.generator = self._generator_polynomial()
        self._parity_logs, self._parity_mask = self._parity_rows()
        self._positions = np.arange(self.n, dtype=np.int64)
        self._syndrome_powers = np.arange(1, self.d, dtype=np.int64)

    def _generator_polynomial(self) -> List[int]:
        g = [1]
        for i in range(1, self.d):
            g = self._poly_mul(g, [self.gf.exp(i), 1])
        return g

    def _parity_rows(self) -> Tuple[np.ndarray, np.ndarray]:
        """Rows x^(n-k+i) mod g(x), i = 0..k-1, stored as logs for vectorized encoding."""
        r = self.parity_len
        rows = np.zeros((self.k, r), dtype=np.int64)
        if r == 0:
            return rows, rows.astype(bool)
        # start from x^(r) mod g = g(x) - x^r (g is monic, characteristic 2)
        rem = list(self.generator[:r])
        for i in range(self.k):
            rows[i] = rem
            # multiply by x and reduce
            carry = rem[-1]
            rem = [0] + rem[:-1]
            if carry:
                rem = [c ^ self.gf.mul(carry, gc) for c, gc in zip(rem, self.generator[:r])]
        mask = rows != 0
        return self.gf.log_table[rows], mask

    def _poly_mul(self, p: Sequence[int], q: Sequence[int]) -> List[int]:
        out = [0] * (len(p) + len(q) - 1)
        for i, a in enumerate(p):
            if a == 0:
                continue
            for j, b in enumerate(q):
                if b:
                    out[i + j] ^= self.gf.mul(a, b)
        return out

    def _check_length(self, symbols: Sequence[int], expected: int, what: str) -> None:
        if len(symbols) != expected:
            raise ParameterError(f"{what} must have length {expected}, got {len(symbols)}")

    def encode(self, info: Sequence[int]) -> SymbolWord:
        """Systematic encoding; ``info`` ends up in positions n-k .. n-1."""
        self._check_length(info, self.k, "info word")
        info_arr = np.asarray(info, dtype=np.int64)
        if np.any(info_arr < 0) or np.any(info_arr >= self.gf.size):
            raise ParameterError("info symbols must be field elements (no erasure markers)")
        parity = np.zeros(self.parity_len, dtype=np.int64)
        nz = np.nonzero(info_arr)[0]
        if nz.size and self.parity_len:
            logs = self.gf.log_table[info_arr[nz]][:, None] + self._parity_logs[nz]
            terms = np.where(self._parity_mask[nz], self.gf.exp_table[logs], 0)
            parity = np.bitwise_xor.reduce(terms, axis=0)
        return SymbolWord(tuple(int(x) for x in parity) + tuple(int(x) for x in info_arr))

    def syndromes(self, symbols: Sequence[int]) -> List[int]:
        """S_i = r(alpha^i), i = 1..d-1; erasure markers count as zero."""
        r = np.asarray(symbols, dtype=np.int64)
        r = np.where(r == ERASURE, 0, r)
        nz = np.nonzero(r)[0]
        if nz.size == 0 or self.d == 1:
            return [0] * (self.d - 1)
        power = (self.gf.log_table[r[nz]][:, None] + np.outer(nz, self._syndrome_powers)) % self.gf.order
        return [int(s) for s in np.bitwise_xor.reduce(self.gf.exp_table[power], axis=0)]

    def is_codeword(self, word: SymbolWord) -> bool:
        return ERASURE not in word.symbols and not any(self.syndromes(word.symbols))

    def info_symbols(self, word: SymbolWord) -> Tuple[int, ...]:
        return word.symbols[self.parity_len:]

    def decode(self, word: SymbolWord) -> Optional[SymbolWord]:
        """Errors-and-erasures BMD decoding.

        Returns the decoded codeword, or ``None`` on decoding failure.  A returned
        codeword always has zero syndrome and differs from the unerased received
        symbols in at most floor((d-1-tau)/2) positions.
        """
        self._check_length(word.symbols, self.n, "received word")
        gf = self.gf
        erasures = word.erasure_positions
        tau = len(erasures)
        if tau > self.d - 1:
            return None
        received = [0 if s == ERASURE else s for s in word.symbols]
        synd = self.syndromes(received)
        if tau == 0 and not any(synd):
            return SymbolWord(tuple(received))

        gamma = [1]
        for j in erasures:
            gamma = self._poly_mul(gamma, [1, gf.exp(j)])

        lam = list(gamma)
        prev = list(gamma)
        length = tau
        for r in range(tau + 1, self.d):
            delta = 0
            for j in range(min(len(lam), r)):
                if lam[j]:
                    delta ^= gf.mul(lam[j], synd[r - j - 1])
            shifted = [0] + prev
            if delta == 0:
                prev = shifted
                continue
            update = [gf.mul(delta, c) for c in shifted]
            size = max(len(lam), len(update))
            candidate = [
                (lam[i] if i < len(lam) else 0) ^ (update[i] if i < len(update) else 0)
                for i in range(size)
            ]
            if 2 * length <= r + tau - 1:
                inv_delta = gf.inv(delta)
                prev = [gf.mul(inv_delta, c) for c in lam]
                length = r + tau - length
            else:
                prev = shifted
            lam = candidate

        while len(lam) > 1 and lam[-1] == 0:
            lam.pop()
        degree = len(lam) - 1
        if degree != length or 2 * length - tau > self.d - 1:
            return None

        values = gf.poly_eval_powers(lam, -self._positions)
        roots = np.nonzero(values == 0)[0]
        if roots.size != degree:
            return None

        omega = [0] * (self.d - 1)
        for i, s in enumerate(synd):
            if s == 0:
                continue
            for j, c in enumerate(lam):
                if i + j >= self.d - 1:
                    break
                if c:
                    omega[i + j] ^= gf.mul(s, c)
        derivative = [lam[i] if i % 2 == 1 else 0 for i in range(1, len(lam))]

        corrected = list(received)
        for pos in roots.tolist():
            x_inv = gf.exp(-pos)
            denom = gf.poly_eval(derivative, x_inv)
            if denom == 0:
                return None
            corrected[pos] ^= gf.div(gf.poly_eval(omega, x_inv), denom)

        if any(self.syndromes(corrected)):
            return None
        changed = sum(
            1 for j, s in enumerate(word.symbols) if s != ERASURE and corrected[j] != s
        )
        if changed > (self.d - 1 - tau) // 2:
            logger.debug(f"Rejected candidate at distance {changed} with {tau} erasures")
            return None
        return SymbolWord(tuple(corrected))


@lru_cache(maxsize=None)
def codec_for(code: OuterCode) -> ReedSolomonCodec:
    return ReedSolomonCodec(code)


def rs_encode(code: OuterCode, info: Sequence[int]) -> SymbolWord:
    return codec_for(code).encode(info)


def rs_decode_ee(code: OuterCode, word: SymbolWord) -> Optional[SymbolWord]:
    """Decode ``word``; ``None`` signals a decoding failure."""
    return codec_for(code).decode(word)
