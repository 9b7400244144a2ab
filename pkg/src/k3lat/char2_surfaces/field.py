"""GF(2^k) arithmetic on bitmask-encoded polynomials.

Elements are Python ints holding the coefficient bits of a residue modulo a
fixed irreducible polynomial.  Multiplication runs on log/antilog tables,
square roots are exact (the Frobenius is bijective), and the shipped moduli
are pinned per degree for reproducible test vectors:

    k = 2:  x^2 + x + 1          (0b111)
    k = 4:  x^4 + x + 1          (0b10011)
    k = 8:  x^8 + x^4 + x^3 + x + 1   (0b100011011)
"""

from __future__ import annotations

from dataclasses import dataclass


class FieldError(ValueError):
    pass


DEFAULT_MODULI = {2: 0b111, 4: 0b10011, 8: 0b100011011}

_MAX_K = 16


def _poly_degree(a: int) -> int:
    return a.bit_length() - 1


def _poly_mulmod(a: int, b: int, modulus: int, k: int) -> int:
    out = 0
    top = 1 << k
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= modulus
    return out


def _poly_divmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise FieldError("polynomial division by zero")
    q = 0
    db = _poly_degree(b)
    while a.bit_length() - 1 >= db and a:
        shift = a.bit_length() - 1 - db
        q ^= 1 << shift
        a ^= b << shift
    return q, a


def _is_irreducible(modulus: int, k: int) -> bool:
    """Exhaustive trial division by every polynomial of degree 1..k//2."""
    if _poly_degree(modulus) != k:
        return False
    for d in range(1, k // 2 + 1):
        for tail in range(1 << d):
            f = (1 << d) | tail
            if _poly_divmod(modulus, f)[1] == 0:
                return False
    return True


class BinaryField:
    """GF(2^k) with a fixed modulus and log/antilog multiplication tables."""

    def __init__(self, k: int, modulus: int | None = None):
        if not 1 <= k <= _MAX_K:
            raise FieldError(f"extension degree must be in 1..{_MAX_K}")
        if modulus is None:
            if k not in DEFAULT_MODULI:
                raise FieldError(f"no default modulus shipped for k={k}; pass one explicitly")
            modulus = DEFAULT_MODULI[k]
        if not _is_irreducible(modulus, k):
            raise FieldError(f"modulus {bin(modulus)} is not irreducible of degree {k}")
        self.k = k
        self.modulus = modulus
        self.q = 1 << k
        self._build_tables()

    def _build_tables(self) -> None:
        q = self.q
        if q == 2:
            self.exp = [1]
            self.log = [0, 0]
            self.generator = 1
            return
        for g in range(2, q):
            exp = [0] * (q - 1)
            x = 1
            ok = True
            seen = bytearray(q)
            for i in range(q - 1):
                exp[i] = x
                if seen[x]:
                    ok = False
                    break
                seen[x] = 1
                x = _poly_mulmod(x, g, self.modulus, self.k)
            if ok and x == 1:
                log = [0] * q
                for i, v in enumerate(exp):
                    log[v] = i
                self.exp = exp
                self.log = log
                self.generator = g
                return
        raise FieldError("no multiplicative generator found (modulus not irreducible?)")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BinaryField) and self.k == other.k and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.k, self.modulus))

    def __repr__(self):
        return f"BinaryField(k={self.k}, modulus={bin(self.modulus)})"

    # raw int operations ----------------------------------------------------

    def check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise FieldError(f"element {a} out of range for GF(2^{self.k})")
        return a

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldError("inversion of zero")
        return self.exp[(self.q - 1 - self.log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise FieldError("inversion of zero")
            return 0
        return self.exp[(self.log[a] * e) % (self.q - 1)]

    def sqr(self, a: int) -> int:
        return self.mul(a, a)

    def sqrt(self, a: int) -> int:
        """The unique square root: a^(2^(k-1))."""
        if a == 0:
            return 0
        return self.pow(a, 1 << (self.k - 1))

    def omega(self) -> int:
        """A fixed cube root of unity other than 1; needs 3 | 2^k - 1 (k even)."""
        if (self.q - 1) % 3 != 0:
            raise FieldError(f"GF(2^{self.k}) has no primitive third root of unity")
        w = self.exp[(self.q - 1) // 3]
        if self.pow(w, 3) != 1 or w == 1:
            raise FieldError("cube-root construction failed")
        return w

    def elements(self):
        return range(self.q)

    def element(self, a: int) -> "FFElement":
        return FFElement(self, self.check(a))

    @staticmethod
    def parse_bits(text: str) -> int:
        """Accepts plain hex ('1b'), 0x-hex, or 0b-binary strings."""
        t = text.strip().lower()
        if t.startswith("0x"):
            return int(t, 16)
        if t.startswith("0b"):
            return int(t, 2)
        return int(t, 16)

    @staticmethod
    def to_hex(a: int) -> str:
        return format(a, "x")


@dataclass(frozen=True)
class FFElement:
    """Wrapper giving field elements operator syntax; internals stay on ints."""

    field: BinaryField
    val: int

    def __post_init__(self):
        self.field.check(self.val)

    def _coerce(self, other) -> int:
        if isinstance(other, FFElement):
            if other.field != self.field:
                raise FieldError("elements of different fields")
            return other.val
        if isinstance(other, int):
            return self.field.check(other)
        raise FieldError(f"cannot coerce {other!r}")

    def __add__(self, other):
        return FFElement(self.field, self.val ^ self._coerce(other))

    __sub__ = __add__

    def __mul__(self, other):
        return FFElement(self.field, self.field.mul(self.val, self._coerce(other)))

    def __pow__(self, e: int):
        return FFElement(self.field, self.field.pow(self.val, e))

    def inv(self) -> "FFElement":
        return FFElement(self.field, self.field.inv(self.val))

    def sqrt(self) -> "FFElement":
        return FFElement(self.field, self.field.sqrt(self.val))

    def __bool__(self):
        return self.val != 0

    def __repr__(self):
        return f"FF({format(self.val, 'x')})"
