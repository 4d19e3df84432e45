"""
高斯整数精确算术模块
提供 ℤ[i] 上的范数、单位、整除、GCD、模逆、剩余系枚举、因子分解、Möbius 与 Euler 函数
"""

import math
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from .config import COMPONENT_LIMIT
from .errors import ArithmeticDomainError, ComponentOverflowError


@dataclass(frozen=True)
class GaussianInt:
    """ℤ[i] 中的元素 re + im·i，分量绝对值小于 2³¹"""

    re: int
    im: int = 0

    def __post_init__(self):
        re_, im_ = int(self.re), int(self.im)
        if abs(re_) >= COMPONENT_LIMIT or abs(im_) >= COMPONENT_LIMIT:
            raise ComponentOverflowError(f"高斯整数分量溢出: ({re_}, {im_})")
        object.__setattr__(self, "re", re_)
        object.__setattr__(self, "im", im_)

    @classmethod
    def of(cls, value: Union["GaussianInt", int, complex, str, Tuple[int, int]]) -> "GaussianInt":
        """把整数、复数、字符串（如 "4+i"）或二元组转换为 GaussianInt"""
        if isinstance(value, GaussianInt):
            return value
        if isinstance(value, (bool, np.bool_)):
            raise ArithmeticDomainError(f"无法解释为高斯整数: {value!r}")
        if isinstance(value, (int, np.integer)):
            return cls(int(value), 0)
        if isinstance(value, (tuple, list)) and len(value) == 2:
            return cls(int(value[0]), int(value[1]))
        if isinstance(value, complex):
            if value.real != int(value.real) or value.imag != int(value.imag):
                raise ArithmeticDomainError(f"复数 {value} 不是高斯整数")
            return cls(int(value.real), int(value.imag))
        if isinstance(value, str):
            return parse_gaussian(value)
        raise ArithmeticDomainError(f"无法解释为高斯整数: {value!r}")

    def __add__(self, other):
        other = GaussianInt.of(other)
        return GaussianInt(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = GaussianInt.of(other)
        return GaussianInt(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussianInt.of(other) - self

    def __mul__(self, other):
        other = GaussianInt.of(other)
        return GaussianInt(self.re * other.re - self.im * other.im,
                           self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianInt(-self.re, -self.im)

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ArithmeticDomainError("高斯整数不支持负指数幂")
        result, base = ONE, self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __complex__(self):
        return complex(self.re, self.im)

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return _imag_str(self.im)
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{_imag_str(abs(self.im))}"

    def conjugate(self) -> "GaussianInt":
        return GaussianInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def is_unit(self) -> bool:
        return self.norm() == 1

    def divides(self, other) -> bool:
        """self | other"""
        other = GaussianInt.of(other)
        if not self:
            return not other
        n = self.norm()
        prod = other * self.conjugate()
        return prod.re % n == 0 and prod.im % n == 0

    def exact_div(self, divisor) -> "GaussianInt":
        """整除时的商，不整除则抛出异常"""
        divisor = GaussianInt.of(divisor)
        if not divisor:
            raise ArithmeticDomainError("除数为零")
        n = divisor.norm()
        prod = self * divisor.conjugate()
        if prod.re % n or prod.im % n:
            raise ArithmeticDomainError(f"{divisor} 不整除 {self}")
        return GaussianInt(prod.re // n, prod.im // n)

    def divmod_nearest(self, divisor) -> Tuple["GaussianInt", "GaussianInt"]:
        """最近商带余除法，余数范数不超过除数范数的一半"""
        divisor = GaussianInt.of(divisor)
        if not divisor:
            raise ArithmeticDomainError("除数为零")
        n = divisor.norm()
        prod = self * divisor.conjugate()
        quotient = GaussianInt(_round_div(prod.re, n), _round_div(prod.im, n))
        return quotient, self - quotient * divisor


def _imag_str(value: int) -> str:
    return "i" if value == 1 else f"{value}i"


def _round_div(a: int, n: int) -> int:
    return (2 * a + n) // (2 * n)


ZERO = GaussianInt(0, 0)
ONE = GaussianInt(1, 0)
I = GaussianInt(0, 1)
UNITS: Tuple[GaussianInt, ...] = (ONE, I, GaussianInt(-1, 0), GaussianInt(0, -1))

_GAUSSIAN_PATTERN = re.compile(r"^\s*([+-]?\d+)?\s*(?:([+-])\s*(\d*)\s*i)?\s*$")
_PURE_IMAG_PATTERN = re.compile(r"^\s*([+-]?)\s*(\d*)\s*i\s*$")


def parse_gaussian(text: str) -> GaussianInt:
    """
    解析形如 "4+i"、"-2-3i"、"5"、"i"、"-7i" 的字符串

    Raises:
        ArithmeticDomainError: 无法解析
    """
    text = text.replace(" ", "").replace("j", "i")
    match = _PURE_IMAG_PATTERN.match(text)
    if match:
        magnitude = int(match.group(2)) if match.group(2) else 1
        return GaussianInt(0, -magnitude if match.group(1) == "-" else magnitude)
    match = _GAUSSIAN_PATTERN.match(text)
    if not match or match.group(1) is None:
        raise ArithmeticDomainError(f"无法解析高斯整数: {text!r}")
    re_part = int(match.group(1))
    im_part = 0
    if match.group(2):
        im_part = int(match.group(3)) if match.group(3) else 1
        if match.group(2) == "-":
            im_part = -im_part
    return GaussianInt(re_part, im_part)


GaussianLike = Union[GaussianInt, int, complex, str, Tuple[int, int]]


def norm(z: GaussianLike) -> int:
    """N(z) = re² + im²"""
    return GaussianInt.of(z).norm()


def is_unit(z: GaussianLike) -> bool:
    return GaussianInt.of(z).is_unit()


def canonical(z: GaussianLike) -> GaussianInt:
    """规范伴随元：re > 0 且 im ≥ 0 的那个伴随元，0 映射到 0"""
    z = GaussianInt.of(z)
    if not z:
        return z
    for unit in UNITS:
        w = z * unit
        if w.re > 0 and w.im >= 0:
            return w
    raise AssertionError("unreachable")


def unit_part(z: GaussianLike) -> GaussianInt:
    """满足 z = u·canonical(z) 的单位 u"""
    z = GaussianInt.of(z)
    return z.exact_div(canonical(z))


def gcd_ext(a: GaussianLike, b: GaussianLike) -> Tuple[GaussianInt, GaussianInt, GaussianInt]:
    """
    扩展欧几里得算法，返回 (g, x, y) 使 a·x + b·y = g，g 为规范伴随元

    Raises:
        ArithmeticDomainError: a、b 同时为零
    """
    a, b = GaussianInt.of(a), GaussianInt.of(b)
    if not a and not b:
        raise ArithmeticDomainError("gcd(0, 0) 无定义")
    r0, r1 = a, b
    x0, x1 = ONE, ZERO
    y0, y1 = ZERO, ONE
    while r1:
        quotient, remainder = r0.divmod_nearest(r1)
        r0, r1 = r1, remainder
        x0, x1 = x1, x0 - quotient * x1
        y0, y1 = y1, y0 - quotient * y1
    unit = canonical(r0).exact_div(r0)
    return r0 * unit, x0 * unit, y0 * unit


def gcd(*values: GaussianLike) -> GaussianInt:
    """多个元素的规范 gcd（忽略零）"""
    result = ZERO
    for value in values:
        value = GaussianInt.of(value)
        if not value:
            continue
        result = canonical(value) if not result else gcd_ext(result, value)[0]
    return result


def coprime(a: GaussianLike, b: GaussianLike) -> bool:
    """(a, b) = 𝒪"""
    a, b = GaussianInt.of(a), GaussianInt.of(b)
    if not a and not b:
        return False
    return gcd_ext(a, b)[0] == ONE


def inverse_mod(a: GaussianLike, c: GaussianLike) -> GaussianInt:
    """
    a 模 c 的逆元 ā，使 a·ā ≡ 1 (mod c)，结果为剩余系中的规范代表

    Raises:
        ArithmeticDomainError: 零模或 a 与 c 不互素
    """
    a, c = GaussianInt.of(a), GaussianInt.of(c)
    if not c:
        raise ArithmeticDomainError("模为零")
    g, x, _ = gcd_ext(a, c)
    if g != ONE:
        raise ArithmeticDomainError(f"{a} 模 {c} 不可逆")
    return enumerate_residues(c).reduce(x)


def additive_character(numerator: GaussianLike, denominator: GaussianLike) -> complex:
    """e(Re(numerator/denominator)) = exp(2πi·Re(numerator/denominator))"""
    numerator, denominator = GaussianInt.of(numerator), GaussianInt.of(denominator)
    n = denominator.norm()
    phase = (numerator * denominator.conjugate()).re % n
    return complex(np.exp(2j * np.pi * phase / n))


def _divide_out(n: GaussianInt, p: GaussianInt) -> Tuple[GaussianInt, int]:
    exponent = 0
    while p.divides(n):
        n = n.exact_div(p)
        exponent += 1
    return n, exponent


def _rational_factor(n: int) -> Dict[int, int]:
    factors: Dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


@lru_cache(maxsize=None)
def split_prime(p: int) -> GaussianInt:
    """p ≡ 1 (mod 4) 时返回 π 使 N(π) = p（规范伴随元）"""
    for a in range(1, math.isqrt(p) + 1):
        b2 = p - a * a
        b = math.isqrt(b2)
        if b * b == b2:
            return canonical(GaussianInt(a, b))
    raise ArithmeticDomainError(f"{p} 不是两平方和")


@lru_cache(maxsize=None)
def _factor_cached(n: GaussianInt) -> Tuple[Tuple[Tuple[GaussianInt, int], ...], GaussianInt]:
    remaining = n
    result: List[Tuple[GaussianInt, int]] = []
    for p, _ in sorted(_rational_factor(n.norm()).items()):
        if p == 2:
            candidates = [GaussianInt(1, 1)]
        elif p % 4 == 3:
            candidates = [GaussianInt(p, 0)]
        else:
            pi = split_prime(p)
            candidates = [pi, canonical(pi.conjugate())]
        for prime in candidates:
            remaining, exponent = _divide_out(remaining, prime)
            if exponent:
                result.append((prime, exponent))
    if not remaining.is_unit():
        raise AssertionError(f"因子分解未完成: {n}")
    result.sort(key=lambda item: (item[0].norm(), item[0].re, item[0].im))
    return tuple(result), remaining


def factor(n: GaussianLike) -> List[Tuple[GaussianInt, int]]:
    """
    因子分解为规范伴随素元的幂

    Args:
        n: 非零非单位的高斯整数

    Returns:
        list: [(素元, 指数), ...]，按范数排序；单位部分由 factor_unit 给出

    Raises:
        ArithmeticDomainError: 零或单位输入
    """
    n = GaussianInt.of(n)
    if not n or n.is_unit():
        raise ArithmeticDomainError(f"不能分解零或单位: {n}")
    return list(_factor_cached(n)[0])


def factor_unit(n: GaussianLike) -> GaussianInt:
    """n = unit·∏ p^e 中的单位"""
    n = GaussianInt.of(n)
    if n.is_unit():
        return n
    return _factor_cached(n)[1]


def _factor_or_empty(n: GaussianInt) -> List[Tuple[GaussianInt, int]]:
    if not n:
        raise ArithmeticDomainError("零没有因子分解")
    return [] if n.is_unit() else factor(n)


def prime_factors(n: GaussianLike) -> List[GaussianInt]:
    """n 的不同素因子（规范伴随元），单位返回空列表"""
    return [p for p, _ in _factor_or_empty(GaussianInt.of(n))]


def is_squarefree(n: GaussianLike) -> bool:
    return all(e == 1 for _, e in _factor_or_empty(GaussianInt.of(n)))


def is_odd(n: GaussianLike) -> bool:
    """n 不被 1+i 整除"""
    return not GaussianInt(1, 1).divides(GaussianInt.of(n))


def mobius(n: GaussianLike) -> int:
    """Möbius 函数 μ(n)，单位上取 1"""
    factors = _factor_or_empty(GaussianInt.of(n))
    if any(e > 1 for _, e in factors):
        return 0
    return -1 if len(factors) % 2 else 1


def euler_phi(n: GaussianLike) -> int:
    """Euler 函数 φ(n) = N(n)·∏(1 − 1/N(p))"""
    n = GaussianInt.of(n)
    result = n.norm()
    for p, _ in _factor_or_empty(n):
        result = result // p.norm() * (p.norm() - 1)
    return result


def ideal_divisors(n: GaussianLike) -> List[GaussianInt]:
    """每个理想因子取一个规范代表"""
    n = GaussianInt.of(n)
    divisors_ = [ONE]
    for p, e in _factor_or_empty(n):
        powers = [p ** k for k in range(e + 1)]
        divisors_ = [d * pk for d in divisors_ for pk in powers]
    return sorted((canonical(d) for d in divisors_), key=lambda d: (d.norm(), d.re, d.im))


def divisors(n: GaussianLike) -> List[GaussianInt]:
    """
    n 的全部元素因子（含四个伴随元），个数为 4·∏(eᵢ+1)

    Raises:
        ArithmeticDomainError: n = 0
    """
    n = GaussianInt.of(n)
    if not n:
        raise ArithmeticDomainError("零有无穷多个因子")
    return [d * u for d in ideal_divisors(n) for u in UNITS]


def elements_up_to_norm(max_norm: int, include_zero: bool = False) -> List[GaussianInt]:
    """范数不超过 max_norm 的全部高斯整数，按 (范数, re, im) 排序"""
    bound = math.isqrt(max_norm)
    result = [GaussianInt(a, b) for a in range(-bound, bound + 1) for b in range(-bound, bound + 1)
              if a * a + b * b <= max_norm and (include_zero or a or b)]
    return sorted(result, key=lambda z: (z.norm(), z.re, z.im))


def canonical_up_to_norm(max_norm: int) -> List[GaussianInt]:
    """范数不超过 max_norm 的非零规范伴随元（每个理想一个）"""
    return [z for z in elements_up_to_norm(max_norm) if z == canonical(z)]


@dataclass(frozen=True)
class ResidueSystem:
    """
    ℤ[i]/(c) 的完全剩余系

    代表元取列式横截 {x + iy : 0 ≤ x < N(c)/g, 0 ≤ y < g}，其中 g 为 c 的两个分量的整数 gcd。
    规范下标为 y·(N/g) + x。
    """

    modulus: GaussianInt
    size: int
    width: int
    height: int
    shift: int
    re: np.ndarray = field(repr=False, compare=False)
    im: np.ndarray = field(repr=False, compare=False)
    unit_mask: np.ndarray = field(repr=False, compare=False)

    @property
    def classes(self) -> List[GaussianInt]:
        return [GaussianInt(int(x), int(y)) for x, y in zip(self.re, self.im)]

    @property
    def units(self) -> List[GaussianInt]:
        return [GaussianInt(int(x), int(y)) for x, y, u in zip(self.re, self.im, self.unit_mask) if u]

    @property
    def unit_indices(self) -> np.ndarray:
        return np.flatnonzero(self.unit_mask)

    @property
    def phi(self) -> int:
        return int(self.unit_mask.sum())

    def index_arrays(self, re: np.ndarray, im: np.ndarray) -> np.ndarray:
        """向量化地把 (re, im) 数组约化为规范下标"""
        re = np.asarray(re, dtype=np.int64)
        im = np.asarray(im, dtype=np.int64)
        k = np.floor_divide(im, self.height)
        x = np.mod(re - k * self.shift, self.width)
        y = im - k * self.height
        return y * self.width + x

    def index(self, z: GaussianLike) -> int:
        z = GaussianInt.of(z)
        return int(self.index_arrays(np.array([z.re]), np.array([z.im]))[0])

    def reduce(self, z: GaussianLike) -> GaussianInt:
        idx = self.index(z)
        return GaussianInt(int(self.re[idx]), int(self.im[idx]))

    def is_unit_residue(self, z: GaussianLike) -> bool:
        return bool(self.unit_mask[self.index(z)])

    @property
    def mul_table(self) -> np.ndarray:
        """乘法表 mul_table[i, j] = index(classes[i]·classes[j])"""
        return _tables(self.modulus)[0]

    @property
    def add_table(self) -> np.ndarray:
        return _tables(self.modulus)[1]

    @property
    def inverse_index(self) -> np.ndarray:
        """inverse_index[i] 为 classes[i] 的逆元下标，非单位处为 -1"""
        return _tables(self.modulus)[2]

    def phase_numerators(self, re: np.ndarray, im: np.ndarray) -> np.ndarray:
        """Re(x·c̄) mod N(c)，使 e(Re(x/c)) = exp(2πi·结果/N(c))"""
        c = self.modulus
        return np.mod(np.asarray(re, dtype=np.int64) * c.re + np.asarray(im, dtype=np.int64) * c.im,
                      self.size)


@lru_cache(maxsize=4096)
def enumerate_residues(c: GaussianLike) -> ResidueSystem:
    """
    构造 ℤ[i]/(c) 的剩余系

    Raises:
        ArithmeticDomainError: c = 0
    """
    c = GaussianInt.of(c)
    if not c:
        raise ArithmeticDomainError("模为零")
    size = c.norm()
    height = math.gcd(abs(c.re), abs(c.im))
    width = size // height
    # 格 c·ℤ[i] 中虚部恰为 height 的元素 c·(x0 + i·y0)：b·x0 + a·y0 = height
    _, x0, y0 = _int_gcd_ext(c.im, c.re)
    shift = (c.re * x0 - c.im * y0) % width
    ys, xs = np.divmod(np.arange(size, dtype=np.int64), width)
    re, im = xs, ys
    unit_mask = np.array([_coprime_int_pair(int(x), int(y), c) for x, y in zip(re, im)], dtype=bool)
    system = ResidueSystem(c, size, width, height, shift, re, im, unit_mask)
    _validate_transversal(system)
    return system


def _int_gcd_ext(a: int, b: int) -> Tuple[int, int, int]:
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _int_gcd_ext(b, a % b)
    return g, y, x - (a // b) * y


def _coprime_int_pair(x: int, y: int, c: GaussianInt) -> bool:
    if c.is_unit():
        return True
    return coprime(GaussianInt(x, y), c)


def _lattice_keys(c: GaussianInt, re: np.ndarray, im: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """x·c̄ 两个分量模 N(c)；x ≡ x′ (mod c) 当且仅当两者的键相同"""
    n = c.norm()
    re = np.asarray(re, dtype=np.int64)
    im = np.asarray(im, dtype=np.int64)
    return np.mod(re * c.re + im * c.im, n), np.mod(im * c.re - re * c.im, n)


def _validate_transversal(system: ResidueSystem) -> None:
    """
    检查剩余系：恰有 N(c) 个代表元、两两模 c 不同余、宽度与平移落在格 c·ℤ[i] 中、下标往返一致

    Raises:
        AssertionError: 任一条件不满足
    """
    c = system.modulus
    n = c.norm()
    if system.size != n or len(system.re) != n or len(system.im) != n or system.width * system.height != n:
        raise AssertionError(f"剩余系大小与 N(c) = {n} 不符: {c}")
    key_re, key_im = _lattice_keys(c, system.re, system.im)
    if len(np.unique(key_re * n + key_im)) != n:
        raise AssertionError(f"剩余系代表元模 {c} 有重复")
    gen_re, gen_im = _lattice_keys(c, np.array([system.width, system.shift]), np.array([0, system.height]))
    if np.any(gen_re) or np.any(gen_im):
        raise AssertionError(f"横截的宽度或平移不在格 {c}·ℤ[i] 中")
    idx = system.index_arrays(system.re, system.im)
    if not np.array_equal(idx, np.arange(n)):
        raise AssertionError(f"剩余系横截构造失败: {c}")


@lru_cache(maxsize=64)
def _tables(c: GaussianInt) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    system = enumerate_residues(c)
    re, im = system.re, system.im
    prod_re = np.multiply.outer(re, re) - np.multiply.outer(im, im)
    prod_im = np.multiply.outer(re, im) + np.multiply.outer(im, re)
    mul = system.index_arrays(prod_re, prod_im)
    add = system.index_arrays(np.add.outer(re, re), np.add.outer(im, im))
    inverse = np.full(system.size, -1, dtype=np.int64)
    one = system.index(ONE)
    for i in system.unit_indices:
        inverse[i] = int(np.flatnonzero(mul[i] == one)[0])
    return mul, add, inverse
