"""Integer helpers: exact prime-power division, factorial ratios, primality."""

from math import factorial, prod

from .errors import NotDivisible, NotInteger


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_power(q):
    """Return (p, k) with q == p**k, or None if q is not a prime power."""
    if q < 2:
        return None
    for p in range(2, q + 1):
        if q % p == 0:
            if not is_prime(p):
                return None
            k = 0
            while q % p == 0:
                q //= p
                k += 1
            return (p, k) if q == 1 else None
    return None


def valuation(n, p):
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def exact_div_p_power(n, p, k):
    """Return n / p**k, raising NotDivisible unless the division is exact.

    >>> exact_div_p_power(12, 2, 2)
    3
    """
    d = p ** k
    q, r = divmod(n, d)
    if r:
        raise NotDivisible(f"{p}^{k} does not divide {n}")
    return q


def factorial_ratio(numerator, denominator):
    """Exact value of prod(a! for a in numerator) / prod(b! for b in denominator)."""
    num = prod(factorial(a) for a in numerator)
    den = prod(factorial(b) for b in denominator)
    q, r = divmod(num, den)
    if r:
        raise NotInteger(f"{numerator}! / {denominator}! is not an integer")
    return q


def base_p_digits(n, p):
    digits = []
    while n:
        n, r = divmod(n, p)
        digits.append(r)
    return digits
