"""Independent high-precision oracle for singular series and Gallagher sums.

Uses mpmath's prime zeta function for the tail beyond a small explicit
cutoff; shares no code with the C++ implementation. Prints the values that
are frozen into the C++ tests.
"""
import itertools
import mpmath
from sympy import primerange

mpmath.mp.dps = 40
CUT = 1000
PRIMES = list(primerange(2, CUT + 1))
_pz = {}


def prime_zeta_tail(m):
    if m not in _pz:
        _pz[m] = mpmath.primezeta(m) - mpmath.fsum(mpmath.mpf(p) ** -m for p in PRIMES)
    return _pz[m]


def singular_series(h):
    k = len(h)
    log_s = mpmath.mpf(0)
    for p in PRIMES:
        nu = len({x % p for x in h})
        if nu == p:
            return mpmath.mpf(0)
        log_s += mpmath.log(1 - mpmath.mpf(nu) / p) - k * mpmath.log(1 - mpmath.mpf(1) / p)
    assert max(h) - min(h) < CUT
    m = 2
    while True:
        term = mpmath.mpf(k - k**m) / m * prime_zeta_tail(m)
        log_s += term
        if abs(term) < mpmath.mpf(10) ** -35 and m > 4:
            break
        m += 1
    return mpmath.exp(log_s)


def gallagher(k, h):
    total = mpmath.mpf(0)
    for t in itertools.combinations(range(1, h + 1), k):
        total += singular_series(t)
    return total


if __name__ == "__main__":
    print("S({1,3})     =", mpmath.nstr(singular_series((1, 3)), 20))
    print("S({1,3,7})   =", mpmath.nstr(singular_series((1, 3, 7)), 20))
    print("S({1,7,13,19}) =", mpmath.nstr(singular_series((1, 7, 13, 19)), 20))
    for h in (50, 100, 200):
        s = gallagher(2, h)
        pred = mpmath.mpf(h) ** 2 / 2
        print(f"k=2 h={h} sum={mpmath.nstr(s, 20)} ratio={mpmath.nstr(s / pred, 20)}")
    for h in (20, 50):
        s = gallagher(3, h)
        pred = mpmath.mpf(h) ** 3 / 6
        print(f"k=3 h={h} sum={mpmath.nstr(s, 20)} ratio={mpmath.nstr(s / pred, 20)}")
