"""
Analytical bounds evaluated in exact rational arithmetic

Expressions of the form a + b*sqrt(2) are bounded through the sandwich
SQRT2_LOWER <= sqrt(2) <= SQRT2_UPPER, taking whichever side keeps the
asserted inequality valid.
"""
from fractions import Fraction

SQRT2_LOWER = Fraction(14142135, 10**7)
SQRT2_UPPER = Fraction(14142136, 10**7)

# 14(sqrt2 - 1) / (12 sqrt2 - 13) rounded up
TOUR_RATIO = Fraction(14609, 10000)


def sqrt2_upper(a: Fraction | int, b: Fraction | int) -> Fraction:
    """Rational upper bound on a + b*sqrt(2)"""
    return Fraction(a) + Fraction(b) * (SQRT2_UPPER if b >= 0 else SQRT2_LOWER)


def sqrt2_lower(a: Fraction | int, b: Fraction | int) -> Fraction:
    """Rational lower bound on a + b*sqrt(2)"""
    return Fraction(a) + Fraction(b) * (SQRT2_LOWER if b >= 0 else SQRT2_UPPER)


def circulation_cost_bound(n: int, olp: Fraction) -> Fraction:
    """Upper bound 6(1 - sqrt2) n + (4 sqrt2 - 3) OLP on the circulation cost"""
    return sqrt2_upper(6 * n - 3 * olp, 4 * olp - 6 * n)


def circulation_tour_bound(n: int, cost: int) -> Fraction:
    """4n/3 + 2c/3 - 2/3"""
    return Fraction(4 * n + 2 * cost - 2, 3)


def pairing_tour_bound(edges: int, removable: int) -> Fraction:
    """4|E|/3 - 2|R|/3"""
    return Fraction(4 * edges - 2 * removable, 3)


def christofides_bound(n: int, olp: Fraction) -> Fraction:
    return n - 1 + Fraction(olp) / 2


def subcubic_tour_bound(n: int) -> int:
    """floor(4n/3 - 2/3)"""
    return (4 * n - 2) // 3


def block_subcubic_bound(n: int, blocks: int) -> Fraction:
    """4n/3 + 2k/3 - 4/3 for a graph with k subcubic blocks"""
    return Fraction(4 * n + 2 * blocks - 4, 3)


def tour_guarantee(olp: Fraction) -> Fraction:
    return TOUR_RATIO * olp


def path_main_bound(n: int, dist: int, olp_augmented: Fraction) -> Fraction:
    """(16/3 - 4 sqrt2) n + dist/3 + (8 sqrt2/3 - 2) OLP(G') - 2/3"""
    a = Fraction(16 * n + dist - 2, 3) - 2 * olp_augmented
    b = -4 * n + Fraction(8, 3) * olp_augmented
    return sqrt2_upper(a, b)


def path_baseline_bound(n: int, tree_dist: int) -> int:
    """2(n - 1) - dist_T(s, t)"""
    return 2 * (n - 1) - tree_dist


def subcubic_path_bound(n: int, dist: int) -> Fraction:
    """4n/3 - 2/3 + min(dist, n/2)/3"""
    return Fraction(4 * n - 2, 3) + min(Fraction(dist), Fraction(n, 2)) / 3


# Additive constant of the path guarantee: 2 - sqrt2
PATH_CONSTANT = sqrt2_upper(2, -1)


def path_guarantee(olp_augmented: Fraction) -> Fraction:
    """(3 - sqrt2)(OLP(G') - 1) + (2 - sqrt2)"""
    lower = Fraction(olp_augmented) - 1
    return sqrt2_upper(3 * lower + 2, -lower - 1)


def crossover_interval() -> tuple[Fraction, Fraction]:
    """Rational interval around the OLP/n ratio (24 sqrt2 - 26)/(16 sqrt2 - 15)"""

    def ratio(r: Fraction) -> Fraction:
        return (24 * r - 26) / (16 * r - 15)

    # increasing in sqrt2
    return ratio(SQRT2_LOWER), ratio(SQRT2_UPPER)


def algorithm_bounds_at(n: int, olp: Fraction) -> tuple[Fraction, Fraction]:
    """
    Worst-case edge counts of the circulation algorithm (with the cost bound
    plugged in) and of Christofides for given n and OLP
    """
    circulation = sqrt2_upper(
        Fraction(16 * n - 2, 3) - 2 * olp, Fraction(8, 3) * olp - 4 * n
    )
    return circulation, christofides_bound(n, olp)
