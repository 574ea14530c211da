"""Hand-derived reference values, kept independent of the package code."""

import math
from fractions import Fraction

# Case 9 optimum: c1 = f_min and 0.2*0.75 + 0.1*(1/0.75 + 1/(0.75 - c2/2)) = 0.5
# gives 1/(3/4 - c2/2) = 13/6, so c2 = c3 = 15/26, c4 = 3/4 - 15/26 = 9/52.
C_OPT = (Fraction(3, 4), Fraction(15, 26), Fraction(15, 26), Fraction(9, 52))
COST_OPT = sum(C_OPT)  # 27/13
R_OPT = Fraction(7, 2)

# Case 4 with the strength threshold active: x1 + x2 = 3/4 and x1/3 + x2 = 2/7.
CASE4_X = (Fraction(39, 56), Fraction(3, 56))
CASE4_COST = Fraction(15, 7)

# Case 8: 0.2 x + 0.1 / x = 0.5, larger root
CASE8_COST = (0.5 + math.sqrt(0.25 - 0.08)) / 0.4


def _par(*r):
    return 1.0 / sum(1.0 / v for v in r)


# resistance of each case in the spring limits, with spring resistance 1/c_i
RESISTANCE = {
    1: lambda c1, c2, c3, c4: 1 / c1 + _par(1 / c2, 1 / c3) + 1 / c4,
    2: lambda c1, c2, c3, c4: 1 / c1 + 1 / c2 + 1 / c3 + 1 / c4,
    3: lambda c1, c2, c3, c4: _par(1 / c1 + 1 / c2, 1 / c3 + 1 / c4),
    4: lambda c1, c2, c3, c4: _par(1 / c1 + 1 / c2 + 1 / c3, 1 / c4),
    5: lambda c1, c2, c3, c4: _par(1 / c1 + 1 / c2, 1 / c3, 1 / c4),
    6: lambda c1, c2, c3, c4: 1 / c1 + _par(1 / c2, 1 / c3, 1 / c4),
    7: lambda c1, c2, c3, c4: _par(1 / c1, 1 / c3) + _par(1 / c2, 1 / c4),
    8: lambda c1, c2, c3, c4: _par(1 / c1, 1 / c2, 1 / c3, 1 / c4),
    9: lambda c1, c2, c3, c4: 1 / c1 + _par(1 / c2 + 1 / c3, 1 / c4),
    10: lambda c1, c2, c3, c4: _par(1 / c1 + _par(1 / c2, 1 / c3), 1 / c4),
}

# response force: series members share the force (min), parallel ones add
FORCE = {
    1: lambda c1, c2, c3, c4: min(c1, c2 + c3, c4),
    2: lambda c1, c2, c3, c4: min(c1, c2, c3, c4),
    3: lambda c1, c2, c3, c4: min(c1, c2) + min(c3, c4),
    4: lambda c1, c2, c3, c4: min(c1, c2, c3) + c4,
    5: lambda c1, c2, c3, c4: min(c1, c2) + c3 + c4,
    6: lambda c1, c2, c3, c4: min(c1, c2 + c3 + c4),
    7: lambda c1, c2, c3, c4: min(c1 + c3, c2 + c4),
    8: lambda c1, c2, c3, c4: c1 + c2 + c3 + c4,
    9: lambda c1, c2, c3, c4: min(c1, min(c2, c3) + c4),
    10: lambda c1, c2, c3, c4: min(c1, c2 + c3) + c4,
}
