"""Numerical and exact checks of the Wiener-Ikehara theorem for poles of order l/m.

The worked family is a_n = c^Omega(n), whose Dirichlet series has a pole of
order c = l/m at s = 1.
"""

__version__ = "0.1.0"
