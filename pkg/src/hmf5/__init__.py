"""Exact computations in the differential ring of Hilbert modular forms for Q(sqrt5).

Modules:
    numfield      arithmetic in Q(sqrt5), the dual lattice, divisor sums
    polyring      weighted sparse polynomials, resultants, binomial shapes
    freebrackets  bracket identities in a free differential algebra
    hilbert_ring  the rings T*, T and their derivations
    ideal_lab     Gröbner bases, stable ideals, resultant computations
    fourier_lab   Fourier expansions of the generators
    cli           command line front end
"""

__version__ = "0.1.0"
