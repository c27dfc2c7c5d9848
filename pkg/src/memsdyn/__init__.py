"""Two-qubit mixed states under XX Ising dynamics.

Builds MEMS, Werner, rho^n and rho^m density matrices, evolves them with
H = (J/2)(XX + YY) + B(Z1 + Z2), and reports concurrence, quantum discord,
linear entropy and the Horodecki CHSH measure.
"""

__version__ = "0.1.0"
