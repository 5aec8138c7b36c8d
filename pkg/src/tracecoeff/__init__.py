"""tracecoeff: Laurent data of Dedekind zeta functions, local zeta factor
derivatives, lattice geometry of number fields, unipotent orbit combinatorics
for GL(n), and exact low-rank trace formula coefficients."""

__version__ = "0.1.0"
