"""mimopt: exact solvers for multitype integer monoid optimization.

Configuration-LP column generation, huge N-fold integer programming,
high-multiplicity scheduling, packing, and surfing front-ends, all on an
exact rational LP/ILP kernel.
"""

__version__ = "0.1.0"
