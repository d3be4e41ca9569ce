"""Distributed fractional graph coloring on a simulated synchronous network.

The package couples a LOCAL-style round engine (`sim`) with the coloring
algorithms built on top of it (`primitives`, `clustering`, `fractional`,
`approx`, `grids`) and an exact verification oracle (`oracle`) that certifies
every output on small instances.
"""

__version__ = "0.1.0"
