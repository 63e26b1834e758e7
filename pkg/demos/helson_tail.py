"""Random vertical limits of sum n^-1 n^-s and their tail oscillation.

Draws characters on the prime torus, twists the coefficients and tracks
how much the partial sums at Re s = u still move past each checkpoint.
"""
import numpy as np

from gendirichlet.frequency import make_frequency
from gendirichlet.hardy import RationalBasis, helson_maximal_stat
from gendirichlet.summation import DirichletSeries

N = 4096
freq = make_frequency("ordinary", N)
D = DirichletSeries(freq, 1.0 / np.arange(1, N + 1))
grid = [N // 4 ** j for j in range(4, -1, -1)]
stats = helson_maximal_stat(D, 0.1, RationalBasis.from_frequency(freq), 200, grid, seed=1)
print("checkpoints", stats.checkpoints)
print("median oscillation per checkpoint", np.median(stats.checkpoint_osc, axis=0))
print(f"strictly decreasing for {100 * stats.fraction_decreasing:.1f}% of characters")
print(f"max partial sum: mean {stats.mean:.3f}, max {stats.max:.3f}")
