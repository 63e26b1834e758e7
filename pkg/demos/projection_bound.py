"""Compare the explicit partial-sum bound with its closed form.

For the ordinary frequency and for the sparse block family, print the
quadrature bound, the closed form and the best look-ahead index M.
"""
from gendirichlet.frequency import make_frequency
from gendirichlet.summation import best_projection_bound, projection_bound

ordinary = make_frequency("ordinary", 400)
for N, M in ((10, 20), (50, 60), (100, 101), (200, 400)):
    pb = projection_bound(ordinary, N, M)
    print(f"ordinary N={N:4d} M={M:4d} explicit={pb.explicit:9.4f} closed={pb.closed_form:9.4f}")

nc = make_frequency("example_nc", 256)
for b in range(1, 7):
    M, pb = best_projection_bound(nc, 2 ** b, 2 ** (b + 1))
    print(f"example_nc N={2 ** b:3d}: best M={M} in block {int(nc.block[M - 1])}, bound {pb.closed_form:.4f}")
