"""Where does T_sigma start mapping H_2 into H_4 for a block frequency?

Run ``python3 demos/threshold_scan.py``.  For each sigma the script fits
the growth exponent of ||T_sigma D^[m]||_4 / ||D^[m]||_2 in m and prints
where it crosses zero.
"""
import numpy as np

from gendirichlet.frequency import GeneratorSpec, make_frequency
from gendirichlet.spectrum import t_sigma_threshold_scan

freq = make_frequency(GeneratorSpec("bc", 0), 200 ** 2 + 400)
for k in (2, 3):
    scan = t_sigma_threshold_scan(freq, k, range(10, 201, 10), np.linspace(0, 0.5, 11))
    print(f"k={k}")
    for s, slope in zip(scan.sigma_grid, scan.slopes):
        print(f"  sigma={s:.2f}  slope={slope:+.4f}")
    print(f"  zero crossing {scan.sigma_star:.4f} (expected {scan.theory_threshold:.4f})")
