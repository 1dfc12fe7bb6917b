"""Three ways to scatter users over a 3 km square, plus location noise."""
import numpy as np

from aerialbs import ScenarioConfig, generate_users
from aerialbs.scenarios import ipp_expected_count

for proc in ("hpp", "ipp", "pcp"):
    cfg = ScenarioConfig(side_m=3000.0, process=proc)
    n = [len(generate_users(cfg, s)) for s in range(500)]
    # Pool 20 draws but measure nearest neighbours within each draw.
    nn = []
    for s in range(20):
        p = generate_users(cfg, s).true_positions
        if len(p) > 1:
            d = np.hypot(*(p[:, None] - p[None]).transpose(2, 0, 1))
            np.fill_diagonal(d, np.inf)
            nn.extend(d.min(axis=1))
    print(f"{proc}: mean users {np.mean(n):6.2f}, median nearest-neighbour distance "
          f"{np.median(nn):7.1f} m")
print(f"(IPP expectation {ipp_expected_count(ScenarioConfig(process='ipp')):.2f})")

noisy = generate_users(ScenarioConfig(process="hpp", lambda_s=50, uli_sigma_m=50.0), 1)
err = noisy.estimated_positions - noisy.true_positions
print(f"\nlocation error over {len(err)} users: std {err.std(axis=0).round(1)} m")
