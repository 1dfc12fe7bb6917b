"""A small reproducible sweep over side lengths, written as CSV."""
import hashlib

from aerialbs import EnvParams, ScenarioConfig
from aerialbs.evaluation import expand_grid, run_sweep, to_csv

env = EnvParams(f_c=2.0e9)
grid = expand_grid(ScenarioConfig(process="hpp"), ["cpt", "sd-km", "sd-kmvr"],
                   side_lengths_m=[1500.0, 2500.0])
metrics, agg = run_sweep(grid, 5, master_seed=1, env=env)
text = to_csv(metrics, agg, timing=False)
print(text.split("\n\n")[1])
again = to_csv(*run_sweep(grid, 5, master_seed=1, env=env), timing=False)
print("sha256:", hashlib.sha256(text.encode()).hexdigest()[:16],
      "| identical on rerun:", text == again)
