"""Planning on noisy user locations, with and without the robust relocation step."""
import numpy as np

from aerialbs import EnvParams, PlannerConfig, ScenarioConfig, generate_users, plan
from aerialbs.evaluation import coverage_probability, trial_seed
from aerialbs.planners import robust_margin

env = EnvParams(f_c=2.0e9)
cfg = PlannerConfig(uli_bound_m=150.0)
scenario = ScenarioConfig(side_m=3000.0, process="pcp", uli_sigma_m=50.0)

gain = []
for t in range(40):
    seed = trial_seed(99, 0, t)
    users = generate_users(scenario, seed)
    plain = plan("sd-kmvr", users, 3000.0, env, cfg, seed)
    robust = plan("robust-sd-kmvr", users, 3000.0, env, cfg, seed)
    gain.append(coverage_probability(robust, users.true_positions)
                - coverage_probability(plain, users.true_positions))

print(f"true-position coverage gain over 40 trials: mean {np.mean(gain):+.3f}, "
      f"never negative: {min(gain) >= 0}")
margins = [robust_margin(s, users.planning_positions) for s in robust.stations]
print("last trial, margin between footprint edge and farthest served user (m):",
      np.round(margins, 1))
