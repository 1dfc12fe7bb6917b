"""All planners on the same clustered users: coverage, station count and power."""
from aerialbs import EnvParams, PLANNERS, PlannerConfig, ScenarioConfig, coverage_radius
from aerialbs.evaluation import expand_grid, run_sweep

env = EnvParams(f_c=2.0e9)
R = coverage_radius(100.0, env)
scenario = ScenarioConfig(side_m=4 * R, process="pcp", uli_sigma_m=0.0)
grid = expand_grid(scenario, [p for p in PLANNERS if not p.startswith("robust")])
_, agg = run_sweep(grid, 50, master_seed=2024, env=env, planner_config=PlannerConfig(k_max=4))

print(f"side {4 * R:.0f} m, 50 paired trials, at most 4 stations for the user-aware planners\n")
print(f"{'planner':<10}{'coverage':>10}{'stations':>10}{'power (mW)':>12}")
for row in agg:
    print(f"{row['planner']:<10}{row['coverage_prob_mean']:>10.3f}"
          f"{row['num_stations_mean']:>10.2f}{row['total_power_mw_mean']:>12.0f}")
