"""End-to-end verification scenario through the experiment runner.

Runs the Hardy-space lower-bound scenario (grand maximal vs square
function at p = 1) over the default 15-member family and emits the JSON +
CSV report into ./demo-out.  The same run is available from the command
line:  lplab run config.json --out demo-out
"""

from lplab import ExperimentConfig, emit_report, run_experiment

cfg = ExperimentConfig.from_dict({
    "scenario": "cor31",
    "p": 1.0,
    "grid": {"dimension": 1, "points_per_axis": 4096, "half_extent": 16.0},
    "scales": {"t_min": 1e-4, "t_max": 1e2, "count": 128},
    "seed": 1234,
})

report = run_experiment(cfg)
print(f"scenario {report.scenario}: {'PASS' if report.passed else 'FAIL'}")
print(f"criterion: {report.criterion}")
print(f"family ratio range: [{report.family_min_ratio:.4f}, {report.family_max_ratio:.4f}]")
for shape, spread in report.diagnostics["dilation_spread"].items():
    print(f"  dilation spread {shape}: {spread:.4f}")
print(f"translation gap: {report.diagnostics['translation_gap']:.2e}")
print(f"boundary leakage: {report.diagnostics['boundary_leakage']:.2e}")

paths = emit_report(report, "demo-out")
print("wrote:", *[str(p) for p in paths], sep="\n  ")
