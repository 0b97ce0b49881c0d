"""Configuration for the experiment families and their runners."""

EXPERIMENT_CONFIG = {
    "scalar": {
        "builder": "src.problems.scalar.scalar_bundle",
        "params": {},
        "convergence_params": {},
        "step_size_params": {},
        "h_list": ["1/1024", "1/2048", "1/4096", "1/8192", "1/16384"],
        "t_end": 0.5,
        "reference": {"kind": "exact"},
        "sweep_param": None,
        "sweep_values": [],
    },
    "diffusion": {
        "builder": "src.problems.diffusion.diffusion_bundle",
        "params": {"kappa": 1.0, "n": 129},
        "convergence_params": {"source": "cos_x_sin_t"},
        "step_size_params": {"source": "cos_x"},
        "h_list": ["1/16", "1/32", "1/64", "1/128"],
        "t_end": 1.0,
        "reference": {"kind": "scheme", "scheme": "third_order_5stage_v2", "h": "1/512"},
        "sweep_param": "kappa",
        "sweep_values": [0.25, 0.5, 1.0, 2.0, 4.0],
    },
    "cahn-hilliard": {
        "builder": "src.problems.cahn_hilliard.cahn_hilliard_bundle",
        "params": {"epsilon": 1.0, "n": 128, "stretch": 3.0},
        "convergence_params": {},
        "step_size_params": {},
        "h_list": ["1/256", "1/512", "1/1024", "1/2048"],
        "t_end": 1.0,
        "reference": {"kind": "scheme", "scheme": "third_order_5stage_v2", "h": "1/8192"},
        "sweep_param": "epsilon",
        "sweep_values": [0.25, 0.5, 1.0],
    },
}

# Schemes compared in the step-size tables, in column order
SWEEP_SCHEMES = [
    "fb_euler",
    "trapezoid",
    "l_stable_second_order",
    "third_order_5stage_v1",
    "third_order_5stage_v2",
]

# Experiment runners, loaded by dotted path
RUNNER_CLASSES = {
    "convergence": "src.experiments.convergence.ConvergenceRunner",
    "step-size": "src.experiments.step_size.StepSizeRunner",
    "stability": "src.experiments.stability_report.StabilityRunner",
}
