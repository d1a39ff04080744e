//! Named parameter sets, each bound to one subcommand.

use crate::config::{config_err, CliError};

pub struct Figure {
    pub name: &'static str,
    pub command: &'static str,
    pub description: &'static str,
    toml: &'static str,
}

pub const FIGURES: &[Figure] = &[
    Figure {
        name: "fig3a",
        command: "faraday",
        description: "polarimetric transmission and rotation of a Zeeman-split Ba+ ion",
        toml: r#"
[params]
gamma = 5.5
epsilon = 0.008
delta_b = 9.0
rho_minus = 0.9
[grid]
start = -40.0
stop = 40.0
points = 801
"#,
    },
    Figure {
        name: "fig3b",
        command: "spectrum",
        description: "8-level Ba+ probe spectrum across the dark resonance",
        toml: r#"
[params]
preset = "ba_8level"
epsilon = 0.008
[preset]
b_field_gauss = 0.5
repump_detuning = 10.0
[grid]
start = 4.0
stop = 16.0
points = 481
"#,
    },
    Figure {
        name: "fig4b",
        command: "cavity",
        description: "atom-mirror transmission and reflection fringes versus mirror position",
        toml: r#"
[params]
epsilon = 0.04
r2 = 0.25
[grid]
start = 0.0
stop = 2.0
points = 401
"#,
    },
    Figure {
        name: "fig5",
        command: "ratio-map",
        description: "single- over two-photon success ratio versus detection efficiency",
        toml: r#"
[params]
fidelities = [0.8, 0.9, 0.95, 0.99]
[grid]
start = 1e-4
stop = 1.0
points = 81
"#,
    },
    Figure {
        name: "fig6a",
        command: "entangle-analytic",
        description: "heralded two-ion state at the experimental parameters",
        toml: "",
    },
    Figure {
        name: "fig6b",
        command: "entangle-mc",
        description: "simulated parity scan of the heralded state",
        toml: r#"
seed = 1
[params]
n_trials = 10000000
sequence = "double"
[grid]
start = 0.0
stop = 3.141592653589793
points = 17
"#,
    },
];

/// Subcommand and TOML text of figure `name`.
pub fn lookup(name: &str) -> Result<(&'static str, &'static str), CliError> {
    FIGURES
        .iter()
        .find(|f| f.name == name)
        .map(|f| (f.command, f.toml))
        .ok_or_else(|| {
            let known: Vec<_> = FIGURES.iter().map(|f| f.name).collect();
            config_err(format!("unknown figure `{name}` (known: {})", known.join(", ")))
        })
}
