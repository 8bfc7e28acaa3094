//! Machine-readable descriptions of each subcommand's output.

use serde_json::{json, Value};

type Field = (&'static str, &'static str, &'static str);

struct Entry {
    path: [&'static str; 2],
    format: &'static str,
    fields: &'static [Field],
}

const CONFIG: Field = (
    "config",
    "object",
    "resolved arguments and global flags; CSV writes them as '# key=value' lines",
);

const ENTRIES: &[Entry] = &[
    Entry {
        path: ["game", "analyze"],
        format: "json",
        fields: &[
            CONFIG,
            (
                "cells",
                "[[[number, number]; 2]; 2]",
                "payoff pairs (Alice, Bob) by row and column",
            ),
            ("coeffs_a", "{k, l, m, n}", "Alice's bilinear coefficients"),
            ("coeffs_b", "{k, l, m, n}", "Bob's bilinear coefficients"),
            ("symmetric", "bool", "Bob's payoffs are Alice's transposed"),
            ("pure_ne", "[{row, col, label, strict}]", "pure Nash equilibria"),
            (
                "mixed_ne",
                "{components, continuum, a_indifferent, b_indifferent}",
                "complete mixed Nash set",
            ),
            ("pareto_optimal", "[string]", "labels of Pareto-optimal cells"),
        ],
    },
    Entry {
        path: ["gfun", "plot"],
        format: "csv",
        fields: &[
            CONFIG,
            ("theta", "number", "angle in radians"),
            ("g", "number", "g(theta)"),
        ],
    },
    Entry {
        path: ["gfun", "eval"],
        format: "json",
        fields: &[
            CONFIG,
            ("theta", "number", "angle in radians"),
            ("value", "number", "g(theta)"),
        ],
    },
    Entry {
        path: ["gfun", "inverse"],
        format: "json",
        fields: &[
            CONFIG,
            ("p", "number", "probability inverted"),
            ("exact", "[number]", "angles with g(theta) = p"),
            ("limits", "[number]", "breakpoints where p is only a one-sided limit"),
            ("non_unique", "bool", "p has more than one preimage"),
        ],
    },
    Entry {
        path: ["gfun", "q"],
        format: "json",
        fields: &[
            CONFIG,
            ("p", "number", "input probability"),
            ("direction", "string", "'forward' for Q_g, 'inverse' for Q_g^-1"),
            ("values", "[number]", "all images, sorted"),
        ],
    },
    Entry {
        path: ["corr-game", "solve"],
        format: "json",
        fields: &[
            CONFIG,
            ("game", "string", "game name"),
            ("g", "string", "g-function name"),
            ("model", "string", "correlation model"),
            ("classical_ne", "object", "mixed Nash set of the classical game"),
            (
                "quantum_ne",
                "[[number, number]]",
                "equilibrium probability profiles (p_A, p_B)",
            ),
            ("angles", "[[number, number]]", "directions realizing each equilibrium"),
            ("method", "string", "dominance, transform or grid"),
            ("payoffs", "[[number, number]]", "payoffs at each equilibrium"),
            (
                "grid",
                "{grid_n, tol, grid_points, distance, deviation_gain}",
                "grid confirmation",
            ),
        ],
    },
    Entry {
        path: ["corr-game", "sweep"],
        format: "csv",
        fields: &[
            CONFIG,
            ("theta_a", "number", "Alice's direction"),
            ("theta_b", "number", "Bob's direction"),
            ("payoff_a", "number", "Alice's payoff"),
            ("payoff_b", "number", "Bob's payoff"),
        ],
    },
    Entry {
        path: ["epr", "simulate"],
        format: "json",
        fields: &[
            CONFIG,
            (
                "report",
                "{runs, p_a_hat, p_b_hat, ac, cb, ab, cc, counts, missing}",
                "arbiter statistics",
            ),
            ("expected", "{ac, cb, ab}", "model correlations for the chosen axes"),
            (
                "reward",
                "[number, number] | null",
                "payoffs from the measured correlations",
            ),
            (
                "records",
                "string | null",
                "path of the per-run CSV dump (run,axisA,axisB,a,b)",
            ),
        ],
    },
    Entry {
        path: ["lhv", "analyze"],
        format: "json",
        fields: &[
            CONFIG,
            ("measure", "[number; 16]", "hidden-variable weights"),
            (
                "negative_indices",
                "[integer]",
                "one-based indices i of negative weights m_i",
            ),
            (
                "stats",
                "[number; 16]",
                "four-coin statistics, blocks S1S1', S1S2', S2S1', S2S2'",
            ),
            ("stats_check", "object", "normalization and consistency residuals"),
            ("chsh", "number", "CHSH combination"),
            ("ne_analysis", "object | null", "equilibrium test at (S2, S2')"),
            (
                "split_payoffs",
                "[object] | null",
                "payoffs split into correlated and uncorrelated parts",
            ),
            (
                "reduction_error",
                "string | null",
                "why the perfect-correlation reduction was not possible",
            ),
        ],
    },
    Entry {
        path: ["lhv", "scan-m13"],
        format: "csv",
        fields: &[
            CONFIG,
            ("m13", "number", "family parameter"),
            ("s2", "number", "Alice's S2 head probability"),
            ("s2_p", "number", "Bob's S2' head probability"),
            ("sum", "number", "s2 + s2'"),
            ("ne_exists", "bool", "(S2, S2') is an equilibrium"),
            ("summed_condition", "number", "sum of both no-deviation conditions"),
            ("payoff_a", "number", "Alice's payoff at (S2, S2')"),
            ("payoff_b", "number", "Bob's payoff at (S2, S2')"),
        ],
    },
    Entry {
        path: ["quantum", "chsh"],
        format: "json",
        fields: &[
            CONFIG,
            ("settings", "{a, a2, b, b2}", "measurement axes"),
            ("delta", "number", "CHSH combination from the closed-form correlation"),
            ("delta_operator", "number", "same, from the spin-operator expectation"),
            ("c00", "number", "normalized amplitude"),
            ("c11", "number", "normalized amplitude"),
        ],
    },
    Entry {
        path: ["quantum", "eisert"],
        format: "json",
        fields: &[
            CONFIG,
            ("move_a", "{theta, phi}", "Alice's move"),
            ("move_b", "{theta, phi}", "Bob's move"),
            ("probabilities", "[number; 4]", "outcome probabilities CC, CD, DC, DD"),
            ("payoffs", "[number, number]", "expected payoffs"),
        ],
    },
    Entry {
        path: ["quantum", "meyer"],
        format: "json",
        fields: &[
            CONFIG,
            ("win_probability", "number", "quantum player's winning probability"),
            (
                "classical_win_probability",
                "number",
                "same when the quantum player is restricted to classical moves",
            ),
        ],
    },
    Entry {
        path: ["quantum", "separable"],
        format: "json",
        fields: &[
            CONFIG,
            ("separable", "bool", "the two-qubit pure state is a product state"),
        ],
    },
];

fn render(e: &Entry) -> Value {
    json!({
        "command": e.path.join(" "),
        "default_format": e.format,
        "fields": e.fields.iter().map(|(name, ty, desc)| json!({"name": name, "type": ty, "description": desc})).collect::<Vec<_>>(),
    })
}

pub const COMMANDS: [&str; 6] = ["game", "gfun", "corr-game", "epr", "lhv", "quantum"];

/// Schema for a command path; a prefix selects every matching subcommand.
pub fn schema(path: &[String]) -> Option<Value> {
    let matching: Vec<Value> = ENTRIES
        .iter()
        .filter(|e| path.iter().zip(e.path).all(|(p, q)| p == q))
        .map(render)
        .collect();
    match matching.len() {
        0 => None,
        1 if path.len() == 2 => matching.into_iter().next(),
        _ => Some(Value::Array(matching)),
    }
}

/// Finds the subcommand path in raw arguments, skipping global option values.
pub fn command_path(args: &[String]) -> Vec<String> {
    let mut path = Vec::new();
    let mut iter = args.iter().skip(1);
    while let Some(a) = iter.next() {
        if matches!(a.as_str(), "--out" | "--format" | "--seed") {
            iter.next();
        } else if a.starts_with('-') {
            continue;
        } else if path.is_empty() && COMMANDS.contains(&a.as_str()) {
            path.push(a.clone());
        } else if path.len() == 1 && ENTRIES.iter().any(|e| e.path[0] == path[0] && e.path[1] == a) {
            path.push(a.clone());
            break;
        } else {
            // unknown command: kept so the lookup fails
            path.push(a.clone());
            break;
        }
    }
    path
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn path_skips_global_values() {
        assert_eq!(
            command_path(&args("qgame --seed 3 corr-game solve --schema")),
            ["corr-game", "solve"]
        );
        assert_eq!(command_path(&args("qgame lhv --schema")), ["lhv"]);
        assert!(command_path(&args("qgame --schema")).is_empty());
        assert!(schema(&command_path(&args("qgame nope --schema"))).is_none());
        assert!(schema(&command_path(&args("qgame lhv nope --schema"))).is_none());
    }

    #[test]
    fn every_entry_lists_config() {
        for e in ENTRIES {
            assert_eq!(e.fields[0].0, "config", "{:?}", e.path);
        }
        assert!(schema(&args("nope")).is_none());
        assert_eq!(schema(&[]).unwrap().as_array().unwrap().len(), ENTRIES.len());
    }
}
