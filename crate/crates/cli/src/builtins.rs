//! Scenarios shipped with the binary; the same files live in `scenarios/`.

use crate::scenario::{ConfigError, Scenario, Suite};

const SOURCES: &[(&str, &str)] = &[
    ("anisotropic_square_mc", include_str!("../scenarios/anisotropic_square_mc.json")),
    ("euclid1d_indicator", include_str!("../scenarios/euclid1d_indicator.json")),
    ("euclid1d_indicator_mc", include_str!("../scenarios/euclid1d_indicator_mc.json")),
    ("euclid1d_indicator_p2", include_str!("../scenarios/euclid1d_indicator_p2.json")),
    ("euclid1d_two_steps", include_str!("../scenarios/euclid1d_two_steps.json")),
    ("euclid2d_disk_p2", include_str!("../scenarios/euclid2d_disk_p2.json")),
    ("finite_interval_no_lower_bound", include_str!("../scenarios/finite_interval_no_lower_bound.json")),
    ("heisenberg_gauge_ball_mc", include_str!("../scenarios/heisenberg_gauge_ball_mc.json")),
    ("hyperbolic_geodesic_ball_mc", include_str!("../scenarios/hyperbolic_geodesic_ball_mc.json")),
    ("oscillating_weight_no_limit", include_str!("../scenarios/oscillating_weight_no_limit.json")),
    ("weighted_line_no_upper_bound", include_str!("../scenarios/weighted_line_no_upper_bound.json")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    SOURCES.iter().map(|(n, _)| *n)
}

/// Raw JSON of a builtin scenario.
pub fn source(name: &str) -> Option<&'static str> {
    SOURCES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn get(name: &str) -> Result<Scenario, ConfigError> {
    let text = source(name).ok_or_else(|| ConfigError {
        field: String::new(),
        message: format!("unknown builtin scenario {name:?}; see `weaklab list`"),
    })?;
    Scenario::from_json(text)
}

pub fn all() -> Result<Vec<Scenario>, ConfigError> {
    names().map(get).collect()
}

/// `fast` runs the scenarios tagged fast; `full` runs every tagged scenario.
pub fn for_suite(suite: Suite) -> Result<Vec<Scenario>, ConfigError> {
    Ok(all()?
        .into_iter()
        .filter(|s| match suite {
            Suite::Fast => s.suites.contains(&Suite::Fast),
            Suite::Full => !s.suites.is_empty(),
        })
        .collect())
}
