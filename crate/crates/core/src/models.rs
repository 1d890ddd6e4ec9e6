//! Example models shipped with the crate. The same files live under
//! `models/` for use with the command-line tool.

use crate::relmodel::{parse_model, ReliabilityModel};

/// `(name, file contents)` for every bundled model.
pub const BUNDLED: [(&str, &str); 6] = [
    ("series-2", include_str!("../models/series-2.json")),
    ("parallel-2", include_str!("../models/parallel-2.json")),
    ("bridge-5", include_str!("../models/bridge-5.json")),
    ("gens-2of3", include_str!("../models/gens-2of3.json")),
    ("gens-capacity-3", include_str!("../models/gens-capacity-3.json")),
    ("radial-feeder-10", include_str!("../models/radial-feeder-10.json")),
];

/// Parses a bundled model by name.
pub fn load(name: &str) -> Option<ReliabilityModel> {
    BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| parse_model(text).expect("bundled model is valid"))
}

pub fn all() -> Vec<(&'static str, ReliabilityModel)> {
    BUNDLED
        .iter()
        .map(|(n, text)| (*n, parse_model(text).expect("bundled model is valid")))
        .collect()
}
