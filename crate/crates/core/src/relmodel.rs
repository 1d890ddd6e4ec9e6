//! Reliability models: two-state components with availabilities, optional
//! capacities, and a boolean structure function deciding system success.
//!
//! Component order in the model file is the canonical order used everywhere
//! downstream: component `i` is bit `i` of a [`ComponentState`] and qubit `i`
//! of a twin circuit.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default upper bound on the number of components (enumeration cap).
pub const DEFAULT_COMPONENT_CAP: usize = 24;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("malformed model file: {0}")]
    Syntax(String),
    #[error("model declares no components")]
    NoComponents,
    #[error("model has {n} components, more than the permitted {cap}")]
    TooManyComponents { n: usize, cap: usize },
    #[error("duplicate component id \"{0}\"")]
    DuplicateId(String),
    #[error("component \"{id}\": availability {value} is outside [0, 1]")]
    Availability { id: String, value: f64 },
    #[error("component \"{id}\": capacity {value} must be a nonnegative number")]
    Capacity { id: String, value: f64 },
    #[error("structure references undeclared component \"{0}\"")]
    UnknownComponent(String),
    #[error("kofn node: k = {k} is out of range 1..={children}")]
    KOutOfRange { k: i64, children: usize },
    #[error("capacity node requires a capacity on every component; \"{0}\" has none")]
    MissingCapacity(String),
    #[error("capacity node: demand {0} must be a nonnegative number")]
    Demand(f64),
    #[error("{kind} node: {msg}")]
    Node { kind: String, msg: String },
}

/// One two-state component.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentSpec {
    pub id: String,
    pub availability: f64,
    /// Capacity in MW; only consulted by capacity-threshold structures.
    pub capacity: Option<f64>,
}

/// Validated structure function. Leaves are component indices in model order.
#[derive(Debug, Clone, PartialEq)]
pub enum Structure {
    Component(usize),
    And(Vec<Structure>),
    Or(Vec<Structure>),
    Not(Box<Structure>),
    KOfN {
        k: usize,
        of: Vec<Structure>,
    },
    /// Same truth table as `And`; kept distinct for lossless serialization.
    Series(Vec<Structure>),
    /// Same truth table as `Or`.
    Parallel(Vec<Structure>),
    /// Succeeds iff the summed capacity of in-service components meets `demand`.
    Capacity {
        demand: f64,
    },
}

impl Structure {
    /// Evaluates the structure against a bitmask of component states.
    /// `capacities[i]` is used only by `Capacity` nodes.
    pub fn eval_mask(&self, mask: u64, capacities: &[f64]) -> bool {
        match self {
            Structure::Component(i) => mask >> i & 1 == 1,
            Structure::And(of) | Structure::Series(of) => of.iter().all(|c| c.eval_mask(mask, capacities)),
            Structure::Or(of) | Structure::Parallel(of) => of.iter().any(|c| c.eval_mask(mask, capacities)),
            Structure::Not(c) => !c.eval_mask(mask, capacities),
            Structure::KOfN { k, of } => of.iter().filter(|c| c.eval_mask(mask, capacities)).count() >= *k,
            Structure::Capacity { demand } => {
                let up: f64 = capacities
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, c)| c)
                    .sum();
                up >= *demand
            }
        }
    }

    /// True if the tree contains only AND/OR/NOT/SERIES/PARALLEL nodes and leaves.
    pub fn is_boolean_tree(&self) -> bool {
        match self {
            Structure::Component(_) => true,
            Structure::And(of) | Structure::Or(of) | Structure::Series(of) | Structure::Parallel(of) => {
                of.iter().all(Structure::is_boolean_tree)
            }
            Structure::Not(c) => c.is_boolean_tree(),
            Structure::KOfN { .. } | Structure::Capacity { .. } => false,
        }
    }

    pub fn contains_not(&self) -> bool {
        match self {
            Structure::Component(_) | Structure::Capacity { .. } => false,
            Structure::Not(_) => true,
            Structure::And(of)
            | Structure::Or(of)
            | Structure::Series(of)
            | Structure::Parallel(of)
            | Structure::KOfN { of, .. } => of.iter().any(Structure::contains_not),
        }
    }

    /// Rewrites leaf indices through `map` (old index -> new index).
    pub fn relabel(&self, map: &[usize]) -> Structure {
        let all = |of: &[Structure]| of.iter().map(|c| c.relabel(map)).collect();
        match self {
            Structure::Component(i) => Structure::Component(map[*i]),
            Structure::And(of) => Structure::And(all(of)),
            Structure::Or(of) => Structure::Or(all(of)),
            Structure::Series(of) => Structure::Series(all(of)),
            Structure::Parallel(of) => Structure::Parallel(all(of)),
            Structure::Not(c) => Structure::Not(Box::new(c.relabel(map))),
            Structure::KOfN { k, of } => Structure::KOfN { k: *k, of: all(of) },
            Structure::Capacity { demand } => Structure::Capacity { demand: *demand },
        }
    }
}

/// On/off state of every component; bit `i` set means component `i` is in service.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ComponentState {
    mask: u64,
    n: usize,
}

impl ComponentState {
    pub fn from_mask(mask: u64, n: usize) -> Self {
        debug_assert!(n <= 64);
        let keep = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        ComponentState { mask: mask & keep, n }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mask = bits.iter().enumerate().fold(0u64, |m, (i, &b)| m | (u64::from(b) << i));
        ComponentState { mask, n: bits.len() }
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn is_up(&self, i: usize) -> bool {
        self.mask >> i & 1 == 1
    }

    pub fn bits(&self) -> Vec<bool> {
        (0..self.n).map(|i| self.is_up(i)).collect()
    }
}

/// A validated reliability model. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct ReliabilityModel {
    components: Vec<ComponentSpec>,
    structure: Structure,
    capacities: Vec<f64>,
}

impl ReliabilityModel {
    /// Validates components and structure against the default component cap.
    pub fn new(components: Vec<ComponentSpec>, structure: Structure) -> Result<Self, ModelError> {
        Self::with_cap(components, structure, DEFAULT_COMPONENT_CAP)
    }

    pub fn with_cap(components: Vec<ComponentSpec>, structure: Structure, cap: usize) -> Result<Self, ModelError> {
        validate_components(&components, cap)?;
        validate_structure(&structure, &components)?;
        let capacities = components.iter().map(|c| c.capacity.unwrap_or(0.0)).collect();
        Ok(ReliabilityModel {
            components,
            structure,
            capacities,
        })
    }

    pub fn components(&self) -> &[ComponentSpec] {
        &self.components
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    /// Per-component capacity, 0 where none is declared.
    pub fn capacities(&self) -> &[f64] {
        &self.capacities
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn availabilities(&self) -> Vec<f64> {
        self.components.iter().map(|c| c.availability).collect()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.components.iter().position(|c| c.id == id)
    }

    /// True when the structure thresholds on capacity (LOLP is meaningful).
    pub fn is_capacity_model(&self) -> bool {
        fn walk(s: &Structure) -> bool {
            match s {
                Structure::Capacity { .. } => true,
                Structure::Component(_) => false,
                Structure::Not(c) => walk(c),
                Structure::And(of)
                | Structure::Or(of)
                | Structure::Series(of)
                | Structure::Parallel(of)
                | Structure::KOfN { of, .. } => of.iter().any(walk),
            }
        }
        walk(&self.structure)
    }

    /// The structure function φ(x).
    ///
    /// Panics if `state` has the wrong length.
    pub fn evaluate(&self, state: &ComponentState) -> bool {
        assert_eq!(state.len(), self.n(), "component state length mismatch");
        self.structure.eval_mask(state.mask(), &self.capacities)
    }

    pub fn evaluate_mask(&self, mask: u64) -> bool {
        self.structure.eval_mask(mask, &self.capacities)
    }

    /// Product-law probability of a joint component state.
    pub fn state_probability(&self, state: &ComponentState) -> f64 {
        assert_eq!(state.len(), self.n(), "component state length mismatch");
        self.mask_probability(state.mask())
    }

    pub fn mask_probability(&self, mask: u64) -> f64 {
        self.components
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if mask >> i & 1 == 1 {
                    c.availability
                } else {
                    1.0 - c.availability
                }
            })
            .product()
    }

    /// Returns a copy with components reordered: new component `j` is old
    /// component `order[j]`. The structure is relabeled to match.
    pub fn permuted(&self, order: &[usize]) -> Result<ReliabilityModel, ModelError> {
        assert_eq!(order.len(), self.n());
        let mut old_to_new = vec![0; self.n()];
        for (new, &old) in order.iter().enumerate() {
            old_to_new[old] = new;
        }
        let components = order.iter().map(|&i| self.components[i].clone()).collect();
        ReliabilityModel::new(components, self.structure.relabel(&old_to_new))
    }

    /// Same model with one availability replaced.
    pub fn with_availability(&self, index: usize, p: f64) -> Result<ReliabilityModel, ModelError> {
        let mut components = self.components.clone();
        components[index].availability = p;
        ReliabilityModel::new(components, self.structure.clone())
    }

    pub fn to_json(&self) -> String {
        let file = ModelFile {
            components: self
                .components
                .iter()
                .map(|c| RawComponent {
                    id: c.id.clone(),
                    availability: c.availability,
                    capacity: c.capacity,
                })
                .collect(),
            structure: to_raw(&self.structure, &self.components),
        };
        serde_json::to_string_pretty(&file).expect("model serializes")
    }
}

/// `id(p)` list followed by the structure in prefix form, e.g.
/// `a(0.9) b(0.9): series(a, b)`.
impl fmt::Display for ReliabilityModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}({})", c.id, c.availability)?;
            if let Some(cap) = c.capacity {
                write!(f, "[{cap}]")?;
            }
        }
        f.write_str(": ")?;
        self.write_structure(f, &self.structure)
    }
}

impl ReliabilityModel {
    fn write_structure(&self, f: &mut fmt::Formatter<'_>, s: &Structure) -> fmt::Result {
        let (name, of) = match s {
            Structure::Component(i) => return f.write_str(&self.components[*i].id),
            Structure::Capacity { demand } => return write!(f, "capacity(>= {demand})"),
            Structure::Not(c) => {
                f.write_str("not(")?;
                self.write_structure(f, c)?;
                return f.write_str(")");
            }
            Structure::KOfN { k, of } => {
                write!(f, "{k}of(")?;
                return self.write_children(f, of);
            }
            Structure::And(of) => ("and", of),
            Structure::Or(of) => ("or", of),
            Structure::Series(of) => ("series", of),
            Structure::Parallel(of) => ("parallel", of),
        };
        write!(f, "{name}(")?;
        self.write_children(f, of)
    }

    fn write_children(&self, f: &mut fmt::Formatter<'_>, of: &[Structure]) -> fmt::Result {
        for (i, c) in of.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            self.write_structure(f, c)?;
        }
        f.write_str(")")
    }
}

fn validate_components(components: &[ComponentSpec], cap: usize) -> Result<(), ModelError> {
    if components.is_empty() {
        return Err(ModelError::NoComponents);
    }
    if components.len() > cap {
        return Err(ModelError::TooManyComponents {
            n: components.len(),
            cap,
        });
    }
    let mut seen = HashMap::new();
    for (i, c) in components.iter().enumerate() {
        if seen.insert(c.id.as_str(), i).is_some() {
            return Err(ModelError::DuplicateId(c.id.clone()));
        }
        if !(0.0..=1.0).contains(&c.availability) {
            return Err(ModelError::Availability {
                id: c.id.clone(),
                value: c.availability,
            });
        }
        if let Some(cap) = c.capacity {
            if !(cap >= 0.0 && cap.is_finite()) {
                return Err(ModelError::Capacity {
                    id: c.id.clone(),
                    value: cap,
                });
            }
        }
    }
    Ok(())
}

fn validate_structure(s: &Structure, components: &[ComponentSpec]) -> Result<(), ModelError> {
    let non_empty = |kind: &str, of: &[Structure]| {
        if of.is_empty() {
            Err(ModelError::Node {
                kind: kind.into(),
                msg: "needs at least one child".into(),
            })
        } else {
            Ok(())
        }
    };
    match s {
        Structure::Component(i) => {
            if *i >= components.len() {
                return Err(ModelError::UnknownComponent(format!("#{i}")));
            }
        }
        Structure::And(of) | Structure::Or(of) | Structure::Series(of) | Structure::Parallel(of) => {
            non_empty(kind_name(s), of)?;
            for c in of {
                validate_structure(c, components)?;
            }
        }
        Structure::Not(c) => validate_structure(c, components)?,
        Structure::KOfN { k, of } => {
            if *k < 1 || *k > of.len() {
                return Err(ModelError::KOutOfRange {
                    k: *k as i64,
                    children: of.len(),
                });
            }
            for c in of {
                validate_structure(c, components)?;
            }
        }
        Structure::Capacity { demand } => {
            if !(*demand >= 0.0 && demand.is_finite()) {
                return Err(ModelError::Demand(*demand));
            }
            if let Some(c) = components.iter().find(|c| c.capacity.is_none()) {
                return Err(ModelError::MissingCapacity(c.id.clone()));
            }
        }
    }
    Ok(())
}

fn kind_name(s: &Structure) -> &'static str {
    match s {
        Structure::Component(_) => "leaf",
        Structure::And(_) => "and",
        Structure::Or(_) => "or",
        Structure::Not(_) => "not",
        Structure::KOfN { .. } => "kofn",
        Structure::Series(_) => "series",
        Structure::Parallel(_) => "parallel",
        Structure::Capacity { .. } => "capacity",
    }
}

// ---- file format ----

#[derive(Serialize, Deserialize)]
struct ModelFile {
    components: Vec<RawComponent>,
    structure: RawNode,
}

#[derive(Serialize, Deserialize)]
struct RawComponent {
    id: String,
    availability: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    capacity: Option<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawNode {
    Leaf(String),
    Node(RawGateNode),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGateNode {
    #[serde(rename = "type")]
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    demand: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    of: Option<Vec<RawNode>>,
}

/// Parses and validates a model file (JSON) with the default component cap.
pub fn parse_model(text: &str) -> Result<ReliabilityModel, ModelError> {
    parse_model_with_cap(text, DEFAULT_COMPONENT_CAP)
}

pub fn parse_model_with_cap(text: &str, cap: usize) -> Result<ReliabilityModel, ModelError> {
    let file: ModelFile = serde_json::from_str(text).map_err(|e| ModelError::Syntax(e.to_string()))?;
    let components: Vec<ComponentSpec> = file
        .components
        .into_iter()
        .map(|c| ComponentSpec {
            id: c.id,
            availability: c.availability,
            capacity: c.capacity,
        })
        .collect();
    validate_components(&components, cap)?;
    let structure = from_raw(&file.structure, &components)?;
    ReliabilityModel::with_cap(components, structure, cap)
}

fn from_raw(node: &RawNode, components: &[ComponentSpec]) -> Result<Structure, ModelError> {
    let node = match node {
        RawNode::Leaf(id) => {
            return components
                .iter()
                .position(|c| &c.id == id)
                .map(Structure::Component)
                .ok_or_else(|| ModelError::UnknownComponent(id.clone()))
        }
        RawNode::Node(n) => n,
    };
    let err = |msg: &str| ModelError::Node {
        kind: node.kind.clone(),
        msg: msg.into(),
    };
    let children = || -> Result<Vec<Structure>, ModelError> {
        let of = node.of.as_ref().ok_or_else(|| err("missing \"of\""))?;
        of.iter().map(|c| from_raw(c, components)).collect()
    };
    let kind = node.kind.as_str();
    if kind != "kofn" && node.k.is_some() {
        return Err(err("\"k\" is only valid on kofn"));
    }
    if kind != "capacity" && node.demand.is_some() {
        return Err(err("\"demand\" is only valid on capacity"));
    }
    Ok(match kind {
        "and" => Structure::And(children()?),
        "or" => Structure::Or(children()?),
        "series" => Structure::Series(children()?),
        "parallel" => Structure::Parallel(children()?),
        "not" => {
            let mut of = children()?;
            if of.len() != 1 {
                return Err(err("needs exactly one child"));
            }
            Structure::Not(Box::new(of.remove(0)))
        }
        "kofn" => {
            let of = children()?;
            let k = node.k.ok_or_else(|| err("missing \"k\""))?;
            if k < 1 || k as usize > of.len() {
                return Err(ModelError::KOutOfRange { k, children: of.len() });
            }
            Structure::KOfN { k: k as usize, of }
        }
        "capacity" => {
            if node.of.is_some() {
                return Err(err("capacity nodes take no children"));
            }
            let demand = node.demand.ok_or_else(|| err("missing \"demand\""))?;
            Structure::Capacity { demand }
        }
        other => {
            return Err(ModelError::Node {
                kind: other.into(),
                msg: "unknown node type".into(),
            })
        }
    })
}

fn to_raw(s: &Structure, components: &[ComponentSpec]) -> RawNode {
    let node = |kind: &str, of: &[Structure]| {
        RawNode::Node(RawGateNode {
            kind: kind.into(),
            k: None,
            demand: None,
            of: Some(of.iter().map(|c| to_raw(c, components)).collect()),
        })
    };
    match s {
        Structure::Component(i) => RawNode::Leaf(components[*i].id.clone()),
        Structure::And(of) => node("and", of),
        Structure::Or(of) => node("or", of),
        Structure::Series(of) => node("series", of),
        Structure::Parallel(of) => node("parallel", of),
        Structure::Not(c) => node("not", std::slice::from_ref(c.as_ref())),
        Structure::KOfN { k, of } => RawNode::Node(RawGateNode {
            kind: "kofn".into(),
            k: Some(*k as i64),
            demand: None,
            of: Some(of.iter().map(|c| to_raw(c, components)).collect()),
        }),
        Structure::Capacity { demand } => RawNode::Node(RawGateNode {
            kind: "capacity".into(),
            k: None,
            demand: Some(*demand),
            of: None,
        }),
    }
}
