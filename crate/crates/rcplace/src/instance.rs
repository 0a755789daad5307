//! Instance files.
//!
//! One JSON document per file:
//!
//! ```json
//! {
//!   "chip": { "width": 16, "height": 12 },
//!   "distribution": "uniform5-10",
//!   "seed": 7,
//!   "modules": [
//!     { "id": 0, "arrival_index": 0, "x": 5, "y": 5, "w": 4, "h": 2,
//!       "lifetime": 10, "border_edge": "left",
//!       "buswidths": { "border": 3 } }
//!   ],
//!   "requests": [
//!     { "w": 4, "h": 2,
//!       "demands": [ { "module": 0, "buswidth": 2 },
//!                    { "point": [1, 1], "buswidth": 1 },
//!                    { "border": "top", "buswidth": 4 } ] }
//!   ]
//! }
//! ```
//!
//! `distribution`, `seed`, `x`, `y`, `border_edge` and `requests` are
//! optional. Modules with a position form the current layout; modules
//! without one are the arrival sequence of a benchmark run. Buswidth keys are
//! `"border"` or the decimal id of another module.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rcplace_core::{ChipConfig, Coord, Demand, Point, Rect};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> ParseError {
    ParseError::Invalid { field: field.into(), message: message.into() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Edge {
    Left,
    Right,
    Bottom,
    Top,
}

impl Edge {
    pub const ALL: [Edge; 4] = [Edge::Left, Edge::Right, Edge::Bottom, Edge::Top];

    /// Midpoint of this chip edge, doubled.
    pub fn midpoint(self, chip: &ChipConfig) -> Point {
        match self {
            Edge::Left => Point::new(0, chip.height),
            Edge::Right => Point::new(2 * chip.width, chip.height),
            Edge::Bottom => Point::new(chip.width, 0),
            Edge::Top => Point::new(chip.width, 2 * chip.height),
        }
    }
}

/// Key of a buswidth entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Target {
    Border,
    Module(u32),
}

impl FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "border" {
            return Ok(Target::Border);
        }
        s.parse::<u32>()
            .map(Target::Module)
            .map_err(|_| format!("buswidth key {s:?} is neither \"border\" nor a module id"))
    }
}

impl TryFrom<String> for Target {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Target> for String {
    fn from(t: Target) -> String {
        t.to_string()
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Border => f.write_str("border"),
            Target::Module(id) => write!(f, "{id}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChipSpec {
    pub width: Coord,
    pub height: Coord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub id: u32,
    pub arrival_index: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Coord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Coord>,
    pub w: Coord,
    pub h: Coord,
    pub lifetime: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub border_edge: Option<Edge>,
    #[serde(default)]
    pub buswidths: BTreeMap<Target, u64>,
}

impl ModuleSpec {
    /// The module's rectangle if it has a position.
    pub fn rect(&self) -> Option<Rect> {
        Some(Rect::new(self.x?, self.y?, self.w, self.h))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DemandTarget {
    Module(u32),
    Point(Coord, Coord),
    Border(Edge),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawDemand", into = "RawDemand")]
pub struct DemandSpec {
    pub target: DemandTarget,
    pub buswidth: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDemand {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    module: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    point: Option<[Coord; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    border: Option<Edge>,
    buswidth: u64,
}

impl TryFrom<RawDemand> for DemandSpec {
    type Error = String;

    fn try_from(raw: RawDemand) -> Result<Self, Self::Error> {
        let target = match (raw.module, raw.point, raw.border) {
            (Some(id), None, None) => DemandTarget::Module(id),
            (None, Some([x, y]), None) => DemandTarget::Point(x, y),
            (None, None, Some(edge)) => DemandTarget::Border(edge),
            _ => return Err("a demand needs exactly one of \"module\", \"point\" or \"border\"".into()),
        };
        Ok(DemandSpec { target, buswidth: raw.buswidth })
    }
}

impl From<DemandSpec> for RawDemand {
    fn from(d: DemandSpec) -> RawDemand {
        let mut raw = RawDemand { module: None, point: None, border: None, buswidth: d.buswidth };
        match d.target {
            DemandTarget::Module(id) => raw.module = Some(id),
            DemandTarget::Point(x, y) => raw.point = Some([x, y]),
            DemandTarget::Border(edge) => raw.border = Some(edge),
        }
        raw
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequestSpec {
    pub w: Coord,
    pub h: Coord,
    #[serde(default)]
    pub demands: Vec<DemandSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    pub chip: ChipSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distribution: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub modules: Vec<ModuleSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub requests: Vec<RequestSpec>,
}

impl Instance {
    pub fn chip(&self) -> ChipConfig {
        ChipConfig::new(self.chip.width, self.chip.height).expect("validated on parse")
    }

    /// Modules that have a position, in file order.
    pub fn placed(&self) -> impl Iterator<Item = &ModuleSpec> {
        self.modules.iter().filter(|m| m.x.is_some())
    }

    pub fn layout(&self) -> Vec<Rect> {
        self.placed().filter_map(ModuleSpec::rect).collect()
    }

    /// Demand points of a request, doubled. Module targets resolve to the
    /// center of the placed module.
    pub fn resolve_demands(&self, request: &RequestSpec) -> Result<Vec<Demand>, ParseError> {
        let chip = self.chip();
        request
            .demands
            .iter()
            .map(|d| {
                let at = match d.target {
                    DemandTarget::Point(x, y) => Point::new(2 * x, 2 * y),
                    DemandTarget::Border(edge) => edge.midpoint(&chip),
                    DemandTarget::Module(id) => {
                        let r = self
                            .placed()
                            .find(|m| m.id == id)
                            .and_then(ModuleSpec::rect)
                            .ok_or_else(|| invalid("demands", format!("module {id} is not placed")))?;
                        Point::new(2 * r.x + r.w, 2 * r.y + r.h)
                    }
                };
                Ok(Demand { at, weight: d.buswidth })
            })
            .collect()
    }

    fn validate(&self) -> Result<(), ParseError> {
        if self.chip.width <= 0 {
            return Err(invalid("chip.width", "must be positive"));
        }
        if self.chip.height <= 0 {
            return Err(invalid("chip.height", "must be positive"));
        }
        let mut ids = BTreeSet::new();
        for (i, m) in self.modules.iter().enumerate() {
            let field = |name: &str| format!("modules[{i}].{name}");
            if m.w <= 0 {
                return Err(invalid(field("w"), "must be positive"));
            }
            if m.h <= 0 {
                return Err(invalid(field("h"), "must be positive"));
            }
            if m.x.is_some() != m.y.is_some() {
                return Err(invalid(field("x"), "x and y must be given together"));
            }
            if !ids.insert(m.id) {
                return Err(invalid(field("id"), format!("duplicate id {}", m.id)));
            }
        }
        for (i, m) in self.modules.iter().enumerate() {
            for key in m.buswidths.keys() {
                if let Target::Module(id) = key {
                    if !ids.contains(id) {
                        return Err(invalid(format!("modules[{i}].buswidths"), format!("unknown module {id}")));
                    }
                }
            }
        }
        for (i, r) in self.requests.iter().enumerate() {
            if r.w <= 0 {
                return Err(invalid(format!("requests[{i}].w"), "must be positive"));
            }
            if r.h <= 0 {
                return Err(invalid(format!("requests[{i}].h"), "must be positive"));
            }
            for (j, d) in r.demands.iter().enumerate() {
                let field = format!("requests[{i}].demands[{j}]");
                match d.target {
                    DemandTarget::Module(id) if !ids.contains(&id) => {
                        return Err(invalid(field, format!("unknown module {id}")));
                    }
                    DemandTarget::Point(x, y) if x < 0 || y < 0 || x > self.chip.width || y > self.chip.height => {
                        return Err(invalid(field, "point lies outside the chip"));
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let instance: Instance = serde_json::from_str(text).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    instance.validate()?;
    Ok(instance)
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_instance(instance: &Instance) -> String {
    let mut text = serde_json::to_string_pretty(instance).expect("instances always serialize");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{ "chip": { "width": 16, "height": 12 } }"#;

    #[test]
    fn minimal_document_has_no_modules() {
        let inst = parse_instance(MINIMAL).unwrap();
        assert!(inst.modules.is_empty());
        assert!(inst.layout().is_empty());
    }

    #[test]
    fn two_modules_survive_a_round_trip() {
        let text = r#"{
            "chip": { "width": 16, "height": 12 },
            "modules": [
                { "id": 3, "arrival_index": 0, "x": 0, "y": 0, "w": 2, "h": 2, "lifetime": 5,
                  "buswidths": { "border": 1 } },
                { "id": 4, "arrival_index": 1, "w": 3, "h": 1, "lifetime": 9, "border_edge": "top",
                  "buswidths": { "3": 7, "border": 2 } }
            ],
            "requests": [ { "w": 1, "h": 1, "demands": [ { "module": 3, "buswidth": 1 },
                                                          { "border": "left", "buswidth": 2 } ] } ]
        }"#;
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.modules.len(), 2);
        assert_eq!(inst.modules[1].buswidths[&Target::Module(3)], 7);
        let again = parse_instance(&write_instance(&inst)).unwrap();
        assert_eq!(again, inst);
        assert_eq!(write_instance(&again), write_instance(&inst));
    }

    #[test]
    fn negative_width_is_rejected() {
        let text = r#"{ "chip": { "width": 16, "height": 12 },
            "modules": [ { "id": 0, "arrival_index": 0, "w": -2, "h": 2, "lifetime": 5 } ] }"#;
        assert_eq!(
            parse_instance(text),
            Err(ParseError::Invalid { field: "modules[0].w".into(), message: "must be positive".into() })
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_instance("{\n  \"chip\": { \"width\": 16,, }\n}").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn bad_keys_and_targets() {
        let key = r#"{ "chip": { "width": 4, "height": 4 },
            "modules": [ { "id": 0, "arrival_index": 0, "w": 1, "h": 1, "lifetime": 5, "buswidths": { "north": 1 } } ] }"#;
        assert!(matches!(parse_instance(key), Err(ParseError::Syntax { .. })));
        let target = r#"{ "chip": { "width": 4, "height": 4 },
            "requests": [ { "w": 1, "h": 1, "demands": [ { "module": 1, "point": [0, 0], "buswidth": 1 } ] } ] }"#;
        assert!(matches!(parse_instance(target), Err(ParseError::Syntax { .. })));
        let unknown = r#"{ "chip": { "width": 4, "height": 4 },
            "requests": [ { "w": 1, "h": 1, "demands": [ { "module": 1, "buswidth": 1 } ] } ] }"#;
        assert!(matches!(parse_instance(unknown), Err(ParseError::Invalid { .. })));
    }

    #[test]
    fn module_demands_resolve_to_centers() {
        let text = r#"{ "chip": { "width": 16, "height": 12 },
            "modules": [ { "id": 0, "arrival_index": 0, "x": 5, "y": 5, "w": 3, "h": 3, "lifetime": 1 } ],
            "requests": [ { "w": 4, "h": 2, "demands": [ { "module": 0, "buswidth": 2 },
                                                          { "border": "right", "buswidth": 1 } ] } ] }"#;
        let inst = parse_instance(text).unwrap();
        let demands = inst.resolve_demands(&inst.requests[0]).unwrap();
        assert_eq!(demands[0], Demand { at: Point::new(13, 13), weight: 2 });
        assert_eq!(demands[1], Demand { at: Point::new(32, 12), weight: 1 });
    }
}
