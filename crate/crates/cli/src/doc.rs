//! JSON documents for grids and margins.
//!
//! A grid document is `{kind, xs, ys, values}` with `values[i][j] = F(xs[i], ys[j])`.
//! A margin document is `{kind, xs, values}`. Saving writes the canonical
//! form: rationals in lowest terms, sentinels as `"-inf"` and `"inf"`.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use quasicop::{format_rational, parse_rational, AxisGrid, AxisKind, Coord, GridFunction, Mesh, UnivariateGrid};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDocument {
    pub kind: String,
    pub xs: Vec<String>,
    pub ys: Vec<String>,
    pub values: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarginDocument {
    pub kind: String,
    pub xs: Vec<String>,
    pub values: Vec<String>,
}

fn kind_name(kind: AxisKind) -> &'static str {
    match kind {
        AxisKind::Extended => "extended",
        AxisKind::Unit => "unit",
    }
}

fn parse_kind(text: &str) -> Result<AxisKind, String> {
    match text {
        "extended" => Ok(AxisKind::Extended),
        "unit" => Ok(AxisKind::Unit),
        other => Err(format!("kind: expected \"extended\" or \"unit\", found {other:?}")),
    }
}

fn parse_axis(kind: AxisKind, field: &str, coords: &[String]) -> Result<AxisGrid, String> {
    let parsed = coords
        .iter()
        .enumerate()
        .map(|(k, c)| Coord::from_str(c).map_err(|e| format!("{field}[{k}]: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    AxisGrid::new(kind, parsed).map_err(|e| format!("{field}: {e}"))
}

fn parse_values(field: &str, row: &[String]) -> Result<Vec<quasicop::Rational>, String> {
    row.iter().enumerate().map(|(k, v)| parse_rational(v).map_err(|e| format!("{field}[{k}]: {e}"))).collect()
}

fn axis_strings(axis: &AxisGrid) -> Vec<String> {
    axis.coords().iter().map(Coord::to_string).collect()
}

impl GridDocument {
    pub fn from_grid(f: &GridFunction) -> Self {
        GridDocument {
            kind: kind_name(f.mesh().kind()).into(),
            xs: axis_strings(f.mesh().x()),
            ys: axis_strings(f.mesh().y()),
            values: f.values().iter().map(|row| row.iter().map(format_rational).collect()).collect(),
        }
    }

    pub fn to_grid(&self) -> Result<GridFunction, String> {
        let kind = parse_kind(&self.kind)?;
        let mesh = Mesh::new(parse_axis(kind, "xs", &self.xs)?, parse_axis(kind, "ys", &self.ys)?)
            .map_err(|e| e.to_string())?;
        if self.values.len() != self.xs.len() {
            return Err(format!("values: expected {} rows, found {}", self.xs.len(), self.values.len()));
        }
        let mut rows = Vec::with_capacity(self.values.len());
        for (i, row) in self.values.iter().enumerate() {
            if row.len() != self.ys.len() {
                return Err(format!("values[{i}]: expected {} entries, found {}", self.ys.len(), row.len()));
            }
            rows.push(parse_values(&format!("values[{i}]"), row)?);
        }
        GridFunction::new(mesh, rows).map_err(|e| e.to_string())
    }
}

impl MarginDocument {
    pub fn from_margin(m: &UnivariateGrid) -> Self {
        MarginDocument {
            kind: kind_name(m.axis().kind()).into(),
            xs: axis_strings(m.axis()),
            values: m.values().iter().map(format_rational).collect(),
        }
    }

    pub fn to_margin(&self) -> Result<UnivariateGrid, String> {
        let axis = parse_axis(parse_kind(&self.kind)?, "xs", &self.xs)?;
        if self.values.len() != self.xs.len() {
            return Err(format!("values: expected {} entries, found {}", self.xs.len(), self.values.len()));
        }
        UnivariateGrid::new(axis, parse_values("values", &self.values)?).map_err(|e| e.to_string())
    }
}

fn read<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn load_grid(path: &Path) -> Result<GridFunction, CliError> {
    read::<GridDocument>(path)?.to_grid().map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn load_margin(path: &Path) -> Result<UnivariateGrid, CliError> {
    read::<MarginDocument>(path)?.to_margin().map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn canonical<T: Serialize>(doc: &T) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("documents serialize");
    text.push('\n');
    text
}

fn write(path: &Path, text: String) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn save_grid(f: &GridFunction, path: &Path) -> Result<(), CliError> {
    write(path, canonical(&GridDocument::from_grid(f)))
}

pub fn save_margin(m: &UnivariateGrid, path: &Path) -> Result<(), CliError> {
    write(path, canonical(&MarginDocument::from_margin(m)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(xs: &[&str], values: Vec<Vec<&str>>) -> GridDocument {
        let s = |v: &[&str]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>();
        GridDocument { kind: "extended".into(), xs: s(xs), ys: s(xs), values: values.iter().map(|r| s(r)).collect() }
    }

    #[test]
    fn sentinels_load() {
        let d = doc(
            &["-inf", "0", "1/2", "inf"],
            vec![vec!["0"; 4], vec!["0", "0", "0", "0"], vec!["0", "0", "0.25", "1/2"], vec!["0", "0", "1/2", "1"]],
        );
        let f = d.to_grid().unwrap();
        assert_eq!(f.mesh().x().coords()[0], Coord::NegInf);
        let back = GridDocument::from_grid(&f);
        assert_eq!(back.values[2][2], "1/4");
    }

    #[test]
    fn unordered_axis_is_named() {
        let d = doc(&["-inf", "1/2", "0", "inf"], vec![vec!["0"; 4]; 4]);
        let err = d.to_grid().unwrap_err();
        assert!(err.contains("axis not increasing"), "{err}");
        assert!(err.starts_with("xs"), "{err}");
    }

    #[test]
    fn bad_value_names_its_field() {
        let d = doc(&["-inf", "0", "inf"], vec![vec!["0"; 3], vec!["0", "x", "0"], vec!["0"; 3]]);
        let err = d.to_grid().unwrap_err();
        assert!(err.starts_with("values[1][1]"), "{err}");
    }

    #[test]
    fn canonical_round_trip() {
        let d = doc(&["-inf", "0.5", "inf"], vec![vec!["0"; 3], vec!["0", "2/8", "0.5"], vec!["0", "1/2", "1"]]);
        let once = canonical(&GridDocument::from_grid(&d.to_grid().unwrap()));
        let reparsed: GridDocument = serde_json::from_str(&once).unwrap();
        assert_eq!(canonical(&GridDocument::from_grid(&reparsed.to_grid().unwrap())), once);
        assert!(once.contains("\"1/4\""));
    }
}
