//! JSON problem descriptions accepted by `bound` and `ledger`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use lcbound_core::nn::{ActivationSupport, NetworkShape, Point};
use lcbound_core::{ProblemSpec, Shelf, ShelfSequence};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShelfEntry {
    pub m: i64,
    pub n: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TailFamily {
    Exp,
    Swish,
    Odd,
    Arithmetic,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<i64>,
    /// Inventory of every tail shelf; 1 when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InfiniteTail {
    pub family: TailFamily,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<TailParams>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenericSpec {
    pub r: i64,
    pub alpha: i64,
    pub beta: i64,
    #[serde(default)]
    pub shelves: Vec<ShelfEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub infinite_tail: Option<InfiniteTail>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActivationFamily {
    Exp,
    Swish,
    #[serde(alias = "odd")]
    Tanh,
    Poly,
    Custom,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActivationSpec {
    pub family: ActivationFamily,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<u64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointName {
    P1,
    P2,
}

impl From<PointName> for Point {
    fn from(p: PointName) -> Point {
        match p {
            PointName::P1 => Point::P1,
            PointName::P2 => Point::P2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSpec {
    #[serde(rename = "N")]
    pub inputs: i64,
    #[serde(rename = "H")]
    pub hidden: i64,
    #[serde(rename = "M")]
    pub outputs: i64,
    #[serde(rename = "H_star")]
    pub true_hidden: i64,
    pub activation: ActivationSpec,
    pub point: PointName,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecFile {
    Generic(GenericSpec),
    Network(NetworkSpec),
}

fn invalid(message: impl Into<String>) -> CliError {
    CliError::validation("InvalidSpecFile", message)
}

impl SpecFile {
    pub fn parse(text: &str) -> Result<SpecFile, CliError> {
        let value: Value = serde_json::from_str(text).map_err(|e| invalid(e.to_string()))?;
        let Value::Object(map) = &value else {
            return Err(invalid("spec file must hold a JSON object"));
        };
        let generic = ["r", "alpha", "beta", "shelves", "infinite_tail"]
            .iter()
            .any(|k| map.contains_key(*k));
        let network = ["N", "H", "M", "H_star", "activation", "point"]
            .iter()
            .any(|k| map.contains_key(*k));
        match (generic, network) {
            (true, false) => serde_json::from_value(value)
                .map(SpecFile::Generic)
                .map_err(|e| invalid(e.to_string())),
            (false, true) => serde_json::from_value(value)
                .map(SpecFile::Network)
                .map_err(|e| invalid(e.to_string())),
            (true, true) => Err(invalid("spec mixes generic and network fields")),
            (false, false) => Err(invalid("spec has neither generic nor network fields")),
        }
    }

    pub fn to_value(&self) -> Value {
        match self {
            SpecFile::Generic(g) => serde_json::to_value(g),
            SpecFile::Network(n) => serde_json::to_value(n),
        }
        .expect("spec types serialize")
    }
}

/// Exponents `m_s` of a named family, 1-based.
fn family_exponent(family: TailFamily, s: usize) -> i64 {
    let s = s as i64;
    match family {
        TailFamily::Exp => s,
        TailFamily::Swish if s == 1 => 1,
        TailFamily::Swish => 2 * (s - 1),
        TailFamily::Odd => 2 * s - 1,
        TailFamily::Arithmetic => unreachable!("arithmetic tails carry their own parameters"),
    }
}

impl GenericSpec {
    pub fn to_problem(&self) -> Result<ProblemSpec, CliError> {
        let listed: Vec<Shelf> = self.shelves.iter().map(|s| Shelf::new(s.m, s.n)).collect();
        let Some(tail) = &self.infinite_tail else {
            return Ok(ProblemSpec::new(
                self.r,
                self.alpha,
                self.beta,
                ShelfSequence::Finite(listed),
            ));
        };
        let params = tail.params.clone().unwrap_or_default();
        let inventory = params.n.unwrap_or(1);
        let last = listed.last().map_or(0, |s| s.price);

        let price: Box<dyn Fn(usize) -> i64 + Send + Sync> = match tail.family {
            TailFamily::Arithmetic => {
                let (Some(start), Some(step)) = (params.start, params.step) else {
                    return Err(invalid("arithmetic tail needs params {start, step}"));
                };
                if step < 1 {
                    return Err(invalid(format!(
                        "arithmetic tail step must be at least 1, got {step}"
                    )));
                }
                Box::new(move |t| start + step * (t as i64 - 1))
            }
            family => {
                if params.start.is_some() || params.step.is_some() {
                    return Err(invalid("start and step only apply to arithmetic tails"));
                }
                // family members above the last listed price
                let first = (1..)
                    .find(|&j| family_exponent(family, j) > last)
                    .expect("exponents grow");
                Box::new(move |t| family_exponent(family, first + t - 1))
            }
        };
        let head = listed.len();
        let shelves = ShelfSequence::infinite(move |s| {
            if s <= head {
                listed[s - 1]
            } else {
                Shelf::new(price(s - head), inventory)
            }
        });
        Ok(ProblemSpec::new(self.r, self.alpha, self.beta, shelves))
    }
}

impl ActivationSpec {
    pub fn to_support(&self) -> Result<ActivationSupport, CliError> {
        let exps = || {
            self.exponents
                .clone()
                .filter(|e| !e.is_empty())
                .ok_or_else(|| {
                    CliError::validation("InvalidExponents", "this activation needs --exponents")
                })
        };
        let support = match self.family {
            ActivationFamily::Exp => ActivationSupport::Exp,
            ActivationFamily::Swish => ActivationSupport::Swish,
            ActivationFamily::Tanh => ActivationSupport::Odd,
            ActivationFamily::Poly => ActivationSupport::Polynomial(exps()?),
            ActivationFamily::Custom => {
                let list = exps()?;
                if list[0] == 0 || list.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(CliError::validation(
                        "InvalidExponents",
                        "activation exponents must be positive and strictly increasing",
                    ));
                }
                // continue past the listed prefix with its last step
                let step = match list.len() {
                    1 => 1,
                    n => list[n - 1] - list[n - 2],
                };
                ActivationSupport::custom(move |s| match list.get(s - 1) {
                    Some(&e) => e,
                    None => list[list.len() - 1] + step * (s - list.len()) as u64,
                })
            }
        };
        if !matches!(
            self.family,
            ActivationFamily::Poly | ActivationFamily::Custom
        ) && self.exponents.is_some()
        {
            return Err(CliError::validation(
                "InvalidExponents",
                "exponents only apply to poly and custom",
            ));
        }
        Ok(support)
    }
}

impl NetworkSpec {
    pub fn shape(&self) -> Result<NetworkShape, CliError> {
        let dims = [self.inputs, self.hidden, self.outputs, self.true_hidden];
        if dims.iter().any(|&d| d < 0) {
            return Err(CliError::validation(
                "InvalidShape",
                format!(
                    "network dimensions must be non-negative (N={}, H={}, M={}, H*={})",
                    self.inputs, self.hidden, self.outputs, self.true_hidden
                ),
            ));
        }
        NetworkShape::new(
            self.inputs as u64,
            self.hidden as u64,
            self.outputs as u64,
            self.true_hidden as u64,
        )
        .map_err(CliError::from)
    }
}
