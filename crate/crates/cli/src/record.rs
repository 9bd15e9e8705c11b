use serde::{Deserialize, Serialize};
use serde_json::Value;

use lcbound_core::{BoundResult, Rational};

pub const DECIMAL_DIGITS: u32 = 6;

/// Output of `bound` and `nn-bound`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultRecord {
    pub lambda: String,
    pub lambda_decimal: String,
    pub multiplicity: u8,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub n_star: Vec<i64>,
    pub case: String,
    pub assumptions_note: String,
    pub provenance: Value,
}

impl ResultRecord {
    pub fn new(result: &BoundResult, assumptions_note: &str, provenance: Value) -> Self {
        ResultRecord {
            lambda: result.lambda_bound.to_string(),
            lambda_decimal: result.lambda_bound.to_significant(DECIMAL_DIGITS),
            multiplicity: result.multiplicity,
            k: result.k,
            l: result.l,
            n_star: result.n_star.clone(),
            case: result.case.to_string(),
            assumptions_note: assumptions_note.to_string(),
            provenance,
        }
    }

    /// The exact value behind `lambda`.
    pub fn lambda_value(&self) -> Rational {
        self.lambda
            .parse()
            .expect("records hold well-formed fractions")
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("records serialize");
        out.push('\n');
        out
    }

    pub fn to_text(&self) -> String {
        let n_star: Vec<String> = self.n_star.iter().map(i64::to_string).collect();
        format!(
            "lambda: {}\nlambda_decimal: {}\nmultiplicity: {}\nK: {}\nL: {}\nn_star: [{}]\ncase: {}\nassumptions_note: {}\nprovenance: {}\n",
            self.lambda,
            self.lambda_decimal,
            self.multiplicity,
            self.k,
            self.l,
            n_star.join(", "),
            self.case,
            self.assumptions_note,
            self.provenance,
        )
    }

    /// Numeric columns only; `n_star` entries are joined with `;`.
    pub fn to_csv(&self) -> String {
        let n_star: Vec<String> = self.n_star.iter().map(i64::to_string).collect();
        format!(
            "lambda,lambda_decimal,multiplicity,K,L,n_star,case\n{},{},{},{},{},{},{}\n",
            self.lambda,
            self.lambda_decimal,
            self.multiplicity,
            self.k,
            self.l,
            n_star.join(";"),
            self.case,
        )
    }
}
