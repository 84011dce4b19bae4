//! Rendering of results as JSON records, CSV rows, or plain text.
//!
//! The JSON layout is described by schema/result_record.schema.json; the
//! CSV column order is part of the CLI contract and must not change.

use brokenstick::rational::{decimal_string, rational_to_f64};
use brokenstick::{BigRational, Estimate, MeanEstimate};
use serde::Serialize;

/// One result row. Field presence depends on the mode: exact fills
/// num/den/decimal, float fills float/log_prob, both fills all of those
/// plus rel_diff, and simulate fills estimate or mean_estimate.
#[derive(Debug, Clone, Serialize)]
pub struct ResultRecord {
    pub problem: String,
    pub k: usize,
    pub n: usize,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub num: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub den: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decimal: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub float: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_prob: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rel_diff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate: Option<Estimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_estimate: Option<MeanEstimate>,
    /// Signed deviation of the estimate from the exact value in units of
    /// the standard error at the exact value. Omitted when the exact side
    /// is not computed or the standard error vanishes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_score: Option<f64>,
}

impl ResultRecord {
    pub fn new(problem: &str, k: usize, n: usize, mode: &str) -> ResultRecord {
        ResultRecord {
            problem: problem.to_string(),
            k,
            n,
            mode: mode.to_string(),
            num: None,
            den: None,
            decimal: None,
            float: None,
            log_prob: None,
            rel_diff: None,
            estimate: None,
            mean_estimate: None,
            z_score: None,
        }
    }

    pub fn with_exact(mut self, value: &BigRational) -> ResultRecord {
        self.num = Some(value.numer().to_string());
        self.den = Some(value.denom().to_string());
        self.decimal = Some(decimal_string(value));
        self
    }
}

pub const CSV_HEADER: &str = "problem,k,n,num,den,decimal";

/// Exact-value CSV row matching CSV_HEADER. None of the fields can contain
/// a comma, so no quoting is needed.
pub fn csv_row(r: &ResultRecord) -> String {
    format!(
        "{},{},{},{},{},{}",
        r.problem,
        r.k,
        r.n,
        r.num.as_deref().expect("csv requires exact values"),
        r.den.as_deref().expect("csv requires exact values"),
        r.decimal.as_deref().expect("csv requires exact values"),
    )
}

pub fn json_line(r: &ResultRecord) -> String {
    serde_json::to_string(r).expect("record serializes")
}

pub fn plain_line(r: &ResultRecord) -> String {
    let head = format!("{}(k={}, n={})", r.problem, r.k, r.n);
    if let Some(est) = &r.estimate {
        let z = match r.z_score {
            Some(z) => format!(", z = {z:+.2}"),
            None => String::new(),
        };
        return format!(
            "{head}: p_hat = {} (95% CI {}..{}), {}/{} successes, seed {}, {} streams{z}",
            est.p_hat, est.ci_low, est.ci_high, est.successes, est.trials, est.seed, est.streams
        );
    }
    if let Some(est) = &r.mean_estimate {
        let z = match r.z_score {
            Some(z) => format!(", z = {z:+.2}"),
            None => String::new(),
        };
        return format!(
            "{head}: mean = {} (95% CI {}..{}), {} trials, seed {}, {} streams{z}",
            est.mean, est.ci_low, est.ci_high, est.trials, est.seed, est.streams
        );
    }
    match (&r.num, &r.float) {
        (Some(num), Some(float)) => format!(
            "{head} = {}/{} = {} (float {float:e}, rel diff {:e})",
            num,
            r.den.as_deref().unwrap(),
            r.decimal.as_deref().unwrap(),
            r.rel_diff.unwrap_or(0.0),
        ),
        (Some(num), None) => format!(
            "{head} = {}/{} = {}",
            num,
            r.den.as_deref().unwrap(),
            r.decimal.as_deref().unwrap(),
        ),
        (None, Some(float)) => format!(
            "{head} ~ {float:e} (ln = {})",
            r.log_prob.expect("float mode records carry log_prob"),
        ),
        (None, None) => head,
    }
}

/// Float rendering of an exact rational for the z-score denominator.
pub fn as_f64(value: &BigRational) -> f64 {
    rational_to_f64(value)
}
