//! Finite probability measures stored as log-weights.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::tolerances::{INGEST_SUM_TOL, ORDER_EXCLUSION};

/// `log Σ exp(xᵢ)`, skipping `-∞` entries; `-∞` for an empty or all-zero input.
pub fn log_sum_exp<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let xs: Vec<f64> = xs.into_iter().filter(|x| *x > f64::NEG_INFINITY).collect();
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    if m == f64::INFINITY {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

// Allocation-free variant used by the hot loops.
#[inline]
pub(crate) fn lse_by<F: Fn(usize) -> f64>(n: usize, term: F) -> f64 {
    let mut m = f64::NEG_INFINITY;
    for i in 0..n {
        m = m.max(term(i));
    }
    if !m.is_finite() {
        return m;
    }
    let mut s = 0.0;
    for i in 0..n {
        let t = term(i);
        if t > f64::NEG_INFINITY {
            s += (t - m).exp();
        }
    }
    m + s.ln()
}

/// A probability measure on a finite labelled support.
///
/// Zero-mass atoms are kept with log-weight `-∞`, so two measures built on
/// the same labels can always be compared atom by atom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureWire", into = "MeasureWire")]
pub struct FiniteMeasure {
    labels: Vec<String>,
    log_weights: Vec<f64>,
}

/// JSON form: `{"labels": [...], "probs": [...]}` in linear scale.
#[derive(Serialize, Deserialize)]
struct MeasureWire {
    labels: Vec<String>,
    probs: Vec<f64>,
}

impl TryFrom<MeasureWire> for FiniteMeasure {
    type Error = Error;
    fn try_from(w: MeasureWire) -> Result<Self> {
        FiniteMeasure::from_probs(&w.probs, w.labels)
    }
}

impl From<FiniteMeasure> for MeasureWire {
    fn from(m: FiniteMeasure) -> Self {
        MeasureWire {
            probs: m.probs(),
            labels: m.labels,
        }
    }
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn check_labels(labels: &[String]) -> Result<()> {
    let mut seen = HashSet::with_capacity(labels.len());
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

impl FiniteMeasure {
    /// Builds a measure from unnormalised log-weights by subtracting their
    /// log-sum-exp.
    pub fn normalize(raw_log_weights: Vec<f64>, labels: Vec<String>) -> Result<Self> {
        if raw_log_weights.is_empty() {
            return Err(Error::Empty("support"));
        }
        if labels.len() != raw_log_weights.len() {
            return Err(Error::SupportMismatch(format!(
                "{} labels for {} weights",
                labels.len(),
                raw_log_weights.len()
            )));
        }
        check_labels(&labels)?;
        if raw_log_weights.iter().any(|w| w.is_nan() || *w == f64::INFINITY) {
            return Err(invalid("log_weights", "entries must be finite or -inf"));
        }
        let z = log_sum_exp(raw_log_weights.iter().copied());
        if z == f64::NEG_INFINITY {
            return Err(Error::ZeroMass);
        }
        let log_weights = raw_log_weights.into_iter().map(|w| w - z).collect();
        Ok(FiniteMeasure { labels, log_weights })
    }

    /// Same as [`normalize`](Self::normalize) with labels `"0", "1", …`.
    pub fn from_log_weights(raw_log_weights: Vec<f64>) -> Result<Self> {
        let labels = default_labels(raw_log_weights.len());
        Self::normalize(raw_log_weights, labels)
    }

    /// Ingests linear-scale probabilities that must sum to one within
    /// [`INGEST_SUM_TOL`]; the result is renormalised exactly.
    pub fn from_probs(probs: &[f64], labels: Vec<String>) -> Result<Self> {
        if probs.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(invalid("probs", "entries must be finite and nonnegative"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > INGEST_SUM_TOL {
            return Err(Error::NotNormalized(total));
        }
        Self::normalize(probs.iter().map(|p| p.ln()).collect(), labels)
    }

    pub fn from_probs_unlabeled(probs: &[f64]) -> Result<Self> {
        Self::from_probs(probs, default_labels(probs.len()))
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::from_log_weights(vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.log_weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_weights.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    pub fn probs(&self) -> Vec<f64> {
        self.log_weights.iter().map(|w| w.exp()).collect()
    }

    /// Mass of the atoms selected by `event`, clamped to `[0, 1]` against
    /// rounding.
    pub fn mass_of(&self, event: &[bool]) -> Result<f64> {
        if event.len() != self.len() {
            return Err(Error::SupportMismatch("event length differs from support".into()));
        }
        let m: f64 = self
            .log_weights
            .iter()
            .zip(event)
            .filter(|(_, &e)| e)
            .map(|(w, _)| w.exp())
            .sum();
        Ok(m.min(1.0))
    }

    /// Errors unless `other` lives on the same labels in the same order.
    pub fn check_same_support(&self, other: &FiniteMeasure) -> Result<()> {
        if self.labels != other.labels {
            return Err(Error::SupportMismatch("measures have different labels".into()));
        }
        Ok(())
    }

    /// `max_i |p_i − q_i|`.
    pub fn max_atom_distance(&self, other: &FiniteMeasure) -> Result<f64> {
        self.check_same_support(other)?;
        Ok(max_atom_distance_raw(&self.log_weights, &other.log_weights))
    }

    pub(crate) fn with_log_weights_unchecked(&self, log_weights: Vec<f64>) -> FiniteMeasure {
        FiniteMeasure {
            labels: self.labels.clone(),
            log_weights,
        }
    }
}

pub(crate) fn max_atom_distance_raw(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x.exp() - y.exp()).abs())
        .fold(0.0, f64::max)
}

/// A bounded function on the support of a [`FiniteMeasure`], aligned by index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct BoundedFunction {
    values: Vec<f64>,
}

impl TryFrom<Vec<f64>> for BoundedFunction {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        BoundedFunction::new(v)
    }
}

impl From<BoundedFunction> for Vec<f64> {
    fn from(g: BoundedFunction) -> Self {
        g.values
    }
}

impl BoundedFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("g", "values must be finite"));
        }
        Ok(BoundedFunction { values })
    }

    /// Aligns labelled values with `measure`, failing on any label mismatch.
    pub fn from_labeled(measure: &FiniteMeasure, labels: &[String], values: Vec<f64>) -> Result<Self> {
        if labels != measure.labels() {
            return Err(Error::SupportMismatch(format!(
                "function labels {:?} do not match measure labels {:?}",
                labels,
                measure.labels()
            )));
        }
        let g = Self::new(values)?;
        g.check_aligned(measure)?;
        Ok(g)
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        Self::new(vec![c; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    pub fn shifted(&self, c: f64) -> Self {
        BoundedFunction {
            values: self.values.iter().map(|v| v + c).collect(),
        }
    }

    pub fn scaled(&self, k: f64) -> Self {
        BoundedFunction {
            values: self.values.iter().map(|v| v * k).collect(),
        }
    }

    pub fn check_aligned(&self, measure: &FiniteMeasure) -> Result<()> {
        if self.len() != measure.len() {
            return Err(Error::SupportMismatch(format!(
                "function has {} values, measure has {} atoms",
                self.len(),
                measure.len()
            )));
        }
        Ok(())
    }
}

/// Exponents `β < γ`, both nonzero, of the variational identities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderParams {
    beta: f64,
    gamma: f64,
}

impl OrderParams {
    pub fn new(beta: f64, gamma: f64) -> Result<Self> {
        if !(beta.is_finite() && gamma.is_finite()) {
            return Err(invalid("order", "beta and gamma must be finite"));
        }
        if beta.abs() < ORDER_EXCLUSION || gamma.abs() < ORDER_EXCLUSION {
            return Err(invalid("order", format!("beta and gamma must be nonzero (beta={beta}, gamma={gamma})")));
        }
        if !(beta < gamma) {
            return Err(invalid("order", format!("need beta < gamma, got beta={beta}, gamma={gamma}")));
        }
        Ok(OrderParams { beta, gamma })
    }

    /// The single-order form: `β = α − 1`, `γ = α`.
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if alpha.abs() < ORDER_EXCLUSION || (alpha - 1.0).abs() < ORDER_EXCLUSION {
            return Err(Error::InvalidOrder(alpha));
        }
        Self::new(alpha - 1.0, alpha)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `γ − β > 0`.
    pub fn spread(&self) -> f64 {
        self.gamma - self.beta
    }

    /// The Rényi order `γ / (γ − β)` appearing in the identities.
    pub fn divergence_order(&self) -> f64 {
        self.gamma / self.spread()
    }
}

pub(crate) fn risk_sensitive_raw(log_w: &[f64], g: &[f64], beta: f64) -> f64 {
    lse_by(log_w.len(), |i| log_w[i] + beta * g[i]) / beta
}

/// `(1/β) log Σ νᵢ e^{β gᵢ}`, evaluated in log domain.
pub fn risk_sensitive(nu: &FiniteMeasure, g: &BoundedFunction, beta: f64) -> Result<f64> {
    g.check_aligned(nu)?;
    if !beta.is_finite() || beta == 0.0 {
        return Err(invalid("beta", "must be finite and nonzero; use expectation for beta = 0"));
    }
    Ok(risk_sensitive_raw(nu.log_weights(), g.values(), beta))
}

pub(crate) fn exp_tilt_raw(log_w: &[f64], g: &[f64], s: f64) -> Vec<f64> {
    let z = lse_by(log_w.len(), |i| log_w[i] + s * g[i]);
    log_w.iter().zip(g).map(|(w, gi)| w + s * gi - z).collect()
}

/// The tilted measure `dθ = e^{s g} dν / Z`.
pub fn exp_tilt(nu: &FiniteMeasure, g: &BoundedFunction, s: f64) -> Result<FiniteMeasure> {
    g.check_aligned(nu)?;
    if !s.is_finite() {
        return Err(invalid("s", "tilt parameter must be finite"));
    }
    Ok(nu.with_log_weights_unchecked(exp_tilt_raw(nu.log_weights(), g.values(), s)))
}

/// `Σ νᵢ gᵢ`.
pub fn expectation(nu: &FiniteMeasure, g: &BoundedFunction) -> Result<f64> {
    g.check_aligned(nu)?;
    Ok(nu
        .log_weights()
        .iter()
        .zip(g.values())
        .map(|(w, gi)| w.exp() * gi)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn labels(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn normalize_examples() {
        let m = FiniteMeasure::normalize(vec![0.0, 0.0], labels(&["a", "b"])).unwrap();
        assert!(m.probs().iter().all(|p| (p - 0.5).abs() < 1e-15));
        let m = FiniteMeasure::normalize(vec![1f64.ln(), 3f64.ln()], labels(&["a", "b"])).unwrap();
        assert!((m.probs()[0] - 0.25).abs() < 1e-15 && (m.probs()[1] - 0.75).abs() < 1e-15);
        let m = FiniteMeasure::normalize(vec![0.0, f64::NEG_INFINITY], labels(&["a", "b"])).unwrap();
        assert_eq!(m.log_weights()[1], f64::NEG_INFINITY);
        assert_eq!(m.probs(), vec![1.0, 0.0]);
    }

    #[test]
    fn normalize_rejects_bad_input() {
        assert_eq!(
            FiniteMeasure::normalize(vec![f64::NEG_INFINITY; 2], labels(&["a", "b"])),
            Err(Error::ZeroMass)
        );
        assert!(matches!(
            FiniteMeasure::normalize(vec![0.0, 0.0], labels(&["a", "a"])),
            Err(Error::DuplicateLabel(_))
        ));
        assert!(FiniteMeasure::normalize(vec![0.0], labels(&["a", "b"])).is_err());
        assert!(FiniteMeasure::from_probs_unlabeled(&[0.5, 0.6]).is_err());
        assert!(FiniteMeasure::from_probs_unlabeled(&[0.5, 0.5 + 5e-10]).is_ok());
    }

    #[test]
    fn risk_sensitive_examples() {
        let nu = FiniteMeasure::uniform(2).unwrap();
        let g = BoundedFunction::new(vec![0.0, 1.0]).unwrap();
        let v = risk_sensitive(&nu, &g, 1.0).unwrap();
        assert!((v - ((1.0 + E) / 2.0).ln()).abs() < 1e-15);
        assert!((v - 0.620_115).abs() < 1e-6);
        let v = risk_sensitive(&nu, &g, -1.0).unwrap();
        assert!((v - 0.379_885).abs() < 1e-6);
        let c = BoundedFunction::constant(2, 3.25).unwrap();
        for beta in [-7.0, -0.1, 0.3, 40.0] {
            assert!((risk_sensitive(&nu, &c, beta).unwrap() - 3.25).abs() < 1e-14);
        }
        assert!(risk_sensitive(&nu, &g, 0.0).is_err());
    }

    #[test]
    fn risk_sensitive_survives_large_exponents() {
        let nu = FiniteMeasure::from_probs_unlabeled(&[0.999, 0.001]).unwrap();
        let g = BoundedFunction::new(vec![0.0, 10.0]).unwrap();
        let v = risk_sensitive(&nu, &g, 100.0).unwrap();
        assert!(v.is_finite());
        assert!((v - (10.0 + 0.001f64.ln() / 100.0)).abs() < 1e-12);
    }

    #[test]
    fn exp_tilt_examples() {
        let nu = FiniteMeasure::uniform(2).unwrap();
        let g = BoundedFunction::new(vec![0.0, 4f64.ln()]).unwrap();
        let t = exp_tilt(&nu, &g, 1.0).unwrap();
        assert!((t.probs()[0] - 0.2).abs() < 1e-15 && (t.probs()[1] - 0.8).abs() < 1e-15);
        assert_eq!(exp_tilt(&nu, &g, 0.0).unwrap(), nu);
        let c = BoundedFunction::constant(2, -1.5).unwrap();
        let t = exp_tilt(&nu, &c, 2.0).unwrap();
        assert!(t.max_atom_distance(&nu).unwrap() < 1e-15);
    }

    #[test]
    fn exp_tilt_keeps_zero_atoms() {
        let nu = FiniteMeasure::from_probs_unlabeled(&[0.5, 0.0, 0.5]).unwrap();
        let g = BoundedFunction::new(vec![1.0, 2.0, 3.0]).unwrap();
        let t = exp_tilt(&nu, &g, 1.7).unwrap();
        assert_eq!(t.log_weights()[1], f64::NEG_INFINITY);
    }

    #[test]
    fn expectation_examples() {
        let pm = FiniteMeasure::from_probs(&[1.0, 0.0], labels(&["a", "b"])).unwrap();
        let g = BoundedFunction::new(vec![7.0, -3.0]).unwrap();
        assert_eq!(expectation(&pm, &g).unwrap(), 7.0);
        let u = FiniteMeasure::uniform(2).unwrap();
        assert_eq!(expectation(&u, &BoundedFunction::new(vec![0.0, 1.0]).unwrap()).unwrap(), 0.5);
        let q = FiniteMeasure::from_probs_unlabeled(&[0.25, 0.75]).unwrap();
        assert!((expectation(&q, &BoundedFunction::new(vec![4.0, 0.0]).unwrap()).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn alignment_failures_are_loud() {
        let nu = FiniteMeasure::uniform(3).unwrap();
        let g = BoundedFunction::new(vec![0.0, 1.0]).unwrap();
        assert!(matches!(risk_sensitive(&nu, &g, 1.0), Err(Error::SupportMismatch(_))));
        let m = FiniteMeasure::from_probs(&[0.5, 0.5], labels(&["x", "y"])).unwrap();
        assert!(BoundedFunction::from_labeled(&m, &labels(&["y", "x"]), vec![1.0, 2.0]).is_err());
        assert!(BoundedFunction::from_labeled(&m, &labels(&["x", "y"]), vec![1.0, 2.0]).is_ok());
        assert!(BoundedFunction::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn order_params_admissibility() {
        assert!(OrderParams::new(1.0, 2.0).is_ok());
        assert!(OrderParams::new(2.0, 1.0).is_err());
        assert!(OrderParams::new(0.0, 1.0).is_err());
        assert!(OrderParams::from_alpha(1.0).is_err());
        assert!(OrderParams::from_alpha(0.0).is_err());
        let p = OrderParams::new(-1.0, 1.0).unwrap();
        assert_eq!(p.divergence_order(), 0.5);
        let p = OrderParams::from_alpha(3.0).unwrap();
        assert_eq!((p.beta(), p.gamma(), p.divergence_order()), (2.0, 3.0, 3.0));
    }

    #[test]
    fn json_format() {
        let m: FiniteMeasure = serde_json::from_str(r#"{"labels":["a","b"],"probs":[0.25,0.75]}"#).unwrap();
        assert_eq!(m.labels(), &["a".to_string(), "b".to_string()]);
        let s = serde_json::to_string(&m).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["labels"], serde_json::json!(["a", "b"]));
        let probs: Vec<f64> = serde_json::from_value(v["probs"].clone()).unwrap();
        assert!((probs[0] - 0.25).abs() < 1e-15 && (probs[1] - 0.75).abs() < 1e-15);
        assert!(serde_json::from_str::<FiniteMeasure>(r#"{"labels":["a","b"],"probs":[0.2,0.7]}"#).is_err());
    }
}
