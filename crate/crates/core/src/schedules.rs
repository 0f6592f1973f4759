//! Payment bounds from a borrower's income profile.

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};
use crate::model::PaymentBounds;

/// Income-driven repayment inputs, currency in thousands per year.
///
/// Minimum and maximum payments are the fractions `f_min` and `f_max` of
/// income above subsistence; income and subsistence grow at a common rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BorrowerProfile {
    pub income: f64,
    pub subsistence: f64,
    pub growth: f64,
    pub f_min: f64,
    pub f_max: f64,
}

impl BorrowerProfile {
    /// Income 82, subsistence 32, growth 4%, payments between 10% and 30% of
    /// the surplus: `m(0) = 5`, `M(0) = 15`.
    pub fn reference() -> Self {
        BorrowerProfile {
            income: 82.0,
            subsistence: 32.0,
            growth: 0.04,
            f_min: 0.10,
            f_max: 0.30,
        }
    }

    /// Per-field problems, empty when the profile is usable.
    pub fn problems(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        for (name, v) in [
            ("income", self.income),
            ("subsistence", self.subsistence),
            ("growth", self.growth),
            ("f_min", self.f_min),
            ("f_max", self.f_max),
        ] {
            if !v.is_finite() {
                out.push((name, format!("{name} must be finite")));
            }
        }
        if self.subsistence < 0.0 {
            out.push(("subsistence", "subsistence must be nonnegative".into()));
        }
        if self.income <= self.subsistence {
            out.push((
                "income",
                format!(
                    "income {} does not exceed subsistence {}: zero repayment capacity",
                    self.income, self.subsistence
                ),
            ));
        }
        if self.f_min <= 0.0 {
            out.push(("f_min", "f_min must be positive".into()));
        }
        if self.f_max <= self.f_min {
            out.push(("f_max", format!("f_max {} must exceed f_min {}", self.f_max, self.f_min)));
        }
        out
    }
}

/// `m(t) = f_min (I - S) e^{g t}`, `M(t) = f_max (I - S) e^{g t}`.
pub fn bounds_from_profile(profile: &BorrowerProfile) -> Result<PaymentBounds> {
    if let Some((_, msg)) = profile.problems().into_iter().next() {
        return Err(ModelError::InvalidBounds(msg));
    }
    let surplus = profile.income - profile.subsistence;
    PaymentBounds::exponential(profile.f_min * surplus, profile.f_max * surplus, profile.growth)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_profile_rates() {
        let b = bounds_from_profile(&BorrowerProfile::reference()).unwrap();
        assert!((b.min_rate(0.0) - 5.0).abs() < 1e-12);
        assert!((b.max_rate(0.0) - 15.0).abs() < 1e-12);
        assert!((b.min_rate(10.0) - 5.0 * 0.4f64.exp()).abs() < 1e-12);
        assert!((b.min_rate(10.0) - 7.459).abs() < 1e-3);
    }

    #[test]
    fn rejects_bad_profiles() {
        let base = BorrowerProfile::reference();
        let zero = BorrowerProfile { income: 32.0, ..base };
        assert!(matches!(bounds_from_profile(&zero), Err(ModelError::InvalidBounds(m)) if m.contains("zero repayment capacity")));
        assert!(bounds_from_profile(&BorrowerProfile { f_max: 0.1, ..base }).is_err());
        assert!(bounds_from_profile(&BorrowerProfile { f_min: 0.0, ..base }).is_err());
    }

    #[test]
    fn zero_growth_is_constant() {
        let b = bounds_from_profile(&BorrowerProfile { growth: 0.0, ..BorrowerProfile::reference() }).unwrap();
        assert_eq!(b.min_rate(0.0), b.min_rate(20.0));
        assert!(b.min_is_nondecreasing());
        assert!((b.max_rate(20.0) - 15.0).abs() < 1e-12);
    }

    #[test]
    fn profile_json_schema() {
        let p: BorrowerProfile =
            serde_json::from_str(r#"{"income":82,"subsistence":32,"growth":0.04,"f_min":0.1,"f_max":0.3}"#).unwrap();
        assert_eq!(p, BorrowerProfile::reference());
        assert!(serde_json::from_str::<BorrowerProfile>(r#"{"income":82}"#).is_err());
    }
}
