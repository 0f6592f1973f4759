use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};

/// Rates, tax treatment and forgiveness horizon of a loan.
///
/// The loan accrues at `r + beta`; payments are discounted at `r`; the
/// balance left at `horizon` is forgiven and taxed at `omega`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TermsRepr", into = "TermsRepr")]
pub struct LoanTerms {
    r: f64,
    beta: f64,
    omega: f64,
    horizon: f64,
}

#[derive(Serialize, Deserialize)]
struct TermsRepr {
    r: f64,
    beta: f64,
    omega: f64,
    #[serde(alias = "T")]
    horizon: f64,
}

impl TryFrom<TermsRepr> for LoanTerms {
    type Error = ModelError;

    fn try_from(t: TermsRepr) -> Result<Self> {
        LoanTerms::new(t.r, t.beta, t.omega, t.horizon)
    }
}

impl From<LoanTerms> for TermsRepr {
    fn from(t: LoanTerms) -> Self {
        TermsRepr {
            r: t.r,
            beta: t.beta,
            omega: t.omega,
            horizon: t.horizon,
        }
    }
}

impl LoanTerms {
    pub fn new(r: f64, beta: f64, omega: f64, horizon: f64) -> Result<Self> {
        let check = |ok: bool, msg: &str| {
            if ok {
                Ok(())
            } else {
                Err(ModelError::InvalidTerms(msg.to_string()))
            }
        };
        check(r.is_finite() && r > 0.0, "discount rate r must be positive")?;
        check(beta.is_finite() && beta > 0.0, "spread beta must be positive")?;
        check(
            omega.is_finite() && omega > 0.0 && omega < 1.0,
            "tax rate omega must lie in (0, 1)",
        )?;
        check(
            horizon.is_finite() && horizon > 0.0,
            "forgiveness horizon must be positive",
        )?;
        Ok(LoanTerms {
            r,
            beta,
            omega,
            horizon,
        })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Loan interest rate `r + beta`.
    pub fn loan_rate(&self) -> f64 {
        self.r + self.beta
    }

    /// Present value at time zero of one dollar of balance forgiven at the
    /// horizon under compound interest, `omega * e^{beta T}`.
    pub fn forgiveness_weight(&self) -> f64 {
        self.omega * (self.beta * self.horizon).exp()
    }
}

/// Interest convention for the balance dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Accrued interest is capitalized continuously.
    #[default]
    Compound,
    /// Accrued interest is not capitalized; only principal earns interest.
    Simple,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Compound => f.write_str("compound"),
            Mode::Simple => f.write_str("simple"),
        }
    }
}

impl FromStr for Mode {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "compound" => Ok(Mode::Compound),
            "simple" => Ok(Mode::Simple),
            other => Err(ModelError::InvalidTerms(format!(
                "unknown mode `{other}` (expected compound or simple)"
            ))),
        }
    }
}
