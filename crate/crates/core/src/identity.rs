//! Named pass/fail records for exact identity checks.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::multipoly::MultiPoly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl IdentityCheck {
    pub fn new(name: impl Into<String>, pass: bool) -> Self {
        IdentityCheck { name: name.into(), pass, detail: None }
    }

    pub fn with_detail(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        IdentityCheck { name: name.into(), pass, detail: Some(detail.into()) }
    }

    /// `lhs == rhs` as polynomials; on failure the detail names the leading differing monomial.
    pub fn poly_eq(name: impl Into<String>, lhs: &MultiPoly, rhs: &MultiPoly) -> Self {
        match lhs.first_difference(rhs) {
            None => Self::new(name, true),
            Some(m) => Self::with_detail(name, false, format!("differs at {m}")),
        }
    }
}

/// First failing check as an [`Error::InternalIdentityViolation`].
pub fn require_all(checks: &[IdentityCheck]) -> Result<()> {
    match checks.iter().find(|c| !c.pass) {
        None => Ok(()),
        Some(c) => Err(Error::InternalIdentityViolation {
            identity: c.name.clone(),
            detail: c.detail.clone().unwrap_or_default(),
        }),
    }
}
