//! Closed-form reputation gains of honesty versus deviation.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropositionReport {
    pub psi1: f64,
    pub psi2: f64,
    pub alpha: f64,
    pub phi_size: f64,
    /// Gain from honest reporting.
    pub theta_h: f64,
    /// Gain from deviating.
    pub theta_d: f64,
    pub margin: f64,
}

fn check(alpha: f64, phi_size: f64, psis: &[f64]) -> Result<()> {
    if phi_size <= 3.0 || !phi_size.is_finite() {
        return Err(Error::PropositionPrecondition(format!(
            "|Φ| = {phi_size} must exceed 3"
        )));
    }
    if alpha <= 1.0 || !alpha.is_finite() {
        return Err(Error::PropositionPrecondition(format!(
            "α = {alpha} must exceed 1"
        )));
    }
    if let Some(p) = psis.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::PropositionPrecondition(format!(
            "ψ = {p} outside [0, 1]"
        )));
    }
    Ok(())
}

/// A responder choosing between disclosing and hiding a link-breaker's
/// beacons. `psi1`: an alternate route to the successor exists; `psi2`:
/// the breaker can be blacklisted.
pub fn proposition_gains_link(
    psi1: f64,
    psi2: f64,
    alpha: f64,
    phi_size: f64,
) -> Result<PropositionReport> {
    check(alpha, phi_size, &[psi1, psi2])?;
    let a2 = alpha * alpha;
    let theta_h = psi1 * (psi2 * a2 * (phi_size - 2.0) + (1.0 - psi2) * a2);
    let theta_d = psi1 * a2;
    Ok(PropositionReport {
        psi1,
        psi2,
        alpha,
        phi_size,
        theta_h,
        theta_d,
        margin: theta_h - theta_d,
    })
}

/// `ψ1ψ2α²(|Φ|−3)`.
pub fn link_margin_closed_form(psi1: f64, psi2: f64, alpha: f64, phi_size: f64) -> f64 {
    psi1 * psi2 * alpha * alpha * (phi_size - 3.0)
}

/// A node asked to join a collusion.
pub fn proposition_gains_collusion(alpha: f64, phi_size: f64) -> Result<PropositionReport> {
    check(alpha, phi_size, &[])?;
    let a2 = alpha * alpha;
    let theta_h = a2 * (phi_size - 2.0);
    let theta_d = a2;
    Ok(PropositionReport {
        psi1: 1.0,
        psi2: 1.0,
        alpha,
        phi_size,
        theta_h,
        theta_d,
        margin: theta_h - theta_d,
    })
}

/// `α²(|Φ|−3)`.
pub fn collusion_margin_closed_form(alpha: f64, phi_size: f64) -> f64 {
    alpha * alpha * (phi_size - 3.0)
}

/// Most energy one link-breaker can waste before every observer blacklists
/// it: `H·M·σ·(|Φ|−1)`.
pub fn damage_bound(hop_limit: f64, max_suspicions: f64, sigma: f64, phi_size: f64) -> f64 {
    hop_limit * max_suspicions * sigma * (phi_size - 1.0)
}
