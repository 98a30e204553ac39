//! Bias bounds and iteration counts, evaluated in log space.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::resampling::one_norm_closed_form_f64;

/// `‖μ‖_∞ · ‖f‖₁ · ‖Id − S‖₁^{k+1}` for an order-`m` polynomial.
pub fn bias_bound(m: usize, n: u64, k: usize, mu_inf: f64, f_one: f64) -> f64 {
    mu_inf * f_one * one_norm_closed_form_f64(m, n).powi(k as i32 + 1)
}

/// The same bound without the `‖f‖₁` factor and with a single power of
/// the norm, as it is usually displayed.
pub fn bias_bound_as_displayed(m: usize, n: u64, mu_inf: f64) -> f64 {
    mu_inf * one_norm_closed_form_f64(m, n)
}

/// An iteration count with the bias bound it attains.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundResult {
    pub k: i64,
    pub bound: f64,
    pub log_bound: f64,
}

/// Result of the general two-regime bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GeneralBound {
    /// `⌈√(N/8)⌉`: orders from here on are outside the linear regime.
    pub cut: usize,
    pub k_star: i64,
    pub bound: f64,
    pub log_bound: f64,
    gamma_0: f64,
    gamma_cut: f64,
}

impl GeneralBound {
    /// `γ₀ / 2^{k+1} + 2^{k+1} γ_cut`.
    pub fn two_term(&self, k: usize) -> f64 {
        let p = 2f64.powi(k as i32 + 1);
        self.gamma_0 / p + p * self.gamma_cut
    }
}

pub fn linear_cut(n: u64) -> usize {
    (n as f64 / 8.0).sqrt().ceil() as usize
}

/// `k* = ⌊½ log₂ γ₀ − ½ log₂ γ_cut⌋` and bound `√(16 γ₀ γ_cut)`.
pub fn general_bound(gammas: &[f64], n: u64) -> Result<GeneralBound> {
    if gammas.iter().any(|g| !(g.is_finite() && *g >= 0.0)) {
        return Err(Error::InvalidInput("γ must be finite and nonnegative".into()));
    }
    if gammas.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::InvalidInput("γ must be nonincreasing".into()));
    }
    let cut = linear_cut(n);
    let gamma_cut = *gammas.get(cut).ok_or_else(|| {
        Error::InvalidInput(format!("γ has {} entries, the bound needs index ⌈√(N/8)⌉ = {cut}", gammas.len()))
    })?;
    let gamma_0 = gammas[0];
    if gamma_cut == 0.0 {
        return Err(Error::InvalidInput(format!("γ_{cut} = 0 makes the iteration count unbounded")));
    }
    let k_star = (0.5 * gamma_0.log2() - 0.5 * gamma_cut.log2()).floor() as i64;
    let log_bound = 4f64.ln() + 0.5 * (gamma_0.ln() + gamma_cut.ln());
    Ok(GeneralBound { cut, k_star, bound: log_bound.exp(), log_bound, gamma_0, gamma_cut })
}

/// Bandlimited functions of sub-Gaussian means with `d` variables and scale `θ`.
pub fn bandlimited_bound(d: usize, theta: f64, n: u64) -> Result<BoundResult> {
    if d == 0 || !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::InvalidInput("bandlimited bound needs d >= 1 and θ > 0".into()));
    }
    let dt = d as f64 * theta;
    let required = 8.0 * (8.0 * dt + 1.0).powi(2);
    if (n as f64) < required {
        return Err(Error::Infeasible(format!("bandlimited bound needs N >= 8(8dθ + 1)² = {required}, got N = {n}")));
    }
    // log(1 + 8dθ √(4dθ)^{8dθ}), with the power taken in log space.
    let log_inner = (8.0 * dt).ln() + 4.0 * dt * (4.0 * dt).ln();
    let log_a = ln_1p_exp(log_inner);
    let root = (n as f64 / 8.0).sqrt();
    let log_ratio = (4.0 * dt).ln() - root.ln();
    let k = (0.5 * (log_a - root * log_ratio)).floor() as i64;
    let log_bound = 0.5 * 16f64.ln() + log_a + (n as f64 / 32.0).sqrt() * log_ratio;
    Ok(BoundResult { k, bound: log_bound.exp(), log_bound })
}

/// Inverse of an averaged matrix with spectrum in `(0, σ)`.
pub fn neumann_trace_bound(sigma: f64, n: u64) -> Result<BoundResult> {
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(Error::InvalidInput(format!("σ must lie in (0, 1), got {sigma}")));
    }
    let k = (-(n as f64 / 8.0).sqrt() * sigma.ln()).floor() as i64;
    let log_bound = 4f64.ln() - (-sigma).ln_1p() + (n as f64 / 32.0).sqrt() * sigma.ln();
    Ok(BoundResult { k, bound: log_bound.exp(), log_bound })
}

/// `log(1 + e^x)` without overflow.
fn ln_1p_exp(x: f64) -> f64 {
    if x > 30.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}
