//! Lévy-stable sampling with the Mantegna algorithm.
//!
//! A sample is built from two standard normal draws `(u, y)`:
//!
//! ```text
//! nu = sigma_x(alpha) * u / |y|^(1/alpha)
//! w  = nu * [(K(alpha) - 1) * exp(-|nu| / C(alpha)) + 1]
//! z  = gamma^(1/alpha) * n^(-1/alpha) * sum_{k=1..n} w_k
//! ```
//!
//! `K(alpha)` matches the densities at the origin and `C(alpha)` is the
//! root of the integral equation that matches them at `nu = C`. That
//! equation only has a root for roughly `0.75 <= alpha <= 1.95`; outside
//! that window the sampler skips the nonlinear transform and returns the
//! plain ratio `nu`, whose tail already decays as `|nu|^(-alpha)`.

use std::collections::HashMap;
use std::f64::consts::{E, PI};
use std::sync::{Mutex, OnceLock};

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::quadrature;

/// Scale that maps `|z|` onto `[0, 1]` for truncated flights.
pub const TRUNC_SCALE: f64 = 10.0;

const TLF_REDRAW_CAP: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LevyParams {
    pub alpha: f64,
    pub gamma: f64,
    pub n: u32,
}

impl Default for LevyParams {
    fn default() -> Self {
        Self { alpha: 0.5, gamma: 1.0, n: 1 }
    }
}

impl LevyParams {
    pub fn new(alpha: f64, gamma: f64, n: u32) -> Result<Self> {
        let params = Self { alpha, gamma, n };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        if !(self.gamma > 0.0) || !self.gamma.is_finite() {
            return Err(Error::LevyParams(format!("gamma must be positive, got {}", self.gamma)));
        }
        if self.n == 0 {
            return Err(Error::LevyParams("n must be at least 1".into()));
        }
        Ok(())
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 2.0 {
        Ok(())
    } else {
        Err(Error::AlphaDomain(alpha))
    }
}

fn gamma_fn(x: f64) -> f64 {
    libm::tgamma(x)
}

/// Standard deviation of the numerator draw when `sigma_y = 1`.
pub fn mantegna_sigma_x(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let num = gamma_fn(1.0 + alpha) * (PI * alpha / 2.0).sin();
    let den = gamma_fn((1.0 + alpha) / 2.0) * alpha * 2f64.powf((alpha - 1.0) / 2.0);
    Ok((num / den).powf(1.0 / alpha))
}

/// Origin-matching factor of the nonlinear transform.
pub fn mantegna_k(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let lead = alpha * gamma_fn((alpha + 1.0) / (2.0 * alpha)) / gamma_fn(1.0 / alpha);
    let inner =
        alpha * gamma_fn((alpha + 1.0) / 2.0) / (gamma_fn(1.0 + alpha) * (PI * alpha / 2.0).sin());
    Ok(lead * inner.powf(1.0 / alpha))
}

/// Controls for the `C(alpha)` root search.
#[derive(Debug, Clone, Copy)]
pub struct RootConfig {
    /// Bisection iterations allowed once a bracket is found.
    pub max_iterations: usize,
    /// Relative residual accepted as a root.
    pub tolerance: f64,
    pub scan_start: f64,
    pub scan_end: f64,
    pub scan_factor: f64,
}

impl Default for RootConfig {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            tolerance: 1e-8,
            scan_start: 0.2,
            scan_end: 20.0,
            scan_factor: 1.05,
        }
    }
}

/// Both sides of the `C(alpha)` equation.
///
/// The left side is the density of `nu` at `C`; the right side is the
/// symmetric stable density `(1/pi) * int_0^inf cos(x q) exp(-q^alpha) dq`
/// evaluated at `x = ((K - 1)/e + 1) * C`.
#[derive(Debug, Clone, Copy)]
pub struct CEquation {
    alpha: f64,
    sigma_x: f64,
    k: f64,
}

impl CEquation {
    pub fn new(alpha: f64) -> Result<Self> {
        Ok(Self {
            alpha,
            sigma_x: mantegna_sigma_x(alpha)?,
            k: mantegna_k(alpha)?,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn sigma_x(&self) -> f64 {
        self.sigma_x
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// Point at which the stable density is compared, per unit of `C`.
    pub fn frequency_factor(&self) -> f64 {
        (self.k - 1.0) / E + 1.0
    }

    pub fn lhs(&self, c: f64) -> f64 {
        let a = self.alpha;
        let s2 = self.sigma_x * self.sigma_x;
        // exp(-q^2/2) < 1e-26 past q = sqrt(120)
        let upper = 120f64.sqrt();
        let f = |q: f64| {
            if q <= 0.0 {
                return 0.0;
            }
            q.powf(1.0 / a) * (-0.5 * q * q - q.powf(2.0 / a) * c * c / (2.0 * s2)).exp()
        };
        quadrature::integrate(f, 0.0, upper, 16, 1e-14) / (PI * self.sigma_x)
    }

    pub fn rhs(&self, c: f64) -> f64 {
        let a = self.alpha;
        let x = self.frequency_factor() * c;
        // exp(-q^alpha) < 1e-26 past q = 60^(1/alpha)
        let upper = 60f64.powf(1.0 / a);
        let panels = ((upper * x.abs() / PI).ceil() as usize).clamp(8, 200_000);
        let f = |q: f64| (x * q).cos() * (-q.powf(a)).exp();
        quadrature::integrate(f, 0.0, upper, panels, 1e-13) / PI
    }

    /// `(lhs - rhs) / rhs`.
    pub fn residual(&self, c: f64) -> f64 {
        let rhs = self.rhs(c);
        (self.lhs(c) - rhs) / rhs
    }
}

/// Solves for `C(alpha)` with the default configuration, caching the
/// outcome per `alpha`.
pub fn solve_c(alpha: f64) -> Result<f64> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Option<f64>>>> = OnceLock::new();
    check_alpha(alpha)?;
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("C cache poisoned").get(&alpha.to_bits()) {
        return hit.ok_or(Error::NoBracket { alpha });
    }
    let solved = solve_c_with(alpha, &RootConfig::default());
    let entry = match &solved {
        Ok(c) => Some(*c),
        Err(Error::NoBracket { .. }) => None,
        Err(_) => return solved,
    };
    cache.lock().expect("C cache poisoned").insert(alpha.to_bits(), entry);
    solved
}

/// Geometric scan for sign changes of the residual followed by bisection on
/// the bracket with the largest `C`. A scan point whose residual is already
/// inside tolerance counts as a root.
pub fn solve_c_with(alpha: f64, config: &RootConfig) -> Result<f64> {
    let eq = CEquation::new(alpha)?;

    let mut grid = Vec::new();
    let mut c = config.scan_start;
    while c <= config.scan_end {
        grid.push((c, eq.residual(c)));
        c *= config.scan_factor;
    }

    enum Found {
        Exact(f64),
        Bracket(f64, f64, f64),
    }
    let mut found = None;
    for (i, &(c, r)) in grid.iter().enumerate() {
        if r.abs() <= config.tolerance {
            found = Some(Found::Exact(c));
        } else if i > 0 {
            let (c0, r0) = grid[i - 1];
            if r0.abs() > config.tolerance && r0.signum() != r.signum() {
                found = Some(Found::Bracket(c0, c, r0));
            }
        }
    }

    let (mut lo, mut hi, r_lo) = match found {
        None => return Err(Error::NoBracket { alpha }),
        Some(Found::Exact(c)) => return Ok(c),
        Some(Found::Bracket(lo, hi, r_lo)) => (lo, hi, r_lo),
    };
    for _ in 0..config.max_iterations {
        let mid = 0.5 * (lo + hi);
        let r = eq.residual(mid);
        if r.abs() <= config.tolerance * 1e-3 || hi - lo <= 1e-14 * mid {
            return Ok(mid);
        }
        if r.signum() == r_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::BudgetExhausted { alpha, iterations: config.max_iterations })
}

/// Precomputed Mantegna sampler for one parameter set.
#[derive(Debug, Clone, Copy)]
pub struct LevySampler {
    params: LevyParams,
    sigma_x: f64,
    k: f64,
    c: Option<f64>,
    prefactor: f64,
}

impl LevySampler {
    pub fn new(params: LevyParams) -> Result<Self> {
        params.validate()?;
        let alpha = params.alpha;
        let c = match solve_c(alpha) {
            Ok(c) => Some(c),
            Err(Error::NoBracket { .. }) => None,
            Err(e) => return Err(e),
        };
        Ok(Self {
            params,
            sigma_x: mantegna_sigma_x(alpha)?,
            k: mantegna_k(alpha)?,
            c,
            prefactor: params.gamma.powf(1.0 / alpha) * f64::from(params.n).powf(-1.0 / alpha),
        })
    }

    pub fn params(&self) -> LevyParams {
        self.params
    }

    pub fn sigma_x(&self) -> f64 {
        self.sigma_x
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// `None` when the nonlinear transform is skipped.
    pub fn c(&self) -> Option<f64> {
        self.c
    }

    /// Transformed summand `w` for one pair of standard normal draws.
    pub fn summand(&self, u: f64, y: f64) -> f64 {
        let nu = self.sigma_x * u / y.abs().powf(1.0 / self.params.alpha);
        match self.c {
            Some(c) => nu * ((self.k - 1.0) * (-nu.abs() / c).exp() + 1.0),
            None => nu,
        }
    }

    /// Consumes `2 n` standard normal draws in `(u_1, y_1, u_2, y_2, ...)` order.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let mut sum = 0.0;
        for _ in 0..self.params.n {
            let u: f64 = rng.sample(StandardNormal);
            let y: f64 = rng.sample(StandardNormal);
            sum += self.summand(u, y);
        }
        self.prefactor * sum
    }

    /// Truncated flight on `[0, 1]`: `|z| / TRUNC_SCALE`, redrawn while above 1.
    pub fn sample_truncated<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        for _ in 0..TLF_REDRAW_CAP {
            let t = self.sample(rng).abs() / TRUNC_SCALE;
            if t <= 1.0 {
                return Ok(t);
            }
        }
        Err(Error::TruncationCap(TLF_REDRAW_CAP))
    }
}

pub fn levy_sample<R: Rng + ?Sized>(params: LevyParams, rng: &mut R) -> Result<f64> {
    Ok(LevySampler::new(params)?.sample(rng))
}

pub fn tlf_sample<R: Rng + ?Sized>(alpha: f64, gamma: f64, rng: &mut R) -> Result<f64> {
    LevySampler::new(LevyParams::new(alpha, gamma, 1)?)?.sample_truncated(rng)
}
