//! The modified error function Λ(z) = e^{z²} erfc(z) on the whole complex
//! plane, its derivative and its leading asymptotics.
//!
//! Evaluation for Re z ≥ 0:
//! * |z| ≤ `series_radius`: the power series Σ (−1)ⁿ zⁿ / Γ(n/2+1), summed
//!   in a precision wide enough to absorb its e^{|z|²} cancellation;
//! * beyond, Laplace's continued fraction for e^{z²}erfc(z), except in a
//!   wedge around the imaginary axis where it converges poorly: there the
//!   series is used up to `axis_radius`, and the (optimally truncated)
//!   asymptotic expansion beyond it.
//!
//! Re z < 0 is always mapped through Λ(z) = 2e^{z²} − Λ(−z).

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multifloat::MultiFloat;
use crate::scalar::{cabs, cexp, is_finite_c, Real};
use crate::tables::{inv_gamma_half_scaled, ln_inv_gamma_half};

/// Relative width (Re z / |z|) of the wedge around the imaginary axis that
/// avoids the continued fraction.
const WEDGE: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaEvalConfig {
    /// |z| at or below which the power series is used.
    pub series_radius: f64,
    /// Relative accuracy target (term-size stop for the series, increment
    /// stop for the continued fraction).
    pub series_tol: f64,
    /// Bound on series terms and continued-fraction levels.
    pub max_terms: usize,
}

impl LambdaEvalConfig {
    pub fn new(series_radius: f64, series_tol: f64, max_terms: usize) -> Result<Self> {
        let cfg = Self { series_radius, series_tol, max_terms };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.series_radius > 0.0 && self.series_radius.is_finite()) {
            return Err(Error::Precondition(format!("series_radius must be > 0, got {}", self.series_radius)));
        }
        if !(self.series_tol > 0.0 && self.series_tol < 1.0) {
            return Err(Error::Precondition(format!("series_tol must lie in (0, 1), got {}", self.series_tol)));
        }
        if self.max_terms < 32 {
            return Err(Error::Precondition(format!("max_terms must be >= 32, got {}", self.max_terms)));
        }
        Ok(())
    }

    /// Defaults matched to the working precision of `T`.
    pub fn for_type<T: Real>() -> Self {
        let eps = T::epsilon().to_f64();
        let series_radius = if eps > 1e-20 { 4.0 } else { 0.75 * (1.0 / eps).ln().sqrt() };
        Self { series_radius, series_tol: eps / 16.0, max_terms: 4096 }
    }
}

impl Default for LambdaEvalConfig {
    fn default() -> Self {
        Self::for_type::<f64>()
    }
}

/// Which kernel `lambda` uses at a given point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LambdaBranch {
    Series,
    ContinuedFraction,
    Asymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaRoute {
    pub branch: LambdaBranch,
    pub reflected: bool,
}

/// Radius beyond which e^{-|z|²}-sized structure near the imaginary axis
/// falls below the working precision of `T`.
pub fn axis_radius<T: Real>() -> f64 {
    ((1.0 / T::epsilon().to_f64()).ln() / 0.92).sqrt() + 0.5
}

pub fn route<T: Real>(z: Complex<T>, cfg: &LambdaEvalConfig) -> LambdaRoute {
    let reflected = z.re < T::zero();
    let w = if reflected { -z } else { z };
    let r = cabs(w).to_f64();
    let branch = if r <= cfg.series_radius {
        LambdaBranch::Series
    } else if w.re.to_f64() < WEDGE * r {
        if r <= axis_radius::<T>() {
            LambdaBranch::Series
        } else {
            LambdaBranch::Asymptotic
        }
    } else {
        LambdaBranch::ContinuedFraction
    };
    LambdaRoute { branch, reflected }
}

/// Γ(n/2 + 1) by Γ(x+1) = xΓ(x) from Γ(1) = 1 and Γ(3/2) = √π/2.
pub fn gamma_half_integer<T: Real>(n: usize) -> Result<T> {
    // m tracks Γ(m/2 + 1) with m ≡ n (mod 2)
    let (mut g, mut m) = if n % 2 == 0 { (T::one(), 0) } else { (T::sqrt_pi() / T::from_f64(2.0), 1) };
    while m < n {
        m += 2;
        g *= T::from_f64(m as f64 / 2.0);
        if !g.is_finite() {
            return Err(Error::Range(format!("Γ({n}/2 + 1) exceeds the {} range", T::NAME)));
        }
    }
    Ok(g)
}

/// Λ(z) = e^{z²} erfc(z).
pub fn lambda<T: Real>(z: Complex<T>, cfg: &LambdaEvalConfig) -> Result<Complex<T>> {
    if !is_finite_c(z) {
        return Err(Error::Domain("Λ argument must be finite".into()));
    }
    if z.re < T::zero() {
        let e2 = two_exp_square(z)?;
        let l = lambda_right(-z, cfg)?;
        return Ok(e2 - l);
    }
    lambda_right(z, cfg)
}

/// Λ′(z) = 2zΛ(z) − 2/√π.
pub fn lambda_derivative<T: Real>(z: Complex<T>, cfg: &LambdaEvalConfig) -> Result<Complex<T>> {
    let l = lambda(z, cfg)?;
    let two = T::from_f64(2.0);
    Ok(z * l * two - Complex::new(two * T::frac_1_sqrt_pi(), T::zero()))
}

/// Leading asymptotic form for |z| ≥ 2: 1/(√π z) for Re z ≥ 0, and
/// 2e^{z²} + 1/(√π z) for Re z < 0.
pub fn lambda_asymptotic<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    if !is_finite_c(z) || cabs(z) < T::from_f64(2.0) {
        return Err(Error::Domain("leading asymptotics need |z| >= 2".into()));
    }
    let lead = Complex::new(T::frac_1_sqrt_pi(), T::zero()) / z;
    if z.re >= T::zero() {
        Ok(lead)
    } else {
        Ok(two_exp_square(z)? + lead)
    }
}

/// 2e^{z²}, refusing (rather than returning Inf) when the exponent leaves
/// the representable range.
fn two_exp_square<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    let z2 = z * z;
    let log_mag = z2.re.to_f64() + std::f64::consts::LN_2;
    if log_mag > T::max_exp_arg() {
        return Err(Error::Range(format!(
            "2e^(z²) overflows {} at z = {:e}{:+e}i (log magnitude {log_mag:.3})",
            T::NAME,
            z.re.to_f64(),
            z.im.to_f64()
        )));
    }
    Ok(cexp(z2) * T::from_f64(2.0))
}

fn lambda_right<T: Real>(z: Complex<T>, cfg: &LambdaEvalConfig) -> Result<Complex<T>> {
    match route(z, cfg).branch {
        LambdaBranch::Series => lambda_series(z, cfg),
        LambdaBranch::ContinuedFraction => lambda_continued_fraction(z, cfg),
        LambdaBranch::Asymptotic => lambda_asymptotic_series(z, cfg),
    }
}

/// Λ by its power series, at any z.  The number of terms comes from a
/// double-precision estimate of the term sizes; the sum is evaluated by
/// Horner's rule in the narrowest of `T`, `T::Wide` and an 8-limb float that
/// absorbs the cancellation Σ|terms| / |Λ| ≈ 2e^{|z|²}(√π|z| + 2).
pub fn lambda_series<T: Real>(z: Complex<T>, cfg: &LambdaEvalConfig) -> Result<Complex<T>> {
    let r = cabs(z).to_f64();
    if r == 0.0 {
        return Ok(Complex::new(T::one(), T::zero()));
    }
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let lam_floor = 1.0 / (sqrt_pi * r + 2.0);
    let target = (cfg.series_tol * lam_floor / 4.0).ln();
    let ln_r = r.ln();
    let lg = ln_inv_gamma_half(cfg.max_terms + 1);
    let start = (2.0 * r * r).ceil() as usize;
    let mut n_terms = None;
    for n in start.max(1)..=cfg.max_terms {
        if n as f64 * ln_r + lg[n] < target {
            n_terms = Some(n);
            break;
        }
    }
    let n_terms = match n_terms {
        Some(n) => n,
        None => {
            let m = cfg.max_terms;
            return Err(Error::Truncation { terms: m, last_term: (m as f64 * ln_r + lg[m]).exp() });
        }
    };
    let cancel = 2.0 * (r * r).exp() * (sqrt_pi * r + 2.0);
    let eps_t = T::epsilon().to_f64();
    let slack = if eps_t > 1e-20 { 2.0 } else { 64.0 };
    if cancel <= slack {
        Ok(horner::<T>(z, n_terms))
    } else if cancel * <T::Wide as Real>::epsilon().to_f64() <= slack * eps_t {
        let w = Complex::new(z.re.widen(), z.im.widen());
        let v = horner::<T::Wide>(w, n_terms);
        Ok(Complex::new(T::narrow(v.re), T::narrow(v.im)))
    } else {
        let w = Complex::new(z.re.to_multi(), z.im.to_multi());
        let v = horner::<MultiFloat<8>>(w, n_terms);
        Ok(Complex::new(T::from_multi(v.re), T::from_multi(v.im)))
    }
}

/// Horner in u = z / 2^e against coefficients scaled by 2^{en}, e ≈ log2|z|.
fn horner<W: Real>(z: Complex<W>, n_terms: usize) -> Complex<W> {
    let e = cabs(z).to_f64().log2().round().clamp(-24.0, 24.0) as i32;
    let g = inv_gamma_half_scaled::<W>(n_terms + 1, e);
    let z = Complex::new(z.re.mul_pow2(-e), z.im.mul_pow2(-e));
    let coef = |n: usize| if n % 2 == 0 { g[n] } else { -g[n] };
    let mut re = coef(n_terms);
    let mut im = W::zero();
    for n in (0..n_terms).rev() {
        let nr = re * z.re - im * z.im + coef(n);
        im = re * z.im + im * z.re;
        re = nr;
    }
    Complex::new(re, im)
}

/// Λ by Laplace's continued fraction
/// Λ(z) = (1/√π) / (z + (1/2)/(z + 1/(z + (3/2)/(z + …)))), Re z ≥ 0,
/// evaluated with the modified Lentz algorithm.
pub fn lambda_continued_fraction<T: Real>(z: Complex<T>, cfg: &LambdaEvalConfig) -> Result<Complex<T>> {
    if z.re < T::zero() {
        return Err(Error::Domain("continued fraction requires Re z >= 0".into()));
    }
    let tiny = Complex::new(T::from_f64(1e-300), T::zero());
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let tol = T::from_f64(cfg.series_tol);
    let mut f = if z == zero { tiny } else { z };
    let mut c = f;
    let mut d = zero;
    let mut last = f64::INFINITY;
    for n in 1..=cfg.max_terms {
        let a = T::from_f64(n as f64 * 0.5);
        d = z + d * a;
        if d == zero {
            d = tiny;
        }
        c = z + one / c * a;
        if c == zero {
            c = tiny;
        }
        d = one / d;
        let delta = c * d;
        f = f * delta;
        let dev = cabs(delta - one);
        last = dev.to_f64();
        if dev < tol {
            return Ok(Complex::new(T::frac_1_sqrt_pi(), T::zero()) / f);
        }
    }
    Err(Error::Truncation { terms: cfg.max_terms, last_term: last })
}

/// Optimally truncated asymptotic expansion
/// Λ(z) ~ (1/(√π z)) Σ_m (−1)^m (2m−1)!! / (2z²)^m for Re z ≥ 0, |z| large.
fn lambda_asymptotic_series<T: Real>(z: Complex<T>, cfg: &LambdaEvalConfig) -> Result<Complex<T>> {
    let one = Complex::new(T::one(), T::zero());
    let inv2z2 = one / (z * z * T::from_f64(2.0));
    let tol = T::from_f64(cfg.series_tol);
    let mut term = one;
    let mut sum = one;
    let mut prev = T::from_f64(f64::INFINITY);
    for m in 0..cfg.max_terms {
        term = -(term * inv2z2 * T::from_f64((2 * m + 1) as f64));
        let mag = cabs(term);
        if mag >= prev {
            break;
        }
        sum = sum + term;
        prev = mag;
        if mag < tol {
            break;
        }
    }
    Ok(sum * (Complex::new(T::frac_1_sqrt_pi(), T::zero()) / z))
}
