//! Plane waves e^{ikx} evolved under i∂ₜΨ = −∂ₓₓΨ with a δ interaction
//! (Ψ continuous, ∂ₓΨ(0⁺) − ∂ₓΨ(0⁻) = 2αΨ(0)) or a δ′ interaction
//! (∂ₓΨ continuous, Ψ(0⁺) − Ψ(0⁻) = (2/β)∂ₓΨ(0)).
//!
//! With s = √(it) = √t e^{iπ/4} and a = |x|/(2s):
//!   φ_δ(t,x;k)  = α/(2(α+ik)) e^{ix²/4t} [Λ(a + αs) − Λ(a − iks)]
//!   φ_δ′(t,x;k) = sgn(x)/(2(β+ik)) e^{ix²/4t} [βΛ(a + βs) + ikΛ(a − iks)]
//!   Ψ(t,x;k)    = e^{ikx − ik²t} + φ(t,x;k) + φ(t,−x;−k).

use std::cell::RefCell;
use std::collections::HashMap;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lambda::{lambda, LambdaEvalConfig};
use crate::scalar::{cabs, cis, is_finite_c, ComplexSum, Real};
use crate::superosc::FourierSum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialKind {
    Delta,
    DeltaPrime,
}

/// V = 2αδ (kind `Delta`, strength α) or V = (2/β)δ′ (kind `DeltaPrime`,
/// strength β).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    kind: PotentialKind,
    strength: f64,
}

impl PotentialSpec {
    pub fn new(kind: PotentialKind, strength: f64) -> Result<Self> {
        if strength == 0.0 || !strength.is_finite() {
            return Err(Error::Precondition(format!("potential strength must be finite and nonzero, got {strength}")));
        }
        Ok(Self { kind, strength })
    }

    pub fn delta(alpha: f64) -> Result<Self> {
        Self::new(PotentialKind::Delta, alpha)
    }

    pub fn delta_prime(beta: f64) -> Result<Self> {
        Self::new(PotentialKind::DeltaPrime, beta)
    }

    pub fn kind(&self) -> PotentialKind {
        self.kind
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }

    pub fn is_attractive(&self) -> bool {
        self.strength < 0.0
    }
}

/// (t, x) with t > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceTimePoint<T> {
    t: T,
    x: T,
}

impl<T: Real> SpaceTimePoint<T> {
    pub fn new(t: T, x: T) -> Result<Self> {
        if !(t > T::zero() && t.is_finite()) {
            return Err(Error::Domain(format!("time must be positive and finite, got {t}")));
        }
        if !x.is_finite() {
            return Err(Error::Domain("position must be finite".into()));
        }
        Ok(Self { t, x })
    }

    pub fn from_f64(t: f64, x: f64) -> Result<Self> {
        Self::new(T::from_f64(t), T::from_f64(x))
    }

    pub fn t(&self) -> T {
        self.t
    }

    pub fn x(&self) -> T {
        self.x
    }

    fn mirrored(&self) -> Self {
        Self { t: self.t, x: -self.x }
    }
}

/// Which one-sided limit to take at x = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    fn sign<T: Real>(self) -> T {
        match self {
            Side::Left => -T::one(),
            Side::Right => T::one(),
        }
    }
}

fn finite<T: Real>(z: Complex<T>, what: &str) -> Result<Complex<T>> {
    if is_finite_c(z) {
        Ok(z)
    } else {
        Err(Error::Numeric(format!("{what} is not finite")))
    }
}

fn ci<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

fn real<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// √(it) on the principal branch, √t e^{iπ/4}.
pub fn sqrt_it<T: Real>(t: T) -> Result<Complex<T>> {
    if !(t > T::zero() && t.is_finite()) {
        return Err(Error::Domain(format!("√(it) needs t > 0, got {t}")));
    }
    let r = (t / T::from_f64(2.0)).sqrt();
    Ok(Complex::new(r, r))
}

/// e^{ikx − ik²t}
pub fn psi_free<T: Real>(p: &SpaceTimePoint<T>, k: T) -> Complex<T> {
    cis(k * p.x - k * k * p.t)
}

/// Shared pieces of φ at one (t, |x|): s, a and the phase e^{ix²/4t}.
struct Frame<T> {
    s: Complex<T>,
    a: Complex<T>,
    phase: Complex<T>,
}

impl<T: Real> Frame<T> {
    fn new(t: T, ax: T) -> Result<Self> {
        let s = sqrt_it(t)?;
        let two = T::from_f64(2.0);
        let a = real(ax) / (s * two);
        let phase = cis(ax * ax / (T::from_f64(4.0) * t));
        Ok(Self { s, a, phase })
    }

    /// Λ(a + ωs)
    fn lam(&self, omega: Complex<T>, cfg: &LambdaEvalConfig) -> Result<Complex<T>> {
        lambda(self.a + omega * self.s, cfg)
    }
}

fn phi_delta_parts<T: Real>(f: &Frame<T>, k: T, alpha: T, l_alpha: Complex<T>, l_k: Complex<T>) -> Complex<T> {
    let pre = real(alpha) / ((real(alpha) + ci::<T>() * k) * T::from_f64(2.0));
    pre * f.phase * (l_alpha - l_k)
}

fn phi_delta_prime_parts<T: Real>(f: &Frame<T>, sgn: T, k: T, beta: T, l_beta: Complex<T>, l_k: Complex<T>) -> Complex<T> {
    let i = ci::<T>();
    let pre = real(sgn) / ((real(beta) + i * k) * T::from_f64(2.0));
    pre * f.phase * (l_beta * beta + i * k * l_k)
}

/// φ_δ(t,x;k).
pub fn phi_delta<T: Real>(p: &SpaceTimePoint<T>, k: T, alpha: T) -> Result<Complex<T>> {
    if alpha.is_zero() {
        return Err(Error::Precondition("α must be nonzero".into()));
    }
    let cfg = LambdaEvalConfig::for_type::<T>();
    let f = Frame::new(p.t, p.x.abs())?;
    let la = f.lam(real(alpha), &cfg)?;
    let lk = f.lam(-ci::<T>() * k, &cfg)?;
    finite(phi_delta_parts(&f, k, alpha, la, lk), "φ_δ")
}

fn phi_delta_prime_signed<T: Real>(t: T, ax: T, sgn: T, k: T, beta: T) -> Result<Complex<T>> {
    if beta.is_zero() {
        return Err(Error::Precondition("β must be nonzero".into()));
    }
    let cfg = LambdaEvalConfig::for_type::<T>();
    let f = Frame::new(t, ax)?;
    let lb = f.lam(real(beta), &cfg)?;
    let lk = f.lam(-ci::<T>() * k, &cfg)?;
    finite(phi_delta_prime_parts(&f, sgn, k, beta, lb, lk), "φ_δ′")
}

/// φ_δ′(t,x;k); undefined at the interface x = 0.
pub fn phi_delta_prime<T: Real>(p: &SpaceTimePoint<T>, k: T, beta: T) -> Result<Complex<T>> {
    if p.x.is_zero() {
        return Err(Error::Domain("φ_δ′ is discontinuous at x = 0; use the one-sided limits".into()));
    }
    phi_delta_prime_signed(p.t, p.x.abs(), p.x.signum(), k, beta)
}

/// Ψ_δ(t,x;k); at x = 0 the formula is continuous and used as is.
pub fn psi_delta<T: Real>(p: &SpaceTimePoint<T>, k: T, alpha: T) -> Result<Complex<T>> {
    let a = phi_delta(p, k, alpha)?;
    let b = phi_delta(&p.mirrored(), -k, alpha)?;
    finite(psi_free(p, k) + a + b, "Ψ_δ")
}

/// Ψ_δ′(t,x;k) for x ≠ 0.
pub fn psi_delta_prime<T: Real>(p: &SpaceTimePoint<T>, k: T, beta: T) -> Result<Complex<T>> {
    if p.x.is_zero() {
        return Err(Error::Domain("Ψ_δ′ is discontinuous at x = 0; use psi_delta_prime_limit".into()));
    }
    let a = phi_delta_prime(p, k, beta)?;
    let b = phi_delta_prime(&p.mirrored(), -k, beta)?;
    finite(psi_free(p, k) + a + b, "Ψ_δ′")
}

/// Ψ_δ′(t, 0±; k).
pub fn psi_delta_prime_limit<T: Real>(t: T, k: T, beta: T, side: Side) -> Result<Complex<T>> {
    let p = SpaceTimePoint::new(t, T::zero())?;
    let sg = side.sign::<T>();
    let a = phi_delta_prime_signed(t, T::zero(), sg, k, beta)?;
    let b = phi_delta_prime_signed(t, T::zero(), -sg, -k, beta)?;
    finite(psi_free(&p, k) + a + b, "Ψ_δ′(0±)")
}

/// Ψ for either potential; x = 0 is allowed for δ only.
pub fn psi<T: Real>(p: &SpaceTimePoint<T>, k: T, pot: &PotentialSpec) -> Result<Complex<T>> {
    let g = T::from_f64(pot.strength);
    match pot.kind {
        PotentialKind::Delta => psi_delta(p, k, g),
        PotentialKind::DeltaPrime => psi_delta_prime(p, k, g),
    }
}

/// One-sided value Ψ(t, x→0±) (for δ both sides coincide).
pub fn psi_limit<T: Real>(t: T, k: T, pot: &PotentialSpec, side: Side) -> Result<Complex<T>> {
    let g = T::from_f64(pot.strength);
    match pot.kind {
        PotentialKind::Delta => psi_delta(&SpaceTimePoint::new(t, T::zero())?, k, g),
        PotentialKind::DeltaPrime => psi_delta_prime_limit(t, k, g, side),
    }
}

/// Values by wavenumber, bucketed by the leading double of k.
type Memo<T> = RefCell<HashMap<u64, Vec<(T, Complex<T>)>>>;

/// Plane-wave solutions at a fixed (t, x) for many wavenumbers.  Λ(a − iks)
/// and Ψ are memoized by k, so nested wavenumber grids (k_j = 1 − 2j/n for
/// n and 2n) share their evaluations, and the reflected terms ±k share Λ.
pub struct PointEvaluator<T> {
    t: T,
    x: T,
    pot: PotentialSpec,
    side: Option<Side>,
    frame: Frame<T>,
    l_strength: Complex<T>,
    cfg: LambdaEvalConfig,
    memo: Memo<T>,
    psi_memo: Memo<T>,
}

fn memo_get<T: Real>(memo: &Memo<T>, k: T) -> Option<Complex<T>> {
    memo.borrow().get(&k.to_f64().to_bits())?.iter().find(|(kk, _)| *kk == k).map(|(_, v)| *v)
}

fn memo_put<T: Real>(memo: &Memo<T>, k: T, v: Complex<T>) {
    memo.borrow_mut().entry(k.to_f64().to_bits()).or_default().push((k, v));
}

impl<T: Real> PointEvaluator<T> {
    pub fn new(p: &SpaceTimePoint<T>, pot: &PotentialSpec) -> Result<Self> {
        if pot.kind == PotentialKind::DeltaPrime && p.x.is_zero() {
            return Err(Error::Domain("Ψ_δ′ is discontinuous at x = 0; use PointEvaluator::at_interface".into()));
        }
        Self::build(p.t, p.x, *pot, None)
    }

    /// Evaluator for the one-sided limit x → 0± (δ′ only needs it).
    pub fn at_interface(t: T, pot: &PotentialSpec, side: Side) -> Result<Self> {
        Self::build(t, T::zero(), *pot, Some(side))
    }

    fn build(t: T, x: T, pot: PotentialSpec, side: Option<Side>) -> Result<Self> {
        let cfg = LambdaEvalConfig::for_type::<T>();
        let frame = Frame::new(t, x.abs())?;
        let l_strength = frame.lam(real(T::from_f64(pot.strength)), &cfg)?;
        Ok(Self { t, x, pot, side, frame, l_strength, cfg, memo: RefCell::new(HashMap::new()), psi_memo: RefCell::new(HashMap::new()) })
    }

    fn lam_k(&self, k: T) -> Result<Complex<T>> {
        if let Some(v) = memo_get(&self.memo, k) {
            return Ok(v);
        }
        let v = self.frame.lam(-ci::<T>() * k, &self.cfg)?;
        memo_put(&self.memo, k, v);
        Ok(v)
    }

    /// Number of distinct Λ(a − iks) evaluations so far.
    pub fn cached_evaluations(&self) -> usize {
        self.memo.borrow().values().map(Vec::len).sum()
    }

    /// Ψ(t, x; k).
    pub fn psi(&self, k: T) -> Result<Complex<T>> {
        if let Some(v) = memo_get(&self.psi_memo, k) {
            return Ok(v);
        }
        let v = self.psi_uncached(k)?;
        memo_put(&self.psi_memo, k, v);
        Ok(v)
    }

    fn psi_uncached(&self, k: T) -> Result<Complex<T>> {
        let g = T::from_f64(self.pot.strength);
        let l_plus = self.lam_k(k)?;
        let l_minus = self.lam_k(-k)?;
        let free = cis(k * self.x - k * k * self.t);
        let v = match self.pot.kind {
            PotentialKind::Delta => {
                free + phi_delta_parts(&self.frame, k, g, self.l_strength, l_plus)
                    + phi_delta_parts(&self.frame, -k, g, self.l_strength, l_minus)
            }
            PotentialKind::DeltaPrime => {
                let sgn = match self.side {
                    Some(s) => s.sign::<T>(),
                    None => self.x.signum(),
                };
                free + phi_delta_prime_parts(&self.frame, sgn, k, g, self.l_strength, l_plus)
                    + phi_delta_prime_parts(&self.frame, -sgn, -k, g, self.l_strength, l_minus)
            }
        };
        finite(v, "Ψ")
    }

    /// Σ_j C_j Ψ(t, x; k_j), compensated.
    pub fn superposed(&self, f: &FourierSum<T>) -> Result<Complex<T>> {
        if !f.has_support() {
            return Err(Error::Precondition("superposition of an all-zero Fourier sum".into()));
        }
        let mut acc = ComplexSum::new();
        for term in f.terms() {
            acc.add(term.c * self.psi(term.k)?);
        }
        Ok(acc.value())
    }
}

/// Σ_j C_j Ψ(t,x;k_j): the evolution of the initial datum Σ_j C_j e^{ik_j x}.
pub fn psi_superposed<T: Real>(p: &SpaceTimePoint<T>, f: &FourierSum<T>, pot: &PotentialSpec) -> Result<Complex<T>> {
    PointEvaluator::new(p, pot)?.superposed(f)
}

/// |Ψ_n(t,x) − Ψ(t,x;k)| for each Fourier sum F_n, sharing Λ evaluations
/// across the sums.  At x = 0 under δ′ both one-sided limits are taken and
/// the larger error is reported.
pub fn superposition_errors<T: Real>(t: T, x: T, k: T, pot: &PotentialSpec, sums: &[FourierSum<T>]) -> Result<Vec<T>> {
    let evaluators = if pot.kind == PotentialKind::DeltaPrime && x.is_zero() {
        vec![PointEvaluator::at_interface(t, pot, Side::Left)?, PointEvaluator::at_interface(t, pot, Side::Right)?]
    } else {
        vec![PointEvaluator::new(&SpaceTimePoint::new(t, x)?, pot)?]
    };
    let mut worst = vec![T::zero(); sums.len()];
    for ev in &evaluators {
        let target = ev.psi(k)?;
        for (w, f) in worst.iter_mut().zip(sums) {
            *w = w.max(cabs(ev.superposed(f)? - target));
        }
    }
    Ok(worst)
}

/// Large-time form of Ψ_δ without the O(1/t) remainder.
pub fn asymptotic_delta<T: Real>(p: &SpaceTimePoint<T>, k: T, alpha: T) -> Result<Complex<T>> {
    if alpha.is_zero() {
        return Err(Error::Precondition("α must be nonzero".into()));
    }
    let i = ci::<T>();
    let (x, t) = (p.x, p.t);
    let refl = real(alpha) / (real(alpha) - i * k.abs());
    let mut v = cis(-k * k * t) * (cis(k * x) - refl * cis((k * x).abs()));
    if alpha < T::zero() {
        let w = T::from_f64(2.0) * alpha * alpha / (alpha * alpha + k * k);
        v += cis(alpha * alpha * t) * (alpha * x.abs()).exp() * w;
    }
    finite(v, "asymptotic Ψ_δ")
}

/// Large-time form of Ψ_δ′ without the O(1/t) remainder (x ≠ 0).
pub fn asymptotic_delta_prime<T: Real>(p: &SpaceTimePoint<T>, k: T, beta: T) -> Result<Complex<T>> {
    if p.x.is_zero() {
        return Err(Error::Domain("asymptotic Ψ_δ′ needs x ≠ 0".into()));
    }
    if beta.is_zero() {
        return Err(Error::Precondition("β must be nonzero".into()));
    }
    let i = ci::<T>();
    let (x, t) = (p.x, p.t);
    let sgn = x.signum();
    let corr = i * k * sgn / (real(beta) - i * k.abs());
    let mut v = cis(-k * k * t) * (cis(k * x) + corr * cis((k * x).abs()));
    if beta < T::zero() {
        let w = i * (T::from_f64(2.0) * beta * k * sgn / (beta * beta + k * k));
        v -= w * cis(beta * beta * t) * (beta * x.abs()).exp();
    }
    finite(v, "asymptotic Ψ_δ′")
}

pub fn asymptotic<T: Real>(p: &SpaceTimePoint<T>, k: T, pot: &PotentialSpec) -> Result<Complex<T>> {
    let g = T::from_f64(pot.strength);
    match pot.kind {
        PotentialKind::Delta => asymptotic_delta(p, k, g),
        PotentialKind::DeltaPrime => asymptotic_delta_prime(p, k, g),
    }
}

/// Bound state for an attractive strength g < 0: e^{g|x| + ig²t} for δ,
/// sgn(x) e^{g|x| + ig²t} for δ′ (x ≠ 0).
pub fn bound_state<T: Real>(p: &SpaceTimePoint<T>, pot: &PotentialSpec) -> Result<Complex<T>> {
    if !pot.is_attractive() {
        return Err(Error::Precondition("bound states exist only for negative strength".into()));
    }
    let g = T::from_f64(pot.strength);
    let v = cis(g * g * p.t) * (g * p.x.abs()).exp();
    match pot.kind {
        PotentialKind::Delta => Ok(v),
        PotentialKind::DeltaPrime if p.x.is_zero() => Err(Error::Domain("δ′ bound state is discontinuous at 0".into())),
        PotentialKind::DeltaPrime => Ok(v * p.x.signum()),
    }
}

/// |i Dₜψ + Dₓₓψ| at (t, x) with centered fourth-order stencils, for any
/// function of (t, x).
pub fn pde_residual_of<T, F>(f: F, p: &SpaceTimePoint<T>, h_x: T, h_t: T) -> Result<T>
where
    T: Real,
    F: Fn(T, T) -> Result<Complex<T>>,
{
    if !(h_x > T::zero() && h_t > T::zero()) {
        return Err(Error::Precondition("step sizes must be positive".into()));
    }
    if p.t - T::from_f64(2.0) * h_t <= T::zero() {
        return Err(Error::Precondition("time stencil reaches t <= 0".into()));
    }
    let (t, x) = (p.t, p.x);
    let c = |v: f64| T::from_f64(v);
    let two = c(2.0);
    let dt = (f(t - two * h_t, x)? - f(t + two * h_t, x)? + (f(t + h_t, x)? - f(t - h_t, x)?) * c(8.0)) / (c(12.0) * h_t);
    let dxx = ((f(t, x + h_x)? + f(t, x - h_x)?) * c(16.0)
        - f(t, x + two * h_x)?
        - f(t, x - two * h_x)?
        - f(t, x)? * c(30.0))
        / (c(12.0) * h_x * h_x);
    Ok(cabs(ci::<T>() * dt + dxx))
}

/// Residual of i∂ₜΨ = −∂ₓₓΨ for the plane-wave solution of `pot`.
pub fn pde_residual<T: Real>(p: &SpaceTimePoint<T>, k: T, pot: &PotentialSpec, h_x: T, h_t: T) -> Result<T> {
    if p.x.abs() <= T::from_f64(4.0) * h_x {
        return Err(Error::Precondition("spatial stencil straddles the interface x = 0".into()));
    }
    pde_residual_of(|t, x| psi(&SpaceTimePoint::new(t, x)?, k, pot), p, h_x, h_t)
}

/// One-sided derivative at 0 from samples at 0, h, 2h, 3h (third order).
fn one_sided_derivative<T: Real>(f: [Complex<T>; 4], h: T) -> Complex<T> {
    let c = |v: f64| T::from_f64(v);
    (f[0] * c(-11.0) + f[1] * c(18.0) - f[2] * c(9.0) + f[3] * c(2.0)) / (c(6.0) * h)
}

/// Interface residuals (continuity, jump) of the plane-wave solution:
/// δ:  (|Ψ(0⁺) − Ψ(0⁻)|, |∂Ψ(0⁺) − ∂Ψ(0⁻) − 2αΨ(0)|)
/// δ′: (|∂Ψ(0⁺) − ∂Ψ(0⁻)|, |Ψ(0⁺) − Ψ(0⁻) − (2/β)∂Ψ(0)|), ∂Ψ(0) the mean
/// of the one-sided derivatives.
pub fn jump_residuals<T: Real>(t: T, k: T, pot: &PotentialSpec, h: T) -> Result<(T, T)> {
    let f = |x: T| psi(&SpaceTimePoint::new(t, x)?, k, pot);
    interface_residuals(
        |side| psi_limit(t, k, pot, side),
        f,
        pot,
        h,
    )
}

/// Interface residuals for any function given its one-sided limits at 0 and
/// its values away from 0.
pub fn interface_residuals<T, L, F>(limit: L, f: F, pot: &PotentialSpec, h: T) -> Result<(T, T)>
where
    T: Real,
    L: Fn(Side) -> Result<Complex<T>>,
    F: Fn(T) -> Result<Complex<T>>,
{
    if !(h > T::zero()) {
        return Err(Error::Precondition("h must be positive".into()));
    }
    let (v_minus, v_plus) = (limit(Side::Left)?, limit(Side::Right)?);
    let c = |v: f64| T::from_f64(v);
    let d_plus = one_sided_derivative([v_plus, f(h)?, f(c(2.0) * h)?, f(c(3.0) * h)?], h);
    // nodes 0, −h, −2h, −3h: the same stencil with −h
    let d_minus = one_sided_derivative([v_minus, f(-h)?, f(-c(2.0) * h)?, f(-c(3.0) * h)?], -h);
    let g = c(pot.strength);
    Ok(match pot.kind {
        PotentialKind::Delta => (cabs(v_plus - v_minus), cabs(d_plus - d_minus - v_plus * (c(2.0) * g))),
        PotentialKind::DeltaPrime => {
            let d0 = (d_plus + d_minus) * c(0.5);
            (cabs(d_plus - d_minus), cabs(v_plus - v_minus - d0 * (c(2.0) / g)))
        }
    })
}
