//! Truncated power-series calculus on A₁(ℂ).
//!
//! An entire function is stored as its first Taylor coefficients f_n
//! about 0, optionally with a certified growth bound |F(z)| ≤ A e^{B|z|}.
//! A symbol Ψ(k) = Σ c_m k^m acts on such functions as the infinite-order
//! operator U F(ξ) = Σ (−i)^m c_m F^{(m)}(ξ), and the propagators of the
//! point potentials are built as symbols in k at a fixed (t, x).

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{sqrt_it, PotentialKind, PotentialSpec};
use crate::lambda::{lambda, LambdaEvalConfig};
use crate::scalar::{cabs, cis, cnarrow, is_finite_c, ComplexSum, Real};
use crate::superosc::{A1Bound, FourierSum};
use crate::tables::{inv_gamma_half_scaled, ln_inv_gamma_half};

/// Tail estimates above this (relative to max(1, |value|)) are reported.
pub const TAIL_TOLERANCE: f64 = 1e-12;

/// Default number of symbol terms beyond c_0.
pub const DEFAULT_SYMBOL_TERMS: usize = 120;

/// Default number of stored Taylor coefficients of a test function.
pub const DEFAULT_SERIES_LEN: usize = 160;

const MAX_SERIES_LEN: usize = 20_000;

fn ci<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

fn real<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// ln n! for n = 0..len, in double precision.
fn ln_factorials(len: usize) -> Vec<f64> {
    let mut v = Vec::with_capacity(len);
    let mut acc = 0.0;
    v.push(0.0);
    for n in 1..len {
        acc += (n as f64).ln();
        v.push(acc);
    }
    v
}

/// Rows 0..=rows of Pascal's triangle.  Additions only, so the entries are
/// exact as long as they fit the mantissa and correctly rounded beyond.
fn pascal<W: Real>(rows: usize) -> Vec<Vec<W>> {
    let mut tri: Vec<Vec<W>> = Vec::with_capacity(rows + 1);
    tri.push(vec![W::one()]);
    for n in 1..=rows {
        let prev = &tri[n - 1];
        let mut row = Vec::with_capacity(n + 1);
        row.push(W::one());
        for k in 1..n {
            row.push(prev[k - 1] + prev[k]);
        }
        row.push(W::one());
        tri.push(row);
    }
    tri
}

fn powers<W: Real>(z: Complex<W>, len: usize) -> Vec<Complex<W>> {
    let mut v = Vec::with_capacity(len);
    let mut p = real(W::one());
    for _ in 0..len {
        v.push(p);
        p *= z;
    }
    v
}

/// Smallest N past the peak of rateⁿ/Γ(n/2 + 1) whose term drops below
/// e^{ln_tol}; the Λ-type series used below are truncated there.
fn truncation_length(rate: f64, ln_tol: f64) -> Result<usize> {
    let lng = ln_inv_gamma_half(MAX_SERIES_LEN);
    if rate <= 0.0 {
        return Ok(2);
    }
    let lr = rate.ln();
    let start = ((2.0 * rate * rate) as usize + 2).min(MAX_SERIES_LEN);
    for n in start..MAX_SERIES_LEN {
        if n as f64 * lr + lng[n] < ln_tol {
            return Ok(n + 1);
        }
    }
    let n = MAX_SERIES_LEN - 1;
    Err(Error::Truncation { terms: MAX_SERIES_LEN, last_term: (n as f64 * lr + lng[n]).exp() })
}

fn ln_tol<W: Real>() -> f64 {
    W::epsilon().to_f64().ln() - 10.0
}

/// Taylor coefficients f_n of an entire function, with an optional
/// certified growth bound.
#[derive(Debug, Clone, PartialEq)]
pub struct EntireFunctionSeries<T> {
    coeffs: Vec<Complex<T>>,
    bound: Option<A1Bound>,
}

impl<T: Real> EntireFunctionSeries<T> {
    /// Checks finiteness and, when a bound is given, |f_n| ≤ A(eB)ⁿ/n!.
    pub fn new(coeffs: Vec<Complex<T>>, bound: Option<A1Bound>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Precondition("a series needs at least one coefficient".into()));
        }
        if let Some(j) = coeffs.iter().position(|c| !is_finite_c(*c)) {
            return Err(Error::Precondition(format!("coefficient f_{j} is not finite")));
        }
        if let Some(b) = bound {
            let lf = ln_factorials(coeffs.len());
            let leb = if b.b() > 0.0 { 1.0 + b.b().ln() } else { f64::NEG_INFINITY };
            for (n, c) in coeffs.iter().enumerate() {
                let env = if n == 0 { b.a() } else { (b.a().ln() + n as f64 * leb - lf[n]).exp() };
                let mag = cabs(*c).to_f64();
                if mag > env * (1.0 + 1e-9) + 1e-300 {
                    return Err(Error::Precondition(format!(
                        "|f_{n}| = {mag:e} exceeds the growth envelope {env:e} of (A, B) = ({}, {})",
                        b.a(),
                        b.b()
                    )));
                }
            }
        }
        Ok(Self { coeffs, bound })
    }

    /// A polynomial (or truncated series) with no growth certificate.
    pub fn from_coeffs(coeffs: Vec<Complex<T>>) -> Result<Self> {
        Self::new(coeffs, None)
    }

    pub fn zero(len: usize) -> Result<Self> {
        Self::new(vec![real(T::zero()); len], Some(A1Bound::new(0.0, 0.0)?))
    }

    /// e^{ikξ}: f_n = (ik)ⁿ/n!, certified by (1, |k|).
    pub fn exp_ik(k: T, len: usize) -> Result<Self> {
        let ik = Complex::new(T::zero(), k);
        let mut coeffs = Vec::with_capacity(len);
        let mut c = real(T::one());
        for n in 0..len {
            coeffs.push(c);
            c = c * ik / T::from_f64((n + 1) as f64);
        }
        Self::new(coeffs, Some(A1Bound::new(1.0, k.abs().to_f64())?))
    }

    /// Σ_j C_j e^{ik_jξ}, certified by (Σ|C_j|, max|k_j|).
    pub fn from_fourier_sum(f: &FourierSum<T>, len: usize) -> Result<Self> {
        let mut coeffs = vec![ComplexSum::new(); len];
        let mut a = 0.0;
        for term in f.terms() {
            a += cabs(term.c).to_f64();
            let ik = Complex::new(T::zero(), term.k);
            let mut c = term.c;
            for (n, acc) in coeffs.iter_mut().enumerate() {
                acc.add(c);
                c = c * ik / T::from_f64((n + 1) as f64);
            }
        }
        let b = f.max_wavenumber().to_f64();
        let coeffs = coeffs.iter().map(ComplexSum::value).collect();
        Self::new(coeffs, Some(A1Bound::new(a * (1.0 + 1e-12), b)?))
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn bound(&self) -> Option<A1Bound> {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficientwise sum; the shorter series is padded with zeros.
    pub fn add(&self, other: &Self) -> Result<Self> {
        let len = self.len().max(other.len());
        let get = |s: &Self, n: usize| s.coeffs.get(n).copied().unwrap_or_else(|| real(T::zero()));
        let coeffs = (0..len).map(|n| get(self, n) + get(other, n)).collect();
        let bound = match (self.bound, other.bound) {
            (Some(p), Some(q)) => Some(A1Bound::new(p.a() + q.a(), p.b().max(q.b()))?),
            _ => None,
        };
        Self::new(coeffs, bound)
    }

    pub fn scale(&self, c: Complex<T>) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|f| *f * c).collect();
        let bound = match self.bound {
            Some(b) => Some(A1Bound::new(b.a() * cabs(c).to_f64(), b.b())?),
            None => None,
        };
        Self::new(coeffs, bound)
    }
}

/// Value of a truncated series together with what is known about the
/// discarded tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue<T> {
    pub value: Complex<T>,
    /// Bound on the omitted Σ_{n ≥ len} |f_n z^n| from the growth
    /// certificate; `None` without one.
    pub tail_bound: Option<f64>,
    /// True iff the tail bound is below the reporting tolerance.
    pub certified: bool,
}

/// Horner evaluation of the stored truncation.
pub fn eval_series<T: Real>(f: &EntireFunctionSeries<T>, z: Complex<T>) -> SeriesValue<T> {
    let value = f.coeffs.iter().rev().fold(real(T::zero()), |acc, c| acc * z + *c);
    let tail_bound = f.bound.map(|b| envelope_tail(b, cabs(z).to_f64(), f.len()));
    let scale = cabs(value).to_f64().max(1.0);
    let certified = tail_bound.is_some_and(|t| t <= TAIL_TOLERANCE * scale);
    SeriesValue { value, tail_bound, certified }
}

/// Σ_{n ≥ from} A (eBr)ⁿ/n!, summed until the terms are negligible.
fn envelope_tail(b: A1Bound, r: f64, from: usize) -> f64 {
    let x = std::f64::consts::E * b.b() * r;
    if x == 0.0 {
        return if from == 0 { b.a() } else { 0.0 };
    }
    let lf = ln_factorials(from + 1);
    let mut term = (b.a().ln() + from as f64 * x.ln() - lf[from]).exp();
    let mut total = 0.0;
    let mut n = from;
    loop {
        total += term;
        n += 1;
        term *= x / n as f64;
        if (n as f64 > x && term < total * 1e-17) || !total.is_finite() || n > from + MAX_SERIES_LEN {
            return total;
        }
    }
}

/// A(eB)ⁿ, the envelope of |F⁽ⁿ⁾(0)|.
pub fn derivative_growth_bound(bound: A1Bound, n: usize) -> Result<f64> {
    if n == 0 {
        return Ok(bound.a());
    }
    let eb = std::f64::consts::E * bound.b();
    let v = bound.a() * eb.powf(n as f64);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Range(format!("A(eB)^n overflows for (A, B, n) = ({}, {}, {n})", bound.a(), bound.b())))
    }
}

/// Truncated symbol Ψ(k) = Σ c_m k^m.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSymbol<T> {
    coeffs: Vec<Complex<T>>,
    description: String,
}

impl<T: Real> OperatorSymbol<T> {
    pub fn new(coeffs: Vec<Complex<T>>, description: impl Into<String>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Precondition("a symbol needs at least one coefficient".into()));
        }
        if let Some(j) = coeffs.iter().position(|c| !is_finite_c(*c)) {
            return Err(Error::Numeric(format!("symbol coefficient c_{j} is not finite")));
        }
        Ok(Self { coeffs, description: description.into() })
    }

    /// Ψ(k) = k^m.
    pub fn monomial(m: usize) -> Self {
        let mut coeffs = vec![real(T::zero()); m + 1];
        coeffs[m] = real(T::one());
        Self { coeffs, description: format!("k^{m}") }
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Horner evaluation of the truncated symbol.
    pub fn eval(&self, k: Complex<T>) -> Complex<T> {
        self.coeffs.iter().rev().fold(real(T::zero()), |acc, c| acc * k + *c)
    }

    /// S_B = Σ|c_m| B^m over the stored terms.
    pub fn s_b(&self, b: f64) -> Result<f64> {
        let mut total = 0.0;
        let mut p = 1.0;
        for c in &self.coeffs {
            total += cabs(*c).to_f64() * p;
            p *= b;
        }
        if total.is_finite() {
            Ok(total)
        } else {
            Err(Error::Range(format!("S_B overflows for B = {b} ({})", self.description)))
        }
    }

    /// The symbol of Ψ(−k): c_j → (−1)ʲ c_j.
    pub fn reflected(&self) -> Self {
        let coeffs = self.coeffs.iter().enumerate().map(|(j, c)| if j % 2 == 1 { -*c } else { *c }).collect();
        Self { coeffs, description: format!("reflected {}", self.description) }
    }

    /// Termwise sum; the shorter symbol is padded with zeros.
    pub fn add(&self, other: &Self) -> Self {
        let len = self.len().max(other.len());
        let get = |s: &Self, n: usize| s.coeffs.get(n).copied().unwrap_or_else(|| real(T::zero()));
        let coeffs = (0..len).map(|n| get(self, n) + get(other, n)).collect();
        Self { coeffs, description: format!("{} + {}", self.description, other.description) }
    }

    fn scaled(&self, c: Complex<T>) -> Self {
        Self { coeffs: self.coeffs.iter().map(|z| *z * c).collect(), description: self.description.clone() }
    }
}

/// First `out_len` Taylor coefficients of U F, where
/// (UF)_n = Σ_m (−i)^m c_m f_{n+m} (n+m)!/n!.
///
/// Terms that would need coefficients beyond the stored ones are
/// estimated by extrapolating the stored f_n geometrically; if that exceeds the
/// reporting tolerance the call fails with a truncation error.
pub fn apply_operator<T: Real>(
    sym: &OperatorSymbol<T>,
    f: &EntireFunctionSeries<T>,
    out_len: usize,
) -> Result<EntireFunctionSeries<T>> {
    if out_len == 0 {
        return Err(Error::Precondition("out_len must be positive".into()));
    }
    if f.len() < out_len {
        return Err(Error::Truncation { terms: f.len(), last_term: f64::INFINITY });
    }
    let mi = -ci::<T>();
    let lf = ln_factorials(f.len() + sym.len());
    let mut out = Vec::with_capacity(out_len);
    for n in 0..out_len {
        let mut acc = ComplexSum::new();
        let mut rot = real(T::one());
        let mut ratio = T::one();
        let avail = sym.len().min(f.len() - n);
        for m in 0..avail {
            if m > 0 {
                ratio *= T::from_f64((n + m) as f64);
                rot *= mi;
            }
            if !ratio.is_finite() {
                return Err(Error::Range(format!("(n+m)!/n! overflows at n = {n}, m = {m}")));
            }
            acc.add(rot * sym.coeffs[m] * (f.coeffs[n + m] * ratio));
        }
        let value = acc.value();
        let tail = missing_terms_estimate(sym, f, n, avail, &lf);
        if tail > TAIL_TOLERANCE * cabs(value).to_f64().max(1.0) {
            return Err(Error::Truncation { terms: f.len(), last_term: tail });
        }
        if !is_finite_c(value) {
            return Err(Error::Numeric(format!("(UF)_{n} is not finite")));
        }
        out.push(value);
    }
    let bound = match f.bound {
        Some(b) => {
            let eb = std::f64::consts::E * b.b();
            Some(A1Bound::new(b.a() * sym.s_b(eb)?, eb)?)
        }
        None => None,
    };
    // The attached bound is the operator estimate, not a coefficient
    // envelope, so it is stored without the coefficient check.
    Ok(EntireFunctionSeries { coeffs: out, bound })
}

/// First `out_len` coefficients of (F(z+a) − F(z))/a,
/// g_n = Σ_m f_{n+m+1} binom(n+m+1, m+1) a^m.  The stored coefficients
/// are taken as the whole function; with a growth certificate the
/// omitted part is bounded and reported if it matters.
pub fn difference_quotient<T: Real>(
    f: &EntireFunctionSeries<T>,
    a: Complex<T>,
    out_len: usize,
) -> Result<EntireFunctionSeries<T>> {
    if a.re.is_zero() && a.im.is_zero() {
        return Err(Error::Domain("difference quotient needs a ≠ 0".into()));
    }
    if out_len == 0 {
        return Err(Error::Precondition("out_len must be positive".into()));
    }
    let len = f.len();
    let apow = powers(a, len);
    let mut out = Vec::with_capacity(out_len);
    for n in 0..out_len {
        let mut acc = ComplexSum::new();
        // binom(n+m+1, m+1), advanced in m
        let mut b = T::from_f64((n + 1) as f64);
        for m in 0..len.saturating_sub(n + 1) {
            if m > 0 {
                b = b * T::from_f64((n + m + 1) as f64) / T::from_f64((m + 1) as f64);
            }
            acc.add(f.coeffs[n + m + 1] * apow[m] * b);
        }
        let value = acc.value();
        if let Some(bd) = f.bound {
            let tail = quotient_tail(bd, cabs(a).to_f64(), len, n);
            if tail > TAIL_TOLERANCE * cabs(value).to_f64().max(1.0) {
                return Err(Error::Truncation { terms: len, last_term: tail });
            }
        }
        if !is_finite_c(value) {
            return Err(Error::Numeric(format!("difference-quotient coefficient g_{n} is not finite")));
        }
        out.push(value);
    }
    EntireFunctionSeries::new(out, None)
}

/// Estimated size of the terms of (UF)_n that need f_N past the stored
/// ones, extrapolating |f_N| geometrically from the last two coefficients.
fn missing_terms_estimate<T: Real>(
    sym: &OperatorSymbol<T>,
    f: &EntireFunctionSeries<T>,
    n: usize,
    avail: usize,
    lf: &[f64],
) -> f64 {
    let len = f.len();
    let last = cabs(f.coeffs[len - 1]).to_f64();
    let prev = if len >= 2 { cabs(f.coeffs[len - 2]).to_f64() } else { 0.0 };
    let mut total = 0.0;
    for m in avail..sym.len() {
        let cm = cabs(sym.coeffs[m]).to_f64();
        if cm == 0.0 || last == 0.0 {
            continue;
        }
        if prev == 0.0 {
            return f64::INFINITY;
        }
        let steps = (n + m + 1 - len) as f64;
        let ln_term = cm.ln() + last.ln() + steps * (last / prev).ln() + lf[n + m] - lf[n];
        total += ln_term.exp();
    }
    total
}

/// Σ_{N ≥ len} A(eB)^N/N! binom(N, n+1) |a|^{N−n−1}.
fn quotient_tail(b: A1Bound, ra: f64, len: usize, n: usize) -> f64 {
    let eb = std::f64::consts::E * b.b();
    if eb == 0.0 || b.a() == 0.0 {
        return 0.0;
    }
    // A(eB)^N/N! binom(N, n+1) |a|^{N−n−1} = A (eB)^{n+1}/(n+1)! · (eB|a|)^p/p!
    // with p = N − n − 1; sum over p ≥ len − n − 1.
    let lf = ln_factorials(n + 2);
    let head = (b.a().ln() + (n + 1) as f64 * eb.ln() - lf[n + 1]).exp();
    let from = (len).saturating_sub(n + 1);
    head * envelope_tail(A1Bound::new(1.0, b.b() * ra).unwrap_or(b), 1.0, from)
}

fn validate_tx<T: Real>(t: T, x: T, m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::Precondition("the symbol needs M ≥ 1".into()));
    }
    if !(t > T::zero() && t.is_finite() && x.is_finite()) {
        return Err(Error::Domain(format!("symbols need t > 0 and finite x, got ({t}, {x})")));
    }
    Ok(())
}

fn narrow_all<T: Real>(v: Vec<Complex<T::Wide>>) -> Vec<Complex<T>> {
    v.into_iter().map(cnarrow::<T>).collect()
}

/// Coefficients c_0..c_M of Ψ_free(t,x;k) = e^{ikx − ik²t} in powers of k,
/// c_j = Σ_{m=⌈j/2⌉}^{j} (ix)^{2m−j}(−it)^{j−m}/m! binom(m, j−m).
pub fn symbol_psi_free<T: Real>(t: T, x: T, m_terms: usize) -> Result<OperatorSymbol<T>> {
    validate_tx(t, x, m_terms)?;
    let (tw, xw) = (t.widen(), x.widen());
    let ix = powers(Complex::new(T::Wide::zero(), xw), m_terms + 1);
    let mit = powers(Complex::new(T::Wide::zero(), -tw), m_terms + 1);
    let binom = pascal::<T::Wide>(m_terms);
    let mut inv_fact = Vec::with_capacity(m_terms + 1);
    let mut fct = T::Wide::one();
    for m in 0..=m_terms {
        if m > 0 {
            fct /= T::Wide::from_f64(m as f64);
        }
        inv_fact.push(fct);
    }
    let coeffs = (0..=m_terms)
        .map(|j| {
            let mut acc = ComplexSum::new();
            for m in j.div_ceil(2)..=j {
                acc.add(ix[2 * m - j] * mit[j - m] * (inv_fact[m] * binom[m][j - m]));
            }
            acc.value()
        })
        .collect();
    OperatorSymbol::new(narrow_all::<T>(coeffs), format!("psi_free(t={t}, x={x})"))
}

/// φ_δ(t,x;k)/(α e^{ix²/4t}/2) in powers of k, in the working type W.
///
/// The double series Σ_{n,m} (−s)^{N} binom(N, m+1)/Γ(N/2+1) wⁿ vᵐ with
/// N = n+m+1, w = |x|/(2it) − ik, v = α + ik is regrouped by N; since
/// w + v = |x|/(2it) + α does not depend on k, the inner sum over m is
/// ((w+v)^N − w^N)/v and the binomial theorem turns it into powers of v,
/// which a second binomial expansion turns into powers of k.
fn phi_delta_core<W: Real>(t: W, ax: W, alpha: W, m_terms: usize) -> Result<Vec<Complex<W>>> {
    let s = sqrt_it(t)?;
    let two = W::from_f64(2.0);
    let big_a = Complex::new(alpha, -ax / (two * t));
    let rate = cabs(s).to_f64() * (cabs(big_a).to_f64() + alpha.abs().to_f64() + 2.0);
    let nmax = truncation_length(rate, ln_tol::<W>())?;
    let g = inv_gamma_half_scaled::<W>(nmax + 1, 0);
    let binom = pascal::<W>(nmax);
    let apow = powers(big_a, nmax + 1);
    let ms = powers(-s, nmax + 1);
    let p: Vec<Complex<W>> = (0..=nmax).map(|n| ms[n] * g[n]).collect();

    // d_q: coefficient of v^q
    let d: Vec<Complex<W>> = (0..nmax)
        .map(|q| {
            let mut acc = ComplexSum::new();
            for n in q + 1..=nmax {
                acc.add(p[n] * apow[n - q - 1] * binom[n][q + 1]);
            }
            if q % 2 == 1 {
                -acc.value()
            } else {
                acc.value()
            }
        })
        .collect();

    let alpha_pow: Vec<W> = {
        let mut v = Vec::with_capacity(nmax + 1);
        let mut a = W::one();
        for _ in 0..=nmax {
            v.push(a);
            a *= alpha;
        }
        v
    };
    let ij = powers(ci::<W>(), m_terms + 1);
    Ok((0..=m_terms)
        .map(|j| {
            let mut acc = ComplexSum::new();
            for q in j..nmax {
                acc.add(d[q] * (binom[q][j] * alpha_pow[q - j]));
            }
            acc.value() * ij[j]
        })
        .collect())
}

fn phase<W: Real>(t: W, ax: W) -> Complex<W> {
    cis(ax * ax / (W::from_f64(4.0) * t))
}

/// Coefficients c_0..c_M of φ_δ(t,x;k) in powers of k.
pub fn symbol_phi_delta<T: Real>(t: T, x: T, alpha: T, m_terms: usize) -> Result<OperatorSymbol<T>> {
    validate_tx(t, x, m_terms)?;
    if alpha.is_zero() || !alpha.is_finite() {
        return Err(Error::Precondition("α must be finite and nonzero".into()));
    }
    let (tw, axw, aw) = (t.widen(), x.abs().widen(), alpha.widen());
    let pre = phase(tw, axw) * (aw / T::Wide::from_f64(2.0));
    let core = phi_delta_core(tw, axw, aw, m_terms)?;
    let coeffs = core.into_iter().map(|c| c * pre).collect();
    OperatorSymbol::new(narrow_all::<T>(coeffs), format!("phi_delta(t={t}, x={x}, alpha={alpha})"))
}

/// Coefficients of (sgn x/2) e^{ix²/4t} Λ(|x|/(2s) − iks), the part of
/// φ_δ′ that is not of δ form:
/// c_j = (sgn x/2) e^{ix²/4t} (−is)^j Σ_{n≥j} (−1)ⁿ binom(n, j) aⁿ⁻ʲ/Γ(n/2+1).
pub fn symbol_phi_delta_prime_one<T: Real>(t: T, x: T, m_terms: usize) -> Result<OperatorSymbol<T>> {
    validate_tx(t, x, m_terms)?;
    if x.is_zero() {
        return Err(Error::Domain("φ_δ′ is discontinuous at x = 0".into()));
    }
    let (tw, axw) = (t.widen(), x.abs().widen());
    let two = T::Wide::from_f64(2.0);
    let s = sqrt_it(tw)?;
    let a = real(axw) / (s * two);
    let rate = cabs(a).to_f64() + 2.0 * cabs(s).to_f64();
    let nmax = truncation_length(rate, ln_tol::<T::Wide>())?;
    let g = inv_gamma_half_scaled::<T::Wide>(nmax + 1, 0);
    let binom = pascal::<T::Wide>(nmax);
    let apow = powers(a, nmax + 1);
    let mis = powers(-(ci::<T::Wide>() * s), m_terms + 1);
    let pre = phase(tw, axw) * (x.signum().widen() / two);
    let coeffs = (0..=m_terms)
        .map(|j| {
            let mut acc = ComplexSum::new();
            for n in j..=nmax {
                let term = apow[n - j] * (g[n] * binom[n][j]);
                acc.add(if n % 2 == 1 { -term } else { term });
            }
            acc.value() * mis[j] * pre
        })
        .collect();
    OperatorSymbol::new(narrow_all::<T>(coeffs), format!("phi_delta_prime_one(t={t}, x={x})"))
}

/// Coefficients of φ_δ′(t,x;k) = sgn(x)·φ_δ(t,x;k)|_{α=β} + the Λ part.
pub fn symbol_phi_delta_prime<T: Real>(t: T, x: T, beta: T, m_terms: usize) -> Result<OperatorSymbol<T>> {
    let one = symbol_phi_delta_prime_one(t, x, m_terms)?;
    let zero = symbol_phi_delta(t, x, beta, m_terms)?.scaled(real(x.signum()));
    let mut sum = zero.add(&one);
    sum.description = format!("phi_delta_prime(t={t}, x={x}, beta={beta})");
    Ok(sum)
}

fn symbol_phi<T: Real>(t: T, x: T, pot: &PotentialSpec, m_terms: usize) -> Result<OperatorSymbol<T>> {
    let g = T::from_f64(pot.strength());
    match pot.kind() {
        PotentialKind::Delta => symbol_phi_delta(t, x, g, m_terms),
        PotentialKind::DeltaPrime => symbol_phi_delta_prime(t, x, g, m_terms),
    }
}

/// Symbol of U_pot(t,x) = U_free + U_+ + U_−, where U_− is the φ part at
/// −x with k → −k.
pub fn propagator_symbol<T: Real>(t: T, x: T, pot: &PotentialSpec, m_terms: usize) -> Result<OperatorSymbol<T>> {
    if x.is_zero() {
        return Err(Error::Precondition("the propagator symbol is built for x ≠ 0".into()));
    }
    let free = symbol_psi_free(t, x, m_terms)?;
    let plus = symbol_phi(t, x, pot, m_terms)?;
    let minus = symbol_phi(t, -x, pot, m_terms)?.reflected();
    let mut sum = free.add(&plus).add(&minus);
    sum.description = format!("propagator {:?}({}) at (t={t}, x={x})", pot.kind(), pot.strength());
    Ok(sum)
}

/// U_pot(t,x)F(ξ) at ξ = 0.
pub fn propagator_apply<T: Real>(
    t: T,
    x: T,
    pot: &PotentialSpec,
    f: &EntireFunctionSeries<T>,
    m_terms: usize,
) -> Result<Complex<T>> {
    let sym = propagator_symbol(t, x, pot, m_terms)?;
    Ok(apply_operator(&sym, f, 1)?.coeffs[0])
}

fn validate_bound_args(b: f64, t: f64, x: f64) -> Result<()> {
    if !(b >= 0.0 && b.is_finite() && t > 0.0 && t.is_finite() && x.is_finite()) {
        return Err(Error::Precondition(format!("bound constants need B ≥ 0, t > 0, finite x; got ({b}, {t}, {x})")));
    }
    Ok(())
}

fn lambda_real(z: f64) -> Result<f64> {
    Ok(lambda(Complex::new(z, 0.0), &LambdaEvalConfig::default())?.re)
}

/// S̃_{B,free}(t,x) = e^{B|x| + B²t}.
pub fn bound_constant_free(b: f64, t: f64, x: f64) -> Result<f64> {
    validate_bound_args(b, t, x)?;
    let e = b * x.abs() + b * b * t;
    let v = e.exp();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Range(format!("e^(B|x| + B²t) overflows, exponent {e}")))
    }
}

/// S̃_{B,δ,+}(t,x) =
/// (|α|/2)(Λ(−|x|/2√t − (2B+|α|)√t) − Λ(−|x|/2√t − B√t))/((|α|+B)√t).
pub fn bound_constant_delta_plus(b: f64, t: f64, x: f64, alpha: f64) -> Result<f64> {
    validate_bound_args(b, t, x)?;
    if alpha == 0.0 || !alpha.is_finite() {
        return Err(Error::Precondition("α must be finite and nonzero".into()));
    }
    let (rt, aa) = (t.sqrt(), alpha.abs());
    let u = -x.abs() / (2.0 * rt);
    let l1 = lambda_real(u - (2.0 * b + aa) * rt)?;
    let l2 = lambda_real(u - b * rt)?;
    let v = aa / 2.0 * (l1 - l2) / ((aa + b) * rt);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Range(format!("S̃_δ,+ overflows at B = {b}")))
    }
}

/// S̃^{(1)}_{B,δ′,+}(t,x) = ½Λ(−|x|/2√t − B√t).
pub fn bound_constant_deltaprime_one(b: f64, t: f64, x: f64) -> Result<f64> {
    validate_bound_args(b, t, x)?;
    let rt = t.sqrt();
    Ok(0.5 * lambda_real(-x.abs() / (2.0 * rt) - b * rt)?)
}

#[derive(Serialize, Deserialize)]
struct ComplexRecord {
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct SeriesRecord {
    coeffs: Vec<ComplexRecord>,
    bound: Option<A1Bound>,
}

#[derive(Serialize, Deserialize)]
struct SymbolRecord {
    coeffs: Vec<ComplexRecord>,
    description: String,
}

fn to_records<T: Real>(v: &[Complex<T>]) -> Vec<ComplexRecord> {
    v.iter().map(|c| ComplexRecord { re: c.re.to_f64(), im: c.im.to_f64() }).collect()
}

fn from_records<T: Real>(v: &[ComplexRecord]) -> Vec<Complex<T>> {
    v.iter().map(|r| Complex::new(T::from_f64(r.re), T::from_f64(r.im))).collect()
}

impl<T: Real> Serialize for EntireFunctionSeries<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesRecord { coeffs: to_records(&self.coeffs), bound: self.bound }.serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for EntireFunctionSeries<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = SeriesRecord::deserialize(d)?;
        Self::new(from_records(&r.coeffs), r.bound).map_err(serde::de::Error::custom)
    }
}

impl<T: Real> Serialize for OperatorSymbol<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SymbolRecord { coeffs: to_records(&self.coeffs), description: self.description.clone() }.serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for OperatorSymbol<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = SymbolRecord::deserialize(d)?;
        Self::new(from_records(&r.coeffs), r.description).map_err(serde::de::Error::custom)
    }
}
