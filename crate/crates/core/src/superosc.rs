//! Superoscillating sequences F_n(z) = Σ_j C_j(n,k) e^{i k_j z} with
//! C_j = binom(n,j) ((1+k)/2)^{n−j} ((1−k)/2)^j and k_j = 1 − 2j/n.
//!
//! Σ_j |C_j| = |k|ⁿ for |k| ≥ 1 while F_n stays O(1) on the real line, so
//! sums lose about n·log10|k| digits.  Everything here is generic over the
//! scalar: exact rationals for bookkeeping, multi-word floats for sums.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{cabs, cexp, cis, ComplexSum, Real, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuperoscSpec {
    k: f64,
    n: usize,
}

impl SuperoscSpec {
    pub fn new(n: usize, k: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("n must be >= 1".into()));
        }
        if !(k.is_finite() && k.abs() > 1.0) {
            return Err(Error::Precondition(format!("superoscillation needs |k| > 1, got k = {k}")));
        }
        Ok(Self { k, n })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourierTerm<T> {
    pub c: Complex<T>,
    pub k: T,
}

/// A finite exponential sum Σ c_j e^{i k_j z}.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSum<T> {
    terms: Vec<FourierTerm<T>>,
}

impl<T: Scalar> FourierSum<T> {
    pub fn new(terms: Vec<FourierTerm<T>>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Precondition("a Fourier sum needs at least one term".into()));
        }
        if let Some(j) = terms.iter().position(|t| !t.k.to_f64_lossy().is_finite()) {
            return Err(Error::Precondition(format!("wavenumber k_{j} is not finite")));
        }
        Ok(Self { terms })
    }

    pub fn single(c: Complex<T>, k: T) -> Result<Self> {
        Self::new(vec![FourierTerm { c, k }])
    }

    pub fn terms(&self) -> &[FourierTerm<T>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Σ c_j, i.e. the value at z = 0, in the sum's own arithmetic.
    pub fn coefficient_sum(&self) -> Complex<T> {
        self.terms
            .iter()
            .fold(Complex::new(T::zero(), T::zero()), |acc, t| acc + t.c.clone())
    }

    /// True when at least one coefficient is nonzero.
    pub fn has_support(&self) -> bool {
        self.terms.iter().any(|t| !t.c.re.is_zero() || !t.c.im.is_zero())
    }
}

impl<T: Real> FourierSum<T> {
    pub fn convert<U: Real>(&self) -> FourierSum<U> {
        let cv = |x: T| U::from_multi(x.to_multi());
        FourierSum {
            terms: self
                .terms
                .iter()
                .map(|t| FourierTerm { c: Complex::new(cv(t.c.re), cv(t.c.im)), k: cv(t.k) })
                .collect(),
        }
    }

    pub fn max_wavenumber(&self) -> T {
        self.terms.iter().fold(T::zero(), |m, t| m.max(t.k.abs()))
    }

    pub fn to_records(&self) -> Vec<FourierRecord> {
        self.terms
            .iter()
            .map(|t| FourierRecord { c_re: t.c.re.to_f64(), c_im: t.c.im.to_f64(), k: t.k.to_f64() })
            .collect()
    }

    pub fn from_records(records: &[FourierRecord]) -> Result<Self> {
        Self::new(
            records
                .iter()
                .map(|r| FourierTerm { c: Complex::new(T::from_f64(r.c_re), T::from_f64(r.c_im)), k: T::from_f64(r.k) })
                .collect(),
        )
    }
}

/// JSON form of one term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourierRecord {
    pub c_re: f64,
    pub c_im: f64,
    pub k: f64,
}

impl<T: Real> Serialize for FourierSum<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_records().serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for FourierSum<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let records = Vec::<FourierRecord>::deserialize(d)?;
        Self::from_records(&records).map_err(serde::de::Error::custom)
    }
}

/// Growth bound |F(z)| ≤ A e^{B|z|}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct A1Bound {
    #[serde(rename = "A")]
    a: f64,
    #[serde(rename = "B")]
    b: f64,
}

impl A1Bound {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a >= 0.0 && b >= 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::Precondition(format!("growth bound needs A, B >= 0, got ({a}, {b})")));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

/// The n + 1 terms (C_j(n,k), 1 − 2j/n) for a validated spec.
pub fn coefficients<T: Scalar>(spec: &SuperoscSpec) -> Result<FourierSum<T>> {
    let k = T::from_f64_exact(spec.k).ok_or_else(|| Error::Precondition("k must be finite".into()))?;
    coefficients_with(spec.n, k)
}

/// Same as [`coefficients`] for any k (|k| ≤ 1 included), n ≥ 1.
/// Binomials come from binom(n, j+1) = binom(n, j)(n − j)/(j + 1).
pub fn coefficients_with<T: Scalar>(n: usize, k: T) -> Result<FourierSum<T>> {
    if n == 0 {
        return Err(Error::Precondition("n must be >= 1".into()));
    }
    let two = T::from_i64(2);
    let p = (T::one() + k.clone()) / two.clone();
    let q = (T::one() - k) / two;
    let powers = |base: T| {
        let mut v = Vec::with_capacity(n + 1);
        v.push(T::one());
        for i in 0..n {
            v.push(v[i].clone() * base.clone());
        }
        v
    };
    let pp = powers(p);
    let qq = powers(q);
    let nn = T::from_i64(n as i64);
    let mut binom = T::one();
    let mut terms = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let c = binom.clone() * pp[n - j].clone() * qq[j].clone();
        if !c.to_f64_lossy().is_finite() {
            return Err(Error::Range(format!("coefficient C_{j}({n}) overflows")));
        }
        let kj = T::from_i64(n as i64 - 2 * j as i64) / nn.clone();
        terms.push(FourierTerm { c: Complex::new(c, T::zero()), k: kj });
        binom = binom * T::from_i64((n - j) as i64) / T::from_i64(j as i64 + 1);
    }
    FourierSum::new(terms)
}

/// Phase factors e^{i k_j z} are recomputed from scratch at least this often
/// when they are advanced by a fixed ratio.
const RESYNC: usize = 16;

/// The spacing d when k_j = k_0 + j·d up to rounding, as for
/// [`coefficients`].
fn uniform_spacing<T: Real>(terms: &[FourierTerm<T>]) -> Option<T> {
    let (first, last) = (terms.first()?.k, terms.last()?.k);
    if terms.len() < 3 {
        return None;
    }
    let d = (last - first) / T::from_f64((terms.len() - 1) as f64);
    let tol = T::epsilon() * T::from_f64(8.0) * first.abs().max(last.abs());
    let uniform = terms.iter().enumerate().all(|(j, t)| (t.k - (first + d * T::from_f64(j as f64))).abs() <= tol);
    uniform.then_some(d)
}

/// Σ c_j e^{i k_j z}, compensated.
pub fn evaluate<T: Real>(f: &FourierSum<T>, z: Complex<T>) -> Result<Complex<T>> {
    for (j, t) in f.terms.iter().enumerate() {
        if (-(t.k * z.im)).to_f64() > T::max_exp_arg() {
            return Err(Error::Range(format!("e^(i k_{j} z) overflows at z = {}{:+}i", z.re.to_f64(), z.im.to_f64())));
        }
    }
    let phase = |k: T| {
        let grow = -(k * z.im);
        if grow.is_zero() {
            cis(k * z.re)
        } else {
            cis(k * z.re) * grow.exp()
        }
    };
    let mut acc = ComplexSum::new();
    match uniform_spacing(&f.terms) {
        Some(d) => {
            let ratio = phase(d);
            let mut e = Complex::new(T::zero(), T::zero());
            for (j, t) in f.terms.iter().enumerate() {
                e = if j % RESYNC == 0 { phase(t.k) } else { e * ratio };
                acc.add(t.c * e);
            }
        }
        None => f.terms.iter().for_each(|t| acc.add(t.c * phase(t.k))),
    }
    Ok(acc.value())
}

/// max over the grid of |F(z) − e^{ikz}| e^{−B|z|}.
pub fn a1_distance<T: Real>(f: &FourierSum<T>, k: T, bound_b: f64, grid: &[Complex<T>]) -> Result<T> {
    if grid.is_empty() {
        return Err(Error::Precondition("a1_distance needs a nonempty grid".into()));
    }
    let target = FourierSum::single(Complex::new(T::one(), T::zero()), k)?;
    let b = T::from_f64(bound_b);
    let mut worst = T::zero();
    for &z in grid {
        let d = evaluate(f, z)? - evaluate(&target, z)?;
        worst = worst.max(cabs(d) * (-(b * cabs(z))).exp());
    }
    Ok(worst)
}

/// True iff every |k_j| is strictly below |k|.
pub fn is_superoscillating<T: Real>(f: &FourierSum<T>, k: T) -> bool {
    f.max_wavenumber() < k.abs()
}

/// (cos(z/n) + ik sin(z/n))ⁿ written as ((1+k)/2 e^{iz/n} + (1−k)/2 e^{−iz/n})ⁿ.
pub fn closed_form<T: Real>(n: usize, k: T, z: Complex<T>) -> Complex<T> {
    let i = Complex::new(T::zero(), T::one());
    let w = z / T::from_f64(n as f64) * i;
    let (ep, em) = (cexp(w), cexp(-w));
    let half = T::from_f64(0.5);
    let base = ep * ((T::one() + k) * half) + em * ((T::one() - k) * half);
    base.powu(n as u32)
}

/// `points` equally spaced real points on [−half_width, half_width].
pub fn real_grid<T: Real>(points: usize, half_width: f64) -> Vec<Complex<T>> {
    let last = points.saturating_sub(1).max(1) as f64;
    (0..points)
        .map(|i| Complex::new(T::from_f64(-half_width + 2.0 * half_width * i as f64 / last), T::zero()))
        .collect()
}

/// The default a1_distance grid: 256 points on [−5, 5].
pub fn default_grid<T: Real>() -> Vec<Complex<T>> {
    real_grid(256, 5.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{BigRational, Dd, Qd};
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    fn c64(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn spec_validation() {
        assert!(SuperoscSpec::new(10, 2.0).is_ok());
        assert!(SuperoscSpec::new(10, -1.5).is_ok());
        assert!(SuperoscSpec::new(10, 1.0).is_err());
        assert!(SuperoscSpec::new(0, 2.0).is_err());
        assert!(SuperoscSpec::new(3, f64::NAN).is_err());
        assert!(A1Bound::new(1.0, 0.0).is_ok());
        assert!(A1Bound::new(-1.0, 0.0).is_err());
    }

    #[test]
    fn boundary_k_one_keeps_only_first_term() {
        for n in [1, 5, 17] {
            let f = coefficients_with::<f64>(n, 1.0).unwrap();
            assert_eq!(f.terms()[0].c, c64(1.0, 0.0));
            assert!(f.terms()[1..].iter().all(|t| t.c == c64(0.0, 0.0)));
        }
    }

    #[test]
    fn n2_k3_coefficients() {
        let f = coefficients::<f64>(&SuperoscSpec::new(2, 3.0).unwrap()).unwrap();
        let c: Vec<f64> = f.terms().iter().map(|t| t.c.re).collect();
        let k: Vec<f64> = f.terms().iter().map(|t| t.k).collect();
        assert_eq!(c, vec![4.0, -4.0, 1.0]);
        assert_eq!(k, vec![1.0, 0.0, -1.0]);
        // z = π: 4e^{iπ} − 4 + e^{−iπ} = −9
        let v = evaluate(&f, c64(std::f64::consts::PI, 0.0)).unwrap();
        assert!((v - c64(-9.0, 0.0)).norm() < 1e-14);
        assert_eq!(evaluate(&f, c64(0.0, 0.0)).unwrap(), c64(1.0, 0.0));
    }

    #[test]
    fn exact_rational_coefficients_n2_k3() {
        let k = BigRational::from_integer(3.into());
        let f = coefficients_with(2, k).unwrap();
        let c: Vec<BigRational> = f.terms().iter().map(|t| t.c.re.clone()).collect();
        let int = |v: i64| BigRational::from_integer(v.into());
        assert_eq!(c, vec![int(4), int(-4), int(1)]);
    }

    #[test]
    fn exact_normalization_up_to_200() {
        for &k in &[2.0, -3.0, 1.5, 10.0, -10.0, 7.25] {
            for n in [1, 2, 7, 50, 120, 200] {
                let spec = SuperoscSpec::new(n, k).unwrap();
                let f = coefficients::<BigRational>(&spec).unwrap();
                let s = f.coefficient_sum();
                assert!(s.re.is_one() && s.im.is_zero(), "n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn double_precision_normalization_shows_cancellation() {
        // Σ|C_j| = 2ⁿ at k = 2: double precision holds 1e-13 only for small n.
        let f = coefficients::<f64>(&SuperoscSpec::new(20, 2.0).unwrap()).unwrap();
        assert!((evaluate(&f, c64(0.0, 0.0)).unwrap() - 1.0).norm() < 1e-13);
        // 2^200 ≈ 1.6e60 needs more than quad-double
        type Hd = crate::MultiFloat<6>;
        let f = coefficients::<Hd>(&SuperoscSpec::new(200, 2.0).unwrap()).unwrap();
        let v = evaluate(&f, Complex::new(Hd::zero(), Hd::zero())).unwrap();
        assert!(cabs(v - Complex::new(Hd::one(), Hd::zero())).to_f64() < 1e-13);
    }

    #[test]
    fn closed_form_identity_in_quad_double() {
        let k = Qd::from_f64(2.0);
        for n in [1, 3, 10, 33, 60] {
            let f = coefficients::<Qd>(&SuperoscSpec::new(n, 2.0).unwrap()).unwrap();
            for &(re, im) in &[(0.0, 0.0), (5.0, 0.0), (-3.3, 1.2), (0.5, -4.9), (3.0, 4.0)] {
                let z = Complex::new(Qd::from_f64(re), Qd::from_f64(im));
                let a = evaluate(&f, z).unwrap();
                let b = closed_form(n, k, z);
                let rel = (cabs(a - b) / cabs(b)).to_f64();
                assert!(rel < 1e-9, "n = {n}, z = {re}{im:+}i: {rel:e}");
            }
        }
    }

    #[test]
    fn n50_value_near_target() {
        // |F_50(0.1) − e^{0.2i}| = 3.0004e-4 from a 60-digit oracle
        let f = coefficients::<Dd>(&SuperoscSpec::new(50, 2.0).unwrap()).unwrap();
        let z = Complex::new(Dd::from_f64(0.1), Dd::zero());
        let v = evaluate(&f, z).unwrap();
        let target = cis(Dd::from_f64(0.2));
        let d = cabs(v - target).to_f64();
        assert!((d - 3.000_438_706_751_911_3e-4).abs() < 1e-12, "{d}");
        assert!(d < 1e-2);
    }

    #[test]
    fn a1_distance_examples() {
        let grid = default_grid::<Dd>();
        let two = Dd::from_f64(2.0);
        let single = FourierSum::single(Complex::new(Dd::one(), Dd::zero()), two).unwrap();
        assert_eq!(a1_distance(&single, two, 1.0, &grid).unwrap(), Dd::zero());
        let f = coefficients::<Dd>(&SuperoscSpec::new(2, 3.0).unwrap()).unwrap();
        let origin = [Complex::new(Dd::zero(), Dd::zero())];
        assert_eq!(a1_distance(&f, Dd::from_f64(3.0), 1.0, &origin).unwrap(), Dd::zero());
        assert!(matches!(a1_distance(&f, two, 1.0, &[]), Err(Error::Precondition(_))));
    }

    #[test]
    fn a1_distance_decreases_with_frozen_values() {
        // oracle: 60-digit evaluation of the closed form on the same grid
        let frozen = [(10, 0.11686987984108668), (20, 0.04807583475344293), (40, 0.021979895335715188), (120, 0.006941315887511129)];
        let grid = default_grid::<Qd>();
        let k = Qd::from_f64(2.0);
        let mut prev = f64::INFINITY;
        for (n, want) in frozen {
            let f = coefficients::<Qd>(&SuperoscSpec::new(n, 2.0).unwrap()).unwrap();
            let d = a1_distance(&f, k, 1.0, &grid).unwrap().to_f64();
            assert!((d - want).abs() < 1e-12 * want, "n = {n}: {d} vs {want}");
            assert!(d < prev);
            prev = d;
        }
    }

    #[test]
    fn superoscillation_predicate() {
        let f = coefficients::<f64>(&SuperoscSpec::new(5, 3.0).unwrap()).unwrap();
        assert!(is_superoscillating(&f, 3.0));
        let single = FourierSum::single(c64(1.0, 0.0), 5.0).unwrap();
        assert!(!is_superoscillating(&single, 3.0));
        let f = coefficients_with::<f64>(5, 0.5).unwrap();
        assert!(!is_superoscillating(&f, 0.5));
    }

    #[test]
    fn evaluate_range_error() {
        let f = coefficients::<f64>(&SuperoscSpec::new(4, 2.0).unwrap()).unwrap();
        assert!(matches!(evaluate(&f, c64(0.0, -800.0)), Err(Error::Range(_))));
        assert!(matches!(coefficients::<f64>(&SuperoscSpec::new(1100, 2.0).unwrap()), Err(Error::Range(_))));
    }

    #[test]
    fn json_records_round_trip() {
        let f = coefficients::<f64>(&SuperoscSpec::new(3, 2.0).unwrap()).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.starts_with("[{\"c_re\":"));
        let g: FourierSum<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
        assert!(serde_json::from_str::<FourierSum<f64>>("[]").is_err());
    }

    proptest! {
        #[test]
        fn wavenumbers_in_unit_interval(n in 1usize..300, k in -10.0f64..10.0) {
            let f = coefficients_with::<f64>(n, k).unwrap();
            prop_assert_eq!(f.len(), n + 1);
            prop_assert!(f.terms().iter().all(|t| (-1.0..=1.0).contains(&t.k)));
        }

        #[test]
        fn normalization_in_double_double(n in 1usize..=40, k in 1.01f64..3.0) {
            let f = coefficients::<Dd>(&SuperoscSpec::new(n, k).unwrap()).unwrap();
            let v = evaluate(&f, Complex::new(Dd::zero(), Dd::zero())).unwrap();
            prop_assert!(cabs(v - Complex::new(Dd::one(), Dd::zero())).to_f64() < 1e-13);
        }

        #[test]
        fn closed_form_random_points(n in 1usize..=60, re in -3.5f64..3.5, im in -3.5f64..3.5, k in 1.1f64..4.0) {
            let f = coefficients::<Qd>(&SuperoscSpec::new(n, k).unwrap()).unwrap();
            let z = Complex::new(Qd::from_f64(re), Qd::from_f64(im));
            let a = evaluate(&f, z).unwrap();
            let b = closed_form(n, Qd::from_f64(k), z);
            prop_assert!((cabs(a - b) / cabs(b)).to_f64() < 1e-9);
        }

        #[test]
        fn stepped_phases_match_direct_phases(n in 2usize..=80, re in -5.0f64..5.0, im in -2.0f64..2.0) {
            // swapping two terms breaks the equal spacing and forces one cis per term
            let f = coefficients::<Qd>(&SuperoscSpec::new(n, 2.0).unwrap()).unwrap();
            let mut terms = f.terms().to_vec();
            terms.swap(0, 1);
            let g = FourierSum::new(terms).unwrap();
            prop_assert!(uniform_spacing(f.terms()).is_some() && uniform_spacing(g.terms()).is_none());
            let z = Complex::new(Qd::from_f64(re), Qd::from_f64(im));
            let scale: f64 = f.terms().iter().map(|t| cabs(t.c).to_f64()).sum::<f64>() * (2.0 * im.abs()).exp();
            let d = cabs(evaluate(&f, z).unwrap() - evaluate(&g, z).unwrap()).to_f64();
            prop_assert!(d <= 1e-55 * scale, "{:e} vs scale {:e}", d, scale);
        }
    }
}
