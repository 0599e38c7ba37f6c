//! Scalar abstraction: the numerical kernels are generic over a real type
//! (`f32`, `f64` or a multi-word float) and, where only field operations
//! are needed, over exact rationals as well.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, NumAssign, Signed, ToPrimitive, Zero};

use crate::multifloat::MultiFloat;

/// Field operations plus exact import of small integers and doubles.
pub trait Scalar: Clone + Debug + Num + Neg<Output = Self> + Send + Sync {
    /// Exact conversion where the type can hold `x` exactly; `None` for
    /// non-finite input.
    fn from_f64_exact(x: f64) -> Option<Self>;
    fn from_i64(n: i64) -> Self;
    fn to_f64_lossy(&self) -> f64;
    fn magnitude(&self) -> Self;
}

/// Real floating-point type with the elementary functions the kernels need.
pub trait Real:
    Scalar + Copy + Default + Display + PartialOrd + NumAssign + 'static
{
    /// A type with at least twice the working precision, used where a
    /// kernel is known to cancel many digits.
    type Wide: Real;

    const NAME: &'static str;

    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn widen(self) -> Self::Wide;
    fn narrow(w: Self::Wide) -> Self;

    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin_cos(self) -> (Self, Self);
    fn floor(self) -> Self;
    fn powi(self, n: i32) -> Self;
    fn is_finite(self) -> bool;
    /// Exact scaling by 2^e.
    fn mul_pow2(self, e: i32) -> Self;

    fn epsilon() -> Self;
    fn pi() -> Self;
    fn sqrt_pi() -> Self;
    fn frac_1_sqrt_pi() -> Self;
    /// Largest x with e^x finite.
    fn max_exp_arg() -> f64;

    /// Exact (or correctly rounded) exchange with the widest multi-word
    /// format, used to move values between precisions generically.
    fn to_multi(self) -> MultiFloat<8>;
    fn from_multi(x: MultiFloat<8>) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_f64(num as f64) / Self::from_f64(den as f64)
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn signum(self) -> Self {
        if self > Self::zero() {
            Self::one()
        } else if self < Self::zero() {
            -Self::one()
        } else {
            Self::zero()
        }
    }
}

macro_rules! impl_prim {
    ($t:ty, $wide:ty, $name:expr, $maxexp:expr, $widen:expr, $narrow:expr) => {
        impl Scalar for $t {
            fn from_f64_exact(x: f64) -> Option<Self> {
                x.is_finite().then_some(x as $t)
            }
            fn from_i64(n: i64) -> Self {
                n as $t
            }
            fn to_f64_lossy(&self) -> f64 {
                *self as f64
            }
            fn magnitude(&self) -> Self {
                <$t>::abs(*self)
            }
        }

        impl Real for $t {
            type Wide = $wide;
            const NAME: &'static str = $name;
            #[inline]
            fn from_f64(x: f64) -> Self {
                x as $t
            }
            #[inline]
            fn to_f64(self) -> f64 {
                self as f64
            }
            #[inline]
            fn widen(self) -> $wide {
                ($widen)(self)
            }
            #[inline]
            fn narrow(w: $wide) -> Self {
                ($narrow)(w)
            }
            #[inline]
            fn abs(self) -> Self {
                <$t>::abs(self)
            }
            #[inline]
            fn sqrt(self) -> Self {
                <$t>::sqrt(self)
            }
            #[inline]
            fn exp(self) -> Self {
                <$t>::exp(self)
            }
            #[inline]
            fn ln(self) -> Self {
                <$t>::ln(self)
            }
            #[inline]
            fn sin_cos(self) -> (Self, Self) {
                <$t>::sin_cos(self)
            }
            #[inline]
            fn floor(self) -> Self {
                <$t>::floor(self)
            }
            #[inline]
            fn powi(self, n: i32) -> Self {
                <$t>::powi(self, n)
            }
            #[inline]
            fn is_finite(self) -> bool {
                <$t>::is_finite(self)
            }
            #[inline]
            fn mul_pow2(self, e: i32) -> Self {
                self * (2.0 as $t).powi(e)
            }
            fn epsilon() -> Self {
                <$t>::EPSILON
            }
            fn pi() -> Self {
                std::f64::consts::PI as $t
            }
            fn sqrt_pi() -> Self {
                1.772_453_850_905_516 as $t
            }
            fn frac_1_sqrt_pi() -> Self {
                0.564_189_583_547_756_3 as $t
            }
            fn max_exp_arg() -> f64 {
                $maxexp
            }
            #[inline]
            fn to_multi(self) -> MultiFloat<8> {
                MultiFloat::from_f64(self as f64)
            }
            #[inline]
            fn from_multi(x: MultiFloat<8>) -> Self {
                x.to_f64() as $t
            }
        }
    };
}

impl_prim!(f32, f64, "f32", 88.72, |x: f32| x as f64, |w: f64| w as f32);
impl_prim!(
    f64,
    MultiFloat<2>,
    "f64",
    709.78,
    MultiFloat::<2>::from_f64,
    MultiFloat::<2>::to_f64
);

macro_rules! impl_multi {
    ($n:literal, $wide:literal, $name:expr) => {
        impl Scalar for MultiFloat<$n> {
            fn from_f64_exact(x: f64) -> Option<Self> {
                x.is_finite().then(|| MultiFloat::from_f64(x))
            }
            fn from_i64(n: i64) -> Self {
                <Self as num_traits::FromPrimitive>::from_i64(n).unwrap_or_default()
            }
            fn to_f64_lossy(&self) -> f64 {
                MultiFloat::to_f64(*self)
            }
            fn magnitude(&self) -> Self {
                MultiFloat::abs(*self)
            }
        }

        impl Real for MultiFloat<$n> {
            type Wide = MultiFloat<$wide>;
            const NAME: &'static str = $name;
            #[inline]
            fn from_f64(x: f64) -> Self {
                MultiFloat::from_f64(x)
            }
            #[inline]
            fn to_f64(self) -> f64 {
                MultiFloat::to_f64(self)
            }
            #[inline]
            fn widen(self) -> MultiFloat<$wide> {
                self.convert()
            }
            #[inline]
            fn narrow(w: MultiFloat<$wide>) -> Self {
                w.convert()
            }
            #[inline]
            fn abs(self) -> Self {
                MultiFloat::abs(self)
            }
            fn sqrt(self) -> Self {
                MultiFloat::sqrt(self)
            }
            fn exp(self) -> Self {
                MultiFloat::exp(self)
            }
            fn ln(self) -> Self {
                MultiFloat::ln(self)
            }
            fn sin_cos(self) -> (Self, Self) {
                MultiFloat::sin_cos(self)
            }
            fn floor(self) -> Self {
                MultiFloat::floor(self)
            }
            fn powi(self, n: i32) -> Self {
                MultiFloat::powi(self, n)
            }
            #[inline]
            fn is_finite(self) -> bool {
                MultiFloat::is_finite(self)
            }
            #[inline]
            fn mul_pow2(self, e: i32) -> Self {
                MultiFloat::mul_pow2(self, e)
            }
            fn epsilon() -> Self {
                MultiFloat::epsilon()
            }
            fn pi() -> Self {
                MultiFloat::pi()
            }
            fn sqrt_pi() -> Self {
                MultiFloat::sqrt_pi()
            }
            fn frac_1_sqrt_pi() -> Self {
                MultiFloat::frac_1_sqrt_pi()
            }
            fn max_exp_arg() -> f64 {
                709.78
            }
            #[inline]
            fn to_multi(self) -> MultiFloat<8> {
                self.convert()
            }
            #[inline]
            fn from_multi(x: MultiFloat<8>) -> Self {
                x.convert()
            }
            fn from_ratio(num: i64, den: i64) -> Self {
                <Self as Scalar>::from_i64(num) / <Self as Scalar>::from_i64(den)
            }
        }
    };
}

impl_multi!(2, 3, "double-double");
impl_multi!(3, 4, "triple-double");
impl_multi!(4, 6, "quad-double");
impl_multi!(6, 8, "hexa-double");
impl_multi!(8, 8, "octo-double");

impl Scalar for BigRational {
    fn from_f64_exact(x: f64) -> Option<Self> {
        BigRational::from_float(x)
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn to_f64_lossy(&self) -> f64 {
        rational_to_f64(self)
    }
    fn magnitude(&self) -> Self {
        Signed::abs(self)
    }
}

/// Correctly scaled conversion of a (possibly huge) rational to `f64`.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let n = r.numer();
    let d = r.denom();
    let shift = n.bits() as i64 - d.bits() as i64;
    // Bring the quotient into [2^60, 2^62) before the integer division.
    let s = 61 - shift;
    let q = if s >= 0 { (n << s as usize) / d } else { n / (d << (-s) as usize) };
    let mant = q.to_f64().unwrap_or(f64::NAN);
    let e = -s;
    if e > 1023 {
        return mant.signum() * f64::INFINITY;
    }
    if e < -1100 {
        return 0.0;
    }
    mant * 2f64.powi((e / 2) as i32) * 2f64.powi((e - e / 2) as i32)
}

/// Import an exact rational into a multi-word float of `N` limbs.
pub fn rational_to_multi<const N: usize>(r: &BigRational) -> MultiFloat<N> {
    if r.is_zero() {
        return MultiFloat::ZERO;
    }
    let mut rem = r.clone();
    let mut limbs = [0.0; N];
    for l in limbs.iter_mut() {
        let v = rational_to_f64(&rem);
        if v == 0.0 || !v.is_finite() {
            *l = v;
            break;
        }
        *l = v;
        rem -= BigRational::from_float(v).unwrap_or_else(BigRational::zero);
    }
    MultiFloat::from_expansion(&limbs)
}

/// Exact rational value of a multi-word float.
pub fn multi_to_rational<const N: usize>(x: MultiFloat<N>) -> Option<BigRational> {
    let mut acc = BigRational::zero();
    for &l in x.limbs() {
        acc += BigRational::from_float(l)?;
    }
    Some(acc)
}

/// Neumaier's compensated accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum<T> {
    sum: T,
    comp: T,
}

impl<T: Real> CompensatedSum<T> {
    pub fn new() -> Self {
        Self { sum: T::zero(), comp: T::zero() }
    }

    #[inline]
    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.comp
    }
}

/// Compensated accumulator for complex values (componentwise).
#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexSum<T> {
    re: CompensatedSum<T>,
    im: CompensatedSum<T>,
}

impl<T: Real> ComplexSum<T> {
    pub fn new() -> Self {
        Self { re: CompensatedSum::new(), im: CompensatedSum::new() }
    }

    #[inline]
    pub fn add(&mut self, z: Complex<T>) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex<T> {
        Complex::new(self.re.value(), self.im.value())
    }
}

impl<T: Real> FromIterator<Complex<T>> for ComplexSum<T> {
    fn from_iter<I: IntoIterator<Item = Complex<T>>>(iter: I) -> Self {
        let mut s = Self::new();
        for z in iter {
            s.add(z);
        }
        s
    }
}

#[inline]
pub fn cplx<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::from_f64(re), T::from_f64(im))
}

#[inline]
pub fn cabs<T: Real>(z: Complex<T>) -> T {
    let a = z.re.abs();
    let b = z.im.abs();
    let (big, small) = if a >= b { (a, b) } else { (b, a) };
    if big.is_zero() {
        return T::zero();
    }
    let r = small / big;
    big * (T::one() + r * r).sqrt()
}

#[inline]
pub fn cabs2<T: Real>(z: Complex<T>) -> T {
    z.re * z.re + z.im * z.im
}

/// e^{iθ}
#[inline]
pub fn cis<T: Real>(theta: T) -> Complex<T> {
    let (s, c) = theta.sin_cos();
    Complex::new(c, s)
}

/// e^z; the caller is responsible for range checks on `z.re`.
#[inline]
pub fn cexp<T: Real>(z: Complex<T>) -> Complex<T> {
    let m = z.re.exp();
    let (s, c) = z.im.sin_cos();
    Complex::new(m * c, m * s)
}

#[inline]
pub fn cscale<T: Real>(z: Complex<T>, s: T) -> Complex<T> {
    Complex::new(z.re * s, z.im * s)
}

#[inline]
pub fn cwiden<T: Real>(z: Complex<T>) -> Complex<T::Wide> {
    Complex::new(z.re.widen(), z.im.widen())
}

#[inline]
pub fn cnarrow<T: Real>(z: Complex<T::Wide>) -> Complex<T> {
    Complex::new(T::narrow(z.re), T::narrow(z.im))
}

#[inline]
pub fn cto_f64<T: Real>(z: Complex<T>) -> Complex<f64> {
    Complex::new(z.re.to_f64(), z.im.to_f64())
}

#[inline]
pub fn cfrom_f64<T: Real>(z: Complex<f64>) -> Complex<T> {
    Complex::new(T::from_f64(z.re), T::from_f64(z.im))
}

pub fn is_finite_c<T: Real>(z: Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Dd;

    #[test]
    fn compensated_sum_recovers_cancelled_terms() {
        let mut s = CompensatedSum::<f64>::new();
        for x in [1e16, 1.0, -1e16, 1.0] {
            s.add(x);
        }
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn rational_roundtrip_through_multi() {
        let r = BigRational::new(BigInt::from(1), BigInt::from(3));
        let m: MultiFloat<4> = rational_to_multi(&r);
        let back = multi_to_rational(m).unwrap();
        let err = rational_to_f64(&((back - &r) / &r));
        assert!(err.abs() < 1e-60, "{err}");
    }

    #[test]
    fn rational_to_f64_handles_large_parts() {
        let big = BigInt::from(3) << 2000usize;
        let r = BigRational::new(big.clone() + 1, big);
        assert_eq!(rational_to_f64(&r), 1.0);
        let tiny = BigRational::new(BigInt::from(1), BigInt::from(7) << 100usize);
        assert!((rational_to_f64(&tiny) * 7.0 * 2f64.powi(100) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cabs_avoids_overflow() {
        let z = Complex::new(1e200, 1e200);
        assert!((cabs(z) / 1e200 - 2f64.sqrt()).abs() < 1e-15);
        let w: Complex<Dd> = cplx(3.0, 4.0);
        assert_eq!(cabs(w).to_f64(), 5.0);
    }
}
