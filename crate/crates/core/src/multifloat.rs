//! Multi-word floating point: a value is an unevaluated sum of `N` doubles
//! `x[0] + x[1] + ... + x[N-1]` with decreasing, nonoverlapping magnitudes.
//!
//! Arithmetic is built on error-free transformations (`two_sum`, `two_prod`)
//! followed by renormalization, giving roughly `53·N` bits of precision with
//! the exponent range of `f64`.  `N = 2` uses the classic double-double
//! kernels; larger `N` use generic accumulation.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign};

use num_traits::{FromPrimitive, Num, One, ToPrimitive, Zero};

/// Largest supported limb count.
pub const MAX_LIMBS: usize = 8;

#[inline(always)]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline(always)]
pub fn fast_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[cfg(target_feature = "fma")]
#[inline(always)]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

#[cfg(not(target_feature = "fma"))]
#[inline(always)]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    #[inline(always)]
    fn split(a: f64) -> (f64, f64) {
        let c = 134217729.0 * a;
        let hi = c - (c - a);
        (hi, a - hi)
    }
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    (p, ((ah * bh - p) + ah * bl + al * bh) + al * bl)
}

/// Renormalize an arbitrary list of doubles (roughly ordered by decreasing
/// magnitude) into `N` nonoverlapping limbs.  The slice is used as scratch.
#[inline]
fn renormalize<const N: usize>(x: &mut [f64]) -> [f64; N] {
    let m = x.len();
    let mut out = [0.0; N];
    if m == 0 {
        return out;
    }
    let mut s = x[m - 1];
    for i in (0..m - 1).rev() {
        let (hi, lo) = two_sum(x[i], s);
        s = hi;
        x[i + 1] = lo;
    }
    x[0] = s;
    if !s.is_finite() {
        out[0] = s;
        return out;
    }
    let mut k = 0;
    let mut eps = x[0];
    let mut j = 1;
    while j < m && k < N {
        let (hi, lo) = two_sum(eps, x[j]);
        if lo != 0.0 {
            out[k] = hi;
            k += 1;
            eps = lo;
        } else {
            eps = hi;
        }
        j += 1;
    }
    if k < N {
        out[k] = eps;
    }
    out
}

/// Stable insertion sort by decreasing magnitude; inputs are nearly sorted.
#[inline]
fn sort_by_magnitude(x: &mut [f64]) {
    for i in 1..x.len() {
        let v = x[i];
        let av = v.abs();
        let mut j = i;
        while j > 0 && x[j - 1].abs() < av {
            x[j] = x[j - 1];
            j -= 1;
        }
        x[j] = v;
    }
}

#[derive(Clone, Copy, Debug)]
pub struct MultiFloat<const N: usize> {
    limbs: [f64; N],
}

pub type DoubleDouble = MultiFloat<2>;

impl<const N: usize> MultiFloat<N> {
    pub const ZERO: Self = Self { limbs: [0.0; N] };

    pub const fn from_limbs(limbs: [f64; N]) -> Self {
        Self { limbs }
    }

    /// Build from up to `MAX_LIMBS` leading limbs of a longer expansion.
    pub fn from_expansion(x: &[f64]) -> Self {
        let mut buf = [0.0; 2 * MAX_LIMBS];
        let n = x.len().min(2 * MAX_LIMBS);
        buf[..n].copy_from_slice(&x[..n]);
        Self { limbs: renormalize::<N>(&mut buf[..n]) }
    }

    pub const fn from_f64(x: f64) -> Self {
        let mut limbs = [0.0; N];
        limbs[0] = x;
        Self { limbs }
    }

    pub fn limbs(&self) -> &[f64; N] {
        &self.limbs
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.limbs[0]
    }

    /// Nearest double (sum of the limbs from the smallest up).
    pub fn to_f64(self) -> f64 {
        let mut s = 0.0;
        for &l in self.limbs.iter().rev() {
            s += l;
        }
        s
    }

    pub fn is_finite(self) -> bool {
        self.limbs[0].is_finite()
    }

    pub fn is_zero_value(self) -> bool {
        self.limbs[0] == 0.0
    }

    /// Unit roundoff of the format, 2^(1 - 53N) (bounded below by the
    /// smallest normal double's ulp).
    pub fn epsilon() -> Self {
        Self::from_f64(2f64.powi(1 - 53 * N as i32).max(f64::MIN_POSITIVE))
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.limbs[0] < 0.0 {
            -self
        } else {
            self
        }
    }

    /// Exact multiplication by 2^e (barring overflow or underflow).
    pub fn mul_pow2(self, e: i32) -> Self {
        let f = 2f64.powi(e);
        let mut limbs = self.limbs;
        for l in limbs.iter_mut() {
            *l *= f;
        }
        Self { limbs }
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Self {
        if N == 2 {
            let a = &self.limbs;
            let (p, e) = two_prod(a[0], b);
            let e = a[1].mul_add(b, e);
            let (s, t) = fast_two_sum(p, e);
            let mut limbs = [0.0; N];
            limbs[0] = s;
            limbs[1] = t;
            return Self { limbs };
        }
        let mut buf = [0.0; 2 * MAX_LIMBS];
        for i in 0..N {
            let (p, e) = two_prod(self.limbs[i], b);
            buf[2 * i] = p;
            buf[2 * i + 1] = e;
        }
        sort_by_magnitude(&mut buf[..2 * N]);
        Self { limbs: renormalize::<N>(&mut buf[..2 * N]) }
    }

    #[inline]
    pub fn add_f64(self, b: f64) -> Self {
        if N == 2 {
            let a = &self.limbs;
            let (s, e) = two_sum(a[0], b);
            let e = e + a[1];
            let (s, e) = fast_two_sum(s, e);
            let mut limbs = [0.0; N];
            limbs[0] = s;
            limbs[1] = e;
            return Self { limbs };
        }
        self + Self::from_f64(b)
    }

    #[inline]
    pub fn div_f64(self, b: f64) -> Self {
        if N == 2 {
            let a = &self.limbs;
            let q1 = a[0] / b;
            let (p, e) = two_prod(q1, b);
            let r = ((a[0] - p) - e) + a[1];
            let q2 = r / b;
            let (s, t) = fast_two_sum(q1, q2);
            let mut limbs = [0.0; N];
            limbs[0] = s;
            limbs[1] = t;
            return Self { limbs };
        }
        let mut q = [0.0; MAX_LIMBS + 1];
        let mut r = self;
        for qi in q.iter_mut().take(N + 1) {
            *qi = r.limbs[0] / b;
            r -= Self::from_f64(b).mul_f64(*qi);
        }
        Self { limbs: renormalize::<N>(&mut q[..N + 1]) }
    }

    #[inline]
    pub fn recip(self) -> Self {
        Self::from_f64(1.0) / self
    }

    #[inline]
    pub fn sqr(self) -> Self {
        self * self
    }

    pub fn sqrt(self) -> Self {
        let a0 = self.limbs[0];
        if a0 <= 0.0 {
            if a0 == 0.0 {
                return Self::ZERO;
            }
            return Self::from_f64(f64::NAN);
        }
        if !a0.is_finite() {
            return self;
        }
        // Newton on 1/sqrt(a), then one multiplication by a.
        let mut y = Self::from_f64(1.0 / a0.sqrt());
        let half = self.mul_f64(0.5);
        let mut bits = 52;
        while bits < 53 * N as i32 + 8 {
            // y <- y + y(1/2 - (a/2) y^2)
            let t = Self::from_f64(0.5) - half * y.sqr();
            y = y + y * t;
            bits *= 2;
        }
        let x = self * y;
        // One Newton step in the direct form for the final rounding.
        x + (self - x.sqr()) * y.mul_f64(0.5)
    }

    pub fn floor(self) -> Self {
        let mut limbs = [0.0; N];
        let f = self.limbs[0].floor();
        limbs[0] = f;
        if f != self.limbs[0] {
            return Self { limbs };
        }
        for i in 1..N {
            let fi = self.limbs[i].floor();
            limbs[i] = fi;
            if fi != self.limbs[i] {
                break;
            }
        }
        Self::from_expansion(&limbs)
    }

    pub fn round(self) -> Self {
        (self + Self::from_f64(0.5)).floor()
    }

    pub fn trunc(self) -> Self {
        if self.limbs[0] < 0.0 {
            -((-self).floor())
        } else {
            self.floor()
        }
    }

    /// e^x by reduction x = k ln2 + r, r scaled by 2^-m, Taylor for expm1
    /// and m squarings in expm1 form.
    pub fn exp(self) -> Self {
        let a0 = self.limbs[0];
        if a0.is_nan() {
            return self;
        }
        if a0 > 709.79 {
            return Self::from_f64(f64::INFINITY);
        }
        if a0 < -745.2 {
            return Self::ZERO;
        }
        let k = (a0 / std::f64::consts::LN_2).round();
        let r = self - Self::ln2().mul_f64(k);
        let m = if N <= 2 { 8 } else { 12 };
        let r = r.mul_pow2(-m);
        // expm1(r) by Taylor: sum_{n>=1} r^n / n!
        let tol = Self::epsilon().hi() * 1e-3;
        let mut term = r;
        let mut sum = r;
        let mut n = 1.0;
        loop {
            n += 1.0;
            term = (term * r).div_f64(n);
            sum += term;
            if term.hi().abs() <= tol * sum.hi().abs() || n > 200.0 {
                break;
            }
        }
        // (1 + u)^2 - 1 = 2u + u^2
        let mut u = sum;
        for _ in 0..m {
            u = u.mul_pow2(1) + u.sqr();
        }
        let v = u.add_f64(1.0);
        // 2^k may need two steps near the extremes of the exponent range.
        let k = k as i32;
        if k.abs() > 1000 {
            v.mul_pow2(k / 2).mul_pow2(k - k / 2)
        } else {
            v.mul_pow2(k)
        }
    }

    /// Natural logarithm by Newton iteration on exp.
    pub fn ln(self) -> Self {
        let a0 = self.limbs[0];
        if a0 <= 0.0 {
            return Self::from_f64(if a0 == 0.0 { f64::NEG_INFINITY } else { f64::NAN });
        }
        if !a0.is_finite() {
            return self;
        }
        let mut y = Self::from_f64(a0.ln());
        let mut bits = 50;
        loop {
            // y <- y + a e^{-y} - 1
            y = y + self * (-y).exp() - Self::from_f64(1.0);
            bits *= 2;
            if bits > 53 * N as i32 + 8 {
                break;
            }
        }
        y
    }

    /// (sin x, cos x): reduction modulo pi/2, Taylor on x/8, then three
    /// double-angle steps.
    pub fn sin_cos(self) -> (Self, Self) {
        let a0 = self.limbs[0];
        if !a0.is_finite() {
            let nan = Self::from_f64(f64::NAN);
            return (nan, nan);
        }
        let q = (a0 / std::f64::consts::FRAC_PI_2).round();
        let r = if q == 0.0 {
            self
        } else {
            // pi/2 carried with extra limbs so that the reduction stays exact
            // to the working precision for moderate |x|.
            let mut buf = [0.0; 2 * MAX_LIMBS + 2];
            let m = (N + 1).min(MAX_LIMBS);
            for i in 0..m {
                let (p, e) = two_prod(FRAC_PI_2_LIMBS[i], q);
                buf[2 * i] = -p;
                buf[2 * i + 1] = -e;
            }
            for i in 0..N {
                buf[2 * m + i] = self.limbs[i];
            }
            let len = 2 * m + N;
            sort_by_magnitude(&mut buf[..len]);
            Self { limbs: renormalize::<N>(&mut buf[..len]) }
        };
        let r8 = r.mul_pow2(-3);
        let r2 = r8.sqr();
        let tol = Self::epsilon().hi() * 1e-3;
        // sin
        let mut term = r8;
        let mut s = r8;
        let mut n = 1.0;
        loop {
            term = -(term * r2).div_f64((n + 1.0) * (n + 2.0));
            n += 2.0;
            s += term;
            if term.hi().abs() <= tol * s.hi().abs().max(f64::MIN_POSITIVE) || n > 400.0 {
                break;
            }
        }
        // 1 - cos as a series to keep the small quantity accurate
        let mut term = r2.mul_f64(0.5);
        let mut omc = term;
        let mut n = 2.0;
        loop {
            term = -(term * r2).div_f64((n + 1.0) * (n + 2.0));
            n += 2.0;
            omc += term;
            if term.hi().abs() <= tol * omc.hi().abs().max(f64::MIN_POSITIVE) || n > 400.0 {
                break;
            }
        }
        // double angle: sin 2x = 2 s c, 1 - cos 2x = 2 s^2
        let one = Self::from_f64(1.0);
        for _ in 0..3 {
            let c = one - omc;
            let s2 = (s * c).mul_pow2(1);
            omc = s.sqr().mul_pow2(1);
            s = s2;
        }
        let c = one - omc;
        match (q as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    pub fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { self.recip() } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Self::from_f64(1.0);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base.sqr();
            e >>= 1;
        }
        acc
    }

    pub fn pi() -> Self {
        Self::from_expansion(&PI_LIMBS[..N.min(MAX_LIMBS)])
    }

    pub fn ln2() -> Self {
        Self::from_expansion(&LN2_LIMBS[..N.min(MAX_LIMBS)])
    }

    pub fn sqrt_pi() -> Self {
        Self::from_expansion(&SQRT_PI_LIMBS[..N.min(MAX_LIMBS)])
    }

    pub fn frac_1_sqrt_pi() -> Self {
        Self::from_expansion(&FRAC_1_SQRT_PI_LIMBS[..N.min(MAX_LIMBS)])
    }

    /// Convert to another limb count (truncating or zero-extending).
    pub fn convert<const M: usize>(self) -> MultiFloat<M> {
        MultiFloat::<M>::from_expansion(&self.limbs)
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(self, digits: usize) -> String {
        let a0 = self.limbs[0];
        if !a0.is_finite() {
            return format!("{a0}");
        }
        if a0 == 0.0 {
            return "0".to_string();
        }
        let neg = a0 < 0.0;
        let mut x = self.abs();
        let mut e10 = a0.abs().log10().floor() as i32;
        let ten = Self::from_f64(10.0);
        x = x / ten.powi(e10);
        if x.hi() >= 10.0 {
            x = x.div_f64(10.0);
            e10 += 1;
        } else if x.hi() < 1.0 {
            x = x.mul_f64(10.0);
            e10 -= 1;
        }
        let mut ds = Vec::with_capacity(digits + 1);
        for _ in 0..=digits {
            let d = x.floor().to_f64().clamp(0.0, 9.0);
            ds.push(d as u8);
            x = (x - Self::from_f64(d)).mul_f64(10.0);
        }
        if ds[digits] >= 5 {
            let mut i = digits;
            loop {
                if i == 0 {
                    ds.insert(0, 1);
                    e10 += 1;
                    break;
                }
                i -= 1;
                if ds[i] == 9 {
                    ds[i] = 0;
                } else {
                    ds[i] += 1;
                    break;
                }
            }
        }
        ds.truncate(digits);
        let mut s = String::new();
        if neg {
            s.push('-');
        }
        s.push((b'0' + ds[0]) as char);
        if digits > 1 {
            s.push('.');
            for d in &ds[1..] {
                s.push((b'0' + d) as char);
            }
        }
        s.push_str(&format!("e{e10}"));
        s
    }

    /// Parse a decimal literal such as `-1.25e-3` exactly up to the working
    /// precision (digits are accumulated, then scaled by a power of ten).
    pub fn parse_decimal(s: &str) -> Option<Self> {
        let s = s.trim();
        let (neg, body) = match s.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (mant, exp) = match body.find(['e', 'E']) {
            Some(i) => (&body[..i], body[i + 1..].parse::<i32>().ok()?),
            None => (body, 0),
        };
        let mut acc = Self::ZERO;
        let mut scale = exp;
        let mut seen_dot = false;
        let mut any = false;
        for c in mant.chars() {
            match c {
                '0'..='9' => {
                    acc = acc.mul_f64(10.0).add_f64((c as u8 - b'0') as f64);
                    if seen_dot {
                        scale -= 1;
                    }
                    any = true;
                }
                '.' if !seen_dot => seen_dot = true,
                _ => return None,
            }
        }
        if !any {
            return None;
        }
        let p = Self::from_f64(10.0).powi(scale.abs());
        let v = if scale >= 0 { acc * p } else { acc / p };
        Some(if neg { -v } else { v })
    }
}

impl<const N: usize> Default for MultiFloat<N> {
    fn default() -> Self {
        Self::ZERO
    }
}

impl<const N: usize> From<f64> for MultiFloat<N> {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl<const N: usize> Neg for MultiFloat<N> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        let mut limbs = self.limbs;
        for l in limbs.iter_mut() {
            *l = -*l;
        }
        Self { limbs }
    }
}

impl<const N: usize> Add for MultiFloat<N> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        let a = &self.limbs;
        let b = &rhs.limbs;
        if N == 2 {
            let (s1, s2) = two_sum(a[0], b[0]);
            let (t1, t2) = two_sum(a[1], b[1]);
            let (s1, s2) = fast_two_sum(s1, s2 + t1);
            let (s1, s2) = fast_two_sum(s1, s2 + t2);
            let mut limbs = [0.0; N];
            limbs[0] = s1;
            limbs[1] = s2;
            return Self { limbs };
        }
        // merge by magnitude
        let mut buf = [0.0; 2 * MAX_LIMBS];
        let (mut i, mut j, mut k) = (0, 0, 0);
        while i < N && j < N {
            if a[i].abs() >= b[j].abs() {
                buf[k] = a[i];
                i += 1;
            } else {
                buf[k] = b[j];
                j += 1;
            }
            k += 1;
        }
        while i < N {
            buf[k] = a[i];
            i += 1;
            k += 1;
        }
        while j < N {
            buf[k] = b[j];
            j += 1;
            k += 1;
        }
        Self { limbs: renormalize::<N>(&mut buf[..2 * N]) }
    }
}

impl<const N: usize> Sub for MultiFloat<N> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<const N: usize> Mul for MultiFloat<N> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        let a = &self.limbs;
        let b = &rhs.limbs;
        if N == 2 {
            let (p, e) = two_prod(a[0], b[0]);
            let e = e + (a[0] * b[1] + a[1] * b[0]);
            let (s, t) = fast_two_sum(p, e);
            let mut limbs = [0.0; N];
            limbs[0] = s;
            limbs[1] = t;
            return Self { limbs };
        }
        // Level-by-level accumulation: products a_i b_j with i + j = l are
        // summed with two_sum and their rounding errors carried to level
        // l + 1; level N is summed plainly.  Level l carries (l + 1)² terms.
        let mut out = [0.0; MAX_LIMBS + 1];
        let mut bufs = [[0.0; MAX_LIMBS * MAX_LIMBS]; 2];
        let mut nc = 0;
        for level in 0..N {
            let [carry, next] = &mut bufs;
            let (carry, next) = if level % 2 == 0 { (&*carry, next) } else { (&*next, carry) };
            let mut nn = 0;
            let (mut s, e) = two_prod(a[0], b[level]);
            next[nn] = e;
            nn += 1;
            for i in 1..=level {
                let (p, e) = two_prod(a[i], b[level - i]);
                next[nn] = e;
                nn += 1;
                let (t, r) = two_sum(s, p);
                s = t;
                next[nn] = r;
                nn += 1;
            }
            let mut tail = 0.0;
            for &c in &carry[..nc] {
                let (t, r) = two_sum(s, c);
                s = t;
                if level + 1 < N {
                    next[nn] = r;
                    nn += 1;
                } else {
                    tail += r;
                }
            }
            out[level] = s;
            if level + 1 < N {
                nc = nn;
            } else {
                tail += next[..nn].iter().sum::<f64>();
                for i in 1..N {
                    tail += a[i] * b[N - i];
                }
                out[N] = tail;
            }
        }
        Self { limbs: renormalize::<N>(&mut out[..N + 1]) }
    }
}

impl<const N: usize> Div for MultiFloat<N> {
    type Output = Self;
    #[inline]
    fn div(self, rhs: Self) -> Self {
        let b0 = rhs.limbs[0];
        if N == 2 {
            let q1 = self.limbs[0] / b0;
            let r = self - rhs.mul_f64(q1);
            let q2 = r.limbs[0] / b0;
            let r = r - rhs.mul_f64(q2);
            let q3 = r.limbs[0] / b0;
            let (q1, q2) = fast_two_sum(q1, q2);
            return Self::from_limbs_2(q1, q2).add_f64(q3);
        }
        let mut q = [0.0; MAX_LIMBS + 1];
        let mut r = self;
        for qi in q.iter_mut().take(N + 1) {
            *qi = r.limbs[0] / b0;
            r = r - rhs.mul_f64(*qi);
        }
        if !q[0].is_finite() {
            return Self::from_f64(q[0]);
        }
        Self { limbs: renormalize::<N>(&mut q[..N + 1]) }
    }
}

impl<const N: usize> MultiFloat<N> {
    #[inline(always)]
    fn from_limbs_2(a: f64, b: f64) -> Self {
        let mut limbs = [0.0; N];
        limbs[0] = a;
        if N > 1 {
            limbs[1] = b;
        }
        Self { limbs }
    }
}

impl<const N: usize> Rem for MultiFloat<N> {
    type Output = Self;
    fn rem(self, rhs: Self) -> Self {
        self - (self / rhs).trunc() * rhs
    }
}

macro_rules! assign_ops {
    ($($tr:ident $m:ident $op:tt),*) => {$(
        impl<const N: usize> $tr for MultiFloat<N> {
            #[inline]
            fn $m(&mut self, rhs: Self) {
                *self = *self $op rhs;
            }
        }
    )*};
}
assign_ops!(AddAssign add_assign +, SubAssign sub_assign -, MulAssign mul_assign *, DivAssign div_assign /, RemAssign rem_assign %);

impl<const N: usize> PartialEq for MultiFloat<N> {
    fn eq(&self, other: &Self) -> bool {
        self.limbs == other.limbs || (*self - *other).limbs[0] == 0.0
    }
}

impl<const N: usize> PartialOrd for MultiFloat<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.limbs[0] != other.limbs[0] && (self.limbs[0] - other.limbs[0]).abs() > 4.0 * f64::EPSILON * self.limbs[0].abs() {
            return self.limbs[0].partial_cmp(&other.limbs[0]);
        }
        (*self - *other).limbs[0].partial_cmp(&0.0)
    }
}

impl<const N: usize> Zero for MultiFloat<N> {
    fn zero() -> Self {
        Self::ZERO
    }
    fn is_zero(&self) -> bool {
        self.limbs[0] == 0.0
    }
}

impl<const N: usize> One for MultiFloat<N> {
    fn one() -> Self {
        Self::from_f64(1.0)
    }
}

impl<const N: usize> Num for MultiFloat<N> {
    type FromStrRadixErr = ParseMultiFloatError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        if radix != 10 {
            return Err(ParseMultiFloatError);
        }
        Self::parse_decimal(s).ok_or(ParseMultiFloatError)
    }
}

impl<const N: usize> std::str::FromStr for MultiFloat<N> {
    type Err = ParseMultiFloatError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_decimal(s).ok_or(ParseMultiFloatError)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParseMultiFloatError;

impl fmt::Display for ParseMultiFloatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("invalid decimal literal")
    }
}

impl std::error::Error for ParseMultiFloatError {}

impl<const N: usize> FromPrimitive for MultiFloat<N> {
    fn from_i64(n: i64) -> Option<Self> {
        let hi = n as f64;
        let lo = (n - hi as i64) as f64;
        Some(Self::from_limbs_2(hi, lo))
    }
    fn from_u64(n: u64) -> Option<Self> {
        let hi = n as f64;
        let lo = (n as i128 - hi as i128) as f64;
        Some(Self::from_limbs_2(hi, lo))
    }
    fn from_f64(x: f64) -> Option<Self> {
        Some(Self::from_f64(x))
    }
}

impl<const N: usize> ToPrimitive for MultiFloat<N> {
    fn to_i64(&self) -> Option<i64> {
        MultiFloat::to_f64(*self).to_i64()
    }
    fn to_u64(&self) -> Option<u64> {
        MultiFloat::to_f64(*self).to_u64()
    }
    fn to_f64(&self) -> Option<f64> {
        Some(MultiFloat::to_f64(*self))
    }
}

impl<const N: usize> fmt::Display for MultiFloat<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or((N * 16).min(120));
        f.write_str(&self.to_decimal(digits.max(1)))
    }
}

const PI_LIMBS: [f64; 8] = [
    std::f64::consts::PI,
    1.2246467991473532e-16,
    -2.9947698097183397e-33,
    1.1124542208633653e-49,
    5.672231979640316e-66,
    1.7449862161352486e-83,
    6.02937273224954e-100,
    1.91012354687999e-116,
];
const LN2_LIMBS: [f64; 8] = [
    std::f64::consts::LN_2,
    2.3190468138462996e-17,
    5.707708438416212e-34,
    -3.5824322106018114e-50,
    -1.352169675798863e-66,
    6.080638740240814e-83,
    2.8955024332347147e-99,
    2.351386712145641e-116,
];
const SQRT_PI_LIMBS: [f64; 8] = [
    1.772453850905516,
    -7.666586499825799e-17,
    -1.3058334907945429e-33,
    -2.6110142087827155e-50,
    -1.6352267283224561e-66,
    -1.3199089689519954e-84,
    1.0330637554893316e-100,
    -1.9509811333204757e-117,
];
const FRAC_1_SQRT_PI_LIMBS: [f64; 8] = [
    0.5641895835477563,
    7.66772980658294e-18,
    -2.382842298346843e-34,
    -1.0038973308276315e-50,
    -5.637849999359878e-67,
    1.4912531145297028e-83,
    -4.556870610181964e-100,
    -6.630145216329014e-117,
];
const FRAC_PI_2_LIMBS: [f64; 8] = [
    std::f64::consts::FRAC_PI_2,
    6.123233995736766e-17,
    -1.4973849048591698e-33,
    5.562271104316826e-50,
    2.836115989820158e-66,
    8.724931080676243e-84,
    3.01468636612477e-100,
    9.55061773439995e-117,
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{multi_to_rational, rational_to_f64};
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn rel_err<const N: usize>(got: MultiFloat<N>, want: &BigRational) -> f64 {
        let g = multi_to_rational(got).unwrap();
        if want.is_zero() {
            return rational_to_f64(&g).abs();
        }
        rational_to_f64(&((g - want) / want)).abs()
    }

    fn exact<const N: usize>(x: MultiFloat<N>) -> BigRational {
        multi_to_rational(x).unwrap()
    }

    fn tol(n: usize) -> f64 {
        2f64.powi(-(53 * n as i32) + 6)
    }

    fn nonoverlapping<const N: usize>(x: MultiFloat<N>) -> bool {
        x.limbs.windows(2).all(|w| w[1] == 0.0 || w[1].abs() <= w[0].abs() * 2f64.powi(-50))
    }

    fn multi<const N: usize>() -> impl Strategy<Value = MultiFloat<N>> {
        (-1.0e3f64..1.0e3, prop::array::uniform8(-1.0f64..1.0), -40i32..40).prop_map(|(a, t, e)| {
            let a = if a == 0.0 { 1.0 } else { a } * 2f64.powi(e);
            let mut limbs = [0.0; 8];
            limbs[0] = a;
            for i in 1..8 {
                limbs[i] = limbs[i - 1] * t[i] * 2f64.powi(-53);
            }
            MultiFloat::<N>::from_expansion(&limbs)
        })
    }

    macro_rules! arith_props {
        ($modname:ident, $n:literal) => {
            mod $modname {
                use super::*;
                proptest! {
                    #[test]
                    fn add_sub_mul_div_match_exact(a in multi::<$n>(), b in multi::<$n>()) {
                        let (ea, eb) = (exact(a), exact(b));
                        let s = a + b;
                        let scale = rational_to_f64(&ea).abs().max(rational_to_f64(&eb).abs());
                        let abs_err = rational_to_f64(&(exact(s) - (&ea + &eb))).abs();
                        prop_assert!(abs_err <= tol($n) * scale, "add {abs_err:e}");
                        prop_assert!(nonoverlapping(s));
                        let d = a - b;
                        let abs_err = rational_to_f64(&(exact(d) - (&ea - &eb))).abs();
                        prop_assert!(abs_err <= tol($n) * scale, "sub {abs_err:e}");
                        let p = a * b;
                        prop_assert!(rel_err(p, &(&ea * &eb)) <= tol($n), "mul {:e}", rel_err(p, &(&ea * &eb)));
                        prop_assert!(nonoverlapping(p));
                        let q = a / b;
                        prop_assert!(rel_err(q, &(&ea / &eb)) <= tol($n), "div {:e}", rel_err(q, &(&ea / &eb)));
                    }

                    #[test]
                    fn scalar_ops_match_exact(a in multi::<$n>(), b in -1.0e6f64..1.0e6) {
                        prop_assume!(b != 0.0);
                        let (ea, eb) = (exact(a), BigRational::from_float(b).unwrap());
                        prop_assert!(rel_err(a.mul_f64(b), &(&ea * &eb)) <= tol($n));
                        prop_assert!(rel_err(a.div_f64(b), &(&ea / &eb)) <= tol($n));
                    }

                    #[test]
                    fn sqrt_squares_back(a in multi::<$n>()) {
                        let a = a.abs();
                        let r = a.sqrt();
                        prop_assert!(rel_err(r * r, &exact(a)) <= 4.0 * tol($n));
                    }
                }
            }
        };
    }

    arith_props!(n2, 2);
    arith_props!(n3, 3);
    arith_props!(n4, 4);
    arith_props!(n8, 8);

    fn check_digits<const N: usize>(x: MultiFloat<N>, decimal: &str, rel: f64) {
        let want = MultiFloat::<8>::parse_decimal(decimal).unwrap();
        let got: MultiFloat<8> = x.convert();
        let err = ((got - want) / want).abs().to_f64();
        assert!(err <= rel, "{} vs {decimal}: {err:e}", x.to_decimal(40));
    }

    const EXP_1: &str = "2.718281828459045235360287471352662497757247093699959574966967627724077";
    const EXP_M7_5: &str = "0.0005530843701478335831020000885303571978113365824401972528887275428448024";
    const SIN_1: &str = "0.8414709848078965066525023216302989996225630607983710656727517099919104";
    const COS_1: &str = "0.5403023058681397174009366074429766037323104206179222276700972553811004";
    const SIN_100: &str = "-0.5063656411097587936565576104597854320650327212906573234433924735943579";
    const COS_100: &str = "0.8623188722876839341019385139508425355100840085355108292801621126927211";
    const LN_10: &str = "2.302585092994045684017991454684364207601101488628772976033327900967573";
    const SQRT_2: &str = "1.414213562373095048801688724209698078569671875376948073176679737990732";

    fn transcendental_suite<const N: usize>() {
        let r = 64.0 * 2f64.powi(-53 * N as i32);
        let r = r.max(1e-67);
        check_digits(MultiFloat::<N>::from_f64(1.0).exp(), EXP_1, r);
        check_digits(MultiFloat::<N>::from_f64(-7.5).exp(), EXP_M7_5, r);
        let (s, c) = MultiFloat::<N>::from_f64(1.0).sin_cos();
        check_digits(s, SIN_1, r);
        check_digits(c, COS_1, r);
        let (s, c) = MultiFloat::<N>::from_f64(100.0).sin_cos();
        check_digits(s, SIN_100, 100.0 * r);
        check_digits(c, COS_100, 100.0 * r);
        check_digits(MultiFloat::<N>::from_f64(10.0).ln(), LN_10, r);
        check_digits(MultiFloat::<N>::from_f64(2.0).sqrt(), SQRT_2, r);
    }

    #[test]
    fn transcendentals_match_reference_digits() {
        transcendental_suite::<2>();
        transcendental_suite::<3>();
        transcendental_suite::<4>();
    }

    #[test]
    fn decimal_roundtrip() {
        let x = MultiFloat::<4>::parse_decimal(SQRT_2).unwrap();
        assert_eq!(&x.to_decimal(50)[..50], &SQRT_2[..50]);
        assert_eq!(MultiFloat::<2>::parse_decimal("-1.5e-3").unwrap().to_f64(), -1.5e-3);
    }

    #[test]
    fn ordering_and_rounding() {
        let one = MultiFloat::<3>::from_f64(1.0);
        let tiny = MultiFloat::<3>::from_f64(1e-40);
        assert!(one + tiny > one);
        assert!(one - tiny < one);
        assert_eq!((one + tiny).floor(), one);
        assert_eq!((one - tiny).floor(), MultiFloat::ZERO);
        assert_eq!(MultiFloat::<2>::from_f64(-2.5).round().to_f64(), -2.0);
    }

    #[test]
    fn overflow_limits() {
        assert!(!MultiFloat::<2>::from_f64(800.0).exp().is_finite());
        assert_eq!(MultiFloat::<2>::from_f64(-800.0).exp().to_f64(), 0.0);
        let big = MultiFloat::<2>::from_f64(709.0).exp();
        assert!((big.to_f64() / 709f64.exp() - 1.0).abs() < 1e-14);
    }
}
