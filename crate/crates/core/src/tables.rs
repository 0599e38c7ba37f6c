//! Per-type coefficient tables computed once and shared.

use std::any::{Any, TypeId};
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::scalar::Real;

type Cache = RwLock<HashMap<(TypeId, &'static str, i32), Arc<dyn Any + Send + Sync>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn cached<T: Real>(name: &'static str, tag: i32, len: usize, build: impl FnOnce(usize) -> Vec<T>) -> Arc<Vec<T>> {
    let key = (TypeId::of::<T>(), name, tag);
    if let Some(hit) = cache().read().ok().and_then(|m| m.get(&key).cloned()) {
        if let Ok(v) = hit.downcast::<Vec<T>>() {
            if v.len() >= len {
                return v;
            }
        }
    }
    let built = Arc::new(build(len.max(64)));
    if let Ok(mut m) = cache().write() {
        m.insert(key, built.clone());
    }
    built
}

/// g_n 2^{en} / Γ(n/2 + 1) for n = 0..len.  The power-of-two scale keeps
/// the entries that matter for |z| ≈ 2^e inside the exponent range; the
/// ones that underflow to zero belong to negligible terms.
pub(crate) fn inv_gamma_half_scaled<T: Real>(len: usize, e: i32) -> Arc<Vec<T>> {
    cached::<T>("inv_gamma_half", e, len, |len| {
        let mut g = Vec::with_capacity(len);
        g.push(T::one());
        g.push((T::from_f64(2.0) / T::sqrt_pi()).mul_pow2(e));
        for n in 2..len {
            // Γ(n/2 + 1) = (n/2) Γ(n/2), so g_n = 2 g_{n-2} / n
            let v = g[n - 2].mul_pow2(2 * e + 1) / T::from_f64(n as f64);
            g.push(v);
        }
        g.truncate(len);
        g
    })
}

/// ln(1/Γ(n/2 + 1)) in double precision, for term-size estimates.
pub(crate) fn ln_inv_gamma_half(len: usize) -> Arc<Vec<f64>> {
    cached::<f64>("ln_inv_gamma_half", 0, len, |len| {
        let mut g = Vec::with_capacity(len);
        g.push(0.0);
        g.push((2.0 / std::f64::consts::PI.sqrt()).ln());
        for n in 2..len {
            let v = g[n - 2] + (2.0 / n as f64).ln();
            g.push(v);
        }
        g.truncate(len);
        g
    })
}
