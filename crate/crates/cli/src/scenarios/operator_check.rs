//! Operator calculus on truncated Taylor series: the propagator identity
//! U(t,x)e^{ikξ}|_{ξ=0} = Ψ(t,x;k), the difference quotient against a
//! binomial expansion, and the growth and boundedness estimates over a
//! seeded random suite.
//!
//! Rows: `check,case,potential,strength,t,x,k,value,limit`; a row passes
//! when value ≤ limit.  `check` is one of `identity`,
//! `difference_quotient` (double-double), `growth_bound`,
//! `operator_bound` and `delta_plus_bound` (ratios to the bound).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::ThreadPool;
use superosc_core::a1_operator::{
    apply_operator, bound_constant_delta_plus, derivative_growth_bound, difference_quotient, propagator_apply,
    symbol_phi_delta, EntireFunctionSeries, OperatorSymbol, DEFAULT_SERIES_LEN, DEFAULT_SYMBOL_TERMS,
};
use superosc_core::evolution::{psi, PotentialKind, PotentialSpec, SpaceTimePoint};
use superosc_core::scalar::cabs;
use superosc_core::superosc::{FourierSum, FourierTerm};
use superosc_core::{Complex, Dd};

use super::{max_of, par_map, rows_with, Computed};
use crate::config::ExperimentConfig;
use crate::report::Gate;
use crate::table::{Artifact, Cell, Table};
use crate::CliError;

const HEADER: [&str; 9] = ["check", "case", "potential", "strength", "t", "x", "k", "value", "limit"];
pub const IDENTITY_T: [f64; 2] = [0.5, 1.0];
pub const IDENTITY_X: [f64; 4] = [-1.0, -0.5, 0.5, 1.0];
pub const IDENTITY_K: [f64; 3] = [0.0, 1.0, 2.0];
const CHECKS: [&str; 5] = ["identity", "difference_quotient", "growth_bound", "operator_bound", "delta_plus_bound"];
/// Length of the e^{ikξ} series in the growth-bound check (n! stays finite).
const GROWTH_LEN: usize = 80;

struct Settings {
    cases: usize,
    m_terms: usize,
    series_len: usize,
    b: f64,
    tolerance: f64,
    quotient_tolerance: f64,
}

fn settings(cfg: &ExperimentConfig) -> Settings {
    let p = &cfg.parameters;
    Settings {
        cases: p.cases.unwrap_or(50),
        m_terms: p.m_terms.unwrap_or(DEFAULT_SYMBOL_TERMS),
        series_len: p.series_len.unwrap_or(DEFAULT_SERIES_LEN),
        b: p.b.unwrap_or(1.5),
        tolerance: p.tolerance.unwrap_or(1e-6),
        quotient_tolerance: p.quotient_tolerance.unwrap_or(1e-11),
    }
}

fn kind_name(kind: PotentialKind) -> &'static str {
    match kind {
        PotentialKind::Delta => "delta",
        PotentialKind::DeltaPrime => "delta_prime",
    }
}

/// Randomized inputs, drawn up front so results do not depend on scheduling.
enum Case {
    Identity { pot: PotentialSpec, t: f64, x: f64, k: f64 },
    Quotient { coeffs: Vec<(f64, f64)>, a: (f64, f64) },
    Growth { k: f64 },
    Operator { symbol: Vec<(f64, f64)>, terms: Vec<(f64, f64, f64)> },
    DeltaPlus { terms: Vec<(f64, f64, f64)>, t: f64, x: f64, alpha: f64 },
}

fn random_terms(rng: &mut ChaCha8Rng, b: f64) -> Vec<(f64, f64, f64)> {
    let n = rng.gen_range(1..=5);
    (0..n).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-b..=b))).collect()
}

fn fourier(terms: &[(f64, f64, f64)]) -> Result<FourierSum<f64>, CliError> {
    Ok(FourierSum::new(terms.iter().map(|&(re, im, k)| FourierTerm { c: Complex::new(re, im), k }).collect())?)
}

fn cases(cfg: &ExperimentConfig, s: &Settings) -> Result<Vec<Case>, CliError> {
    let pots = match cfg.parameters.potential_spec()? {
        Some(p) => vec![p],
        None => vec![
            PotentialSpec::delta(1.0)?,
            PotentialSpec::delta(-1.0)?,
            PotentialSpec::delta_prime(1.0)?,
            PotentialSpec::delta_prime(-1.0)?,
        ],
    };
    let mut out = Vec::new();
    for &pot in &pots {
        for t in IDENTITY_T {
            for x in IDENTITY_X {
                for k in IDENTITY_K {
                    out.push(Case::Identity { pot, t, x, k });
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..s.cases {
        let degree = rng.gen_range(0..=12);
        let coeffs = (0..=degree).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let (r, th) = (rng.gen_range(0.05..=2.0), rng.gen_range(0.0..std::f64::consts::TAU));
        out.push(Case::Quotient { coeffs, a: (r * f64::cos(th), r * f64::sin(th)) });
    }
    for _ in 0..s.cases {
        out.push(Case::Growth { k: rng.gen_range(-5.0..=5.0) });
    }
    for _ in 0..s.cases {
        let len = rng.gen_range(1..20);
        let symbol = (0..len).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        out.push(Case::Operator { symbol, terms: random_terms(&mut rng, s.b) });
    }
    let fixed_alpha = pots.iter().find(|p| p.kind() == PotentialKind::Delta && pots.len() == 1).map(|p| p.strength());
    for _ in 0..s.cases {
        let terms = random_terms(&mut rng, s.b);
        let (t, x) = (rng.gen_range(0.3..=2.0), rng.gen_range(-3.0..=3.0));
        let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        out.push(Case::DeltaPlus { terms, t, x, alpha: fixed_alpha.unwrap_or(sign) });
    }
    Ok(out)
}

/// Largest |g_i − ((F(z+a) − F(z))/a)_i| with F(z+a) expanded binomially.
fn quotient_error(coeffs: &[(f64, f64)], a: (f64, f64), len: usize) -> Result<f64, CliError> {
    let c = |re: f64, im: f64| Complex::new(Dd::from_f64(re), Dd::from_f64(im));
    let f: Vec<Complex<Dd>> = coeffs.iter().map(|&(x, y)| c(x, y)).collect();
    let a = c(a.0, a.1);
    let g = difference_quotient(&EntireFunctionSeries::from_coeffs(f.clone())?, a, len)?;
    let mut shifted = vec![c(0.0, 0.0); len];
    for (n, fnc) in f.iter().enumerate() {
        let mut binom = 1.0;
        for (i, sh) in shifted.iter_mut().enumerate().take(n + 1) {
            *sh += fnc * a.powu((n - i) as u32) * Dd::from_f64(binom);
            binom = binom * (n - i) as f64 / (i + 1) as f64;
        }
    }
    let mut worst = 0.0f64;
    for i in 0..len {
        let want = (shifted[i] - f[i]) / a;
        worst = worst.max(cabs(g.coeffs()[i] - want).to_f64());
    }
    Ok(worst)
}

fn evaluate(case: &Case, s: &Settings) -> Result<Vec<Cell>, CliError> {
    let row = |check: &str, pot: Option<&PotentialSpec>, t: Option<f64>, x: Option<f64>, k: Option<f64>, value: f64, limit: f64| {
        vec![
            Cell::from(check),
            Cell::Empty,
            pot.map_or(Cell::Empty, |p| kind_name(p.kind()).into()),
            pot.map(|p| p.strength()).into(),
            t.into(),
            x.into(),
            k.into(),
            value.into(),
            limit.into(),
        ]
    };
    Ok(match case {
        Case::Identity { pot, t, x, k } => {
            let f = EntireFunctionSeries::exp_ik(*k, s.series_len)?;
            let v = propagator_apply(*t, *x, pot, &f, s.m_terms)?;
            let want = psi(&SpaceTimePoint::new(*t, *x)?, *k, pot)?;
            row("identity", Some(pot), Some(*t), Some(*x), Some(*k), (v - want).norm(), s.tolerance)
        }
        Case::Quotient { coeffs, a } => {
            let err = quotient_error(coeffs, *a, coeffs.len())?;
            row("difference_quotient", None, None, None, None, err, s.quotient_tolerance)
        }
        Case::Growth { k } => {
            let f = EntireFunctionSeries::exp_ik(*k, GROWTH_LEN)?;
            let bound = f.bound().ok_or_else(|| CliError::Artifact("e^{ikξ} series lost its bound".into()))?;
            let mut fact = 1.0;
            let mut worst = 0.0f64;
            for (n, c) in f.coeffs().iter().enumerate() {
                if n > 0 {
                    fact *= n as f64;
                }
                worst = worst.max(c.norm() * fact / (derivative_growth_bound(bound, n)? + 1e-12));
            }
            row("growth_bound", None, None, None, Some(*k), worst, 1.0)
        }
        Case::Operator { symbol, terms } => {
            let sym = OperatorSymbol::new(symbol.iter().map(|&(x, y)| Complex::new(x, y)).collect(), "random")?;
            let f = EntireFunctionSeries::from_fourier_sum(&fourier(terms)?, s.series_len)?;
            let b = f.bound().ok_or_else(|| CliError::Artifact("Fourier series lost its bound".into()))?;
            let v = apply_operator(&sym, &f, 1)?.coeffs()[0];
            let cap = b.a() * sym.s_b(std::f64::consts::E * b.b())?;
            row("operator_bound", None, None, None, None, v.norm() / (cap * (1.0 + 1e-12) + 1e-14), 1.0)
        }
        Case::DeltaPlus { terms, t, x, alpha } => {
            let f = EntireFunctionSeries::<Dd>::from_fourier_sum(&fourier(terms)?.convert(), s.series_len)?;
            let b = f.bound().ok_or_else(|| CliError::Artifact("Fourier series lost its bound".into()))?;
            let sym = symbol_phi_delta(Dd::from_f64(*t), Dd::from_f64(*x), Dd::from_f64(*alpha), s.m_terms)?;
            let v = cabs(apply_operator(&sym, &f, 1)?.coeffs()[0]).to_f64();
            let cap = b.a() * bound_constant_delta_plus(std::f64::consts::E * b.b(), *t, *x, *alpha)?;
            let pot = PotentialSpec::delta(*alpha)?;
            row("delta_plus_bound", Some(&pot), Some(*t), Some(*x), None, v / cap, 1.0)
        }
    })
}

pub fn compute(cfg: &ExperimentConfig, pool: &ThreadPool) -> Result<Computed, CliError> {
    let s = settings(cfg);
    let all = cases(cfg, &s)?;
    let rows = par_map(pool, &all, |c| evaluate(c, &s))?;
    let mut table = Table::new(&HEADER);
    let mut counters = [0usize; CHECKS.len()];
    for mut r in rows {
        let check = match &r[0] {
            Cell::Text(t) => CHECKS.iter().position(|c| c == t).unwrap_or(0),
            _ => 0,
        };
        r[1] = counters[check].into();
        counters[check] += 1;
        table.push(r);
    }
    Ok(Computed::table(table))
}

pub fn judge(cfg: &ExperimentConfig, artifact: &Artifact) -> Result<(Vec<Gate>, serde_json::Value), CliError> {
    let s = settings(cfg);
    let mut gates = Vec::new();
    let mut summary = serde_json::Map::new();
    for check in CHECKS {
        let mut values = Vec::new();
        let mut violations = 0usize;
        for r in rows_with(artifact, check) {
            let (v, limit) = (r.num("value")?, r.num("limit")?);
            if !(v <= limit) {
                violations += 1;
            }
            values.push(v);
        }
        let expected = if check == "identity" { None } else { Some(s.cases) };
        let worst = max_of(values.iter().copied());
        match check {
            "identity" => gates.push(Gate::at_most("identity_max", worst, s.tolerance)),
            "difference_quotient" => gates.push(Gate::at_most("difference_quotient_max", worst, s.quotient_tolerance)),
            _ => gates.push(Gate::holds(format!("{check}_violations"), violations as f64, "== 0", violations == 0)),
        }
        if let Some(n) = expected {
            gates.push(Gate::holds(format!("{check}_cases"), values.len() as f64, format!("== {n}"), values.len() == n));
        } else {
            gates.push(Gate::holds("identity_cases", values.len() as f64, "> 0", !values.is_empty()));
        }
        summary.insert(check.into(), serde_json::json!({ "max": worst, "violations": violations, "count": values.len() }));
    }
    Ok((gates, serde_json::Value::Object(summary)))
}
