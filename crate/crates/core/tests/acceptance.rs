//! Acceptance suite: one pass/fail line per criterion, with the measured
//! quantities indented underneath.  Exits nonzero if any criterion fails.

use std::f64::consts::{E, FRAC_PI_4, PI, TAU};
use std::time::Instant;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use superosc_core::a1_operator::{
    apply_operator, bound_constant_delta_plus, derivative_growth_bound, difference_quotient, propagator_apply,
    symbol_phi_delta, EntireFunctionSeries, OperatorSymbol, DEFAULT_SERIES_LEN, DEFAULT_SYMBOL_TERMS,
};
use superosc_core::evolution::{
    asymptotic, jump_residuals, pde_residual, psi, superposition_errors, PotentialKind, PotentialSpec, SpaceTimePoint,
};
use superosc_core::fd_oracle::{compare, FdGrid, PacketSpec};
use superosc_core::lambda::{lambda, lambda_derivative, lambda_series, LambdaEvalConfig};
use superosc_core::scalar::{cabs, cexp};
use superosc_core::superosc::{a1_distance, coefficients, default_grid, evaluate, FourierSum, FourierTerm, SuperoscSpec};
use superosc_core::{BigRational, Complex, Dd, MultiFloat, Qd, Result, Td};

/// One criterion's sub-checks.
#[derive(Default)]
struct Checks {
    lines: Vec<String>,
    ok: bool,
}

impl Checks {
    fn new() -> Self {
        Self { lines: Vec::new(), ok: true }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        self.ok &= ok;
        self.lines.push(format!("{} {}", if ok { "ok  " } else { "FAIL" }, what.into()));
    }

    fn note(&mut self, what: impl Into<String>) {
        self.lines.push(format!("info {}", what.into()));
    }
}

fn criterion(n: u32, title: &str, limit_s: f64, body: impl FnOnce(&mut Checks) -> Result<()>) -> bool {
    let start = Instant::now();
    let mut c = Checks::new();
    if let Err(e) = body(&mut c) {
        c.check(false, format!("computation error: {e}"));
    }
    let secs = start.elapsed().as_secs_f64();
    c.check(secs < limit_s, format!("runtime {secs:.1} s < {limit_s} s"));
    println!("criterion {n} [{}] {title} ({secs:.1} s)", if c.ok { "PASS" } else { "FAIL" });
    for l in &c.lines {
        println!("    {l}");
    }
    c.ok
}

fn samples(min: f64, max: f64, points: usize) -> Vec<f64> {
    (0..points).map(|i| min + (max - min) * i as f64 / (points - 1) as f64).collect()
}

/// Least-squares slope of ln y against ln x.
fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

fn variation(v: &[f64]) -> f64 {
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    hi / lo
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(", ")
}

fn cd(z: Complex<f64>) -> Complex<Dd> {
    Complex::new(Dd::from_f64(z.re), Dd::from_f64(z.im))
}

fn lambda_identities(c: &mut Checks) -> Result<()> {
    let cfg = LambdaEvalConfig::default();
    let dcfg = LambdaEvalConfig::for_type::<Dd>();
    let two_over_sqrt_pi = 2.0 / PI.sqrt();
    let mut points = Vec::with_capacity(1000);
    for i in 1..=25 {
        for j in 0..40 {
            points.push(Complex::from_polar(3.0 * i as f64 / 25.0, TAU * j as f64 / 40.0));
        }
    }
    // reflection: the direct series for Λ(−z) against the routed Λ(z)
    let mut refl = 0.0f64;
    // derivative: the closed form against a fourth-order difference of Λ in double-double
    let mut deriv = 0.0f64;
    let h = Dd::from_f64(1e-4);
    for &z in &points {
        let two_e = (z * z).exp() * 2.0;
        let r = lambda(z, &cfg)? + lambda_series(-z, &cfg)? - two_e;
        refl = refl.max(r.norm() / (1.0 + two_e.norm()));

        let zd = cd(z);
        let at = |s: f64| lambda(zd + Complex::new(h * Dd::from_f64(s), Dd::zero()), &dcfg);
        let num = (at(-2.0)? - at(2.0)? + (at(1.0)? - at(-1.0)?) * Dd::from_f64(8.0)) / (h * Dd::from_f64(12.0));
        let num = Complex::new(num.re.to_f64(), num.im.to_f64());
        let d = lambda_derivative(z, &cfg)?;
        let scale = 1.0 + (z * lambda(z, &cfg)? * 2.0).norm() + two_over_sqrt_pi;
        deriv = deriv.max((d - num).norm() / scale);
    }
    c.check(points.len() == 1000, format!("{} grid points with |z| ≤ 3", points.len()));
    c.check(refl <= 1e-12, format!("reflection residual max {refl:.2e} ≤ 1e-12"));
    c.check(deriv <= 1e-12, format!("derivative residual max {deriv:.2e} ≤ 1e-12"));

    // the central difference error falls by ≈ 4 per halving of h
    let mut worst_ratio: f64 = 4.0;
    for z in [Complex::new(0.5, 0.5), Complex::new(-1.0, 2.0), Complex::new(2.5, -0.3)] {
        let zd = cd(z);
        let exact = lambda_derivative(zd, &dcfg)?;
        let mut errs = Vec::new();
        for j in 0..5 {
            let h = Dd::from_f64(1e-2 / f64::powi(2.0, j));
            let hz = Complex::new(h, Dd::zero());
            let d = (lambda(zd + hz, &dcfg)? - lambda(zd - hz, &dcfg)?) / (h * Dd::from_f64(2.0));
            errs.push(cabs(d - exact).to_f64());
        }
        for w in errs.windows(2) {
            let r = w[0] / w[1];
            if (r - 4.0).abs() > (worst_ratio - 4.0).abs() {
                worst_ratio = r;
            }
        }
    }
    c.check((worst_ratio - 4.0).abs() < 0.4, format!("central-difference halving ratio furthest from 4: {worst_ratio:.4}"));

    let radii = [10.0, 30.0, 100.0];
    for (name, theta) in [("0", 0.0), ("π/4", FRAC_PI_4), ("−π/4", -FRAC_PI_4)] {
        let mut scaled = Vec::new();
        for r in radii {
            let z = Complex::from_polar(r, theta);
            let lead = (z * PI.sqrt()).inv();
            scaled.push(r * r * (lambda(z, &cfg)? - lead).norm());
        }
        let v = variation(&scaled);
        c.check(v < 3.0, format!("ray arg z = {name}: |z|²·|Λ − 1/(√π z)| = [{}], variation {v:.2} < 3", fmt_list(&scaled)));
    }
    Ok(())
}

const PARAM_T: [f64; 3] = [0.1, 1.0, 10.0];
const PARAM_K: [f64; 3] = [0.5, 2.0, 5.0];
const PARAM_STRENGTH: [f64; 4] = [-2.0, -0.5, 0.5, 2.0];

fn jump_conditions(c: &mut Checks) -> Result<()> {
    for kind in [PotentialKind::Delta, PotentialKind::DeltaPrime] {
        let (mut first, mut second, mut count) = (0.0f64, 0.0f64, 0);
        for s in PARAM_STRENGTH {
            let pot = PotentialSpec::new(kind, s)?;
            for t in PARAM_T {
                for k in PARAM_K {
                    let (a, b) = jump_residuals(t, k, &pot, 1e-4)?;
                    first = first.max(a);
                    second = second.max(b);
                    count += 1;
                }
            }
        }
        let names = match kind {
            PotentialKind::Delta => ("continuity", "derivative jump"),
            PotentialKind::DeltaPrime => ("derivative continuity", "value jump"),
        };
        c.check(count == 36, format!("{kind:?}: {count} parameter combinations"));
        c.check(first <= 1e-6, format!("{kind:?} {} max {first:.2e} ≤ 1e-6", names.0));
        c.check(second <= 1e-6, format!("{kind:?} {} max {second:.2e} ≤ 1e-6", names.1));
    }
    Ok(())
}

fn pde_order(c: &mut Checks) -> Result<()> {
    let steps = [1e-2, 5e-3, 2.5e-3, 1.25e-3];
    let cases = [(1.0, 1.0, 2.0), (0.5, -1.5, 1.0), (2.0, 0.7, 3.0)];
    for kind in [PotentialKind::Delta, PotentialKind::DeltaPrime] {
        for s in [-1.0, 1.0] {
            let pot = PotentialSpec::new(kind, s)?;
            for (t, x, k) in cases {
                let p = SpaceTimePoint::<Dd>::from_f64(t, x)?;
                let mut res = Vec::new();
                for h in steps {
                    let hd = Dd::from_f64(h);
                    res.push(pde_residual(&p, Dd::from_f64(k), &pot, hd, hd)?.to_f64());
                }
                let slope = log_log_slope(&steps, &res);
                c.check((slope - 4.0).abs() <= 0.3, format!("{kind:?}({s}) at (t, x, k) = ({t}, {x}, {k}): slope {slope:.3}, residuals [{}]", fmt_list(&res)));
            }
        }
    }
    Ok(())
}

fn asymptotics(c: &mut Checks) -> Result<()> {
    let times: [f64; 4] = [10.0, 1e2, 1e3, 1e4];
    // (kind, strength, x, k); negative strengths carry the bound-state term
    let combos = [
        (PotentialKind::Delta, 1.0, 1.0, 2.0),
        (PotentialKind::Delta, -1.0, 1.0, 2.0),
        (PotentialKind::Delta, -0.5, -0.5, 1.0),
        (PotentialKind::Delta, 2.0, 2.0, 0.5),
        (PotentialKind::DeltaPrime, 1.0, 1.0, 2.0),
        (PotentialKind::DeltaPrime, -1.0, 1.0, 2.0),
        (PotentialKind::DeltaPrime, -0.5, -0.5, 1.0),
        (PotentialKind::DeltaPrime, 2.0, 2.0, 0.5),
    ];
    for (kind, s, x, k) in combos {
        let pot = PotentialSpec::new(kind, s)?;
        let mut scaled = Vec::new();
        let mut scaled32 = Vec::new();
        for t in times {
            let p = SpaceTimePoint::new(t, x)?;
            let err = (psi(&p, k, &pot)? - asymptotic(&p, k, &pot)?).norm();
            scaled.push(t * err);
            scaled32.push(t.powf(1.5) * err);
        }
        let v = variation(&scaled);
        c.check(v < 5.0, format!("{kind:?}({s}) x = {x}, k = {k}: t·err = [{}], variation {v:.1} < 5", fmt_list(&scaled)));
        c.note(format!("    t^1.5·err variation {:.2}", variation(&scaled32)));
    }
    Ok(())
}

/// sup_K |Ψ_80 − Ψ| for k = 2 from a 50-digit evaluation on the same grid.
const CALIBRATED_N80: [(PotentialKind, f64, f64); 4] = [
    (PotentialKind::Delta, 1.0, 6.274610257162751),
    (PotentialKind::Delta, -1.0, 6.660182542553865),
    (PotentialKind::DeltaPrime, 1.0, 6.642493812988916),
    (PotentialKind::DeltaPrime, -1.0, 7.012457467088619),
];

fn convergence_sups(pot: PotentialSpec, ns: &[usize]) -> Result<Vec<f64>> {
    let sums: Vec<FourierSum<Td>> =
        ns.iter().map(|&n| coefficients::<Td>(&SuperoscSpec::new(n, 2.0)?)).collect::<Result<_>>()?;
    let k = Td::from_f64(2.0);
    let mut sups = vec![0.0f64; ns.len()];
    for t in samples(0.5, 2.0, 21) {
        for x in samples(-3.0, 3.0, 61) {
            let errs = superposition_errors(Td::from_f64(t), Td::from_f64(x), k, &pot, &sums)?;
            for (s, e) in sups.iter_mut().zip(errs) {
                *s = s.max(e.to_f64());
            }
        }
    }
    Ok(sups)
}

fn main_theorem(c: &mut Checks) -> Result<()> {
    let ns = [10, 20, 40, 80];
    let results: Vec<Result<Vec<f64>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = CALIBRATED_N80
            .iter()
            .map(|&(kind, s, _)| scope.spawn(move || convergence_sups(PotentialSpec::new(kind, s)?, &ns)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    for (&(kind, s, calibrated), sups) in CALIBRATED_N80.iter().zip(results) {
        let sups = sups?;
        let monotone = sups.windows(2).all(|w| w[1] <= w[0]);
        c.check(monotone, format!("{kind:?}({s}): sup_K |Ψ_n − Ψ| for n = 10, 20, 40, 80 = [{}] nonincreasing", fmt_list(&sups)));
        let threshold = 1.05 * calibrated;
        c.check(sups[3] <= threshold, format!("{kind:?}({s}): n = 80 sup {:.6e} ≤ calibrated threshold {threshold:.6e}", sups[3]));
    }
    Ok(())
}

/// Coefficients of F(z + a) by repeated synthetic division (Taylor shift).
fn taylor_shift(f: &[Complex<Dd>], a: Complex<Dd>) -> Vec<Complex<Dd>> {
    let mut c = f.to_vec();
    let n = c.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let next = c[j + 1];
            c[j] += a * next;
        }
    }
    c
}

fn random_fourier(rng: &mut ChaCha8Rng, b: f64) -> Result<FourierSum<f64>> {
    let n = rng.gen_range(1..=5);
    let terms = (0..n)
        .map(|_| FourierTerm { c: Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)), k: rng.gen_range(-b..=b) })
        .collect();
    FourierSum::new(terms)
}

fn operator_representation(c: &mut Checks) -> Result<()> {
    let mut identity = 0.0f64;
    let mut count = 0;
    for kind in [PotentialKind::Delta, PotentialKind::DeltaPrime] {
        for s in [-1.0, 1.0] {
            let pot = PotentialSpec::new(kind, s)?;
            for t in [0.5, 1.0] {
                for x in [-1.0, -0.5, 0.5, 1.0] {
                    for k in [0.0, 1.0, 2.0] {
                        let f = EntireFunctionSeries::exp_ik(k, DEFAULT_SERIES_LEN)?;
                        let v = propagator_apply(t, x, &pot, &f, DEFAULT_SYMBOL_TERMS)?;
                        identity = identity.max((v - psi(&SpaceTimePoint::new(t, x)?, k, &pot)?).norm());
                        count += 1;
                    }
                }
            }
        }
    }
    c.check(identity <= 1e-6, format!("propagator identity over {count} points: max {identity:.2e} ≤ 1e-6"));

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut quotient = 0.0f64;
    for _ in 0..50 {
        let degree = rng.gen_range(0..=12);
        let f: Vec<Complex<Dd>> =
            (0..=degree).map(|_| cd(Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))).collect();
        let a = cd(Complex::from_polar(rng.gen_range(0.05..=2.0), rng.gen_range(0.0..TAU)));
        let g = difference_quotient(&EntireFunctionSeries::from_coeffs(f.clone())?, a, f.len())?;
        let shifted = taylor_shift(&f, a);
        for (i, gi) in g.coeffs().iter().enumerate() {
            quotient = quotient.max(cabs(*gi - (shifted[i] - f[i]) / a).to_f64());
        }
    }
    c.check(quotient <= 1e-11, format!("difference quotient vs Taylor shift, 50 random polynomials: max {quotient:.2e} ≤ 1e-11"));

    let (mut violations, mut worst, mut cases) = (0, 0.0f64, 0);
    let mut tally = |ratio: f64| {
        cases += 1;
        worst = worst.max(ratio);
        if !(ratio <= 1.0) {
            violations += 1;
        }
    };
    for _ in 0..50 {
        let k = rng.gen_range(-5.0..=5.0);
        let f = EntireFunctionSeries::exp_ik(k, 80)?;
        let bound = f.bound().expect("e^{ikξ} carries its bound");
        let mut fact = 1.0;
        for (n, cn) in f.coeffs().iter().enumerate() {
            if n > 0 {
                fact *= n as f64;
            }
            tally(cn.norm() * fact / (derivative_growth_bound(bound, n)? + 1e-12));
        }
    }
    for _ in 0..50 {
        let len = rng.gen_range(1..20);
        let sym =
            OperatorSymbol::new((0..len).map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect(), "random")?;
        let f = EntireFunctionSeries::from_fourier_sum(&random_fourier(&mut rng, 1.5)?, DEFAULT_SERIES_LEN)?;
        let b = f.bound().expect("Fourier sums carry their bound");
        let v = apply_operator(&sym, &f, 1)?.coeffs()[0].norm();
        tally(v / (b.a() * sym.s_b(E * b.b())? * (1.0 + 1e-12) + 1e-14));
    }
    for _ in 0..50 {
        let fs = random_fourier(&mut rng, 1.5)?;
        let (t, x) = (rng.gen_range(0.3..=2.0), rng.gen_range(-3.0..=3.0));
        let alpha = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let f = EntireFunctionSeries::<Dd>::from_fourier_sum(&fs.convert(), DEFAULT_SERIES_LEN)?;
        let b = f.bound().expect("Fourier sums carry their bound");
        let sym = symbol_phi_delta(Dd::from_f64(t), Dd::from_f64(x), Dd::from_f64(alpha), DEFAULT_SYMBOL_TERMS)?;
        let v = cabs(apply_operator(&sym, &f, 1)?.coeffs()[0]).to_f64();
        tally(v / bound_constant_delta_plus(E * b.b(), t, x, alpha)? / b.a());
    }
    c.check(violations == 0, format!("growth and boundedness estimates: {violations} violations in {cases} checks (largest ratio {worst:.6})"));
    Ok(())
}

fn fd_agreement(c: &mut Checks) -> Result<()> {
    let base = FdGrid::new(40.0, 1024, 1e-3, 1000)?;
    let packet = PacketSpec::new(2.0, 0.5, -3.0)?;
    let pots = [(PotentialKind::Delta, 1.0), (PotentialKind::Delta, -1.0), (PotentialKind::DeltaPrime, 1.0), (PotentialKind::DeltaPrime, -1.0)];
    let levels = [0u32, 1, 2, 3];
    let results: Vec<Result<Vec<(f64, f64)>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = pots
            .iter()
            .map(|&(kind, s)| {
                let base = &base;
                let packet = &packet;
                scope.spawn(move || {
                    let pot = PotentialSpec::new(kind, s)?;
                    levels
                        .iter()
                        .map(|&l| {
                            let g = base.refined(l)?;
                            Ok((g.h(), compare(&g, packet, &pot)?))
                        })
                        .collect()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let default = FdGrid::default_resolution();
    c.check(base.refined(2)? == default, "level 2 is the default resolution (n_x = 4096, dt = 2.5e-4, T = 1)");
    for (&(kind, s), res) in pots.iter().zip(results) {
        let res = res?;
        let (hs, errs): (Vec<f64>, Vec<f64>) = res.into_iter().unzip();
        let slope = log_log_slope(&hs, &errs);
        c.check(errs[2] <= 5e-3, format!("{kind:?}({s}): compare at default resolution {:.3e} ≤ 5e-3", errs[2]));
        c.check((slope - 2.0).abs() <= 0.4, format!("{kind:?}({s}): refinement slope {slope:.3} (errors [{}])", fmt_list(&errs)));
    }
    Ok(())
}

type Hd = MultiFloat<6>;

fn closed_form_oracle(n: usize, k: Qd, z: Complex<Qd>) -> Complex<Qd> {
    let w = z / Qd::from_f64(n as f64);
    let i = Complex::new(Qd::zero(), Qd::one());
    let (ep, em) = (cexp(i * w), cexp(-(i * w)));
    let half = Qd::from_f64(0.5);
    let cos = (ep + em) * half;
    let sin = (ep - em) * Complex::new(Qd::zero(), -half);
    let base = cos + i * sin * k;
    (0..n).fold(Complex::new(Qd::one(), Qd::zero()), |acc, _| acc * base)
}

fn superosc_diagnostics(c: &mut Checks) -> Result<()> {
    let mut exact = true;
    let mut cases = 0;
    for k in [2.0, -3.0, 1.5, 10.0] {
        for n in [1, 2, 5, 10, 25, 50, 100, 150, 200] {
            let f = coefficients::<BigRational>(&SuperoscSpec::new(n, k)?)?;
            let s = f.coefficient_sum();
            exact &= s.re.is_one() && s.im.is_zero();
            cases += 1;
        }
    }
    c.check(exact, format!("Σ C_j = 1 exactly in rationals for {cases} cases, n ≤ 200, |k| ≤ 10"));
    let mut wide = 0.0f64;
    for (k, n) in [(2.0, 50), (2.0, 120), (2.0, 200), (-3.0, 100)] {
        let f = coefficients::<Hd>(&SuperoscSpec::new(n, k)?)?;
        let v = evaluate(&f, Complex::new(Hd::zero(), Hd::zero()))?;
        wide = wide.max(cabs(v - Complex::new(Hd::one(), Hd::zero())).to_f64());
    }
    c.check(wide <= 1e-13, format!("evaluate(F_n, 0) in 6-limb floats: max |F_n(0) − 1| = {wide:.2e} ≤ 1e-13"));

    let k = Qd::from_f64(2.0);
    let mut zs = vec![Complex::new(Qd::zero(), Qd::zero())];
    for r in [1.0, 2.5, 5.0] {
        for j in 0..8 {
            let z = Complex::from_polar(r, 0.1 + TAU * j as f64 / 8.0);
            zs.push(Complex::new(Qd::from_f64(z.re), Qd::from_f64(z.im)));
        }
    }
    let mut rel = 0.0f64;
    for n in [1, 2, 5, 10, 20, 33, 45, 60] {
        let f = coefficients::<Qd>(&SuperoscSpec::new(n, 2.0)?)?;
        for &z in &zs {
            let want = closed_form_oracle(n, k, z);
            rel = rel.max((cabs(evaluate(&f, z)? - want) / cabs(want)).to_f64());
        }
    }
    c.check(rel <= 1e-9, format!("closed form (cos(z/n) + ik sin(z/n))ⁿ, n ≤ 60, |z| ≤ 5: max relative {rel:.2e} ≤ 1e-9"));

    // triple-double keeps ~12 digits after the 120·log10 2 ≈ 36 cancelled ones
    let grid = default_grid::<Td>();
    let mut dist = Vec::with_capacity(120);
    for n in 1..=120 {
        let f = coefficients::<Td>(&SuperoscSpec::new(n, 2.0)?)?;
        dist.push(a1_distance(&f, Td::from_f64(2.0), 1.0, &grid)?.to_f64());
    }
    let n0 = dist.windows(2).rposition(|w| w[1] > w[0]).map_or(1, |i| i + 2);
    let trend = n0 < 120 && dist[119] < dist[0];
    // 60-digit evaluation of the closed form on the same grid
    let frozen_120 = 0.006941315887511129;
    let rel = (dist[119] / frozen_120 - 1.0).abs();
    c.check(rel < 1e-10, format!("a1_distance at n = 120 matches the 60-digit oracle to {rel:.1e} (< 1e-10)"));
    c.check(
        trend,
        format!("a1_distance (k = 2, B = 1) nonincreasing from n₀ = {n0}: {:.3e} at n = 1 → {:.3e} at n = 120", dist[0], dist[119]),
    );
    Ok(())
}

type Body = fn(&mut Checks) -> Result<()>;

fn main() {
    let all: [(u32, &str, f64, Body); 8] = [
        (1, "Λ identities and asymptotic decay", 5.0, lambda_identities),
        (2, "interface conditions on the 3×3×4 grid", 10.0, jump_conditions),
        (3, "fourth-order PDE residual", 10.0, pde_order),
        (4, "large-time asymptotics, t·err variation < 5", 10.0, asymptotics),
        (5, "superposition convergence on K", 60.0, main_theorem),
        (6, "operator representation and bounds", 30.0, operator_representation),
        (7, "finite-difference oracle agreement", 300.0, fd_agreement),
        (8, "superoscillation diagnostics", 10.0, superosc_diagnostics),
    ];
    // ACCEPTANCE_ONLY=1,3 runs a subset
    let only: Option<Vec<u32>> =
        std::env::var("ACCEPTANCE_ONLY").ok().map(|v| v.split(',').filter_map(|n| n.trim().parse().ok()).collect());
    let results: Vec<bool> = all
        .into_iter()
        .filter(|(n, ..)| only.as_ref().is_none_or(|o| o.contains(n)))
        .map(|(n, title, limit, body)| criterion(n, title, limit, body))
        .collect();
    let passed = results.iter().filter(|&&r| r).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
