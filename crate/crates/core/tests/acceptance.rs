//! End-to-end acceptance criteria. Each prints one PASS/FAIL line; the
//! process fails if any criterion fails.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use ytensor_core::exact::{
    dim_sym, enumerate_diagrams, factorial, ln_biguint, partition_counts, schur_weyl_measure,
};
use ytensor_core::functionals::{
    a_closed, alpha_constant, beta_constant, default_window, lemma_a, lemma_f3, lemma_i,
    lemma_int_i_omega, m_value, prop31_decompose, prop41_identity, rho, rho_piecewise, theta,
    theta_piecewise, Curve,
};
use ytensor_core::harness::{cmd_biane, cmd_bounds, sample_strict, ExperimentConfig};
use ytensor_core::rsk::{chi_square_gof, sample_schur_weyl};
use ytensor_core::shape::{omega, omega_prime, phi0, phi1, phi2};
use ytensor_core::{ExactDims, Partition, QuadratureConfig, ShapeParam};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg)
    }
}

fn within(elapsed: Duration, limit_s: u64) -> Result<(), String> {
    ensure(
        elapsed.as_secs_f64() < limit_s as f64,
        format!("took {:.1} s, budget {limit_s} s", elapsed.as_secs_f64()),
    )
}

fn quad() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn exact_sums() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    for n in 1..=10 {
        for big_n in 1..=6 {
            let total: BigUint = enumerate_diagrams(n, big_n)
                .map(|l| ExactDims::new(&l, big_n).dim_iso)
                .sum();
            ensure(
                total == BigUint::from(big_n).pow(n as u32),
                format!("Σ dim E ≠ N^n at n={n}, N={big_n}"),
            )?;
            cases += 1;
        }
    }
    for n in 1..=12 {
        let total: BigUint = enumerate_diagrams(n, n).map(|l| dim_sym(&l).pow(2)).sum();
        ensure(total == factorial(n), format!("Σ (dim V)² ≠ n! at n={n}"))?;
        cases += 1;
    }
    within(start.elapsed(), 10)?;
    Ok(format!("{cases} exact equalities"))
}

fn sampler_chi_square() -> Outcome {
    let start = Instant::now();
    let mut ps = Vec::new();
    for (k, (n, big_n)) in [(4usize, 2usize), (5, 3), (6, 3)].into_iter().enumerate() {
        let law: Vec<(Partition, f64)> = enumerate_diagrams(n, big_n)
            .map(|l| {
                let p = schur_weyl_measure(&l, big_n).to_f64();
                (l, p)
            })
            .collect();
        let s = sample_schur_weyl(n, big_n, 1000 + k as u64, 100_000).map_err(|e| e.to_string())?;
        let g = chi_square_gof(&s, &law).map_err(|e| e.to_string())?;
        ensure(g.p_value > 1e-3, format!("(n,N)=({n},{big_n}): {g:?}"))?;
        ps.push(format!("{:.3}", g.p_value));
    }
    within(start.elapsed(), 30)?;
    Ok(format!("p-values {}", ps.join(", ")))
}

fn residual_independence() -> Outcome {
    let start = Instant::now();
    let samples = sample_schur_weyl(400, 20, 31, 20).map_err(|e| e.to_string())?;
    let res: Vec<f64> = samples
        .iter()
        .map(|l| prop31_decompose(l, 20, &quad()).map(|r| r.residual))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let spread = res.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - res.iter().cloned().fold(f64::INFINITY, f64::min);
    ensure(spread < 1e-6, format!("residual spread {spread:e}"))?;
    let mut scaled = Vec::new();
    for (n, big_n) in [(100usize, 10usize), (400, 20), (1600, 40)] {
        let lambda = sample_schur_weyl(n, big_n, 32, 1)
            .map_err(|e| e.to_string())?
            .remove(0);
        let r = prop31_decompose(&lambda, big_n, &quad()).map_err(|e| e.to_string())?;
        let nf = n as f64;
        scaled.push(r.residual.abs() / (nf.ln() / nf.sqrt()));
    }
    ensure(
        scaled.windows(2).all(|w| w[1] < w[0]),
        format!("scaled residuals {scaled:?}"),
    )?;
    within(start.elapsed(), 120)?;
    Ok(format!("spread {spread:.1e}; |ε|√n/ln n = {scaled:.4?}"))
}

fn norm_identity() -> Outcome {
    let start = Instant::now();
    let c = ShapeParam::from_dims(400, 25).map_err(|e| e.to_string())?;
    let samples = sample_strict(400, 25, 41, 10).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for l in &samples {
        let curve = Curve::from(&l.profile().map_err(|e| e.to_string())?);
        let r = prop41_identity(&curve, c, &quad()).map_err(|e| e.to_string())?;
        worst = worst.max((r.lhs - r.rhs).abs());
    }
    ensure(worst < 1e-5, format!("max |lhs - rhs| = {worst:e}"))?;
    for cv in [0.5, 2.0] {
        let s = ShapeParam::new(cv).map_err(|e| e.to_string())?;
        let r = prop41_identity(&Curve::Shape(s), s, &quad()).map_err(|e| e.to_string())?;
        ensure(
            r.lhs.abs() < 1e-6 && r.rhs.abs() < 1e-6,
            format!("at Ω_{cv}: {r:?}"),
        )?;
    }
    within(start.elapsed(), 300)?;
    Ok(format!(
        "max |lhs - rhs| = {worst:.1e} over {} diagrams",
        samples.len()
    ))
}

fn lemmas() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for cv in [0.25, 0.5, 0.9, 1.0, 1.1, 2.0, 4.0] {
        let c = ShapeParam::new(cv).map_err(|e| e.to_string())?;
        let mut pairs = vec![lemma_a(c, &quad()).map_err(|e| e.to_string())?];
        let (a, b) = default_window(c);
        for s in [0.5 * cv, 0.5 * cv - 0.7, 0.5 * cv + 1.2, a + 0.1] {
            pairs.push(lemma_i(c, s, a, b, &quad()).map_err(|e| e.to_string())?);
        }
        for x in [0.0, 1.0, -c.alpha(), 2.0, -1.2] {
            pairs.push(lemma_f3(c, x, &quad()).map_err(|e| e.to_string())?);
        }
        pairs.push(lemma_int_i_omega(c, a, b, &quad()).map_err(|e| e.to_string())?);
        for (q, closed) in pairs {
            worst = worst.max((q - closed).abs());
            count += 1;
        }
    }
    ensure(worst < 1e-6, format!("max deviation {worst:e}"))?;
    ensure((a_closed(1.0) + 0.125).abs() < 1e-15, "A(1) ≠ -1/8".into())?;
    within(start.elapsed(), 180)?;
    Ok(format!("{count} pairs, max deviation {worst:.1e}"))
}

fn positivity() -> Outcome {
    let samples = sample_schur_weyl(400, 20, 51, 50).map_err(|e| e.to_string())?;
    let c = ShapeParam::from_dims(400, 20).map_err(|e| e.to_string())?;
    let mut least = f64::INFINITY;
    for l in &samples {
        let pw = l.profile().map_err(|e| e.to_string())?.to_piecewise();
        let gap = theta_piecewise(&pw) - rho_piecewise(&pw, c.c()).map_err(|e| e.to_string())?;
        least = least.min(gap);
    }
    ensure(least >= -1e-9, format!("θ - ρ = {least:e}"))?;
    let mut at_shape: f64 = 0.0;
    for cv in [0.5, 1.0, 2.0] {
        let s = ShapeParam::new(cv).map_err(|e| e.to_string())?;
        let curve = Curve::Shape(s);
        let gap = theta(&curve, &quad()).map_err(|e| e.to_string())?
            - rho(&curve, cv, &quad()).map_err(|e| e.to_string())?;
        at_shape = at_shape.max(gap.abs());
    }
    ensure(at_shape < 1e-6, format!("|θ - ρ| at Ω_c = {at_shape:e}"))?;
    Ok(format!(
        "min over samples {least:.4}; at Ω_c {at_shape:.1e}"
    ))
}

fn biane() -> Outcome {
    let start = Instant::now();
    let r = cmd_biane(&[400, 2500, 10_000], 1.0, 50, 61, Some(0.1)).map_err(|e| e.to_string())?;
    ensure(r.decreasing, format!("medians {:?}", r.medians))?;
    ensure(
        r.pass,
        format!("median {:?} not below 0.1", r.medians.last()),
    )?;
    within(start.elapsed(), 600)?;
    Ok(format!(
        "medians {:?}",
        r.medians
            .iter()
            .map(|(n, m)| format!("{n}:{m:.4}"))
            .collect::<Vec<_>>()
    ))
}

fn bounds() -> Outcome {
    let cfg = ExperimentConfig {
        n: Some(2500),
        c: Some(1.0),
        samples: 100,
        seed: 71,
        ..Default::default()
    };
    let r = cmd_bounds(&cfg, 0.05).map_err(|e| e.to_string())?;
    let beta = beta_constant();
    let alpha =
        alpha_constant(ShapeParam::new(1.0).unwrap(), &quad()).map_err(|e| e.to_string())?;
    ensure(
        r.records.iter().all(|x| x.value < beta),
        format!("max {} ≥ β", r.summary.max),
    )?;
    ensure(
        r.records.iter().all(|x| x.value > alpha - 0.05),
        format!("min {} ≤ α_1 - 0.05", r.summary.min),
    )?;
    ensure(r.pass, "window check disagrees".into())?;
    ensure(
        (beta - 2.0 * std::f64::consts::PI / 6f64.sqrt()).abs() < 1e-12,
        "β".into(),
    )?;
    Ok(format!(
        "values in [{:.4}, {:.4}] inside ({:.4}, {:.4})",
        r.summary.min,
        r.summary.max,
        alpha - 0.05,
        beta
    ))
}

fn fd(f: impl Fn(f64) -> f64, x: f64) -> f64 {
    let h = 1e-5;
    (f(x + h) - f(x - h)) / (2.0 * h)
}

fn derivatives_and_series() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut track = |a: f64, b: f64| worst = worst.max((a - b).abs());
    for x in [-0.9, -0.3, 0.2, 0.7] {
        track(omega_prime(x), fd(omega, x));
    }
    for x in [-1.5, -0.4, 0.3, 2.0] {
        track(-1.0 / x, fd(phi0, x));
        track(phi0(x), fd(phi1, x));
        track(phi1(x), fd(phi2, x));
    }
    for cv in [0.3, 0.5, 1.0, 2.0, 4.0] {
        let c = ShapeParam::new(cv).unwrap();
        for z in [-0.8, -0.1, 0.5, 0.9] {
            let s = c.unshift(z);
            track(c.omega_c_prime(s), fd(|t| c.omega_c(t), s));
            track(
                c.omega_c_second(z).unwrap(),
                fd(|t| c.omega_c_prime_shifted(t), z),
            );
        }
        let mut zs = vec![1.3, 2.5];
        if c.alpha() > 1.2 {
            zs.push(-0.5 * (c.alpha() + 1.0));
        }
        for z in zs {
            track(
                c.h_tilde_prime(z).unwrap(),
                fd(|t| c.h_tilde(t).unwrap(), z),
            );
            track(
                c.h_tilde_second(z).unwrap(),
                fd(|t| c.h_tilde_prime(t).unwrap(), z),
            );
            track(c.h_tilde(z).unwrap(), fd(|t| c.j_tilde(t).unwrap(), z));
        }
        for s in [-0.4 / cv, 0.0, 1.5] {
            track(c.g_prime(s).unwrap(), fd(|t| c.g(t).unwrap(), s));
        }
    }
    ensure(
        worst < 1e-6,
        format!("finite-difference mismatch {worst:e}"),
    )?;
    let mut series: f64 = 0.0;
    for z in [0.1f64, 0.3, 0.5] {
        let lhs =
            -3.0 + (1.0 + 1.0 / z).powi(2) * z.ln_1p() + (1.0 / z - 1.0).powi(2) * (-z).ln_1p();
        let rhs: f64 = -(1..=80)
            .map(|k| {
                let k = k as f64;
                z.powf(2.0 * k) / (k * (k + 1.0) * (2.0 * k + 1.0))
            })
            .sum::<f64>();
        series = series.max((lhs - rhs).abs());
    }
    ensure(series < 1e-10, format!("power series {series:e}"))?;
    // partial fractions: 1/(k(k+1)(2k+1)) = 1/k + 1/(k+1) - 4/(2k+1), summed to 3 - 4 ln 2
    let m1 = m_value(1.0).map_err(|e| e.to_string())?;
    let telescoped: f64 = (1..=2_000_000u64)
        .rev()
        .map(|k| {
            let k = k as f64;
            1.0 / k + 1.0 / (k + 1.0) - 4.0 / (2.0 * k + 1.0)
        })
        .sum();
    let edge = 3.0 - 4.0 * std::f64::consts::LN_2;
    ensure((m1 - edge).abs() < 1e-10, format!("m(1) = {m1}"))?;
    ensure(
        (telescoped - edge).abs() < 1e-10,
        format!("partial fractions give {telescoped}"),
    )?;
    within(start.elapsed(), 30)?;
    Ok(format!(
        "fd {worst:.1e}, series {series:.1e}, m(1) {:.1e}",
        (m1 - edge).abs()
    ))
}

/// Partitions counted by the coin-change recurrence over part sizes.
fn partitions_by_parts(n: usize) -> u64 {
    let mut ways = vec![0u64; n + 1];
    ways[0] = 1;
    for part in 1..=n {
        for total in part..=n {
            ways[total] += ways[total - part];
        }
    }
    ways[n]
}

fn partition_growth() -> Outcome {
    let start = Instant::now();
    let table = partition_counts(100_000);
    let dp = partitions_by_parts(100);
    ensure(dp == 190_569_292, format!("DP gives {dp}"))?;
    ensure(
        table[100] == BigUint::from(dp),
        format!("p(100) = {}", table[100]),
    )?;
    let beta = beta_constant();
    let ratios: Vec<f64> = [100usize, 1000, 10_000, 100_000]
        .iter()
        .map(|&n| ln_biguint(&table[n]) / (n as f64).sqrt())
        .collect();
    ensure(
        ratios.windows(2).all(|w| w[1] > w[0]),
        format!("not increasing: {ratios:?}"),
    )?;
    ensure(
        ratios.iter().all(|&r| r < beta),
        format!("not below β: {ratios:?}"),
    )?;
    within(start.elapsed(), 30)?;
    Ok(format!("ln p(n)/√n = {ratios:.4?} → {beta:.4}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 exact sum identities", exact_sums),
        ("2 sampler goodness of fit", sampler_chi_square),
        (
            "3 residual independent of the diagram",
            residual_independence,
        ),
        ("4 norm identity", norm_identity),
        ("5 closed-form lemmas", lemmas),
        ("6 positivity and minimiser", positivity),
        ("7 profile convergence", biane),
        ("8 dimension bounds", bounds),
        ("9 derivatives and series", derivatives_and_series),
        ("10 partition growth", partition_growth),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  criterion {name}: {detail} ({secs:.1} s)"),
            Err(detail) => {
                failures += 1;
                println!("FAIL  criterion {name}: {detail} ({secs:.1} s)");
            }
        }
    }
    if failures > 0 {
        println!("{failures} of 10 criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
