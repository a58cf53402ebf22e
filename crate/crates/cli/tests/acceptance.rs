//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cossqrt::bounds::{
    coeff_inequality_slack, cosh_bound, general_bound, gronwall_bound, verify_coeff_inequality, verify_general,
    verify_main, verify_strictness,
};
use cossqrt::recurrence::{build_ladder, disk_sample, ode_residual, pythagorean_residual};
use cossqrt::series::{derivative_at_zero, eval_series};
use cossqrt::sinc::{verify_gronwall0, QuadratureSpec};
use cossqrt::{EvalConfig, ExactRational};
use cossqrt_cli::output::{OutputFormat, Table};
use cossqrt_cli::suites::{
    decay_points, decay_report, envelope_report, recurrence_points, sinc_identity_report, sinc_quadrature_report,
    DEFAULT_SEED, IDENTITY_POINTS, IDENTITY_RADIUS,
};
use cossqrt_cli::{cmd_figure, RunConfig};
use rug::{Complete, Complex, Float, Integer, Rational};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn(&EvalConfig) -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn ms(d: Duration) -> String {
    format!("{:.0} ms", d.as_secs_f64() * 1e3)
}

fn f(v: &Float) -> String {
    v.to_string_radix(10, Some(4))
}

fn exact_at_zero(_: &EvalConfig) -> Outcome {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    for n in 0..=50u32 {
        let sign = if n % 2 == 0 { 1 } else { -1 };
        let num = Integer::from(sign) * Integer::factorial(n).complete();
        let expected = ExactRational::from(Rational::from((num, Integer::factorial(2 * n).complete())));
        if derivative_at_zero(n) != expected {
            mismatches.push(n);
        }
    }
    let elapsed = start.elapsed();
    check(
        mismatches.is_empty() && elapsed < Duration::from_secs(1),
        format!("n = 0..50 exact, mismatches {mismatches:?}, {}", ms(elapsed)),
    )
}

fn main_inequality(cfg: &EvalConfig) -> Outcome {
    let x_max = Float::with_val(cfg.precision_bits, 10_000);
    let mut worst_err = Float::new(64);
    let mut failed = Vec::new();
    for n in 0..=20 {
        let r = verify_main(n, &x_max, 10_000, cfg).map_err(|e| e.to_string())?;
        let no_violation = r.passed && Float::with_val(64, &r.min_slack + &r.abs_error) >= 0;
        if !no_violation || r.abs_error > 1e-30 {
            failed.push(n);
        }
        if r.abs_error > worst_err {
            worst_err = r.abs_error.clone();
        }
    }
    check(
        failed.is_empty(),
        format!(
            "n <= 20 on (0, 1e4], 1e4 points, failing {failed:?}, max abs_error {}",
            f(&worst_err)
        ),
    )
}

fn strictness(cfg: &EvalConfig) -> Outcome {
    let delta = Float::with_val(cfg.precision_bits, 0.01);
    let x_max = Float::with_val(cfg.precision_bits, 100);
    let mut failed = Vec::new();
    let mut margin_one = Float::new(64);
    for n in 1..=10 {
        let r = verify_strictness(n, &delta, &x_max, cfg).map_err(|e| e.to_string())?;
        let bracketed = r.enclosure.0 <= r.grid_max && r.grid_max <= r.enclosure.1;
        if !r.strictly_below_bound() || !bracketed {
            failed.push(n);
        }
        if n == 1 {
            margin_one = Float::with_val(64, &r.bound - &r.enclosure.1);
        }
    }
    check(
        failed.is_empty() && margin_one >= 1e-4,
        format!(
            "n = 1..10 on [1e-2, 1e2], failing {failed:?}, n = 1 margin {}",
            f(&margin_one)
        ),
    )
}

fn general_and_cosh(cfg: &EvalConfig) -> Outcome {
    let x_max = Float::with_val(cfg.precision_bits, 50);
    let mut failed = Vec::new();
    let mut ulp_failed = Vec::new();
    let mut count = 0;
    for a in [-1, -4, -10] {
        let af = Float::with_val(cfg.precision_bits, a);
        for n in 0..=10 {
            for m in 0..=n {
                let r = verify_general(n, m, &af, &x_max, 400, cfg).map_err(|e| e.to_string())?;
                count += 1;
                if !r.passed {
                    failed.push((n, m, a));
                }
            }
            let g = general_bound(n, 0, &af, cfg).map_err(|e| e.to_string())?.approx.value;
            let c = cosh_bound(n, &af, cfg).map_err(|e| e.to_string())?.approx.value;
            let ulp = Float::with_val(cfg.precision_bits, g.abs_ref()) >> (cfg.precision_bits - 1);
            if Float::with_val(cfg.precision_bits, &g - &c).abs() > ulp {
                ulp_failed.push((n, a));
            }
        }
    }
    check(
        failed.is_empty() && ulp_failed.is_empty(),
        format!("{count} (n, m, a) cases, failing {failed:?}, cosh beyond one ulp {ulp_failed:?}"),
    )
}

fn coefficients(_: &EvalConfig) -> Outcome {
    let start = Instant::now();
    let r = verify_coeff_inequality(30, 60).map_err(|e| e.to_string())?;
    let mut pattern_breaks = 0;
    for n in 0..=30 {
        for m in 0..=n {
            for k in 0..=60 {
                let slack = coeff_inequality_slack(n, m, k);
                if slack.is_negative() || slack.is_zero() != (m == n || k == 0) {
                    pattern_breaks += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    check(
        r.passed && pattern_breaks == 0 && elapsed < Duration::from_secs(10),
        format!(
            "{} exact cases, violations {}, equality off m = n or k = 0: {pattern_breaks}, {}",
            r.points_checked,
            if r.passed { 0 } else { 1 },
            ms(elapsed)
        ),
    )
}

fn identities(cfg: &EvalConfig) -> Outcome {
    let zero = Complex::new(cfg.precision_bits);
    let mut worst = Float::new(64);
    let mut bad = 0;
    let points = disk_sample(DEFAULT_SEED, IDENTITY_POINTS, IDENTITY_RADIUS, cfg.precision_bits);
    for z in &points {
        for r in [pythagorean_residual(z, cfg), ode_residual(z, cfg)] {
            let r = r.map_err(|e| e.to_string())?;
            if !r.contains(&zero) || r.abs_error > 1e-40 {
                bad += 1;
            }
            if r.abs_error > worst {
                worst = r.abs_error.clone();
            }
        }
    }
    let complex = points.iter().filter(|z| !z.imag().is_zero()).count();
    check(
        bad == 0 && complex > 0,
        format!(
            "{} points ({complex} off the real axis), bad residuals {bad}, max abs_error {}",
            points.len(),
            f(&worst)
        ),
    )
}

fn recurrence(cfg: &EvalConfig) -> Outcome {
    let mut bad = Vec::new();
    for x in recurrence_points(cfg) {
        let ladder = build_ladder(&x, 20, cfg).map_err(|e| e.to_string())?;
        for (n, v) in ladder.orders.iter().enumerate() {
            let s = eval_series(n as u32, &x, cfg).map_err(|e| e.to_string())?;
            if !v.agrees_with(&s) {
                bad.push((x.to_f64(), n));
            }
        }
    }
    check(
        bad.is_empty(),
        format!("orders 0..20 at +-0.01, +-1, +-10, 100, disagreements {bad:?}"),
    )
}

fn decay(cfg: &EvalConfig) -> Outcome {
    let xs = decay_points(cfg);
    let envelope = envelope_report(&xs, cfg).map_err(|e| e.to_string())?;
    let mut failed = Vec::new();
    for n in 2..=5 {
        if !decay_report(n, &xs, cfg).map_err(|e| e.to_string())?.passed {
            failed.push(n);
        }
    }
    check(
        envelope.passed && envelope.certified_min_slack >= 0 && failed.is_empty(),
        format!(
            "envelope slack {}, non-decreasing orders {failed:?}",
            f(&envelope.certified_min_slack)
        ),
    )
}

fn sinc(cfg: &EvalConfig) -> Outcome {
    let x_max = Float::with_val(cfg.precision_bits, 50);
    let mut failed = Vec::new();
    for n in 0..=10 {
        if !verify_gronwall0(n, &x_max, 1001, cfg)
            .map_err(|e| e.to_string())?
            .passed
        {
            failed.push(n);
        }
    }
    let q = QuadratureSpec::default();
    let quad = sinc_quadrature_report(8, &q, cfg).map_err(|e| e.to_string())?;
    let ident = sinc_identity_report(6, &q, cfg).map_err(|e| e.to_string())?;
    check(
        failed.is_empty() && quad.passed && ident.passed,
        format!(
            "bound on [-50, 50] failing {failed:?}, quadrature agreement {}, identity {}",
            quad.passed, ident.passed
        ),
    )
}

fn figure(cfg: &EvalConfig) -> Outcome {
    let run = RunConfig {
        eval: *cfg,
        ..RunConfig::default()
    };
    let zero = ExactRational::zero();
    let origin = cmd_figure(&zero, &zero, 1, &[0, 1, 2], &run).map_err(|e| e.to_string())?;
    let at_zero: Vec<_> = ["d0", "d1", "d2"]
        .iter()
        .map(|c| origin.get(0, c).unwrap_or(""))
        .collect();
    let exact_origin = at_zero == ["1", "-1", "1"];

    let lo = ExactRational::from_integer(-10);
    let hi = ExactRational::from_integer(40);
    let full = cmd_figure(&lo, &hi, 501, &[0, 1, 2], &run).map_err(|e| e.to_string())?;
    let all_ok = (0..full.rows.len()).all(|r| full.get(r, "status") == Some("ok"));
    let mut buf = Vec::new();
    full.write(OutputFormat::Csv, &mut buf).map_err(|e| e.to_string())?;
    let parsed = Table::parse(OutputFormat::Csv, std::str::from_utf8(&buf).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let round_trip = parsed == full;
    check(
        exact_origin && all_ok && full.rows.len() == 501 && round_trip,
        format!(
            "origin {at_zero:?}, {} rows on [-10, 40], all ok {all_ok}, CSV round trip {round_trip}",
            full.rows.len()
        ),
    )
}

fn main() -> ExitCode {
    let cfg = EvalConfig::default();
    let criteria: [Criterion; 10] = [
        ("exact derivatives at zero", exact_at_zero),
        ("main inequality", main_inequality),
        ("strictness", strictness),
        ("general and cosh bounds", general_and_cosh),
        ("coefficient inequality", coefficients),
        ("identities", identities),
        ("recurrence vs series", recurrence),
        ("decay", decay),
        ("sinc suite", sinc),
        ("figure data", figure),
    ];
    debug_assert_eq!(gronwall_bound(0), ExactRational::one());
    let mut failures = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run(&cfg);
        let took = ms(start.elapsed());
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} [{took}]"),
            Err(detail) => {
                failures += 1;
                println!("FAIL {name}: {detail} [{took}]");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
