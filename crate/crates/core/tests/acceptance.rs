//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use qldp::exponents::{
    advantage_gap, advantage_threshold_asym, advantage_threshold_sym, classical_opt_asym, classical_opt_sym,
    classical_sym_term, closed_form_exponents, sigma_star_exponents, sym_exponent, asym_exponent, ClosedFormParams,
    Mode,
};
use qldp::frames::{build_eitff, verify_eitff};
use qldp::mechanisms::{admissible_mu_interval, is_qldp, isoclinic_mechanism, isoclinic_states, qldp_level, sigma_star, subset_mechanism};
use qldp::optimal::{kairouz_lp, kairouz_lp_symmetric, mutual_information};
use qldp::reproduce::{table, Table, Target};
use qldp::taylor::{expansion_suite, property_suites, scalar_selftests, DEFAULT_INSTANCES, DEFAULT_T_GRID};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

const EPS_GRID: [f64; 4] = [0.1, 0.5, 1.0, 2.0];

fn fc(n: usize) -> f64 {
    ((n / 2) * n.div_ceil(2)) as f64
}

fn within_rel(value: f64, target: f64, rel: f64) -> bool {
    ((value - target) / target).abs() <= rel
}

fn criterion1() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for n in 2..=10 {
        let frame = build_eitff(n, None).map_err(|e| format!("n={n}: {e}"))?;
        let cert = verify_eitff(&frame.projections, 1e-10).map_err(|e| format!("n={n}: {e}"))?;
        let c = (n as f64 - 2.0) / (2.0 * n as f64 - 2.0);
        if !cert.is_eitff || cert.max_residual > 1e-10 || frame.c != c {
            return Err(format!("n={n}: eitff={} residual={:.3e} c={}", cert.is_eitff, cert.max_residual, frame.c));
        }
        worst = worst.max(cert.max_residual);
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 1.0 {
        return Err(format!("took {secs:.2}s"));
    }
    Ok(format!("max residual {worst:.2e}, {secs:.3}s"))
}

fn criterion2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    let mut audits = 0;
    for n in 2..=10 {
        let frame = build_eitff(n, None).map_err(|e| e.to_string())?;
        for eps in EPS_GRID {
            let mech = sigma_star(n, eps).map_err(|e| format!("n={n} eps={eps}: {e}"))?;
            let level = qldp_level(mech.states()).map_err(|e| e.to_string())?;
            worst = worst.max((level - eps).abs());
            if (level - eps).abs() > 1e-9 {
                return Err(format!("n={n} eps={eps}: level {level}"));
            }
            let (lo, hi) = admissible_mu_interval(&frame, eps);
            let audit = |mu: f64| -> bool {
                isoclinic_states(&frame, mu)
                    .and_then(|s| is_qldp(&s, eps))
                    .unwrap_or(false)
            };
            let inside = (0..100).map(|_| rng.random_range(lo..=hi)).chain([lo, hi]);
            for mu in inside {
                audits += 1;
                if !audit(mu) {
                    return Err(format!("n={n} eps={eps}: audit failed inside at mu={mu}"));
                }
            }
            for mu in [lo - 1e-4, hi + 1e-4] {
                audits += 1;
                if audit(mu) {
                    return Err(format!("n={n} eps={eps}: audit passed outside at mu={mu}"));
                }
            }
        }
    }
    Ok(format!("max |level - eps| {worst:.2e}, {audits} interval audits"))
}

fn criterion3() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 2..=10 {
        let frame = build_eitff(n, None).map_err(|e| e.to_string())?;
        for eps in EPS_GRID {
            let (lo, _) = admissible_mu_interval(&frame, eps);
            let mechs = [
                sigma_star(n, eps).map_err(|e| e.to_string())?,
                isoclinic_mechanism(&frame, eps, Some(0.5 * (lo + 1.0))).map_err(|e| e.to_string())?,
            ];
            let mus = [1.0 - qldp::mechanisms::nu_star(n, eps), 0.5 * (lo + 1.0)];
            for (mech, mu) in mechs.iter().zip(mus) {
                for eta in [0.25, 1.0] {
                    let p = ClosedFormParams::with_nu(n, frame.u(), 1.0 - mu, eta).map_err(|e| e.to_string())?;
                    let closed = closed_form_exponents(&p).map_err(|e| e.to_string())?;
                    let s = sym_exponent(mech, eta).map_err(|e| e.to_string())?;
                    let a = asym_exponent(mech, eta).map_err(|e| e.to_string())?;
                    let err = (s - closed.sym).abs().max((a - closed.asym).abs());
                    worst = worst.max(err);
                    if err > 1e-8 {
                        return Err(format!("n={n} eps={eps} mu={mu} eta={eta}: sym {s} vs {}, asym {a} vs {}", closed.sym, closed.asym));
                    }
                }
            }
        }
    }
    Ok(format!("max deviation {worst:.2e}"))
}

fn criterion4() -> Outcome {
    let eps: f64 = 1e-3;
    let e2 = eps * eps;
    let mut worst: f64 = 0.0;
    for n in 2..=8 {
        let nf = n as f64;
        let mech = sigma_star(n, eps).map_err(|e| e.to_string())?;
        let s_q = sym_exponent(&mech, 1.0).map_err(|e| e.to_string())?;
        let a_q = asym_exponent(&mech, 1.0).map_err(|e| e.to_string())?;
        let closed = sigma_star_exponents(n, eps, 1.0).map_err(|e| e.to_string())?;
        let s_c = classical_opt_sym(n, eps).value;
        let a_c = classical_opt_asym(n, eps, 1.0).value;
        let limit = nf * (nf - 1.0) / (2.0 * fc(n));
        let checks = [
            ("S(sigma*)", s_q / e2, 0.125),
            ("S(sigma*) closed", closed.sym / e2, 0.125),
            ("A(sigma*)", a_q / e2, (nf - 1.0) / (4.0 * nf)),
            ("A(sigma*) closed", closed.asym / e2, (nf - 1.0) / (4.0 * nf)),
            ("S_C", s_c / e2, fc(n) / (4.0 * nf * (nf - 1.0))),
            ("A_C", a_c / e2, fc(n) / (2.0 * nf * nf)),
            ("sym ratio", s_q / s_c, limit),
            ("asym ratio", a_q / a_c, limit),
        ];
        for (name, v, target) in checks {
            let rel = ((v - target) / target).abs();
            worst = worst.max(rel);
            if rel > 0.01 {
                return Err(format!("n={n} {name}: {v} vs {target}"));
            }
        }
    }
    Ok(format!("max relative deviation {worst:.2e}"))
}

fn criterion5() -> Outcome {
    let s3 = 2.0 * ((2.0 * 3f64.sqrt() + 1.0) / (2.0 * 3f64.sqrt() - 1.0)).ln();
    let a3 = ((13f64.sqrt() - 1.0) / 2.0).ln();
    let (bs, ba) = (advantage_threshold_sym(3), advantage_threshold_asym(3));
    if (bs - s3).abs() > 1e-4 || (bs - 1.1885).abs() > 1e-4 || (ba - a3).abs() > 1e-4 || (ba - 0.2645).abs() > 1e-4 {
        return Err(format!("n=3 bounds {bs}, {ba}"));
    }
    let (ls, la) = (advantage_threshold_sym(1_000_000), advantage_threshold_asym(1_000_000));
    if (ls - 1.7340).abs() > 1e-3 || (la - 0.5493).abs() > 1e-3 {
        return Err(format!("n=1e6 bounds {ls}, {la}"));
    }
    for n in 3..=10 {
        let gs = advantage_gap(n, advantage_threshold_sym(n), Mode::Sym);
        let ga = advantage_gap(n, advantage_threshold_asym(n), Mode::Asym);
        if !(gs > 0.0 && ga > 0.0) {
            return Err(format!("n={n}: gaps at bound {gs}, {ga}"));
        }
    }
    Ok(format!("n=3 ({bs:.6}, {ba:.6}), n=1e6 ({ls:.6}, {la:.6})"))
}

fn col(t: &Table, name: &str) -> Vec<Option<f64>> {
    t.column(name).expect("column exists")
}

fn criterion6() -> Outcome {
    let start = Instant::now();
    let fig1 = table(Target::Fig1).map_err(|e| e.to_string())?;
    let fig2 = table(Target::Fig2).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    let (n, eps, sr, ar) = (col(&fig1, "n"), col(&fig1, "epsilon"), col(&fig1, "s_ratio"), col(&fig1, "a_ratio"));
    for i in 0..n.len() {
        let (ni, ei) = (n[i].unwrap(), eps[i].unwrap());
        let s = sr[i].ok_or("empty sym ratio")?;
        let a = ar[i].ok_or("empty asym ratio")?;
        if ei <= 1.0 && !(s > 1.0 && a > 1.0) {
            return Err(format!("fig1 n={ni} eps={ei}: ratios {s}, {a}"));
        }
        if ni >= 6.0 && !(s > 1.0) {
            return Err(format!("fig1 n={ni} eps={ei}: sym ratio {s}"));
        }
    }
    let eps = col(&fig2, "epsilon");
    for (star, alt) in [("s_qstar", "s_qalt"), ("a_qstar", "a_qalt")] {
        let (q, p) = (col(&fig2, star), col(&fig2, alt));
        for i in 0..eps.len() {
            let e = eps[i].unwrap();
            let diff = p[i].unwrap() - q[i].unwrap();
            if (e >= 1.5 && !(diff > 0.0)) || (e <= 1.0 && !(diff < 0.0)) {
                return Err(format!("fig2 {alt} - {star} at eps={e}: {diff}"));
            }
        }
    }
    if secs >= 30.0 {
        return Err(format!("took {secs:.1}s"));
    }
    Ok(format!("{} + {} rows, {secs:.2}s", fig1.rows.len(), fig2.rows.len()))
}

fn criterion7() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 2..=6 {
        let mi = mutual_information(n);
        for eps in [0.1, 0.5, 1.0] {
            let full = kairouz_lp(n, eps, &mi).map_err(|e| e.to_string())?.value;
            let sym = kairouz_lp_symmetric(n, eps, &mi).map_err(|e| e.to_string())?;
            let closed = classical_opt_asym(n, eps, 1.0).value;
            let err = (full - sym).abs().max((full - closed).abs());
            worst = worst.max(err);
            if err > 1e-9 {
                return Err(format!("n={n} eps={eps}: lp {full}, symmetric {sym}, closed {closed}"));
            }
        }
        let eps = 1e-2;
        let v = kairouz_lp(n, eps, &mi).map_err(|e| e.to_string())?.value / (eps * eps);
        let target = fc(n) / (2.0 * (n * n) as f64);
        if !within_rel(v, target, 0.02) {
            return Err(format!("n={n}: LP/eps^2 {v} vs {target}"));
        }
    }
    Ok(format!("max LP discrepancy {worst:.2e}"))
}

fn criterion8() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for n in 2..=7 {
        for k in 1..n {
            for eps in [0.5, 1.0] {
                let mech = subset_mechanism(n, k, eps).map_err(|e| e.to_string())?;
                let v = sym_exponent(&mech, 1.0).map_err(|e| e.to_string())?;
                let term = classical_sym_term(n, k, eps);
                worst = worst.max((v - term).abs());
                count += 1;
                if (v - term).abs() > 1e-10 {
                    return Err(format!("n={n} k={k} eps={eps}: {v} vs {term}"));
                }
            }
        }
    }
    Ok(format!("{count} cases, max deviation {worst:.2e}"))
}

fn criterion9() -> Outcome {
    let mut total = 0;
    let mut worst: f64 = 0.0;
    let mut lowest = f64::INFINITY;
    for seed in [0, 7, 42] {
        let reports = expansion_suite(seed, &DEFAULT_T_GRID).map_err(|e| e.to_string())?;
        for r in &reports {
            total += 1;
            let e = r.error_at(1e-2);
            worst = worst.max(e);
            if let Some(o) = r.fitted_order {
                lowest = lowest.min(o);
            }
            if !(r.fitted_order.is_none_or(|o| o >= 0.9) && e <= 0.02 && r.passed) {
                return Err(format!("seed {seed} {}: order {:?}, error {e:.3e}", r.name, r.fitted_order));
            }
        }
    }
    Ok(format!("{total} reports, worst error at t=1e-2 {worst:.2e}, lowest order {lowest:.2}"))
}

fn criterion10() -> Outcome {
    let mut reports = property_suites(10, DEFAULT_INSTANCES).map_err(|e| e.to_string())?;
    reports.extend(scalar_selftests());
    let mut summary = Vec::new();
    for r in &reports {
        if r.instances < 1000 || r.violations > 0 {
            return Err(format!("{}: {} violations over {} instances", r.name, r.violations, r.instances));
        }
        summary.push(format!("{}={}", r.name, r.instances));
    }
    Ok(summary.join(" "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("frame certification", criterion1),
        ("privacy exactness", criterion2),
        ("closed-form equivalence", criterion3),
        ("small-eps asymptotics", criterion4),
        ("advantage thresholds", criterion5),
        ("figure reproduction", criterion6),
        ("LP cross-checks", criterion7),
        ("subset-mechanism identity", criterion8),
        ("Taylor suite", criterion9),
        ("property suites", criterion10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({detail}) [{secs:.2}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
