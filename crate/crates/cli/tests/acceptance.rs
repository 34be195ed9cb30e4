//! End-to-end acceptance checks. Runs without the libtest harness so every
//! criterion prints exactly one PASS/FAIL line; exits nonzero if any fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use kmreduce::config::{ConfigFile, SuiteConfig};
use kmreduce::report::SuiteReport;
use kmreduce::run_suite;
use kmreduce_core::identities::{lhs_eval, lookup, rhs_eval, IdentityId, ParamSet, PlanSum};
use kmreduce_core::lattice::TruncationPolicy;
use kmreduce_core::mparith::*;
use kmreduce_core::sampler::{degenerate_suite_with, sample_at, DegenerationKind, SampleConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SUITE_TOL: f64 = 1e-18;
const SUITE_BUDGET: Duration = Duration::from_secs(15 * 60);
const EXACT_TOL: f64 = 1e-25;
const EXACT_SAMPLES: usize = 25;
const CHAIN_POINTS: usize = 20;
const CHAIN_TERM_TOL: f64 = 1e-25;
const CHAIN_TOTAL_TOL: f64 = 1e-20;
const SINGLE_TERM_TOL: f64 = 1e-25;
const CROSS_TOL: f64 = 1e-18;
const CROSS_SETS: usize = 10;
const PERM_TOL: f64 = 1e-25;
const PERM_SAMPLES: u64 = 10;
const PSI_TOL: f64 = 1e-20;
const PSI_SAMPLES: u64 = 10;
const SAAL_TOL: f64 = 1e-25;
const KERNEL_CASES: usize = 1000;
const HONESTY_CHECKS: usize = 50;
const HONESTY_FACTOR: f64 = 10.0;
const HONESTY_FRACTION: f64 = 0.95;

type Outcome = Result<String, String>;

fn base_cfg(extra: &str) -> SuiteConfig {
    ConfigFile::parse(&format!("precision_bits = 256\n{extra}")).unwrap().resolve().unwrap()
}

fn with_dims(n: (usize, usize)) -> SampleConfig {
    let mut s = base_cfg("").sampler;
    s.dims.n = n;
    s
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn full_suite() -> Outcome {
    let cfg = base_cfg(&format!("tolerance = {SUITE_TOL:e}\nsamples = 5\n"));
    let t0 = Instant::now();
    let report = run_suite(&cfg).map_err(|e| e.to_string())?;
    let elapsed = t0.elapsed();
    let failed: Vec<String> = report.reports.iter().filter(|r| !r.passed).map(|r| format!("{}#{}", r.id, r.sample)).collect();
    let worst = report.reports.iter().filter_map(|r| r.rel_error_f64()).fold(0.0, f64::max);
    let groups = report.summary.groups.len();
    ensure(
        failed.is_empty() && elapsed <= SUITE_BUDGET && groups == IdentityId::ALL.len(),
        format!(
            "{groups} identities x 5 samples, {}/{} passed, worst rel {worst:.2e}, {:.1}s{}",
            report.summary.passed,
            report.summary.checks,
            elapsed.as_secs_f64(),
            if failed.is_empty() { String::new() } else { format!(", failed {failed:?}") }
        ),
    )
}

fn exact_finite() -> Outcome {
    let ids = [
        "cor_kajihara_bailey",
        "cor_pkb",
        "eq_pbt",
        "cor_milne_saalschutz",
        "cor_milne_dougall",
        "cor_mnc",
        "cor_mnb",
        "cor_kajihara_watson",
    ];
    let list = ids.iter().map(|s| format!("\"{s}\"")).collect::<Vec<_>>().join(", ");
    let cfg = base_cfg(&format!("identities = [{list}]\nsamples = {EXACT_SAMPLES}\ntolerance = {EXACT_TOL:e}\n"));
    for &id in &cfg.identities {
        let ps = sample_at(id, &cfg.sampler, 0).map_err(|e| e.to_string())?;
        let d = lookup(id);
        if !(d.lhs_plan(&ps).unwrap().is_finite() && d.rhs_plan(&ps).unwrap().is_finite()) {
            return Err(format!("{id} has a truncated side"));
        }
    }
    let report = run_suite(&cfg).map_err(|e| e.to_string())?;
    let worst = report.reports.iter().filter_map(|r| r.rel_error_f64()).fold(0.0, f64::max);
    ensure(
        report.summary.all_passed,
        format!("{} checks over {} identities, worst rel {worst:.2e}", report.summary.checks, ids.len()),
    )
}

fn gustafson_from(ps: &ParamSet) -> ParamSet {
    let mut g = ps.clone();
    g.dims.remove("p");
    g.vectors.remove("c");
    g.ints.remove("m");
    g
}

fn chain_thm1() -> Outcome {
    let cfg = base_cfg("");
    let sets = degenerate_suite_with(IdentityId::Thm1, &cfg.sampler).map_err(|e| e.to_string())?;
    let (_, ps) = sets.into_iter().find(|(k, _)| *k == DegenerationKind::AllMZero).ok_or("no m=0 set")?;
    let gs = gustafson_from(&ps);
    let tp = lookup(IdentityId::Thm1).lhs_plan(&ps).map_err(|e| e.to_string())?;
    let gp = lookup(IdentityId::Gustafson6Psi6).lhs_plan(&gs).map_err(|e| e.to_string())?;
    let (tl, gl) = (tp.lattice().ok_or("thm1 lhs")?, gp.lattice().ok_or("gustafson lhs")?);
    let n = ps.dim("n").unwrap() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut worst_term: f64 = 0.0;
    for _ in 0..CHAIN_POINTS {
        let mut y: Vec<i64> = (0..n - 1).map(|_| rng.gen_range(-6..=6)).collect();
        y.push(-y.iter().sum::<i64>());
        let a = &tp.prefactor * &tl.term_at(&y, ps.ctx).map_err(|e| e.to_string())?;
        let b = &gp.prefactor * &gl.term_at(&y, ps.ctx).map_err(|e| e.to_string())?;
        worst_term = worst_term.max(a.rel_distance(&b, 0.0));
    }
    let policy = cfg.policy.clone();
    let (lt, _) = lhs_eval(IdentityId::Thm1, &ps, &policy).map_err(|e| e.to_string())?;
    let (lg, _) = lhs_eval(IdentityId::Gustafson6Psi6, &gs, &policy).map_err(|e| e.to_string())?;
    let (rt, _) = rhs_eval(IdentityId::Thm1, &ps, &policy).map_err(|e| e.to_string())?;
    let (rg, _) = rhs_eval(IdentityId::Gustafson6Psi6, &gs, &policy).map_err(|e| e.to_string())?;
    let total = lt.rel_distance(&lg, 0.0).max(rt.rel_distance(&rg, 0.0));
    ensure(
        worst_term <= CHAIN_TERM_TOL && total <= CHAIN_TOTAL_TOL,
        format!("n={n}, {CHAIN_POINTS} points worst term rel {worst_term:.2e}, totals rel {total:.2e}"),
    )
}

fn kmg_single_term() -> Outcome {
    let cfg = base_cfg("");
    let sets = degenerate_suite_with(IdentityId::ClKmg, &cfg.sampler).map_err(|e| e.to_string())?;
    let (_, ps) = sets.into_iter().find(|(k, _)| *k == DegenerationKind::DEqualsBPlus1).ok_or("no d=b+1 set")?;
    let plan = lookup(IdentityId::ClKmg).rhs_plan(&ps).map_err(|e| e.to_string())?;
    let (v, d) = match plan.sum.as_ref().ok_or("closed right side")? {
        PlanSum::Lattice(l) => l.evaluate(&cfg.policy, ps.ctx),
        PlanSum::Nested(n) => n.evaluate(ps.ctx),
    }
    .map_err(|e| e.to_string())?;
    let dev = v.rel_distance(&HValue::one(ps.ctx), 0.0);
    let (l, _) = lhs_eval(IdentityId::ClKmg, &ps, &cfg.policy).map_err(|e| e.to_string())?;
    let (km, _) = lhs_eval(IdentityId::ClKm, &ps, &cfg.policy).map_err(|e| e.to_string())?;
    let same = l.rel_distance(&km, 0.0);
    ensure(
        d.terms_evaluated > 1 && d.nonzero_terms == 1 && dev <= SINGLE_TERM_TOL,
        format!("{} of {} box terms nonzero, |sum - 1| {dev:.2e}, kmg vs km series rel {same:.2e}", d.nonzero_terms, d.terms_evaluated),
    )
}

fn cross_route() -> Outcome {
    let cfg = base_cfg("");
    let mut worst: f64 = 0.0;
    for i in 0..CROSS_SETS as u64 {
        let ps = sample_at(IdentityId::ClKmg, &cfg.sampler, i).map_err(|e| e.to_string())?;
        let a = ps.scalar("a").unwrap();
        if !(a.is_integer() && a.to_i64().unwrap() < 0) {
            return Err(format!("sample {i} is not terminating"));
        }
        let (k, _) = rhs_eval(IdentityId::ClKmg, &ps, &cfg.policy).map_err(|e| e.to_string())?;
        let (u, _) = rhs_eval(IdentityId::ClUs, &ps, &cfg.policy).map_err(|e| e.to_string())?;
        worst = worst.max(k.rel_distance(&u, 0.0));
    }
    ensure(worst <= CROSS_TOL, format!("{CROSS_SETS} terminating sets, worst rel {worst:.2e}"))
}

fn st_permuted() -> Outcome {
    let mut worst: f64 = 0.0;
    for s in 0..PERM_SAMPLES {
        let cfg = SampleConfig { seed: 1000 + s, ..base_cfg("").sampler };
        let sets = degenerate_suite_with(IdentityId::CorSt, &cfg).map_err(|e| e.to_string())?;
        let (_, ps) = sets.into_iter().find(|(k, _)| *k == DegenerationKind::PermutedNodes).ok_or("no permuted set")?;
        let policy = base_cfg("").policy;
        let (l, ld) = lhs_eval(IdentityId::CorSt, &ps, &policy).map_err(|e| e.to_string())?;
        let (r, rd) = rhs_eval(IdentityId::CorSt, &ps, &policy).map_err(|e| e.to_string())?;
        if !(ld.converged && rd.converged) {
            return Err(format!("seed {} did not converge", 1000 + s));
        }
        worst = worst.max(l.rel_distance(&r, 0.0));
    }
    ensure(worst <= PERM_TOL, format!("{PERM_SAMPLES} permuted sets, worst rel {worst:.2e}"))
}

/// sum_k (1 - A q^{2k})/(1 - A) prod_x (x)_k/(Aq/x)_k (q A^2/(bcde))^k by
/// direct summation outward from k = 0.
fn six_psi_six(alpha: &HValue, xs: &[HValue; 4], q: &QBase) -> HValue {
    let ctx = alpha.ctx();
    let aq = alpha * q.value();
    let prod_x = xs.iter().fold(HValue::one(ctx), |acc, x| &acc * x);
    let arg = (&(&aq * alpha)).checked_div(&prod_x).unwrap();
    let term = |k: i64| -> HValue {
        let mut t = (alpha * &q.pow(2 * k)).one_minus().checked_div(&alpha.one_minus()).unwrap();
        for x in xs {
            let num = qpoch_finite(x, q, k).unwrap();
            let den = qpoch_finite(&aq.checked_div(x).unwrap(), q, k).unwrap();
            t = &t * &num.checked_div(&den).unwrap();
        }
        &t * &arg.powi(k).unwrap()
    };
    let mut sum = term(0);
    let mut quiet = 0;
    for k in 1..2000 {
        let (up, down) = (term(k), term(-k));
        sum = &(&sum + &up) + &down;
        let size = up.abs_f64().max(down.abs_f64());
        quiet = if size < 1e-50 * sum.abs_f64() { quiet + 1 } else { 0 };
        if quiet >= 3 {
            break;
        }
    }
    sum
}

fn oracles() -> Outcome {
    let cfg = base_cfg("");
    let s2 = with_dims((2, 2));
    let mut worst_psi: f64 = 0.0;
    for i in 0..PSI_SAMPLES {
        let ps = sample_at(IdentityId::Gustafson6Psi6, &s2, i).map_err(|e| e.to_string())?;
        let q = ps.qbase().unwrap().clone();
        let (a, b, z) = (ps.vector("a").unwrap(), ps.vector("b").unwrap(), ps.vector("z").unwrap());
        // y = (k, -k) turns the n = 2 sum into a very-well-poised 6psi6 in z1/z2
        let alpha = z[0].checked_div(&z[1]).unwrap();
        let xs = [
            &a[0] * &z[0],
            &a[1] * &z[0],
            q.value().checked_div(&(&b[0] * &z[1])).unwrap(),
            q.value().checked_div(&(&b[1] * &z[1])).unwrap(),
        ];
        let oracle = six_psi_six(&alpha, &xs, &q);
        let (l, _) = lhs_eval(IdentityId::Gustafson6Psi6, &ps, &cfg.policy).map_err(|e| e.to_string())?;
        let (r, _) = rhs_eval(IdentityId::Gustafson6Psi6, &ps, &cfg.policy).map_err(|e| e.to_string())?;
        worst_psi = worst_psi.max(l.rel_distance(&oracle, 0.0)).max(r.rel_distance(&oracle, 0.0));
    }
    let s1 = with_dims((1, 1));
    let mut worst_saal: f64 = 0.0;
    for i in 0..PSI_SAMPLES {
        let ps = sample_at(IdentityId::CorMilneSaalschutz, &s1, i).map_err(|e| e.to_string())?;
        let q = ps.qbase().unwrap().clone();
        let m = ps.int_vec("m").unwrap()[0];
        let z = &ps.vector("z").unwrap()[0];
        let (a, b, c, d) = (ps.scalar("a").unwrap(), ps.scalar("b").unwrap(), ps.scalar("c").unwrap(), ps.scalar("d").unwrap());
        // 3phi2(q^-m, a, bz; c, dz; q, q), balanced by q^{1-m} ab = cd
        let qm = q.pow(-m);
        let (bz, dz) = (b * z, d * z);
        let mut oracle = HValue::zero(ps.ctx);
        for x in 0..=m {
            let num = [&qm, a, &bz].iter().fold(HValue::one(ps.ctx), |t, v| &t * &qpoch_finite(v, &q, x).unwrap());
            let den = [q.value(), c, &dz].iter().fold(HValue::one(ps.ctx), |t, v| &t * &qpoch_finite(v, &q, x).unwrap());
            oracle = &oracle + &(&num.checked_div(&den).unwrap() * &q.pow(x));
        }
        let (l, _) = lhs_eval(IdentityId::CorMilneSaalschutz, &ps, &cfg.policy).map_err(|e| e.to_string())?;
        let (r, _) = rhs_eval(IdentityId::CorMilneSaalschutz, &ps, &cfg.policy).map_err(|e| e.to_string())?;
        worst_saal = worst_saal.max(l.rel_distance(&oracle, 0.0)).max(r.rel_distance(&oracle, 0.0));
    }
    ensure(
        worst_psi <= PSI_TOL && worst_saal <= SAAL_TOL,
        format!("6psi6 n=2 worst rel {worst_psi:.2e} ({PSI_SAMPLES} sets), 3phi2 n=1 worst rel {worst_saal:.2e}"),
    )
}

fn kernel_suite() -> Outcome {
    let mut failures = Vec::new();
    for bits in [128u32, 256] {
        let c = PrecisionContext::new(bits).unwrap();
        let w = c.guarded();
        let eps = c.eps();
        let mut rng = ChaCha8Rng::seed_from_u64(bits as u64);
        let mut polar = |lo: f64, hi: f64| {
            let (r, t) = (rng.gen_range(lo..hi), rng.gen_range(-PI..PI));
            HValue::from_f64(r * t.cos(), r * t.sin(), c)
        };
        let mut counts = [0usize; 4];
        let mut bad = [0usize; 4];
        while counts[..3].iter().any(|&n| n < KERNEL_CASES) {
            let a = polar(0.05, 3.0);
            let q = QBase::new(polar(0.05, 0.9)).unwrap();
            let k = (counts[0] as i64 % 41) - 20;
            if counts[0] < KERNEL_CASES && min_factor_distance(&a, &q, k.min(0) - 1, k.max(0) + 1) > 1e-3 {
                let step = (&a.with_precision(w) * &q.with_precision(w).pow(k)).one_minus().with_precision(c);
                let rhs = &qpoch_finite(&a, &q, k).unwrap() * &step;
                bad[0] += (qpoch_finite(&a, &q, k + 1).unwrap().rel_distance(&rhs, 0.0) > 10.0 * eps) as usize;
                counts[0] += 1;
            }
            let k = counts[1] as i64 % 21;
            if counts[1] < KERNEL_CASES && min_factor_distance(&a, &q, -k - 1, 1) > 1e-3 {
                let (aw, qw) = (a.with_precision(w), q.with_precision(w));
                let back = qpoch_finite(&(&aw * &qw.pow(-k)), &qw, k).unwrap().with_precision(c);
                let prod = &qpoch_finite(&a, &q, -k).unwrap() * &back;
                bad[1] += (prod.rel_distance(&HValue::one(c), 0.0) > 10.0 * eps) as usize;
                counts[1] += 1;
            }
            let m = counts[2] as i64 % 21;
            if counts[2] < KERNEL_CASES && min_factor_distance(&a, &q, 0, m + 1) > 1e-3 {
                let (whole, t0) = qpoch_inf_with_tail(&a, &q);
                let (rest, t1) = qpoch_inf_with_tail(&(&a * &q.pow(m)), &q);
                let split = &qpoch_finite(&a, &q, m).unwrap() * &rest;
                bad[2] += (whole.rel_distance(&split, 0.0) > 100.0 * eps + t0 + t1) as usize;
                counts[2] += 1;
            }
        }
        while counts[3] < KERNEL_CASES {
            let x = HValue::from_f64(rng.gen_range(0.1..8.0), rng.gen_range(-4.0..4.0), c);
            let k = rng.gen_range(0..=20);
            let via = (&log_gamma(&x.add_i64(k)).unwrap() - &log_gamma(&x).unwrap()).exp();
            bad[3] += (poch_classical(&x, k).unwrap().rel_distance(&via, 0.0) > 100.0 * eps) as usize;
            counts[3] += 1;
        }
        if bad.iter().any(|&b| b > 0) {
            failures.push(format!("{bits} bits: {bad:?}"));
        }
    }
    ensure(
        failures.is_empty(),
        format!("4 invariants x {KERNEL_CASES} cases at 128 and 256 bits{}", if failures.is_empty() { String::new() } else { format!(", failures {failures:?}") }),
    )
}

fn truncation_honesty() -> Outcome {
    let cfg = base_cfg("");
    let infinite: Vec<IdentityId> = IdentityId::ALL
        .iter()
        .copied()
        .filter(|id| !id.is_classical())
        .filter(|&id| {
            let ps = sample_at(id, &cfg.sampler, 0).unwrap();
            let d = lookup(id);
            !(d.lhs_plan(&ps).unwrap().is_finite() && d.rhs_plan(&ps).unwrap().is_finite())
        })
        .collect();
    let r = cfg.policy.radius;
    let at = |radius: u32| TruncationPolicy { radius, early_stop: false, ..cfg.policy.clone() };
    let (mut used, mut honest, mut index) = (0usize, 0usize, 0u64);
    'outer: loop {
        for &id in &infinite {
            if used == HONESTY_CHECKS {
                break 'outer;
            }
            let ps = sample_at(id, &cfg.sampler, index).map_err(|e| e.to_string())?;
            let d = lookup(id);
            let (lp, rp) = (d.lhs_plan(&ps).unwrap(), d.rhs_plan(&ps).unwrap());
            for plan in [lp, rp].iter().filter(|p| !p.is_finite()) {
                let (v0, d0) = plan.evaluate(&at(r), ps.ctx, false).map_err(|e| e.to_string())?;
                if !d0.converged || used == HONESTY_CHECKS {
                    continue;
                }
                let (v1, _) = plan.evaluate(&at(r + 2), ps.ctx, false).map_err(|e| e.to_string())?;
                used += 1;
                honest += ((&v0 - &v1).abs_f64() <= HONESTY_FACTOR * d0.largest_shell_tail) as usize;
            }
        }
        index += 1;
        if index > 20 {
            break;
        }
    }
    let frac = honest as f64 / used.max(1) as f64;
    ensure(
        used == HONESTY_CHECKS && frac >= HONESTY_FRACTION,
        format!("{honest}/{used} converged sums moved by at most {HONESTY_FACTOR} x tail from R={r} to R={}", r + 2),
    )
}

fn determinism() -> Outcome {
    let mut cfg = base_cfg("samples = 2\n");
    let a = run_suite(&cfg).map_err(|e| e.to_string())?.untimed().to_json();
    let b = run_suite(&cfg).map_err(|e| e.to_string())?.untimed().to_json();
    cfg.parallel = false;
    let s = run_suite(&cfg).map_err(|e| e.to_string())?.untimed();
    let p = SuiteReport::from_json(&a).map_err(|e| e.to_string())?;
    let same_values = p.reports == s.reports;
    ensure(
        a == b && same_values,
        format!("{} reports: repeat byte-identical {}, serial = parallel {}", p.reports.len(), a == b, same_values),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("full-registry suite", full_suite),
        ("exact finite identities", exact_finite),
        ("thm1 at m=0 equals gustafson_6psi6", chain_thm1),
        ("cl_kmg at d=b+1 has one nonzero term", kmg_single_term),
        ("rhs(cl_kmg) = rhs(cl_us)", cross_route),
        ("cor_st with permuted nodes", st_permuted),
        ("independent 6psi6 and 3phi2 oracles", oracles),
        ("arithmetic kernel invariants", kernel_suite),
        ("truncation honesty", truncation_honesty),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t0.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("criterion {:>2} PASS  {name}: {d} [{secs:.1}s]", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {d} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
