use alloc::vec;
use alloc::vec::Vec;

use super::{SumDiagnostics, TruncationPolicy};
use crate::error::{Error, Result};
use crate::mparith::{HValue, PrecisionContext};

type Visit<'a> = dyn FnMut(&[i64]) -> Result<()> + 'a;

fn lift_pole(e: Error, y: &[i64]) -> Error {
    match e {
        Error::DivisionByZeroPole { .. } | Error::DivisionByZero => {
            Error::PoleInTerm { index: y.to_vec() }
        }
        other => other,
    }
}

/// Lexicographic walk of the box lo <= y <= hi (last coordinate fastest).
fn walk_box(lo: &[i64], hi: &[i64], visit: &mut Visit<'_>) -> Result<()> {
    if lo.iter().zip(hi).any(|(l, h)| l > h) {
        return Ok(());
    }
    let n = lo.len();
    let mut y = lo.to_vec();
    loop {
        visit(&y)?;
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            if y[i] < hi[i] {
                y[i] += 1;
                y[(i + 1)..n].copy_from_slice(&lo[(i + 1)..n]);
                break;
            }
        }
    }
}

/// Lexicographic walk of the box points with coordinate sum `total`.
fn walk_box_sum(lo: &[i64], hi: &[i64], total: i64, visit: &mut Visit<'_>) -> Result<()> {
    let n = lo.len();
    // suffix bounds of the remaining coordinates
    let mut min_rest = vec![0i64; n + 1];
    let mut max_rest = vec![0i64; n + 1];
    for i in (0..n).rev() {
        min_rest[i] = min_rest[i + 1] + lo[i];
        max_rest[i] = max_rest[i + 1] + hi[i];
    }
    if total < min_rest[0] || total > max_rest[0] {
        return Ok(());
    }
    let mut y = vec![0i64; n];
    fn rec(
        i: usize,
        left: i64,
        y: &mut Vec<i64>,
        lo: &[i64],
        hi: &[i64],
        min_rest: &[i64],
        max_rest: &[i64],
        visit: &mut Visit<'_>,
    ) -> Result<()> {
        if i == y.len() {
            return if left == 0 { visit(y) } else { Ok(()) };
        }
        let a = lo[i].max(left - max_rest[i + 1]);
        let b = hi[i].min(left - min_rest[i + 1]);
        for v in a..=b {
            y[i] = v;
            rec(i + 1, left - v, y, lo, hi, min_rest, max_rest, visit)?;
        }
        Ok(())
    }
    rec(0, total, &mut y, lo, hi, &min_rest, &max_rest, visit)
}

fn finite_sum<F>(ctx: PrecisionContext, walk: impl FnOnce(&mut Visit<'_>) -> Result<()>, mut term: F) -> Result<(HValue, SumDiagnostics)>
where
    F: FnMut(&[i64]) -> Result<HValue>,
{
    let mut acc = HValue::zero(ctx);
    let mut terms = 0u64;
    let mut nonzero = 0u64;
    let mut top = f64::NEG_INFINITY;
    walk(&mut |y: &[i64]| {
        let t = term(y).map_err(|e| lift_pole(e, y))?;
        terms += 1;
        if !t.is_zero() {
            nonzero += 1;
            top = top.max(t.log2_abs());
            acc = &acc + &t;
        }
        Ok(())
    })?;
    let mut d = SumDiagnostics::exact(terms, nonzero);
    d.largest_term = libm::exp2(top);
    Ok((acc, d))
}

/// Exact sum over 0 <= x_i <= m_i in lexicographic order; an empty `m`
/// yields the single term at the empty index.
pub fn sum_box<F>(ctx: PrecisionContext, m: &[i64], term: F) -> Result<(HValue, SumDiagnostics)>
where
    F: FnMut(&[i64]) -> Result<HValue>,
{
    let lo = vec![0i64; m.len()];
    sum_bounded_box(ctx, &lo, m, term)
}

/// Exact sum over lo_i <= x_i <= hi_i.
pub fn sum_bounded_box<F>(ctx: PrecisionContext, lo: &[i64], hi: &[i64], term: F) -> Result<(HValue, SumDiagnostics)>
where
    F: FnMut(&[i64]) -> Result<HValue>,
{
    finite_sum(ctx, |v| walk_box(lo, hi, v), term)
}

/// Exact sum over the box points 0 <= x_i <= m_i with |x| = total.
pub fn sum_box_hyperplane<F>(ctx: PrecisionContext, m: &[i64], total: i64, term: F) -> Result<(HValue, SumDiagnostics)>
where
    F: FnMut(&[i64]) -> Result<HValue>,
{
    let lo = vec![0i64; m.len()];
    sum_bounded_hyperplane(ctx, &lo, m, total, term)
}

/// Exact sum over lo_i <= x_i <= hi_i with |x| = total.
pub fn sum_bounded_hyperplane<F>(
    ctx: PrecisionContext,
    lo: &[i64],
    hi: &[i64],
    total: i64,
    term: F,
) -> Result<(HValue, SumDiagnostics)>
where
    F: FnMut(&[i64]) -> Result<HValue>,
{
    finite_sum(ctx, |v| walk_box_sum(lo, hi, total, v), term)
}

/// Exact sum over x_i >= 0 with |x| <= max_total.
pub fn sum_simplex<F>(ctx: PrecisionContext, dim: usize, max_total: i64, term: F) -> Result<(HValue, SumDiagnostics)>
where
    F: FnMut(&[i64]) -> Result<HValue>,
{
    let lo = vec![0i64; dim];
    let hi = vec![max_total.max(-1); dim];
    finite_sum(
        ctx,
        |v| {
            walk_box(&lo, &hi, &mut |y: &[i64]| {
                if y.iter().sum::<i64>() <= max_total {
                    v(y)
                } else {
                    Ok(())
                }
            })
        },
        term,
    )
}

/// Points of the bilateral hyperplane |y| = total with max |y_i| = s.
fn walk_hyperplane_shell(n: usize, total: i64, s: i64, visit: &mut Visit<'_>) -> Result<()> {
    if n == 1 {
        return if total.abs() == s { visit(&[total]) } else { Ok(()) };
    }
    let lo = vec![-s; n - 1];
    let hi = vec![s; n - 1];
    let mut y = vec![0i64; n];
    walk_box(&lo, &hi, &mut |head: &[i64]| {
        let last = total - head.iter().sum::<i64>();
        if last.abs() > s {
            return Ok(());
        }
        if last.abs() != s && head.iter().all(|v| v.abs() != s) {
            return Ok(());
        }
        y[..n - 1].copy_from_slice(head);
        y[n - 1] = last;
        visit(&y)
    })
}

/// Points of Z^n with max |y_i| = s.
fn walk_lattice_shell(n: usize, s: i64, visit: &mut Visit<'_>) -> Result<()> {
    if s == 0 {
        return visit(&vec![0i64; n]);
    }
    let lo = vec![-s; n - 1];
    let hi = vec![s; n - 1];
    let mut y = vec![0i64; n];
    walk_box(&lo, &hi, &mut |head: &[i64]| {
        y[..n - 1].copy_from_slice(head);
        if head.iter().any(|v| v.abs() == s) {
            for last in -s..=s {
                y[n - 1] = last;
                visit(&y)?;
            }
        } else {
            y[n - 1] = -s;
            visit(&y)?;
            y[n - 1] = s;
            visit(&y)?;
        }
        Ok(())
    })
}

/// Points y_i >= 0 with |y| = s.
fn walk_orthant_shell(n: usize, s: i64, visit: &mut Visit<'_>) -> Result<()> {
    let lo = vec![0i64; n];
    let hi = vec![s; n];
    walk_box_sum(&lo, &hi, s, visit)
}

struct ShellState {
    log2_tol: f64,
    window: usize,
    maxima: Vec<f64>,
    started: bool,
    max_seen: f64,
}

impl ShellState {
    fn threshold(&self, sum: &HValue) -> f64 {
        let scale = if sum.is_zero() { self.max_seen } else { sum.log2_abs() };
        self.log2_tol + scale
    }

    fn converged(&self, sum: &HValue) -> bool {
        if self.maxima.len() < self.window {
            return false;
        }
        let thr = self.threshold(sum);
        self.maxima[self.maxima.len() - self.window..].iter().all(|&m| m <= thr)
    }

    fn diverging(&self) -> bool {
        let k = self.maxima.len();
        if k < 4 {
            return false;
        }
        let tail = &self.maxima[k - 3..];
        tail[0] < tail[1] && tail[1] < tail[2] && tail[2] >= self.max_seen
    }
}

fn shell_sum<F>(
    ctx: PrecisionContext,
    policy: &TruncationPolicy,
    mut walk_shell: impl FnMut(i64, &mut Visit<'_>) -> Result<()>,
    mut term: F,
) -> Result<(HValue, SumDiagnostics)>
where
    F: FnMut(&[i64]) -> Result<HValue>,
{
    policy.validate()?;
    let mut sum = HValue::zero(ctx);
    let mut diag = SumDiagnostics::default();
    let mut st = ShellState {
        log2_tol: libm::log2(policy.term_tol),
        window: policy.stagnation_window as usize,
        maxima: Vec::new(),
        started: false,
        max_seen: f64::NEG_INFINITY,
    };
    for s in 0..=policy.radius as i64 {
        let mut shell = HValue::zero(ctx);
        let mut shell_max = f64::NEG_INFINITY;
        let mut count = 0u64;
        walk_shell(s, &mut |y: &[i64]| {
            if diag.terms_evaluated >= policy.max_terms {
                return Err(Error::BudgetExceeded { budget: policy.max_terms });
            }
            let t = term(y).map_err(|e| lift_pole(e, y))?;
            diag.terms_evaluated += 1;
            count += 1;
            if !t.is_zero() {
                diag.nonzero_terms += 1;
                let l = t.log2_abs();
                if l > shell_max {
                    shell_max = l;
                }
                shell = &shell + &t;
            }
            Ok(())
        })?;
        if count > 0 {
            st.started = true;
        }
        diag.radius_used = s as u32;
        diag.largest_shell_tail = libm::exp2(shell_max);
        diag.largest_term = diag.largest_term.max(diag.largest_shell_tail);
        if !st.started {
            continue;
        }
        sum = &sum + &shell;
        st.maxima.push(shell_max);
        if shell_max > st.max_seen {
            st.max_seen = shell_max;
        }
        if policy.early_stop && st.converged(&sum) {
            break;
        }
    }
    diag.converged = st.converged(&sum);
    diag.tail_threshold = libm::exp2(st.threshold(&sum));
    if !diag.converged && st.diverging() {
        return Err(Error::Diverged { shell: diag.radius_used });
    }
    Ok((sum, diag))
}

/// Bilateral sum over y in Z^n with |y| = total, by shells max |y_i| = s.
pub fn sum_hyperplane_bilateral<F>(
    ctx: PrecisionContext,
    n: usize,
    total: i64,
    policy: &TruncationPolicy,
    term: F,
) -> Result<(HValue, SumDiagnostics)>
where
    F: FnMut(&[i64]) -> Result<HValue>,
{
    if n == 0 {
        return Err(Error::InvalidDimension(alloc::string::String::from("n = 0")));
    }
    shell_sum(ctx, policy, |s, v| walk_hyperplane_shell(n, total, s, v), term)
}

/// Unilateral sum over y_i >= 0 by total-degree shells |y| = s.
pub fn sum_orthant<F>(ctx: PrecisionContext, n: usize, policy: &TruncationPolicy, term: F) -> Result<(HValue, SumDiagnostics)>
where
    F: FnMut(&[i64]) -> Result<HValue>,
{
    if n == 0 {
        return Err(Error::InvalidDimension(alloc::string::String::from("n = 0")));
    }
    shell_sum(ctx, policy, |s, v| walk_orthant_shell(n, s, v), term)
}

/// Bilateral sum over all of Z^n by shells max |y_i| = s.
pub fn sum_lattice_bilateral<F>(
    ctx: PrecisionContext,
    n: usize,
    policy: &TruncationPolicy,
    term: F,
) -> Result<(HValue, SumDiagnostics)>
where
    F: FnMut(&[i64]) -> Result<HValue>,
{
    if n == 0 {
        return Err(Error::InvalidDimension(alloc::string::String::from("n = 0")));
    }
    shell_sum(ctx, policy, |s, v| walk_lattice_shell(n, s, v), term)
}
