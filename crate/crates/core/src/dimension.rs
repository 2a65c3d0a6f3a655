//! Hausdorff dimension of the set families: the Moran equation, the
//! block-combination equation `Σ N_k t^k = 1` with `t = s^{-α}`, the cubic
//! closed form for `M_(-D,s)`, the periodic-gap formula, the `Λ(λ)` formula
//! and the liminf estimate for Cantor-series restrictions.
//!
//! Floating point is `f64` throughout; every root method reports the residual
//! of its defining equation and the final bracket.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::families::{blocks_of_family, BlockSet, FamilySpec};
use crate::radix::{lcm, rat, to_f64, CantorBasis, Rational};

/// Bisection tolerance on `t`.
pub const T_TOLERANCE: f64 = 1e-13;
/// Iteration cap for every bisection.
pub const MAX_ITERATIONS: u32 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    MoranRoot,
    BlockRoot,
    ClosedLog,
    ClosedCubic,
    Periodic,
    LiminfEstimate,
    Boxcount,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::MoranRoot => "moran-root",
            Method::BlockRoot => "block-root",
            Method::ClosedLog => "closed-log",
            Method::ClosedCubic => "closed-cubic",
            Method::Periodic => "periodic",
            Method::LiminfEstimate => "liminf-estimate",
            Method::Boxcount => "boxcount",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DimensionResult {
    pub alpha: f64,
    pub method: Method,
    /// `|defining equation at alpha|`.
    pub residual: f64,
    /// Final bracket on `alpha`.
    pub bracket: (f64, f64),
    pub iterations: u32,
    /// Single-block family: one point, dimension 0.
    pub degenerate: bool,
    /// Independent second evaluation where one exists.
    pub cross_check: Option<f64>,
    /// Exact value when the dimension is rational.
    pub exact: Option<Rational>,
    pub notes: Vec<String>,
}

impl DimensionResult {
    fn closed(alpha: f64, method: Method) -> Self {
        Self {
            alpha,
            method,
            residual: 0.0,
            bracket: (alpha, alpha),
            iterations: 0,
            degenerate: false,
            cross_check: None,
            exact: None,
            notes: Vec::new(),
        }
    }

    fn clamp_to_line(mut self) -> Self {
        if self.alpha > 1.0 {
            self.notes.push(format!(
                "equation root {} exceeds the dimension of the line; pieces overlap, reporting 1",
                self.alpha
            ));
            self.alpha = 1.0;
            self.bracket.1 = self.bracket.1.max(1.0);
            self.bracket.0 = self.bracket.0.min(1.0);
        }
        self
    }
}

/// Result of a monotone bisection: root, final bracket, iterations.
struct Root {
    x: f64,
    lo: f64,
    hi: f64,
    iterations: u32,
}

/// Bisection for an increasing `f` with `f(lo) < 0 < f(hi)`.
fn bisect_increasing(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Root {
    let mut iterations = 0;
    while hi - lo > tol && iterations < MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    Root {
        x: 0.5 * (lo + hi),
        lo,
        hi,
        iterations,
    }
}

/// Newton steps that stay inside the bracket and do not increase `|f|`.
fn newton_polish(f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64, root: &mut Root) {
    for _ in 0..4 {
        let (fx, dfx) = (f(root.x), df(root.x));
        if fx == 0.0 || dfx == 0.0 {
            return;
        }
        let next = root.x - fx / dfx;
        if !(root.lo..=root.hi).contains(&next) || f(next).abs() >= fx.abs() {
            return;
        }
        root.x = next;
    }
}

/// Unique `α >= 0` with `Σ σ_i^α = 1`.
pub fn moran_dimension(ratios: &[f64]) -> Result<DimensionResult> {
    if ratios.is_empty() {
        return Err(Error::EmptyBlockSet);
    }
    if let Some(&bad) = ratios.iter().find(|&&r| !(r > 0.0 && r < 1.0)) {
        return Err(Error::RatioOutOfRange(bad.to_string()));
    }
    let f = |a: f64| ratios.iter().map(|r| r.powf(a)).sum::<f64>() - 1.0;
    if ratios.len() == 1 {
        let mut r = DimensionResult::closed(0.0, Method::MoranRoot);
        r.degenerate = true;
        return Ok(r);
    }
    // g(α) = -f(α) is increasing; grow the bracket until it changes sign.
    let g = |a: f64| -f(a);
    let mut hi = 1.0;
    while g(hi) < 0.0 {
        hi *= 2.0;
    }
    let mut root = bisect_increasing(g, 0.0, hi, 1e-15);
    let df = |a: f64| -ratios.iter().map(|r| r.powf(a) * r.ln()).sum::<f64>();
    newton_polish(g, df, &mut root);
    Ok(DimensionResult {
        alpha: root.x,
        method: Method::MoranRoot,
        residual: f(root.x).abs(),
        bracket: (root.lo, root.hi),
        iterations: root.iterations,
        degenerate: false,
        cross_check: None,
        exact: None,
        notes: Vec::new(),
    })
}

fn poly(hist: &BTreeMap<usize, u64>, t: f64) -> f64 {
    hist.iter().map(|(&k, &n)| n as f64 * t.powi(k as i32)).sum::<f64>() - 1.0
}

fn poly_derivative(hist: &BTreeMap<usize, u64>, t: f64) -> f64 {
    hist.iter()
        .map(|(&k, &n)| n as f64 * k as f64 * t.powi(k as i32 - 1))
        .sum()
}

/// Root in `t ∈ (0, 1)` of the increasing map `h`, converted to `α = log_s(1/t)`.
fn t_root(s: u32, h: impl Fn(f64) -> f64, dh: impl Fn(f64) -> f64, method: Method) -> DimensionResult {
    let mut root = bisect_increasing(&h, 0.0, 1.0, T_TOLERANCE);
    newton_polish(&h, dh, &mut root);
    let ln_s = (s as f64).ln();
    let alpha_of = |t: f64| (1.0 / t).ln() / ln_s;
    let alpha = alpha_of(root.x);
    DimensionResult {
        alpha,
        method,
        residual: h(root.x).abs(),
        bracket: (alpha_of(root.hi).min(alpha), alpha_of(root.lo).max(alpha)),
        iterations: root.iterations,
        degenerate: false,
        cross_check: None,
        exact: None,
        notes: Vec::new(),
    }
}

/// Solve `Σ_k N_k t^k = 1`, `t = s^{-α}`, for the block set's histogram.
pub fn block_dimension(s: u32, blocks: &BlockSet) -> Result<DimensionResult> {
    if s < 2 {
        return Err(Error::InvalidBase(s as u64));
    }
    if blocks.base() != s {
        return Err(Error::InvalidArgument(format!(
            "block set is over base {}, not {s}",
            blocks.base()
        )));
    }
    match blocks.histogram() {
        None => Ok(md_cubic_root(s)),
        Some(hist) => {
            if hist.is_empty() {
                return Err(Error::EmptyBlockSet);
            }
            if blocks.is_degenerate() {
                let mut r = DimensionResult::closed(0.0, Method::BlockRoot);
                r.degenerate = true;
                r.notes.push("single block: the set is one point".into());
                return Ok(r);
            }
            let mut r = t_root(s, |t| poly(&hist, t), |t| poly_derivative(&hist, t), Method::BlockRoot);
            r.notes
                .push(format!("solved {} = 1, t = {s}^-alpha", render_poly(&hist)));
            Ok(r.clamp_to_line())
        }
    }
}

fn render_poly(hist: &BTreeMap<usize, u64>) -> String {
    hist.iter()
        .map(|(&k, &n)| match (n, k) {
            (1, 1) => "t".to_string(),
            (1, k) => format!("t^{k}"),
            (n, 1) => format!("{n}t"),
            (n, k) => format!("{n}t^{k}"),
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Bisection root of `(s-1)t³ + t² - 1 = 0` as a dimension.
fn md_cubic_root(s: u32) -> DimensionResult {
    let c = (s - 1) as f64;
    let mut r = t_root(
        s,
        |t| c * t * t * t + t * t - 1.0,
        |t| 3.0 * c * t * t + 2.0 * t,
        Method::BlockRoot,
    );
    r.notes
        .push(format!("solved (s-1)t^3 + t^2 = 1 with s = {s}, t = {s}^-alpha"));
    r
}

/// Cardano closed form `x = ∛(a + b) + ∛(a - b)` of the real root of
/// `x³ - x = s - 1`, with `α = log_s x`.
pub fn md_cardano(s: u32) -> f64 {
    let c = (s - 1) as f64;
    let a = c / 2.0;
    let b = ((27.0 * c * c - 4.0) / 3.0).sqrt() / 6.0;
    let x = (a + b).cbrt() + (a - b).cbrt();
    x.ln() / (s as f64).ln()
}

/// Dimension of `M_(-D,s)` from the closed form, cross-checked against the
/// bisection root of the cubic.
pub fn md_closed_form(s: u32) -> Result<DimensionResult> {
    if s < 2 {
        return Err(Error::InvalidBase(s as u64));
    }
    let alpha = md_cardano(s);
    let check = md_cubic_root(s);
    let c = (s - 1) as f64;
    let t = (s as f64).powf(-alpha);
    Ok(DimensionResult {
        alpha,
        method: Method::ClosedCubic,
        residual: (c * t * t * t + t * t - 1.0).abs(),
        bracket: (check.bracket.0.min(alpha), check.bracket.1.max(alpha)),
        iterations: check.iterations,
        degenerate: false,
        cross_check: Some(check.alpha),
        exact: None,
        notes: vec![format!(
            "cross-check: bisection root of (s-1)t^3 + t^2 = 1 with s = {s}"
        )],
    })
}

/// `t / (m_1 + … + m_t)` for a purely periodic odd gap sequence.
pub fn periodic_dimension(m: &[u32]) -> Result<DimensionResult> {
    if m.is_empty() {
        return Err(Error::InvalidArgument("period must be nonempty".into()));
    }
    if let Some(&bad) = m.iter().find(|&&x| x % 2 == 0) {
        return Err(Error::FamilyConstraint(format!("period entry {bad} is not odd")));
    }
    let total: u64 = m.iter().map(|&x| x as u64).sum();
    let exact = rat(m.len() as i64, total as i64);
    let mut r = DimensionResult::closed(to_f64(&exact), Method::Periodic);
    r.exact = Some(exact);
    Ok(r)
}

/// Moran dimension of the periodic construction in base `s`: `s^t` pieces of
/// ratio `s^{-(m_1+…+m_t)}` per period.
pub fn periodic_moran_check(s: u32, m: &[u32]) -> Result<f64> {
    if s < 2 {
        return Err(Error::InvalidBase(s as u64));
    }
    if m.is_empty() {
        return Err(Error::InvalidArgument("period must be nonempty".into()));
    }
    let total: f64 = m.iter().map(|&x| x as f64).sum();
    let pieces = (s as f64).powi(m.len() as i32);
    let ratio = (s as f64).powf(-total);
    if pieces <= 1e5 && ratio > 0.0 {
        let ratios = vec![ratio; pieces as usize];
        return Ok(moran_dimension(&ratios)?.alpha);
    }
    Ok(pieces.ln() / -ratio.ln())
}

/// `α = log l / (-log λ)` for `l` pieces of ratio `λ`. When `s` is given,
/// the side hypothesis `s - 1 < (l - 1)²` and the case `λ = 1/s` are noted.
pub fn lambda_dimension(lam: f64, l: u32, s: Option<u32>) -> Result<DimensionResult> {
    if !(lam > 0.0 && lam < 1.0) {
        return Err(Error::RatioOutOfRange(lam.to_string()));
    }
    if l < 1 {
        return Err(Error::InvalidArgument("l must be at least 1".into()));
    }
    let alpha = (l as f64).ln() / -lam.ln();
    let mut r = DimensionResult::closed(alpha, Method::ClosedLog);
    r.degenerate = l == 1;
    if let Some(s) = s {
        let s1 = s as i64 - 1;
        let l1 = l as i64 - 1;
        if s1 < l1 * l1 {
            r.notes
                .push(format!("hypothesis s-1 < (l-1)^2 holds ({s1} < {})", l1 * l1));
        } else {
            r.notes
                .push(format!("hypothesis s-1 < (l-1)^2 fails ({s1} >= {})", l1 * l1));
        }
        if (lam * s as f64 - 1.0).abs() < 1e-15 {
            r.notes.push(format!("lambda = 1/{s}: alpha = log_{s} {l}"));
        }
    }
    Ok(r.clamp_to_line())
}

/// Neumaier-compensated running sum.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CantorEstimate {
    /// `r_n = Σ_{j<=n} log|I_j| / Σ_{j<=n} log d_j`, `n = 1..=n_max`.
    pub ratios: Vec<f64>,
    /// Minimum of `r_n` over the trailing window (a proxy for the liminf).
    pub proxy: f64,
    /// First and last `n` of the trailing window (1-based, inclusive).
    pub window: (usize, usize),
    /// `log d_n / log(d_1⋯d_n)` at `n = n_max`.
    pub side_ratio: f64,
    pub warning: Option<String>,
    pub result: DimensionResult,
}

/// Running estimates of `liminf log Π|I_j| / log Π d_j` up to `n_max`.
pub fn cantor_series_dim_estimate(basis: &CantorBasis, subsets: &[Vec<u64>], n_max: usize) -> Result<CantorEstimate> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    if subsets.is_empty() {
        return Err(Error::InvalidFamily("at least one digit subset is required".into()));
    }
    if let Some(j) = subsets.iter().position(Vec::is_empty) {
        return Err(Error::InvalidFamily(format!("digit subset I_{} is empty", j + 1)));
    }
    let mut num = CompensatedSum::default();
    let mut den = CompensatedSum::default();
    let mut ratios = Vec::with_capacity(n_max);
    let mut last_ln_d = 0.0;
    for n in 1..=n_max {
        let set = &subsets[(n - 1) % subsets.len()];
        if let Some(d) = basis.d_u64(n) {
            if d < 2 {
                return Err(Error::InvalidBase(d));
            }
            if let Some(&e) = set.iter().find(|&&e| e >= d) {
                return Err(Error::InvalidDigit {
                    position: n,
                    digit: e,
                    bound: d.to_string(),
                });
            }
        }
        last_ln_d = basis.ln_d(n);
        num.add((set.len() as f64).ln());
        den.add(last_ln_d);
        ratios.push(num.value() / den.value());
    }
    let width = 100.max(n_max / 10).min(n_max);
    let start = n_max - width + 1;
    let proxy = ratios[start - 1..].iter().copied().fold(f64::INFINITY, f64::min);
    let side_ratio = last_ln_d / den.value();
    let warning = (side_ratio > 1e-2).then(|| {
        format!("log d_n / log(d_1...d_n) = {side_ratio:.3e} at n = {n_max}; the side condition converges slowly")
    });
    let mut result = DimensionResult::closed(proxy, Method::LiminfEstimate);
    result.residual = f64::NAN;
    result.bracket = (
        proxy,
        ratios[start - 1..].iter().copied().fold(f64::NEG_INFINITY, f64::max),
    );
    result.iterations = n_max as u32;
    result.degenerate = subsets.iter().all(|s| s.len() == 1);
    result.notes.push(format!(
        "minimum of r_n over n = {start}..={n_max}; a proxy for the liminf"
    ));
    if let Some(w) = &warning {
        result.notes.push(w.clone());
    }
    Ok(CantorEstimate {
        ratios,
        proxy,
        window: (start, n_max),
        side_ratio,
        warning,
        result,
    })
}

/// Default horizon for liminf estimates of non-periodic bases.
pub const DEFAULT_NMAX: usize = 100_000;

/// Dimension of any family, dispatching to the matching equation.
pub fn family_dimension(fam: &FamilySpec) -> Result<DimensionResult> {
    family_dimension_with(fam, DEFAULT_NMAX)
}

/// As [`family_dimension`], with the liminf horizon for non-periodic Cantor bases.
pub fn family_dimension_with(fam: &FamilySpec, n_max: usize) -> Result<DimensionResult> {
    match fam {
        FamilySpec::Md { s } => md_closed_form(*s),
        FamilySpec::MdPeriodic { s, period } => {
            let mut r = periodic_dimension(period)?;
            r.cross_check = Some(periodic_moran_check(*s, period)?);
            Ok(r)
        }
        FamilySpec::CantorRestrict { basis, subsets } => match basis.period_len() {
            Some(p) => {
                let t = lcm(p, subsets.len());
                let num: f64 = (1..=t)
                    .map(|n| (subsets[(n - 1) % subsets.len()].len() as f64).ln())
                    .sum();
                let den: f64 = (1..=t).map(|n| basis.ln_d(n)).sum();
                let mut r = DimensionResult::closed(num / den, Method::ClosedLog);
                r.degenerate = subsets.iter().all(|s| s.len() == 1);
                r.notes
                    .push(format!("periodic basis: ratio of log-sums over {t} levels"));
                Ok(r.clamp_to_line())
            }
            None => Ok(cantor_series_dim_estimate(basis, subsets, n_max)?.result),
        },
        _ => {
            let s = fam.base().expect("block families have a base");
            let blocks = blocks_of_family(fam)?;
            let mut r = block_dimension(s, &blocks)?;
            if fam.is_degenerate() {
                r.notes.push("degenerate family".into());
            }
            Ok(r)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    /// Independent high-precision bisection on `Σ t^p = 1` over the given exponents.
    fn oracle_t(exps: &[i32]) -> f64 {
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..2000 {
            let mid = 0.5 * (lo + hi);
            if exps.iter().map(|&p| mid.powi(p)).sum::<f64>() < 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Real root of `x³ - x = c` by bisection on `[1, 1 + c]`.
    fn oracle_cubic(c: f64) -> f64 {
        let (mut lo, mut hi) = (1.0f64, 1.0 + c);
        for _ in 0..2000 {
            let mid = 0.5 * (lo + hi);
            if mid * mid * mid - mid < c {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    #[test]
    fn moran_examples() {
        let r = moran_dimension(&[1.0 / 3.0, 1.0 / 3.0]).unwrap();
        assert!(close(r.alpha, 2f64.ln() / 3f64.ln(), 1e-12));
        assert!(r.residual <= 1e-12);
        let r = moran_dimension(&[0.4]).unwrap();
        assert_eq!(r.alpha, 0.0);
        let r = moran_dimension(&[0.5, 0.25]).unwrap();
        let t = (5f64.sqrt() - 1.0) / 2.0;
        assert!(close(r.alpha, -t.ln() / 2f64.ln(), 1e-12));
        assert!(close(r.alpha, 0.6942419, 1e-7));
        assert!(moran_dimension(&[1.0]).is_err());
        assert!(moran_dimension(&[]).is_err());
    }

    #[test]
    fn block_examples() {
        let cantor = BlockSet::finite(3, vec![vec![0], vec![2]]).unwrap();
        let r = block_dimension(3, &cantor).unwrap();
        assert!(close(r.alpha, 0.630929753571, 1e-10));
        let full = BlockSet::finite(3, vec![vec![0], vec![1], vec![2]]).unwrap();
        assert!(close(block_dimension(3, &full).unwrap().alpha, 1.0, 1e-12));
        let s = BlockSet::finite(3, vec![vec![1], vec![0, 2]]).unwrap();
        let r = block_dimension(3, &s).unwrap();
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(close(r.alpha, golden.ln() / 3f64.ln(), 1e-12));
        assert!(r.residual <= 1e-10);
        assert!(r.bracket.0 <= r.alpha && r.alpha <= r.bracket.1);
    }

    #[test]
    fn family_examples() {
        let r = family_dimension(&FamilySpec::s(4).unwrap()).unwrap();
        let t = oracle_t(&[1, 2, 3]);
        assert!(close(r.alpha, -t.ln() / 4f64.ln(), 1e-12));
        assert!(close(r.alpha, 0.4395732, 1e-6));
        let sm = family_dimension(&FamilySpec::sminus(3).unwrap()).unwrap();
        let n = family_dimension(&FamilySpec::nsu(3, 0).unwrap()).unwrap();
        assert!(close(sm.alpha, 0.4380178, 1e-6));
        assert_eq!(sm.alpha, n.alpha);
        let su = family_dimension(&FamilySpec::su(5, 2).unwrap()).unwrap();
        let t = oracle_t(&[1, 3, 4]);
        assert!(close(su.alpha, -t.ln() / 5f64.ln(), 1e-12));
        let d = family_dimension(&FamilySpec::su(3, 1).unwrap()).unwrap();
        assert!(d.degenerate && d.alpha == 0.0);
    }

    #[test]
    fn md_examples() {
        let r = md_closed_form(2).unwrap();
        let plastic = oracle_cubic(1.0);
        assert!(close(plastic, 1.3247179572, 1e-10));
        assert!(close(r.alpha, plastic.log2(), 1e-12));
        assert!(close(r.alpha, 0.4056859, 1e-6));
        let r3 = md_closed_form(3).unwrap();
        let x3 = oracle_cubic(2.0);
        assert!(close(r3.alpha, x3.ln() / 3f64.ln(), 1e-12));
        assert!(close(r3.alpha, 0.3819524, 1e-6));
        for s in 2..=16 {
            let r = md_closed_form(s).unwrap();
            assert!(close(r.alpha, r.cross_check.unwrap(), 1e-10), "s = {s}");
            assert!(r.bracket.0 <= r.alpha && r.alpha <= r.bracket.1);
        }
        assert!(md_closed_form(1).is_err());
    }

    #[test]
    fn periodic_examples() {
        assert_eq!(periodic_dimension(&[3]).unwrap().exact, Some(rat(1, 3)));
        assert_eq!(periodic_dimension(&[3, 5]).unwrap().alpha, 0.25);
        assert_eq!(periodic_dimension(&[1]).unwrap().alpha, 1.0);
        assert!(periodic_dimension(&[3, 4]).is_err());
        for s in [2, 3, 5] {
            assert!(close(periodic_moran_check(s, &[3, 5]).unwrap(), 0.25, 1e-12));
        }
    }

    #[test]
    fn lambda_examples() {
        let r = lambda_dimension(1.0 / 3.0, 2, Some(3)).unwrap();
        assert!(close(r.alpha, 0.6309297536, 1e-10));
        assert!(r.notes.iter().any(|n| n.contains("1/3")));
        assert!(close(lambda_dimension(1.0 / 7.0, 7, None).unwrap().alpha, 1.0, 1e-12));
        assert!(close(lambda_dimension(0.25, 2, None).unwrap().alpha, 0.5, 1e-15));
        assert!(lambda_dimension(1.0, 2, None).is_err());
    }

    #[test]
    fn cantor_estimate_examples() {
        let c = CantorBasis::constant(3).unwrap();
        let e = cantor_series_dim_estimate(&c, &[vec![0, 2]], 1000).unwrap();
        assert!(close(e.proxy, 2f64.ln() / 3f64.ln(), 1e-12));
        let e = cantor_series_dim_estimate(&c, &[vec![1]], 500).unwrap();
        assert_eq!(e.proxy, 0.0);
        let p = CantorBasis::power(2).unwrap();
        let e = cantor_series_dim_estimate(&p, &[vec![0, 1]], 1000).unwrap();
        for (i, r) in e.ratios.iter().enumerate() {
            let n = (i + 1) as f64;
            assert!(close(*r, 2.0 / (n + 1.0), 1e-12));
        }
        assert_eq!(e.window, (901, 1000));
        assert!(cantor_series_dim_estimate(&c, &[vec![0, 3]], 10).is_err());
        assert!(cantor_series_dim_estimate(&c, &[vec![]], 10).is_err());
    }
}
