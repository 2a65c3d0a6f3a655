//! Box-counting estimates from exact cylinder covers.
//!
//! At scale `ε` the set is covered by the stopping-time family of cylinders:
//! descend the symbol tree until a cylinder's hull has diameter `<= ε`. The
//! occupied boxes of the mesh `[inf + jε, inf + (j+1)ε)` anchored at the set's
//! infimum are then counted exactly: a cylinder `[lo, hi]` occupies the boxes
//! whose interior it meets, or the single box holding it when `lo = hi`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::dimension::{DimensionResult, Method};
use crate::error::{Error, Result};
use crate::families::FamilySpec;
use crate::ifs::{Affine, Interval, LevelMaps};
use crate::radix::{inv_pow, to_f64, Rational};

/// Default cap on cylinders visited per scale.
pub const DEFAULT_NODE_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct ScaleCount {
    pub epsilon: f64,
    pub epsilon_exact: Rational,
    pub count: u64,
    /// Deepest cylinder rank used in the cover.
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub scales: Vec<f64>,
    /// Set when the scales span fewer than two decades.
    pub warning: Option<String>,
}

/// Base of the natural mesh `ε = b^{-n}` for the family.
pub fn scale_base(fam: &FamilySpec) -> Result<u64> {
    if let Some(s) = fam.base() {
        return Ok(s as u64);
    }
    match fam {
        FamilySpec::CantorRestrict { basis, .. } if basis.period_len() == Some(1) => {
            Ok(basis.d_u64(1).expect("constant basis"))
        }
        _ => Err(Error::Unsupported(
            "box counting needs a constant Cantor basis or a digit base".into(),
        )),
    }
}

struct Cover<'a> {
    maps: &'a LevelMaps,
    hulls: &'a [Interval],
    eps: &'a Rational,
    min_depth: usize,
    cap: u64,
    visited: u64,
    max_depth: usize,
    leaves: Vec<Interval>,
}

impl Cover<'_> {
    fn descend(&mut self, f: &Affine, rank: usize) -> Result<()> {
        self.visited += 1;
        if self.visited > self.cap {
            return Err(Error::Blowup {
                count: format!("more than {}", self.cap),
                cap: self.cap,
            });
        }
        let iv = f.image(&self.hulls[rank % self.hulls.len()]);
        if rank >= self.min_depth && &iv.diameter() <= self.eps {
            self.max_depth = self.max_depth.max(rank);
            self.leaves.push(iv);
            return Ok(());
        }
        for (_, g) in self.maps.at(rank + 1) {
            let child = f.compose(g);
            self.descend(&child, rank + 1)?;
        }
        Ok(())
    }
}

fn floor_i64(x: &Rational) -> i64 {
    x.floor().to_integer().to_i64().expect("box index fits in i64")
}

fn ceil_i64(x: &Rational) -> i64 {
    x.ceil().to_integer().to_i64().expect("box index fits in i64")
}

/// Occupied boxes of width `eps` (exact), covering with cylinders of rank at
/// least `min_depth` whose diameters do not exceed `eps`.
pub fn boxes_at_scale_exact(fam: &FamilySpec, eps: &Rational, min_depth: usize, cap: u64) -> Result<ScaleCount> {
    if eps <= &Rational::zero() {
        return Err(Error::InvalidArgument("box width must be positive".into()));
    }
    let maps = fam.level_maps()?;
    let hulls = maps.tail_hulls()?;
    let anchor = hulls[0].lo.clone();
    let mut cover = Cover {
        maps: &maps,
        hulls: &hulls,
        eps,
        min_depth,
        cap,
        visited: 0,
        max_depth: 0,
        leaves: Vec::new(),
    };
    cover.descend(&Affine::identity(), 0)?;
    let mut ranges: Vec<(i64, i64)> = cover
        .leaves
        .iter()
        .map(|iv| {
            let a = (&iv.lo - &anchor) / eps;
            let b = (&iv.hi - &anchor) / eps;
            let first = floor_i64(&a);
            let last = if iv.lo == iv.hi {
                first
            } else {
                (ceil_i64(&b) - 1).max(first)
            };
            (first, last)
        })
        .collect();
    ranges.sort_unstable();
    let mut count = 0u64;
    let mut current: Option<(i64, i64)> = None;
    for (a, b) in ranges {
        current = match current {
            Some((ca, cb)) if a <= cb + 1 => Some((ca, cb.max(b))),
            Some((ca, cb)) => {
                count += (cb - ca + 1) as u64;
                Some((a, b))
            }
            None => Some((a, b)),
        };
    }
    if let Some((ca, cb)) = current {
        count += (cb - ca + 1) as u64;
    }
    Ok(ScaleCount {
        epsilon: to_f64(eps),
        epsilon_exact: eps.clone(),
        count,
        depth: cover.max_depth,
    })
}

/// Occupied boxes at `eps = b^{-n}` for the family's mesh base `b`.
pub fn boxes_at_power(fam: &FamilySpec, n: u32, min_depth: usize, cap: u64) -> Result<ScaleCount> {
    let b = scale_base(fam)?;
    boxes_at_scale_exact(fam, &inv_pow(b, n as u64), min_depth, cap)
}

/// Occupied boxes at a floating-point width, converted exactly to a rational.
pub fn boxes_at_scale(fam: &FamilySpec, eps: f64, min_depth: usize, cap: u64) -> Result<ScaleCount> {
    let exact = Rational::from_float(eps)
        .filter(|e| e > &Rational::zero())
        .ok_or_else(|| Error::InvalidArgument(format!("box width {eps} must be a positive number")))?;
    boxes_at_scale_exact(fam, &exact, min_depth, cap)
}

/// Least-squares slope of `ln count` against `ln(1/ε)`.
pub fn fit_dimension(points: &[ScaleCount]) -> Result<FitResult> {
    let mut eps: Vec<f64> = points.iter().map(|p| p.epsilon).collect();
    eps.sort_by(f64::total_cmp);
    eps.dedup();
    if eps.len() < 3 {
        return Err(Error::DegenerateScales(format!(
            "{} distinct scales; at least 3 are needed",
            eps.len()
        )));
    }
    let xs: Vec<f64> = points.iter().map(|p| -p.epsilon.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| (p.count as f64).ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let r2 = if syy == 0.0 {
        1.0
    } else {
        (1.0 - sse / syy).clamp(0.0, 1.0)
    };
    let decades = (eps[eps.len() - 1] / eps[0]).log10();
    let warning = (decades < 2.0).then(|| format!("scales span only {decades:.2} decades"));
    Ok(FitResult {
        slope,
        intercept,
        r2,
        scales: eps,
        warning,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoxcountReport {
    pub points: Vec<ScaleCount>,
    pub fit: FitResult,
    pub result: DimensionResult,
}

/// Box counts at `ε = b^{-n}` for `n` in `scales`, and the fitted slope.
pub fn boxcount_dimension(fam: &FamilySpec, scales: std::ops::RangeInclusive<u32>, cap: u64) -> Result<BoxcountReport> {
    let points: Vec<ScaleCount> = scales.map(|n| boxes_at_power(fam, n, 0, cap)).collect::<Result<_>>()?;
    let fit = fit_dimension(&points)?;
    let mut notes = vec![format!("least-squares fit, r2 = {:.6}", fit.r2)];
    notes.extend(fit.warning.clone());
    let result = DimensionResult {
        alpha: fit.slope,
        method: Method::Boxcount,
        residual: (1.0 - fit.r2).max(0.0),
        bracket: (fit.slope, fit.slope),
        iterations: points.len() as u32,
        degenerate: fam.is_degenerate(),
        cross_check: None,
        exact: None,
        notes,
    };
    Ok(BoxcountReport { points, fit, result })
}

/// `s^n` as an exact integer count, for tests and reports.
pub fn power_count(s: u64, n: u32) -> BigInt {
    num_traits::pow(BigInt::from(s), n as usize)
}
