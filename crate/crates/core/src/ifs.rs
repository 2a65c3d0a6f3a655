//! Exact affine maps on the line and the convex hull of their attractors.
//!
//! Each set family is generated by contractions `y ↦ offset + scale·y`, one
//! per admissible symbol (per level for the non-autonomous families). The
//! hull `[m, M]` of the attractor is the unique fixed point of
//! `[m, M] ↦ hull(⋃ f_i([m, M]))`; it is found exactly by policy iteration
//! over which map attains each endpoint.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::radix::{to_f64, Rational};

/// Closed interval with exact endpoints, `lo <= hi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi, "interval endpoints out of order");
        Self { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        Self { lo: x.clone(), hi: x }
    }

    pub fn diameter(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_point(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// Hausdorff distance between two intervals.
    pub fn hausdorff(&self, other: &Interval) -> Rational {
        (&self.lo - &other.lo).abs().max((&self.hi - &other.hi).abs())
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (to_f64(&self.lo), to_f64(&self.hi))
    }
}

/// The map `y ↦ offset + scale·y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Affine {
    pub offset: Rational,
    pub scale: Rational,
}

impl Affine {
    pub fn new(offset: Rational, scale: Rational) -> Self {
        Self { offset, scale }
    }

    pub fn identity() -> Self {
        Self {
            offset: Rational::zero(),
            scale: Rational::one(),
        }
    }

    pub fn apply(&self, y: &Rational) -> Rational {
        &self.offset + &self.scale * y
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &Affine) -> Affine {
        Affine {
            offset: self.apply(&inner.offset),
            scale: &self.scale * &inner.scale,
        }
    }

    pub fn image(&self, iv: &Interval) -> Interval {
        let a = self.apply(&iv.lo);
        let b = self.apply(&iv.hi);
        if a <= b {
            Interval::new(a, b)
        } else {
            Interval::new(b, a)
        }
    }

    pub fn fixed_point(&self) -> Rational {
        &self.offset / (Rational::one() - &self.scale)
    }

    fn is_contraction(&self) -> bool {
        !self.scale.is_zero() && self.scale.abs() < Rational::one()
    }
}

/// Exact endpoint images of `f` over `[m, M]`: (min, max).
fn endpoint_images(f: &Affine, m: &Rational, big_m: &Rational) -> (Rational, Rational) {
    if f.scale.is_positive() {
        (f.apply(m), f.apply(big_m))
    } else {
        (f.apply(big_m), f.apply(m))
    }
}

/// Solve `M = max-image of maps[i]`, `m = min-image of maps[j]` as a 2x2 linear system.
fn solve_policy(maps: &[Affine], i: usize, j: usize) -> (Rational, Rational) {
    let (fi, fj) = (&maps[i], &maps[j]);
    let zero = Rational::zero();
    let one = Rational::one();
    // M uses M when f_i is increasing, m otherwise; symmetric for m.
    let (ri_pos, ri_neg) = if fi.scale.is_positive() {
        (fi.scale.clone(), zero.clone())
    } else {
        (zero.clone(), fi.scale.clone())
    };
    let (rj_pos, rj_neg) = if fj.scale.is_positive() {
        (fj.scale.clone(), zero.clone())
    } else {
        (zero, fj.scale.clone())
    };
    let a11 = &one - &ri_pos;
    let a12 = -ri_neg;
    let a21 = -rj_neg;
    let a22 = &one - &rj_pos;
    let det = &a11 * &a22 - &a12 * &a21;
    let big_m = (&fi.offset * &a22 - &a12 * &fj.offset) / &det;
    let m = (&a11 * &fj.offset - &a21 * &fi.offset) / &det;
    (m, big_m)
}

/// Index of the map giving the largest max-image and the smallest min-image.
fn best_policy(maps: &[Affine], m: &Rational, big_m: &Rational) -> (usize, Rational, usize, Rational) {
    let mut best_hi = (0, None::<Rational>);
    let mut best_lo = (0, None::<Rational>);
    for (k, f) in maps.iter().enumerate() {
        let (lo, hi) = endpoint_images(f, m, big_m);
        if best_hi.1.as_ref().is_none_or(|b| hi > *b) {
            best_hi = (k, Some(hi));
        }
        if best_lo.1.as_ref().is_none_or(|b| lo < *b) {
            best_lo = (k, Some(lo));
        }
    }
    (best_hi.0, best_hi.1.unwrap(), best_lo.0, best_lo.1.unwrap())
}

/// Exact convex hull of the attractor of a finite family of contractions.
pub fn attractor_hull(maps: &[Affine]) -> Result<Interval> {
    if maps.is_empty() {
        return Err(Error::EmptyBlockSet);
    }
    if let Some(bad) = maps.iter().find(|f| !f.is_contraction()) {
        return Err(Error::RatioOutOfRange(crate::radix::fmt_rational(&bad.scale)));
    }
    // Float warm start for the policy.
    let fl: Vec<(f64, f64)> = maps.iter().map(|f| (to_f64(&f.offset), to_f64(&f.scale))).collect();
    let mut lo = fl.iter().map(|&(a, r)| a / (1.0 - r)).fold(f64::INFINITY, f64::min);
    let mut hi = fl.iter().map(|&(a, r)| a / (1.0 - r)).fold(f64::NEG_INFINITY, f64::max);
    for _ in 0..200 {
        let (mut nlo, mut nhi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &(a, r) in &fl {
            let (x, y) = (a + r * lo, a + r * hi);
            nlo = nlo.min(x.min(y));
            nhi = nhi.max(x.max(y));
        }
        lo = nlo;
        hi = nhi;
    }
    let pick = |want_hi: bool| {
        let mut best = 0;
        let mut best_v = if want_hi { f64::NEG_INFINITY } else { f64::INFINITY };
        for (k, &(a, r)) in fl.iter().enumerate() {
            let (x, y) = (a + r * lo, a + r * hi);
            let v = if want_hi { x.max(y) } else { x.min(y) };
            if (want_hi && v > best_v) || (!want_hi && v < best_v) {
                best = k;
                best_v = v;
            }
        }
        best
    };
    let (mut i, mut j) = (pick(true), pick(false));
    for _ in 0..(4 * maps.len() + 16) {
        let (m, big_m) = solve_policy(maps, i, j);
        let (bi, bhi, bj, blo) = best_policy(maps, &m, &big_m);
        if bhi <= big_m && blo >= m && m <= big_m {
            return Ok(Interval::new(m, big_m));
        }
        if bhi > big_m {
            i = bi;
        }
        if blo < m {
            j = bj;
        }
    }
    // Exhaustive fallback over all policies.
    for i in 0..maps.len() {
        for j in 0..maps.len() {
            let (m, big_m) = solve_policy(maps, i, j);
            let (_, bhi, _, blo) = best_policy(maps, &m, &big_m);
            if bhi <= big_m && blo >= m && m <= big_m {
                return Ok(Interval::new(m, big_m));
            }
        }
    }
    unreachable!("the hull operator of a contraction family has a fixed point")
}

/// Per-level symbol maps of a (possibly non-autonomous, periodic) Moran
/// structure. Level `n` (1-based) uses `levels[(n - 1) % period]`.
#[derive(Debug, Clone)]
pub struct LevelMaps {
    levels: Vec<Vec<(u32, Affine)>>,
}

/// Upper bound on the number of composed maps over one period.
const PERIOD_MAP_CAP: usize = 200_000;

impl LevelMaps {
    pub fn new(levels: Vec<Vec<(u32, Affine)>>) -> Result<Self> {
        if levels.is_empty() || levels.iter().any(|l| l.is_empty()) {
            return Err(Error::EmptyBlockSet);
        }
        Ok(Self { levels })
    }

    pub fn autonomous(maps: Vec<(u32, Affine)>) -> Result<Self> {
        Self::new(vec![maps])
    }

    pub fn period(&self) -> usize {
        self.levels.len()
    }

    pub fn at(&self, level: usize) -> &[(u32, Affine)] {
        &self.levels[(level - 1) % self.levels.len()]
    }

    pub fn map(&self, level: usize, symbol: u32) -> Option<&Affine> {
        self.at(level).iter().find(|(c, _)| *c == symbol).map(|(_, f)| f)
    }

    /// Composition `f^{(1)}_{c_1} ∘ … ∘ f^{(n)}_{c_n}`.
    pub fn address_map(&self, addr: &[u32]) -> Option<Affine> {
        let mut acc = Affine::identity();
        for (i, &c) in addr.iter().enumerate() {
            acc = acc.compose(self.map(i + 1, c)?);
        }
        Some(acc)
    }

    /// Hulls `H_j` of the tail sets after `j` levels, `j = 0 .. period-1`.
    pub fn tail_hulls(&self) -> Result<Vec<Interval>> {
        let t = self.period();
        let count = self
            .levels
            .iter()
            .try_fold(1usize, |acc, l| acc.checked_mul(l.len()))
            .filter(|&c| c <= PERIOD_MAP_CAP);
        if count.is_none() {
            return Err(Error::Blowup {
                count: "product of per-level branchings".into(),
                cap: PERIOD_MAP_CAP as u64,
            });
        }
        let mut composed = vec![Affine::identity()];
        for level in &self.levels {
            composed = composed
                .iter()
                .flat_map(|g| level.iter().map(move |(_, f)| g.compose(f)))
                .collect();
        }
        let h0 = attractor_hull(&composed)?;
        let mut hulls = vec![h0.clone(); t];
        for j in (1..t).rev() {
            let next = if j + 1 == t { &h0 } else { &hulls[j + 1] };
            let level = &self.levels[j];
            let mut acc: Option<Interval> = None;
            for (_, f) in level {
                let im = f.image(next);
                acc = Some(match acc {
                    Some(a) => a.hull(&im),
                    None => im,
                });
            }
            hulls[j] = acc.expect("level is nonempty");
        }
        Ok(hulls)
    }
}
