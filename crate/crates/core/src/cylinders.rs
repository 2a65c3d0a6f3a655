//! Cylinder geometry: closed-form cylinder intervals for `S_(s,u)`,
//! `S_(-s,0)` and `S⁻`, exact hulls for every family with finite symbol maps,
//! an independent tail-extrema oracle, sibling gaps, orientation checks and
//! covering sums, plus a verification suite tying them together.
//!
//! All comparisons in this module are exact.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::families::{enumerate_addresses, eval_family_point, CylinderAddress, FamilySpec};
use crate::ifs::{Affine, Interval, LevelMaps};
use crate::radix::{inv_pow, rat, Rational};

/// Relative placement of consecutive sibling cylinders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Larger symbols sit further right.
    LeftToRight,
    /// Larger symbols sit further left.
    RightToLeft,
    Mixed,
}

impl Orientation {
    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::LeftToRight => "left-to-right",
            Orientation::RightToLeft => "right-to-left",
            Orientation::Mixed => "mixed",
        }
    }

    fn combine(all: &[Orientation]) -> Option<Orientation> {
        let first = *all.first()?;
        Some(if all.iter().all(|&o| o == first) {
            first
        } else {
            Orientation::Mixed
        })
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Whether the family has closed-form cylinder formulas.
pub fn has_lemma_formula(fam: &FamilySpec) -> bool {
    matches!(
        fam,
        FamilySpec::S { .. } | FamilySpec::SU { .. } | FamilySpec::SMinus { .. } | FamilySpec::NegaSU { u: 0, .. }
    )
}

fn pow_s(s: u32, k: i64) -> Rational {
    Rational::from_integer(num_traits::pow(num_bigint::BigInt::from(s), k as usize))
}

/// Closed-form `[inf, sup]` of the whole set `S_(s,u)`.
pub fn su_set_bounds(s: u32, u: u32) -> Interval {
    let si = s as i64;
    let ui = u as i64;
    let shift = rat(ui, si - 1);
    let inf = if u <= 1 {
        Rational::from_integer((si - 1 - ui).into()) / (pow_s(s, si - 1) - Rational::one()) + &shift
    } else {
        rat(1, si - 1)
    };
    let sup = if u == 0 {
        rat(1, si - 1)
    } else if u <= s - 2 {
        Rational::one() / (pow_s(s, ui + 1) - Rational::one()) + &shift
    } else {
        Rational::one() - Rational::one() / (pow_s(s, si - 2) - Rational::one())
    };
    Interval::new(inf, sup)
}

/// `[inf, sup]` of the whole set `S_(-s,0)`.
pub fn nega_set_bounds(s: u32) -> Interval {
    let si = s as i64;
    let q = si * si - 1;
    Interval::new(rat(-(si * si + 1), si * q), rat(2, q))
}

/// `[inf S⁻, sup S⁻]`.
pub fn sminus_set_bounds(s: u32) -> Interval {
    let si = s as i64;
    let den = pow_s(s, si) - Rational::one();
    let inf = (-pow_s(s, si - 1) + Rational::from_integer((si - 1).into())) / &den;
    let sup = Rational::from_integer((-si * si + si + 1).into()) / &den;
    Interval::new(inf, sup)
}

/// Closed-form diameter of `S⁻`: `(s^{s-1} - s² + 2)/(s^s - 1)`.
pub fn sminus_diameter_formula(s: u32) -> Rational {
    let si = s as i64;
    (pow_s(s, si - 1) - Rational::from_integer((si * si - 2).into())) / (pow_s(s, si) - Rational::one())
}

/// `x_0 + r·[lo, hi]`, oriented.
fn place(x0: &Rational, r: &Rational, base: &Interval) -> Interval {
    Affine::new(x0.clone(), r.clone()).image(base)
}

/// Interval of the cylinder from the closed-form cylinder formulas.
///
/// For `S⁻` the result is the containing interval; for the other supported
/// families it is the exact hull of the cylinder.
pub fn cylinder_interval(fam: &FamilySpec, addr: &CylinderAddress) -> Result<Interval> {
    fam.check_address(&addr.0)?;
    let k_total: u64 = addr.0.iter().map(|&c| c as u64).sum();
    match *fam {
        FamilySpec::S { s } | FamilySpec::SU { s, .. } => {
            let u = fam.run_digit().expect("run-length family");
            let mut tau = Rational::zero();
            let mut k = 0u64;
            for &c in &addr.0 {
                k += c as u64;
                tau += inv_pow(s as u64, k) * rat(c as i64 - u as i64, 1);
            }
            // Σ_{k=1}^{K} u/s^k
            tau += rat(u as i64, s as i64 - 1) * (Rational::one() - inv_pow(s as u64, k_total));
            Ok(place(&tau, &inv_pow(s as u64, k_total), &su_set_bounds(s, u)))
        }
        FamilySpec::NegaSU { s, u: 0 } => {
            let mut g = Rational::zero();
            let mut k = 0u64;
            for &c in &addr.0 {
                k += c as u64;
                g += crate::radix::neg_inv_pow(s as u64, k) * rat(c as i64, 1);
            }
            Ok(place(
                &g,
                &crate::radix::neg_inv_pow(s as u64, k_total),
                &nega_set_bounds(s),
            ))
        }
        FamilySpec::SMinus { s } => {
            let mut sigma = Rational::zero();
            let mut k = 0u64;
            for (i, &c) in addr.0.iter().enumerate() {
                k += c as u64;
                let term = inv_pow(s as u64, k) * rat(c as i64, 1);
                if i % 2 == 0 {
                    sigma -= term;
                } else {
                    sigma += term;
                }
            }
            let mut r = inv_pow(s as u64, k_total);
            if addr.0.len() % 2 == 1 {
                r = -r;
            }
            Ok(place(&sigma, &r, &sminus_set_bounds(s)))
        }
        _ => Err(Error::Unsupported(format!(
            "no closed-form cylinder formula for {fam}; use cylinder_hull"
        ))),
    }
}

/// Exact convex hull of the cylinder, from the family's symbol maps.
pub fn cylinder_hull(fam: &FamilySpec, addr: &CylinderAddress) -> Result<Interval> {
    fam.check_address(&addr.0)?;
    let maps = fam.level_maps()?;
    let hulls = maps.tail_hulls()?;
    hull_with(&maps, &hulls, &addr.0)
}

fn hull_with(maps: &LevelMaps, hulls: &[Interval], addr: &[u32]) -> Result<Interval> {
    let f = maps
        .address_map(addr)
        .ok_or_else(|| Error::FamilyConstraint(format!("address {addr:?} is not admissible")))?;
    Ok(f.image(&hulls[addr.len() % hulls.len()]))
}

/// Closed-form interval where available, exact hull otherwise.
pub fn cylinder_geometry(fam: &FamilySpec, addr: &CylinderAddress) -> Result<Interval> {
    if has_lemma_formula(fam) {
        cylinder_interval(fam, addr)
    } else {
        cylinder_hull(fam, addr)
    }
}

/// Whole-set interval (the cylinder of the empty address).
pub fn set_interval(fam: &FamilySpec) -> Result<Interval> {
    cylinder_geometry(fam, &CylinderAddress::default())
}

pub fn cylinder_diameter(fam: &FamilySpec, addr: &CylinderAddress) -> Result<Rational> {
    Ok(cylinder_geometry(fam, addr)?.diameter())
}

/// Oracle interval together with its rigorous tail bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleInterval {
    pub interval: Interval,
    pub bound: Rational,
}

fn autonomous_maps(fam: &FamilySpec) -> Result<Vec<(u32, Affine)>> {
    let maps = fam.level_maps()?;
    if maps.period() != 1 {
        return Err(Error::Unsupported(format!(
            "the tail oracle needs a family with one set of symbol maps, {fam} has {}",
            maps.period()
        )));
    }
    Ok(maps.at(1).to_vec())
}

fn contraction_bound(maps: &[(u32, Affine)]) -> Rational {
    maps.iter()
        .map(|(_, f)| f.scale.abs())
        .max()
        .expect("nonempty map list")
}

/// Extremes over all admissible continuations of `addr` of length `depth`,
/// each continued by a constant symbol tail `q q q …` (a genuine set point).
///
/// The values are computed by exact dynamic programming over the symbol tree,
/// so the result is the min/max over `branching^(depth+1)` set points without
/// enumerating them. With `ρ` the largest contraction ratio, every set point in
/// the cylinder lies within `B = |r_addr| ρ^depth / (1 - ρ)` of one of these
/// points, so the oracle interval sits inside the cylinder hull and the two
/// are at Hausdorff distance at most `B`.
pub fn tail_extrema_oracle(fam: &FamilySpec, addr: &CylinderAddress, depth: usize) -> Result<OracleInterval> {
    if depth == 0 {
        return Err(Error::InvalidArgument("oracle depth must be at least 1".into()));
    }
    fam.check_address(&addr.0)?;
    let maps = autonomous_maps(fam)?;
    let fixed: Vec<Rational> = maps.iter().map(|(_, f)| f.fixed_point()).collect();
    let mut lo = fixed.iter().min().expect("nonempty").clone();
    let mut hi = fixed.iter().max().expect("nonempty").clone();
    for _ in 0..depth {
        let (mut nlo, mut nhi): (Option<Rational>, Option<Rational>) = (None, None);
        for (_, f) in &maps {
            let im = f.image(&Interval::new(lo.clone(), hi.clone()));
            nlo = Some(nlo.map_or(im.lo.clone(), |v| v.min(im.lo.clone())));
            nhi = Some(nhi.map_or(im.hi.clone(), |v| v.max(im.hi)));
        }
        lo = nlo.expect("nonempty");
        hi = nhi.expect("nonempty");
    }
    let f = autonomous_address_map(&maps, &addr.0);
    let rho = contraction_bound(&maps);
    let mut bound = f.scale.abs() / (Rational::one() - &rho);
    for _ in 0..depth {
        bound *= &rho;
    }
    Ok(OracleInterval {
        interval: f.image(&Interval::new(lo, hi)),
        bound,
    })
}

fn autonomous_address_map(maps: &[(u32, Affine)], addr: &[u32]) -> Affine {
    addr.iter().fold(Affine::identity(), |acc, c| {
        let f = &maps.iter().find(|(p, _)| p == c).expect("admissible symbol").1;
        acc.compose(f)
    })
}

/// The same extremes as [`tail_extrema_oracle`], computed by evaluating every
/// continuation through the family's defining series. Exponential; for small
/// depths only.
pub fn tail_extrema_bruteforce(fam: &FamilySpec, addr: &CylinderAddress, depth: usize, cap: u64) -> Result<Interval> {
    let conts = enumerate_addresses(fam, depth, cap)?;
    let symbols = fam.symbols_at(1).expect("finite branching");
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    let mut prefix = addr.0.clone();
    for w in conts {
        prefix.truncate(addr.0.len());
        prefix.extend_from_slice(&w.0);
        for &q in &symbols {
            let x = eval_family_point(fam, &prefix, &[q])?;
            if lo.as_ref().is_none_or(|v| &x < v) {
                lo = Some(x.clone());
            }
            if hi.as_ref().is_none_or(|v| &x > v) {
                hi = Some(x);
            }
        }
    }
    Ok(Interval::new(lo.expect("nonempty"), hi.expect("nonempty")))
}

/// Next admissible sibling symbol after `p` under the same parent.
fn next_sibling(fam: &FamilySpec, level: usize, p: u32) -> Result<u32> {
    let symbols = fam
        .symbols_at(level)
        .ok_or_else(|| Error::Unsupported(format!("{fam} has infinite branching")))?;
    if symbols.binary_search(&p).is_err() {
        return Err(Error::FamilyConstraint(format!(
            "symbol {p} is not admissible at position {level} for {fam}"
        )));
    }
    symbols.into_iter().find(|&q| q > p).ok_or(Error::NoSibling(p))
}

/// Orientation of the sibling pair `(p, q)` from the exact intervals, or
/// `None` when they touch or overlap.
fn pair_orientation(ip: &Interval, iq: &Interval) -> Option<Orientation> {
    if ip.hi < iq.lo {
        Some(Orientation::LeftToRight)
    } else if iq.hi < ip.lo {
        Some(Orientation::RightToLeft)
    } else {
        None
    }
}

/// Open interval between the child cylinders `addr·p` and `addr·q`, where `q`
/// is the next admissible symbol after `p`. `None` when the siblings touch.
pub fn gap_interval(fam: &FamilySpec, addr: &CylinderAddress, p: u32) -> Result<Option<Interval>> {
    fam.check_address(&addr.0)?;
    let q = next_sibling(fam, addr.rank() + 1, p)?;
    let ip = cylinder_geometry(fam, &addr.child(p))?;
    let iq = cylinder_geometry(fam, &addr.child(q))?;
    Ok(match pair_orientation(&ip, &iq) {
        Some(Orientation::LeftToRight) => Some(Interval::new(ip.hi, iq.lo)),
        Some(Orientation::RightToLeft) => Some(Interval::new(iq.hi, ip.lo)),
        _ => None,
    })
}

/// Orientation the cylinder lemmas predict for the sibling pair `(p, q)`
/// under `addr`, for the families that have such a rule.
pub fn expected_orientation(fam: &FamilySpec, addr: &CylinderAddress, p: u32) -> Option<Orientation> {
    match fam {
        FamilySpec::S { .. } | FamilySpec::SU { .. } => {
            let u = fam.run_digit()?;
            Some(if p < u {
                Orientation::LeftToRight
            } else {
                Orientation::RightToLeft
            })
        }
        FamilySpec::NegaSU { u: 0, .. } => {
            let k: u64 = addr.0.iter().map(|&c| c as u64).sum();
            Some(if (k + p as u64).is_multiple_of(2) {
                Orientation::RightToLeft
            } else {
                Orientation::LeftToRight
            })
        }
        FamilySpec::SMinus { .. } => Some(if (addr.rank() + 1) % 2 == 1 {
            Orientation::LeftToRight
        } else {
            Orientation::RightToLeft
        }),
        _ => None,
    }
}

/// Observed and predicted orientation of one sibling pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairOrder {
    pub p: u32,
    pub q: u32,
    pub observed: Option<Orientation>,
    pub expected: Option<Orientation>,
    pub left: Interval,
    pub right: Interval,
}

impl PairOrder {
    pub fn passed(&self) -> bool {
        self.observed.is_some() && (self.expected.is_none() || self.expected == self.observed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderingReport {
    pub address: CylinderAddress,
    pub pairs: Vec<PairOrder>,
    pub orientation: Option<Orientation>,
}

impl OrderingReport {
    pub fn passed(&self) -> bool {
        self.pairs.iter().all(PairOrder::passed)
    }
}

/// Compare the exact placement of all consecutive children of `addr` with
/// the orientation rule of the family.
pub fn ordering_check(fam: &FamilySpec, addr: &CylinderAddress) -> Result<OrderingReport> {
    fam.check_address(&addr.0)?;
    let symbols = fam
        .symbols_at(addr.rank() + 1)
        .ok_or_else(|| Error::Unsupported(format!("{fam} has infinite branching")))?;
    if symbols.len() < 2 {
        return Err(Error::NoSibling(symbols.first().copied().unwrap_or(0)));
    }
    let intervals: Vec<Interval> = symbols
        .iter()
        .map(|&c| cylinder_geometry(fam, &addr.child(c)))
        .collect::<Result<_>>()?;
    let pairs: Vec<PairOrder> = symbols
        .windows(2)
        .zip(intervals.windows(2))
        .map(|(pq, iv)| PairOrder {
            p: pq[0],
            q: pq[1],
            observed: pair_orientation(&iv[0], &iv[1]),
            expected: expected_orientation(fam, addr, pq[0]),
            left: iv[0].clone(),
            right: iv[1].clone(),
        })
        .collect();
    let observed: Option<Vec<Orientation>> = pairs.iter().map(|p| p.observed).collect();
    Ok(OrderingReport {
        address: addr.clone(),
        orientation: observed.as_deref().and_then(Orientation::combine),
        pairs,
    })
}

/// Total length of the rank-`depth` cylinder cover.
pub fn covering_sum(fam: &FamilySpec, depth: usize, cap: u64) -> Result<Rational> {
    let mut total = Rational::zero();
    for addr in enumerate_addresses(fam, depth, cap)? {
        total += cylinder_diameter(fam, &addr)?;
    }
    Ok(total)
}

/// Per-cylinder summary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylinderReport {
    pub address: CylinderAddress,
    pub interval: Interval,
    pub diameter: Rational,
    /// `diameter(addr·c) / diameter(addr)` for the named child `c`.
    pub child_ratio: Option<Rational>,
    pub orientation: Option<Orientation>,
}

pub fn cylinder_report(fam: &FamilySpec, addr: &CylinderAddress, child: Option<u32>) -> Result<CylinderReport> {
    let interval = cylinder_geometry(fam, addr)?;
    let diameter = interval.diameter();
    let child_ratio = match child {
        Some(c) if !diameter.is_zero() => Some(cylinder_diameter(fam, &addr.child(c))? / &diameter),
        Some(c) => {
            fam.check_address(&addr.child(c).0)?;
            None
        }
        None => None,
    };
    let orientation = match ordering_check(fam, addr) {
        Ok(r) => r.orientation,
        Err(Error::NoSibling(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(CylinderReport {
        address: addr.clone(),
        interval,
        diameter,
        child_ratio,
        orientation,
    })
}

/// A concrete failure: the address and the two conflicting exact values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub address: CylinderAddress,
    pub what: String,
    pub left: Rational,
    pub right: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    pub counterexample: Option<Counterexample>,
    /// Findings that are reported but do not fail the check.
    pub flags: Vec<String>,
}

impl CheckResult {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            cases: 0,
            counterexample: None,
            flags: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    fn fail(&mut self, address: &CylinderAddress, what: impl Into<String>, left: Rational, right: Rational) {
        if self.counterexample.is_none() {
            self.counterexample = Some(Counterexample {
                address: address.clone(),
                what: what.into(),
                left,
                right,
            });
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub family: String,
    pub depth: usize,
    pub oracle_depth: usize,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }
}

/// Options for [`verify`].
#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Largest address rank examined.
    pub depth: usize,
    pub oracle_depth: usize,
    pub cap: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            depth: 8,
            oracle_depth: 10,
            cap: crate::families::DEFAULT_CAP,
        }
    }
}

/// Run the cylinder suite on all addresses of rank `<= depth`: oracle
/// containment, closed form vs. exact hull, nesting, ratio law, sibling gaps,
/// orientation, covering-sum law, partition and (for `S⁻`) the agreement of
/// the closed-form constants with the diameter formula.
pub fn verify(fam: &FamilySpec, opts: VerifyOptions) -> Result<VerifyReport> {
    let maps = fam.level_maps()?;
    let hulls = maps.tail_hulls()?;
    let lemma = has_lemma_formula(fam);
    let autonomous = maps.period() == 1;
    let base_ratio = |level: usize, c: u32| maps.map(level, c).map(|f| f.scale.abs());

    let mut oracle = CheckResult::new("oracle-containment");
    let mut closed = CheckResult::new("closed-form-vs-hull");
    let mut nesting = CheckResult::new("nesting");
    let mut ratio = CheckResult::new("ratio-law");
    let mut gaps = CheckResult::new("sibling-gaps");
    let mut ordering = CheckResult::new("ordering");
    let mut covering = CheckResult::new("covering-sum");
    let mut partition = CheckResult::new("partition");

    let mut cover_sums: Vec<Rational> = Vec::with_capacity(opts.depth + 1);
    for rank in 0..=opts.depth {
        let addrs = enumerate_addresses(fam, rank, opts.cap)?;
        let mut cover = Rational::zero();
        for addr in &addrs {
            let iv = cylinder_geometry(fam, addr)?;
            let hull = hull_with(&maps, &hulls, &addr.0)?;
            cover += iv.diameter();

            if lemma {
                closed.cases += 1;
                if matches!(fam, FamilySpec::SMinus { .. }) {
                    if !iv.contains(&hull) {
                        closed.fail(
                            addr,
                            "containing interval misses hull endpoint",
                            iv.lo.clone(),
                            hull.lo.clone(),
                        );
                    } else if iv != hull {
                        closed
                            .flags
                            .push(format!("{addr}: containing interval is wider than the hull"));
                    }
                } else if iv.lo != hull.lo {
                    closed.fail(addr, "inf (closed form vs hull)", iv.lo.clone(), hull.lo.clone());
                } else if iv.hi != hull.hi {
                    closed.fail(addr, "sup (closed form vs hull)", iv.hi.clone(), hull.hi.clone());
                }
            }

            if autonomous {
                oracle.cases += 1;
                let o = tail_extrema_oracle(fam, addr, opts.oracle_depth)?;
                if o.interval.lo < iv.lo {
                    oracle.fail(
                        addr,
                        "oracle inf below formula inf",
                        o.interval.lo.clone(),
                        iv.lo.clone(),
                    );
                } else if o.interval.hi > iv.hi {
                    oracle.fail(
                        addr,
                        "oracle sup above formula sup",
                        o.interval.hi.clone(),
                        iv.hi.clone(),
                    );
                } else {
                    let dist = o.interval.hausdorff(&iv);
                    if dist > o.bound {
                        oracle.fail(addr, "Hausdorff distance exceeds tail bound", dist, o.bound.clone());
                    }
                }
            }

            if rank == opts.depth {
                continue;
            }
            let symbols = fam.symbols_at(rank + 1).expect("finite branching");
            let children: Vec<Interval> = symbols
                .iter()
                .map(|&c| cylinder_geometry(fam, &addr.child(c)))
                .collect::<Result<_>>()?;
            let mut child_total = Rational::zero();
            for (&c, ch) in symbols.iter().zip(&children) {
                let child_addr = addr.child(c);
                nesting.cases += 1;
                if ch.lo < iv.lo {
                    nesting.fail(&child_addr, "child inf below parent inf", ch.lo.clone(), iv.lo.clone());
                } else if ch.hi > iv.hi {
                    nesting.fail(&child_addr, "child sup above parent sup", ch.hi.clone(), iv.hi.clone());
                }
                child_total += ch.diameter();
                if autonomous && !iv.diameter().is_zero() {
                    ratio.cases += 1;
                    let got = ch.diameter() / iv.diameter();
                    let want = base_ratio(rank + 1, c).expect("admissible symbol");
                    if got != want {
                        ratio.fail(&child_addr, "diameter ratio", got, want);
                    }
                }
            }
            partition.cases += 1;
            if child_total > iv.diameter() {
                if lemma {
                    partition.fail(
                        addr,
                        "children's total length exceeds parent",
                        child_total,
                        iv.diameter(),
                    );
                } else {
                    partition.flags.push(format!("{addr}: child cylinders overlap"));
                }
            }
            if symbols.len() >= 2 {
                let report = ordering_check(fam, addr)?;
                for pair in &report.pairs {
                    gaps.cases += 1;
                    ordering.cases += 1;
                    match pair.observed {
                        None if lemma => {
                            let (a, b) = (pair.left.hi.clone(), pair.right.lo.clone());
                            gaps.fail(
                                &addr.child(pair.p),
                                format!("siblings {} and {} touch", pair.p, pair.q),
                                a,
                                b,
                            );
                        }
                        None => gaps
                            .flags
                            .push(format!("{}: siblings {} and {} touch or overlap", addr, pair.p, pair.q)),
                        Some(obs) => {
                            if let Some(exp) = pair.expected {
                                if exp != obs {
                                    ordering.fail(
                                        &addr.child(pair.p),
                                        format!("siblings {} and {} are {obs}, expected {exp}", pair.p, pair.q),
                                        pair.left.lo.clone(),
                                        pair.right.lo.clone(),
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
        cover_sums.push(cover);
    }

    if autonomous {
        let factor: Rational = maps.at(1).iter().map(|(_, f)| f.scale.abs()).sum();
        let mut expected = cover_sums[0].clone();
        for (n, got) in cover_sums.iter().enumerate() {
            covering.cases += 1;
            if *got != expected {
                covering.fail(
                    &CylinderAddress::default(),
                    format!("covering sum at depth {n}"),
                    got.clone(),
                    expected.clone(),
                );
            }
            if n > 0 && !cover_sums[0].is_zero() && got >= &cover_sums[n - 1] && factor < Rational::one() {
                covering.fail(
                    &CylinderAddress::default(),
                    format!("covering sum not decreasing at depth {n}"),
                    got.clone(),
                    cover_sums[n - 1].clone(),
                );
            }
            expected *= &factor;
        }
    }

    let mut checks = vec![closed, oracle, nesting, ratio, gaps, ordering, covering, partition];
    if let FamilySpec::SMinus { s } = fam {
        let mut consistency = CheckResult::new("sminus-constants");
        consistency.cases = 1;
        let b = sminus_set_bounds(*s);
        let want = sminus_diameter_formula(*s);
        if b.diameter() != want {
            consistency.fail(
                &CylinderAddress::default(),
                "sup - inf vs diameter formula",
                b.diameter(),
                want,
            );
        }
        checks.push(consistency);
    }
    checks.retain(|c| c.cases > 0);
    Ok(VerifyReport {
        family: fam.to_string(),
        depth: opts.depth,
        oracle_depth: opts.oracle_depth,
        checks,
    })
}
