//! The digit-restricted set families, described as block languages over a
//! digit alphabet, together with their symbolic addresses and exact value
//! maps.
//!
//! A family point is named by a sequence of symbols. For the run-length
//! families (`S`, `S_(s,u)`, `S_(-s,u)`, `S⁻`) a symbol is the digit `α_n`
//! itself, i.e. the block `u…u α_n`. For `Tilde` and `Blocks` a symbol is the
//! index of a block in the canonical block order. For the periodic nega-s-adic
//! Cantor family a symbol is the digit `ε_n`, and for Cantor-series
//! restrictions it is `ε_n ∈ I_n`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ifs::{Affine, LevelMaps};
use crate::radix::{
    eval_cantor, eval_negas_cantor, eval_sadic, inv_pow, lcm, neg_inv_pow, rat, CantorBasis, DigitString, GapSequence,
    Rational,
};

/// Default cap on enumerated addresses.
pub const DEFAULT_CAP: u64 = 1_000_000;

/// A finite set of digit blocks, or the infinite set `{0^{m-1} a : m odd >= 3, a ≠ 0}`
/// described through its generating function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockSet {
    Finite { base: u32, blocks: Vec<Vec<u32>> },
    OddGapRuns { base: u32 },
}

impl BlockSet {
    /// Builds a finite block set, sorted by (length, digits) with duplicates removed.
    pub fn finite(base: u32, mut blocks: Vec<Vec<u32>>) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidBase(base as u64));
        }
        if blocks.is_empty() {
            return Err(Error::EmptyBlockSet);
        }
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::InvalidFamily("blocks must be nonempty".into()));
            }
            if let Some(&d) = b.iter().find(|&&d| d >= base) {
                return Err(Error::InvalidDigit {
                    position: 0,
                    digit: d as u64,
                    bound: base.to_string(),
                });
            }
        }
        blocks.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        blocks.dedup();
        Ok(BlockSet::Finite { base, blocks })
    }

    pub fn base(&self) -> u32 {
        match self {
            BlockSet::Finite { base, .. } | BlockSet::OddGapRuns { base } => *base,
        }
    }

    pub fn blocks(&self) -> Option<&[Vec<u32>]> {
        match self {
            BlockSet::Finite { blocks, .. } => Some(blocks),
            BlockSet::OddGapRuns { .. } => None,
        }
    }

    pub fn len(&self) -> Option<usize> {
        self.blocks().map(<[_]>::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// `N_k`: number of blocks of each length (finite sets only).
    pub fn histogram(&self) -> Option<BTreeMap<usize, u64>> {
        let blocks = self.blocks()?;
        let mut h = BTreeMap::new();
        for b in blocks {
            *h.entry(b.len()).or_insert(0) += 1;
        }
        Some(h)
    }

    /// `N_k` for a single length; also defined for the infinite set.
    pub fn count_of_length(&self, k: usize) -> u64 {
        match self {
            BlockSet::Finite { blocks, .. } => blocks.iter().filter(|b| b.len() == k).count() as u64,
            BlockSet::OddGapRuns { base } => {
                if k >= 3 && k % 2 == 1 {
                    (*base - 1) as u64
                } else {
                    0
                }
            }
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.len() == Some(1)
    }

    pub fn render(&self) -> String {
        match self {
            BlockSet::Finite { blocks, .. } => blocks
                .iter()
                .map(|b| b.iter().map(u32::to_string).collect::<Vec<_>>().join(" "))
                .collect::<Vec<_>>()
                .join(";"),
            BlockSet::OddGapRuns { base } => {
                format!("{{0^(m-1) a : m odd >= 3, 1 <= a <= {}}}", base - 1)
            }
        }
    }

    fn matches_at(&self, digits: &[u32], i: usize, reachable: &mut [bool]) -> bool {
        let rest = &digits[i..];
        match self {
            BlockSet::Finite { blocks, .. } => {
                for b in blocks {
                    if rest.len() >= b.len() {
                        if &rest[..b.len()] == b.as_slice() {
                            reachable[i + b.len()] = true;
                        }
                    } else if b.starts_with(rest) {
                        return true;
                    }
                }
                false
            }
            BlockSet::OddGapRuns { .. } => {
                let zeros = rest.iter().take_while(|&&d| d == 0).count();
                if zeros == rest.len() {
                    return true;
                }
                let m = zeros + 1;
                if m >= 3 && m % 2 == 1 {
                    reachable[i + m] = true;
                }
                false
            }
        }
    }

    /// True iff `digits` is a prefix of some concatenation of blocks.
    pub fn accepts_prefix(&self, digits: &[u32]) -> bool {
        let n = digits.len();
        let mut reachable = vec![false; n + 1];
        reachable[0] = true;
        for i in 0..n {
            if reachable[i] && self.matches_at(digits, i, &mut reachable) {
                return true;
            }
        }
        reachable[n]
    }
}

/// One of the digit-restricted set families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    /// `S`: run-length blocks `0^{p-1} p` in base `s`.
    S { s: u32 },
    /// `S_(s,u)`: blocks `u^{p-1} p`, `p ∈ A_0 ∖ {u}`.
    SU { s: u32, u: u32 },
    /// `S_(-s,u)`: the same blocks read in the nega-s-adic system.
    NegaSU { s: u32, u: u32 },
    /// `S⁻ = {Σ (-1)^n α_n s^{-(α_1+…+α_n)}}`.
    SMinus { s: u32 },
    /// `S̃`: all blocks `u^{c-1} c`, `c ∈ A_0`, `u ∈ A`, `u ≠ c`.
    Tilde { s: u32 },
    /// `M_(-D,s)`: nega-s-adic digits `0^{m-1} α`, `m` odd `>= 3`, `α ≠ 0`.
    Md { s: u32 },
    /// `M'_(-D,s,t)`: nega-s-adic Cantor series with a purely periodic odd gap sequence.
    MdPeriodic { s: u32, period: Vec<u32> },
    /// Arbitrary finite block set in base `s`.
    Blocks { blocks: BlockSet },
    /// Cantor series `Σ ε_n/(d_1⋯d_n)` with `ε_n ∈ I_n` (subsets repeat periodically).
    CantorRestrict { basis: CantorBasis, subsets: Vec<Vec<u64>> },
}

fn require_s(s: u32, min: u32, name: &str) -> Result<()> {
    if s < min {
        Err(Error::InvalidFamily(format!("{name} requires s >= {min}, got s = {s}")))
    } else {
        Ok(())
    }
}

fn require_u(s: u32, u: u32) -> Result<()> {
    if u >= s {
        Err(Error::InvalidFamily(format!("u = {u} is not a digit of base {s}")))
    } else {
        Ok(())
    }
}

impl FamilySpec {
    pub fn s(s: u32) -> Result<Self> {
        require_s(s, 3, "S")?;
        Ok(Self::S { s })
    }

    pub fn su(s: u32, u: u32) -> Result<Self> {
        require_s(s, 3, "Su")?;
        require_u(s, u)?;
        Ok(Self::SU { s, u })
    }

    pub fn nsu(s: u32, u: u32) -> Result<Self> {
        require_s(s, 3, "NSu")?;
        require_u(s, u)?;
        Ok(Self::NegaSU { s, u })
    }

    pub fn sminus(s: u32) -> Result<Self> {
        require_s(s, 3, "Sminus")?;
        Ok(Self::SMinus { s })
    }

    pub fn tilde(s: u32) -> Result<Self> {
        require_s(s, 3, "Tilde")?;
        Ok(Self::Tilde { s })
    }

    pub fn md(s: u32) -> Result<Self> {
        require_s(s, 2, "MD")?;
        Ok(Self::Md { s })
    }

    pub fn md_periodic(s: u32, period: Vec<u32>) -> Result<Self> {
        require_s(s, 2, "MDper")?;
        if period.is_empty() {
            return Err(Error::InvalidFamily("MDper needs a nonempty period".into()));
        }
        if let Some(&m) = period.iter().find(|&&m| m < 3 || m % 2 == 0) {
            return Err(Error::InvalidFamily(format!(
                "MDper period entries must be odd and >= 3, got {m}"
            )));
        }
        Ok(Self::MdPeriodic { s, period })
    }

    pub fn blocks(s: u32, blocks: Vec<Vec<u32>>) -> Result<Self> {
        Ok(Self::Blocks {
            blocks: BlockSet::finite(s, blocks)?,
        })
    }

    pub fn cantor(basis: CantorBasis, subsets: Vec<Vec<u64>>) -> Result<Self> {
        if subsets.is_empty() {
            return Err(Error::InvalidFamily("Cantor needs at least one digit subset".into()));
        }
        let mut subsets = subsets;
        for (j, set) in subsets.iter_mut().enumerate() {
            set.sort_unstable();
            set.dedup();
            if set.is_empty() {
                return Err(Error::InvalidFamily(format!("digit subset I_{} is empty", j + 1)));
            }
        }
        // I_n ⊆ {0, …, d_n - 1} over one joint period (or the first few levels
        // when the basis grows, since d_n only increases then).
        let horizon = basis
            .period_len()
            .map_or(subsets.len().max(1), |p| lcm(p, subsets.len()));
        for n in 1..=horizon {
            let max = *subsets[(n - 1) % subsets.len()].last().expect("nonempty");
            if let Some(d) = basis.d_u64(n) {
                if max >= d {
                    return Err(Error::InvalidFamily(format!("I_{n} contains {max} but d_{n} = {d}")));
                }
            }
        }
        Ok(Self::CantorRestrict { basis, subsets })
    }

    /// Base `s` of the underlying digit system (none for Cantor series).
    pub fn base(&self) -> Option<u32> {
        match self {
            Self::S { s }
            | Self::SU { s, .. }
            | Self::NegaSU { s, .. }
            | Self::SMinus { s }
            | Self::Tilde { s }
            | Self::Md { s }
            | Self::MdPeriodic { s, .. } => Some(*s),
            Self::Blocks { blocks } => Some(blocks.base()),
            Self::CantorRestrict { .. } => None,
        }
    }

    /// The excluded run digit `u` of the run-length families.
    pub fn run_digit(&self) -> Option<u32> {
        match self {
            Self::S { .. } | Self::SMinus { .. } => Some(0),
            Self::SU { u, .. } | Self::NegaSU { u, .. } => Some(*u),
            _ => None,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::S { .. } => "S",
            Self::SU { .. } => "Su",
            Self::NegaSU { .. } => "NSu",
            Self::SMinus { .. } => "Sminus",
            Self::Tilde { .. } => "Tilde",
            Self::Md { .. } => "MD",
            Self::MdPeriodic { .. } => "MDper",
            Self::Blocks { .. } => "Blocks",
            Self::CantorRestrict { .. } => "Cantor",
        }
    }

    fn is_run_length(&self) -> bool {
        matches!(
            self,
            Self::S { .. } | Self::SU { .. } | Self::NegaSU { .. } | Self::SMinus { .. }
        )
    }

    /// Admissible symbols at level `n` (1-based), sorted ascending; `None`
    /// when the branching is infinite.
    pub fn symbols_at(&self, level: usize) -> Option<Vec<u32>> {
        match self {
            Self::S { s } | Self::SMinus { s } => Some((1..*s).collect()),
            Self::SU { s, u } | Self::NegaSU { s, u } => Some((1..*s).filter(|p| p != u).collect()),
            Self::Tilde { s } => Some((0..tilde_blocks(*s).len() as u32).collect()),
            Self::Blocks { blocks } => Some((0..blocks.len().unwrap_or(0) as u32).collect()),
            Self::MdPeriodic { s, .. } => Some((0..*s).collect()),
            Self::Md { .. } => None,
            Self::CantorRestrict { subsets, .. } => {
                Some(subsets[(level - 1) % subsets.len()].iter().map(|&e| e as u32).collect())
            }
        }
    }

    /// Family whose every level has a single admissible symbol (a one-point set).
    pub fn is_degenerate(&self) -> bool {
        match self {
            Self::Md { .. } | Self::MdPeriodic { .. } => false,
            Self::CantorRestrict { subsets, .. } => subsets.iter().all(|i| i.len() == 1),
            _ => self.symbols_at(1).is_some_and(|v| v.len() == 1),
        }
    }

    pub fn check_address(&self, addr: &[u32]) -> Result<()> {
        self.check_symbols(addr, 0)
    }

    fn check_symbols(&self, syms: &[u32], offset: usize) -> Result<()> {
        for (i, &c) in syms.iter().enumerate() {
            let level = offset + i + 1;
            let allowed = self.symbols_at(level).ok_or_else(|| {
                Error::Unsupported(format!(
                    "{self} has infinitely many blocks; use the explicit-gap functions"
                ))
            })?;
            if allowed.binary_search(&c).is_err() {
                return Err(Error::FamilyConstraint(format!(
                    "symbol {c} at position {level} is not admissible for {self}"
                )));
            }
        }
        Ok(())
    }

    /// Affine symbol maps generating the family, one set per level of the period.
    pub fn level_maps(&self) -> Result<LevelMaps> {
        match self {
            Self::S { s } => LevelMaps::autonomous(su_maps(*s, 0)),
            Self::SU { s, u } => LevelMaps::autonomous(su_maps(*s, *u)),
            Self::NegaSU { s, u } => LevelMaps::autonomous(nsu_maps(*s, *u)),
            Self::SMinus { s } => {
                let s64 = *s as u64;
                LevelMaps::autonomous(
                    (1..*s)
                        .map(|p| {
                            let r = inv_pow(s64, p as u64);
                            (p, Affine::new(-(&r * rat(p as i64, 1)), -r))
                        })
                        .collect(),
                )
            }
            Self::Tilde { s } => LevelMaps::autonomous(block_maps(*s, &tilde_blocks(*s))),
            Self::Blocks { blocks } => {
                LevelMaps::autonomous(block_maps(blocks.base(), blocks.blocks().expect("finite")))
            }
            Self::MdPeriodic { s, period } => LevelMaps::new(
                period
                    .iter()
                    .map(|&m| {
                        let r = inv_pow(*s as u64, m as u64);
                        (0..*s)
                            .map(|e| (e, Affine::new(-(&r * rat(e as i64, 1)), -r.clone())))
                            .collect()
                    })
                    .collect(),
            ),
            Self::CantorRestrict { basis, subsets } => {
                let bp = basis
                    .period_len()
                    .ok_or_else(|| Error::Unsupported("cylinder geometry needs a periodic Cantor basis".into()))?;
                let t = lcm(bp, subsets.len());
                LevelMaps::new(
                    (1..=t)
                        .map(|n| {
                            let d = BigInt::from(basis.d(n));
                            let r = Rational::new(BigInt::one(), d);
                            subsets[(n - 1) % subsets.len()]
                                .iter()
                                .map(|&e| (e as u32, Affine::new(&r * rat(e as i64, 1), r.clone())))
                                .collect()
                        })
                        .collect(),
                )
            }
            Self::Md { .. } => Err(Error::Unsupported(
                "MD has infinitely many blocks and no finite symbol maps".into(),
            )),
        }
    }
}

fn su_maps(s: u32, u: u32) -> Vec<(u32, Affine)> {
    // x(p w) = u/(s-1) + (p-u) s^{-p} + s^{-p} (x(w) - u/(s-1))
    let base = rat(u as i64, s as i64 - 1);
    (1..s)
        .filter(|&p| p != u)
        .map(|p| {
            let r = inv_pow(s as u64, p as u64);
            let offset = &base + &r * rat(p as i64 - u as i64, 1) - &r * &base;
            (p, Affine::new(offset, r))
        })
        .collect()
}

fn nsu_maps(s: u32, u: u32) -> Vec<(u32, Affine)> {
    // x(p w) = -u/(s+1) + (p-u)(-s)^{-p} + (-s)^{-p} (x(w) + u/(s+1))
    let base = rat(u as i64, s as i64 + 1);
    (1..s)
        .filter(|&p| p != u)
        .map(|p| {
            let r = neg_inv_pow(s as u64, p as u64);
            let offset = -&base + &r * rat(p as i64 - u as i64, 1) + &r * &base;
            (p, Affine::new(offset, r))
        })
        .collect()
}

fn block_maps(s: u32, blocks: &[Vec<u32>]) -> Vec<(u32, Affine)> {
    blocks
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let value = eval_sadic(&DigitString::new(s, b.clone()).expect("validated block"));
            (i as u32, Affine::new(value, inv_pow(s as u64, b.len() as u64)))
        })
        .collect()
}

/// Run-length block `u^{p-1} p`.
pub fn run_block(u: u32, p: u32) -> Vec<u32> {
    let mut b = vec![u; p as usize - 1];
    b.push(p);
    b
}

/// The block list `{u^{c-1} c : c ∈ A_0, u ∈ A, u ≠ c}` in canonical order.
pub fn tilde_blocks(s: u32) -> Vec<Vec<u32>> {
    let mut blocks = vec![vec![1]];
    for c in 2..s {
        for u in (0..s).filter(|&u| u != c) {
            blocks.push(run_block(u, c));
        }
    }
    blocks.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    blocks
}

/// Block description of a family.
pub fn blocks_of_family(fam: &FamilySpec) -> Result<BlockSet> {
    match fam {
        FamilySpec::S { s } | FamilySpec::SMinus { s } => {
            BlockSet::finite(*s, (1..*s).map(|p| run_block(0, p)).collect())
        }
        FamilySpec::SU { s, u } | FamilySpec::NegaSU { s, u } => {
            BlockSet::finite(*s, (1..*s).filter(|p| p != u).map(|p| run_block(*u, p)).collect())
        }
        FamilySpec::Tilde { s } => BlockSet::finite(*s, tilde_blocks(*s)),
        FamilySpec::Md { s } => Ok(BlockSet::OddGapRuns { base: *s }),
        FamilySpec::Blocks { blocks } => Ok(blocks.clone()),
        FamilySpec::MdPeriodic { .. } | FamilySpec::CantorRestrict { .. } => Err(Error::Unsupported(format!(
            "{} is described by a digit basis, not a block set",
            fam.kind_name()
        ))),
    }
}

/// Ordered tuple of symbols naming a cylinder.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct CylinderAddress(pub Vec<u32>);

impl CylinderAddress {
    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn child(&self, c: u32) -> CylinderAddress {
        let mut v = self.0.clone();
        v.push(c);
        CylinderAddress(v)
    }

    pub fn parent(&self) -> Option<CylinderAddress> {
        (!self.0.is_empty()).then(|| CylinderAddress(self.0[..self.0.len() - 1].to_vec()))
    }
}

impl fmt::Display for CylinderAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Number of addresses of rank `depth`, saturating at `u128::MAX`.
pub fn address_count(fam: &FamilySpec, depth: usize) -> Option<u128> {
    let mut total: u128 = 1;
    for level in 1..=depth {
        total = total.saturating_mul(fam.symbols_at(level)?.len() as u128);
    }
    Some(total)
}

/// All admissible addresses of rank `depth` in lexicographic order.
pub fn enumerate_addresses(fam: &FamilySpec, depth: usize, cap: u64) -> Result<Vec<CylinderAddress>> {
    let count = address_count(fam, depth).ok_or_else(|| Error::Unsupported(format!("{fam} has infinite branching")))?;
    if count > cap as u128 {
        return Err(Error::Blowup {
            count: count.to_string(),
            cap,
        });
    }
    let per_level: Vec<Vec<u32>> = (1..=depth)
        .map(|l| fam.symbols_at(l).expect("finite branching"))
        .collect();
    let mut out = Vec::with_capacity(count as usize);
    let mut idx = vec![0usize; depth];
    loop {
        out.push(CylinderAddress(
            idx.iter().enumerate().map(|(l, &i)| per_level[l][i]).collect(),
        ));
        // odometer, last position fastest
        let mut pos = depth;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < per_level[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Whether `digits` can begin the representation of some member of `fam`.
///
/// Block families accept any parse into blocks. For `MDper` the digit string
/// is the nega-s-adic one, with free digits at the gap positions. For Cantor
/// restrictions the digits are read as `ε_n` directly.
pub fn membership_prefix(fam: &FamilySpec, digits: &DigitString) -> bool {
    let d = digits.digits();
    match fam {
        FamilySpec::MdPeriodic { s, period } => {
            if digits.base() != *s {
                return false;
            }
            let mut next = 0usize;
            let mut n = 0usize;
            for (i, &x) in d.iter().enumerate() {
                if i == next + period[n % period.len()] as usize - 1 {
                    next = i + 1;
                    n += 1;
                } else if x != 0 {
                    return false;
                }
            }
            true
        }
        FamilySpec::CantorRestrict { subsets, .. } => d
            .iter()
            .enumerate()
            .all(|(i, &e)| subsets[i % subsets.len()].contains(&(e as u64))),
        _ => match blocks_of_family(fam) {
            Ok(bs) => digits.base() == bs.base() && bs.accepts_prefix(d),
            Err(_) => false,
        },
    }
}

/// Digit string of the cylinder's base: `u^{c_1-1} c_1 … u^{c_n-1} c_n` for the
/// run-length families, concatenated blocks for block families, and
/// `0^{m_1-1} ε_1 …` for the periodic nega-s-adic Cantor family.
pub fn expand_address(fam: &FamilySpec, addr: &CylinderAddress) -> Result<DigitString> {
    fam.check_address(&addr.0)?;
    let s = fam
        .base()
        .ok_or_else(|| Error::Unsupported("Cantor-series digits have no single base".into()))?;
    let digits: Vec<u32> = match fam {
        _ if fam.is_run_length() => {
            let u = fam.run_digit().expect("run-length family");
            addr.0.iter().flat_map(|&c| run_block(u, c)).collect()
        }
        FamilySpec::Tilde { s } => {
            let blocks = tilde_blocks(*s);
            addr.0.iter().flat_map(|&c| blocks[c as usize].clone()).collect()
        }
        FamilySpec::Blocks { blocks } => {
            let bl = blocks.blocks().expect("finite");
            addr.0.iter().flat_map(|&c| bl[c as usize].clone()).collect()
        }
        FamilySpec::MdPeriodic { period, .. } => addr
            .0
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| {
                let m = period[i % period.len()];
                let mut b = vec![0; m as usize - 1];
                b.push(e);
                b
            })
            .collect(),
        _ => unreachable!("checked above"),
    };
    DigitString::new(s, digits)
}

/// Nega-s-adic digits `0^{m_1-1} ε_1 0^{m_2-1} ε_2 …` of an `M_(-D,s)` point
/// with explicit gaps.
pub fn expand_md_address(s: u32, gaps: &[u32], eps: &[u32]) -> Result<DigitString> {
    check_md(s, gaps, eps)?;
    let digits = gaps
        .iter()
        .zip(eps)
        .flat_map(|(&m, &e)| {
            let mut b = vec![0; m as usize - 1];
            b.push(e);
            b
        })
        .collect();
    DigitString::new(s, digits)
}

fn check_md(s: u32, gaps: &[u32], eps: &[u32]) -> Result<()> {
    if s < 2 {
        return Err(Error::InvalidBase(s as u64));
    }
    if gaps.len() != eps.len() {
        return Err(Error::InvalidArgument("MD needs one gap per digit".into()));
    }
    if let Some(&m) = gaps.iter().find(|&&m| m < 3 || m % 2 == 0) {
        return Err(Error::FamilyConstraint(format!("MD gap {m} is not odd and >= 3")));
    }
    if let Some(&e) = eps.iter().find(|&&e| e == 0 || e >= s) {
        return Err(Error::FamilyConstraint(format!("MD digit {e} is not in 1..{}", s - 1)));
    }
    Ok(())
}

/// Value of the `M_(-D,s)` point with explicit gaps (finite prefix, zero tail).
pub fn eval_md_point(s: u32, gaps: &[u32], eps: &[u32]) -> Result<Rational> {
    check_md(s, gaps, eps)?;
    eval_negas_cantor(eps, &GapSequence::explicit(gaps.to_vec())?, s)
}

#[derive(Clone, Copy)]
enum SignRule {
    Plain,
    /// `(-1)^{α_1+…+α_n}`, i.e. powers of `-s`.
    Exponent,
    /// `(-1)^n`
    Index,
}

/// `Σ w(α_n) · sign · s^{-(α_1+…+α_n)}` over the prefix, closed with the
/// periodic tail summed as a geometric series.
fn run_length_series(s: u32, alphas: &[u32], tail: &[u32], u: u32, sign: SignRule) -> Rational {
    let s64 = s as u64;
    let term = |k: u64, n: usize, a: u32| {
        let mag = inv_pow(s64, k) * rat(a as i64 - u as i64, 1);
        let negative = match sign {
            SignRule::Plain => false,
            SignRule::Exponent => k % 2 == 1,
            SignRule::Index => n % 2 == 1,
        };
        if negative {
            -mag
        } else {
            mag
        }
    };
    let mut acc = Rational::zero();
    let mut k = 0u64;
    for (i, &a) in alphas.iter().enumerate() {
        k += a as u64;
        acc += term(k, i + 1, a);
    }
    if !tail.is_empty() {
        let mut block = Rational::zero();
        let (k0, n0) = (k, alphas.len());
        for (j, &a) in tail.iter().enumerate() {
            k += a as u64;
            block += term(k, n0 + j + 1, a);
        }
        let shift = k - k0;
        let flips = match sign {
            SignRule::Plain => false,
            SignRule::Exponent => shift % 2 == 1,
            SignRule::Index => tail.len() % 2 == 1,
        };
        let mut ratio = inv_pow(s64, shift);
        if flips {
            ratio = -ratio;
        }
        acc += block / (Rational::one() - ratio);
    }
    acc
}

/// Exact value of a family point named by `alphas`, closed by the repeating
/// symbol block `tail` (an empty tail ends the defining series after the prefix).
pub fn eval_family_point(fam: &FamilySpec, alphas: &[u32], tail: &[u32]) -> Result<Rational> {
    fam.check_symbols(alphas, 0)?;
    if !tail.is_empty() {
        // The tail must be admissible at every level it will occupy.
        let reps = match fam {
            FamilySpec::MdPeriodic { period, .. } => lcm(period.len(), tail.len()) / tail.len(),
            FamilySpec::CantorRestrict { subsets, .. } => lcm(subsets.len(), tail.len()) / tail.len(),
            _ => 1,
        };
        let unrolled: Vec<u32> = tail.iter().copied().cycle().take(tail.len() * reps).collect();
        fam.check_symbols(&unrolled, alphas.len())?;
    }
    match fam {
        FamilySpec::S { s } => Ok(run_length_series(*s, alphas, tail, 0, SignRule::Plain)),
        FamilySpec::SU { s, u } => {
            Ok(rat(*u as i64, *s as i64 - 1) + run_length_series(*s, alphas, tail, *u, SignRule::Plain))
        }
        FamilySpec::NegaSU { s, u } => {
            Ok(run_length_series(*s, alphas, tail, *u, SignRule::Exponent) - rat(*u as i64, *s as i64 + 1))
        }
        FamilySpec::SMinus { s } => Ok(run_length_series(*s, alphas, tail, 0, SignRule::Index)),
        FamilySpec::Tilde { .. } | FamilySpec::Blocks { .. } => {
            let digits = expand_address(fam, &CylinderAddress(alphas.to_vec()))?;
            let period = expand_address(fam, &CylinderAddress(tail.to_vec()))?;
            Ok(eval_sadic(&digits.with_period(period.digits().to_vec())?))
        }
        FamilySpec::MdPeriodic { s, period } => {
            let t = period.len();
            let gaps = GapSequence::periodic(period.clone())?;
            let head = eval_negas_cantor(alphas, &gaps, *s)?;
            if tail.is_empty() {
                return Ok(head);
            }
            let len = lcm(t, tail.len());
            let n0 = alphas.len();
            let extended: Vec<u32> = alphas
                .iter()
                .copied()
                .chain(tail.iter().copied().cycle().take(len))
                .collect();
            let block = eval_negas_cantor(&extended, &gaps, *s)? - &head;
            let shift: u64 = (n0 + 1..=n0 + len).map(|n| gaps.get(n).expect("periodic") as u64).sum();
            let mut ratio = inv_pow(*s as u64, shift);
            if len % 2 == 1 {
                ratio = -ratio;
            }
            Ok(head + block / (Rational::one() - ratio))
        }
        FamilySpec::CantorRestrict { basis, subsets } => {
            let eps: Vec<u64> = alphas.iter().map(|&a| a as u64).collect();
            let head = eval_cantor(&eps, basis, false)?;
            if tail.is_empty() {
                return Ok(head);
            }
            let bp = basis
                .period_len()
                .ok_or_else(|| Error::Unsupported("periodic tails need a periodic Cantor basis".into()))?;
            let len = lcm(lcm(bp, subsets.len()), tail.len());
            let n0 = eps.len();
            let extended: Vec<u64> = eps
                .iter()
                .copied()
                .chain(tail.iter().map(|&a| a as u64).cycle().take(len))
                .collect();
            let block = eval_cantor(&extended, basis, false)? - &head;
            let mut denom = BigInt::one();
            for n in n0 + 1..=n0 + len {
                denom *= BigInt::from(basis.d(n));
            }
            let ratio = BigRational::new(BigInt::one(), denom);
            Ok(head + block / (Rational::one() - ratio))
        }
        FamilySpec::Md { .. } => Err(Error::Unsupported(
            "MD points need explicit gaps; use eval_md_point".into(),
        )),
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        match self {
            Self::S { s } => write!(f, "S(s={s})"),
            Self::SU { s, u } => write!(f, "Su(s={s},u={u})"),
            Self::NegaSU { s, u } => write!(f, "NSu(s={s},u={u})"),
            Self::SMinus { s } => write!(f, "Sminus(s={s})"),
            Self::Tilde { s } => write!(f, "Tilde(s={s})"),
            Self::Md { s } => write!(f, "MD(s={s})"),
            Self::MdPeriodic { s, period } => write!(f, "MDper(s={s},m=[{}])", list(period)),
            Self::Blocks { blocks } => write!(f, "Blocks(s={},B=[{}])", blocks.base(), blocks.render()),
            Self::CantorRestrict { basis, subsets } => {
                let d = match basis.rule() {
                    crate::radix::BasisRule::Constant(d) => format!("[{d}]"),
                    crate::radix::BasisRule::Periodic(ds) => {
                        format!("[{}]", ds.iter().map(u64::to_string).collect::<Vec<_>>().join(","))
                    }
                    crate::radix::BasisRule::Power { base } => format!("pow({base})"),
                    crate::radix::BasisRule::Linear { slope, offset } => format!("lin({slope},{offset})"),
                };
                let sets: Vec<String> = subsets
                    .iter()
                    .map(|i| format!("{{{}}}", i.iter().map(u64::to_string).collect::<Vec<_>>().join(",")))
                    .collect();
                write!(f, "Cantor(d={d},I=[{}])", sets.join(","))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radix::{eval_negasadic, int};

    fn addrs(v: &[&[u32]]) -> Vec<CylinderAddress> {
        v.iter().map(|a| CylinderAddress(a.to_vec())).collect()
    }

    #[test]
    fn block_examples() {
        let b = blocks_of_family(&FamilySpec::s(3).unwrap()).unwrap();
        assert_eq!(b.blocks().unwrap(), &[vec![1], vec![0, 2]]);
        assert_eq!(b.histogram().unwrap(), BTreeMap::from([(1, 1), (2, 1)]));

        let su = FamilySpec::su(3, 1).unwrap();
        let b = blocks_of_family(&su).unwrap();
        assert_eq!(b.blocks().unwrap(), &[vec![1, 2]]);
        assert!(b.is_degenerate());
        assert!(su.is_degenerate());

        let t = blocks_of_family(&FamilySpec::tilde(4).unwrap()).unwrap();
        assert_eq!(t.len(), Some(7));
        assert_eq!(t.histogram().unwrap(), BTreeMap::from([(1, 1), (2, 3), (3, 3)]));
    }

    #[test]
    fn md_blocks_are_analytic() {
        let b = blocks_of_family(&FamilySpec::md(3).unwrap()).unwrap();
        assert_eq!(b.histogram(), None);
        assert_eq!(b.count_of_length(3), 2);
        assert_eq!(b.count_of_length(4), 0);
        assert_eq!(b.count_of_length(1), 0);
    }

    #[test]
    fn family_constraints() {
        assert!(FamilySpec::s(2).is_err());
        assert!(FamilySpec::su(5, 5).is_err());
        assert!(FamilySpec::md(1).is_err());
        assert!(FamilySpec::md_periodic(3, vec![3, 4]).is_err());
        assert!(FamilySpec::md_periodic(3, vec![1]).is_err());
        assert!(FamilySpec::blocks(3, vec![vec![0, 3]]).is_err());
        assert!(FamilySpec::blocks(3, vec![]).is_err());
        assert!(FamilySpec::cantor(CantorBasis::constant(3).unwrap(), vec![vec![0, 3]]).is_err());
    }

    #[test]
    fn enumeration_examples() {
        let s3 = FamilySpec::s(3).unwrap();
        assert_eq!(
            enumerate_addresses(&s3, 2, DEFAULT_CAP).unwrap(),
            addrs(&[&[1, 1], &[1, 2], &[2, 1], &[2, 2]])
        );
        let su = FamilySpec::su(5, 2).unwrap();
        assert_eq!(
            enumerate_addresses(&su, 1, DEFAULT_CAP).unwrap(),
            addrs(&[&[1], &[3], &[4]])
        );
        for fam in [s3.clone(), su, FamilySpec::tilde(5).unwrap()] {
            assert_eq!(enumerate_addresses(&fam, 0, DEFAULT_CAP).unwrap(), addrs(&[&[]]));
        }
        assert!(matches!(
            enumerate_addresses(&s3, 21, DEFAULT_CAP),
            Err(Error::Blowup { .. })
        ));
        assert!(matches!(
            enumerate_addresses(&FamilySpec::md(2).unwrap(), 1, DEFAULT_CAP),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn membership_examples() {
        let s3 = FamilySpec::s(3).unwrap();
        let ds = |s, d: &[u32]| DigitString::new(s, d.to_vec()).unwrap();
        assert!(membership_prefix(&s3, &ds(3, &[0, 2, 1])));
        assert!(!membership_prefix(&s3, &ds(3, &[2])));
        assert!(membership_prefix(&s3, &ds(3, &[0])));
        assert!(!membership_prefix(&s3, &ds(3, &[0, 0])));
        let t4 = FamilySpec::tilde(4).unwrap();
        assert!(membership_prefix(&t4, &ds(4, &[1, 2])));
        assert!(membership_prefix(&t4, &ds(4, &[2, 2])));
        assert!(!membership_prefix(&t4, &ds(4, &[2, 1])));
        let md = FamilySpec::md(3).unwrap();
        assert!(membership_prefix(&md, &ds(3, &[0, 0, 2, 0, 0, 1])));
        assert!(membership_prefix(&md, &ds(3, &[0, 0, 0, 0, 0])));
        assert!(!membership_prefix(&md, &ds(3, &[0, 2])));
        assert!(!membership_prefix(&md, &ds(3, &[0, 0, 0, 1])));
        let mp = FamilySpec::md_periodic(3, vec![3]).unwrap();
        assert!(membership_prefix(&mp, &ds(3, &[0, 0, 0, 0, 0, 2])));
        assert!(!membership_prefix(&mp, &ds(3, &[0, 1, 0])));
    }

    #[test]
    fn point_examples() {
        let n3 = FamilySpec::nsu(3, 0).unwrap();
        assert_eq!(eval_family_point(&n3, &[1, 1, 1], &[]).unwrap(), rat(-7, 27));
        assert_eq!(eval_family_point(&n3, &[2, 1], &[]).unwrap(), rat(5, 27));
        let sm = FamilySpec::sminus(3).unwrap();
        assert_eq!(eval_family_point(&sm, &[2, 1], &[]).unwrap(), rat(-5, 27));
        let s3 = FamilySpec::su(3, 0).unwrap();
        assert_eq!(eval_family_point(&s3, &[], &[2]).unwrap(), rat(1, 4));
        assert_eq!(eval_family_point(&s3, &[], &[1]).unwrap(), rat(1, 2));
        assert!(matches!(
            eval_family_point(&FamilySpec::su(5, 2).unwrap(), &[2], &[]),
            Err(Error::FamilyConstraint(_))
        ));
        assert!(matches!(
            eval_family_point(&s3, &[0], &[]),
            Err(Error::FamilyConstraint(_))
        ));
    }

    #[test]
    fn expansion_examples() {
        let e = expand_address(&FamilySpec::s(3).unwrap(), &CylinderAddress(vec![2, 1])).unwrap();
        assert_eq!(e.digits(), &[0, 2, 1]);
        let e = expand_address(&FamilySpec::su(5, 2).unwrap(), &CylinderAddress(vec![3, 1])).unwrap();
        assert_eq!(e.digits(), &[2, 2, 3, 1]);
        let e = expand_md_address(3, &[3, 3], &[2, 1]).unwrap();
        assert_eq!(e.digits(), &[0, 0, 2, 0, 0, 1]);
        let mp = FamilySpec::md_periodic(3, vec![3]).unwrap();
        let e2 = expand_address(&mp, &CylinderAddress(vec![2, 1])).unwrap();
        assert_eq!(e2.digits(), e.digits());
    }

    #[test]
    fn md_point_matches_negasadic_digits() {
        let d = expand_md_address(3, &[3, 5], &[2, 1]).unwrap();
        assert_eq!(eval_md_point(3, &[3, 5], &[2, 1]).unwrap(), eval_negasadic(&d));
        assert!(eval_md_point(3, &[4], &[1]).is_err());
        assert!(eval_md_point(3, &[3], &[0]).is_err());
    }

    #[test]
    fn periodic_tails_close_exactly() {
        // Partial sums of a long unrolled tail converge to the closed value.
        let cases: Vec<(FamilySpec, Vec<u32>, Vec<u32>)> = vec![
            (FamilySpec::su(5, 2).unwrap(), vec![3], vec![1, 4]),
            (FamilySpec::nsu(4, 1).unwrap(), vec![2], vec![3, 2]),
            (FamilySpec::sminus(4).unwrap(), vec![1, 3], vec![2]),
            (FamilySpec::tilde(4).unwrap(), vec![3], vec![0, 5]),
            (FamilySpec::md_periodic(3, vec![3, 5]).unwrap(), vec![1], vec![2, 0, 1]),
            (
                FamilySpec::cantor(CantorBasis::periodic(vec![2, 3]).unwrap(), vec![vec![0, 1], vec![0, 2]]).unwrap(),
                vec![1],
                vec![2, 1],
            ),
        ];
        for (fam, head, tail) in cases {
            let closed = eval_family_point(&fam, &head, &tail).unwrap();
            let long: Vec<u32> = head
                .iter()
                .copied()
                .chain(tail.iter().copied().cycle().take(60 * tail.len()))
                .collect();
            let approx = eval_family_point(&fam, &long, &[]).unwrap();
            let err = crate::radix::abs_diff(&closed, &approx);
            assert!(err < rat(1, 1_000_000_000), "{fam}: {err}");
        }
    }

    #[test]
    fn display_round_trips_through_text() {
        for fam in [
            FamilySpec::s(3).unwrap(),
            FamilySpec::nsu(5, 2).unwrap(),
            FamilySpec::md_periodic(3, vec![3, 5]).unwrap(),
            FamilySpec::blocks(3, vec![vec![0, 2], vec![1]]).unwrap(),
        ] {
            assert_eq!(fam.to_string().parse::<FamilySpec>().unwrap(), fam);
        }
        assert_eq!(int(0), Rational::zero());
    }
}
