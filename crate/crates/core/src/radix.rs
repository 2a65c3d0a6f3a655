//! Exact evaluation of the numeral systems the set families are built on:
//! s-adic and nega-s-adic expansions, Cantor series (plain and alternating),
//! nega-s-adic series and nega-s-adic Cantor series.
//!
//! Every value is an exact [`Rational`]. A finite digit string stands for
//! the expansion with a zero tail; an optional period closes the expansion
//! with an eventually periodic tail, which is summed as a geometric series.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `s^k` as a big integer.
pub fn big_pow(s: u64, k: u64) -> BigInt {
    num_traits::pow(BigInt::from(s), k as usize)
}

/// `s^{-k}` as an exact rational.
pub fn inv_pow(s: u64, k: u64) -> Rational {
    Rational::new(BigInt::one(), big_pow(s, k))
}

/// `(-s)^{-k}` as an exact rational.
pub fn neg_inv_pow(s: u64, k: u64) -> Rational {
    let r = inv_pow(s, k);
    if k % 2 == 1 {
        -r
    } else {
        r
    }
}

/// Render a rational as `p/q` (or `p` for integers).
pub fn fmt_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::InvalidArgument(format!("`{text}` is not a rational p/q"));
    let text = text.trim();
    let (p, q) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn check_base(s: u32) -> Result<()> {
    if s < 2 {
        Err(Error::InvalidBase(s as u64))
    } else {
        Ok(())
    }
}

fn check_digits(digits: &[u32], s: u32, offset: usize) -> Result<()> {
    for (i, &d) in digits.iter().enumerate() {
        if d >= s {
            return Err(Error::InvalidDigit {
                position: offset + i + 1,
                digit: d as u64,
                bound: s.to_string(),
            });
        }
    }
    Ok(())
}

/// A digit string over the alphabet `{0, …, s-1}` with an optional periodic tail.
///
/// An empty period means the expansion continues with zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitString {
    base: u32,
    digits: Vec<u32>,
    period: Vec<u32>,
}

impl DigitString {
    pub fn new(base: u32, digits: Vec<u32>) -> Result<Self> {
        check_base(base)?;
        check_digits(&digits, base, 0)?;
        Ok(Self {
            base,
            digits,
            period: Vec::new(),
        })
    }

    /// Close the expansion with the repeating block `period`.
    pub fn with_period(mut self, period: Vec<u32>) -> Result<Self> {
        check_digits(&period, self.base, self.digits.len())?;
        self.period = period;
        Ok(self)
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn period(&self) -> &[u32] {
        &self.period
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }
}

/// `Σ α_n r^n` over the digits, closed with the periodic tail if present.
fn eval_power_series(digits: &[u32], period: &[u32], r: &Rational) -> Rational {
    let mut acc = Rational::zero();
    let mut pow = Rational::one();
    for &d in digits {
        pow *= r;
        acc += &pow * int(d as i64);
    }
    if period.iter().any(|&d| d != 0) {
        let mut block = Rational::zero();
        let mut block_pow = Rational::one();
        for &d in period {
            block_pow *= r;
            block += &block_pow * int(d as i64);
        }
        acc += pow * block / (Rational::one() - block_pow);
    }
    acc
}

/// Value of the s-adic expansion `Σ α_n s^{-n}`.
pub fn eval_sadic(d: &DigitString) -> Rational {
    eval_power_series(&d.digits, &d.period, &rat(1, d.base as i64))
}

/// Value of the nega-s-adic expansion `Σ (-1)^n α_n s^{-n}`.
pub fn eval_negasadic(d: &DigitString) -> Rational {
    eval_power_series(&d.digits, &d.period, &rat(-1, d.base as i64))
}

/// The interval `[-s/(s+1), 1/(s+1)]` swept out by nega-s-adic expansions.
pub fn negasadic_range(s: u32) -> (Rational, Rational) {
    let s = s as i64;
    (rat(-s, s + 1), rat(1, s + 1))
}

/// Basis `(d_n)` of a Cantor series. Every `d_n` is at least 2 and the
/// sequence is a pure function of `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CantorBasis {
    rule: BasisRule,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasisRule {
    Constant(u64),
    Periodic(Vec<u64>),
    /// `d_n = base^n`
    Power {
        base: u64,
    },
    /// `d_n = slope * n + offset`
    Linear {
        slope: u64,
        offset: u64,
    },
}

impl CantorBasis {
    pub fn constant(d: u64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidBase(d));
        }
        Ok(Self {
            rule: BasisRule::Constant(d),
        })
    }

    pub fn periodic(ds: Vec<u64>) -> Result<Self> {
        if ds.is_empty() {
            return Err(Error::InvalidArgument("empty basis period".into()));
        }
        if let Some(&bad) = ds.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidBase(bad));
        }
        Ok(Self {
            rule: BasisRule::Periodic(ds),
        })
    }

    pub fn power(base: u64) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidBase(base));
        }
        Ok(Self {
            rule: BasisRule::Power { base },
        })
    }

    pub fn linear(slope: u64, offset: u64) -> Result<Self> {
        if slope + offset < 2 {
            return Err(Error::InvalidBase(slope + offset));
        }
        Ok(Self {
            rule: BasisRule::Linear { slope, offset },
        })
    }

    pub fn rule(&self) -> &BasisRule {
        &self.rule
    }

    /// `d_n` for `n >= 1`.
    pub fn d(&self, n: usize) -> BigUint {
        assert!(n >= 1, "Cantor basis is indexed from 1");
        match &self.rule {
            BasisRule::Constant(d) => BigUint::from(*d),
            BasisRule::Periodic(ds) => BigUint::from(ds[(n - 1) % ds.len()]),
            BasisRule::Power { base } => num_traits::pow(BigUint::from(*base), n),
            BasisRule::Linear { slope, offset } => BigUint::from(*slope) * BigUint::from(n) + BigUint::from(*offset),
        }
    }

    /// `d_n` if it fits in a `u64`.
    pub fn d_u64(&self, n: usize) -> Option<u64> {
        match &self.rule {
            BasisRule::Constant(d) => Some(*d),
            BasisRule::Periodic(ds) => Some(ds[(n - 1) % ds.len()]),
            BasisRule::Power { base } => base.checked_pow(u32::try_from(n).ok()?),
            BasisRule::Linear { slope, offset } => slope.checked_mul(n as u64)?.checked_add(*offset),
        }
    }

    /// `ln d_n`, computed without forming `d_n`.
    pub fn ln_d(&self, n: usize) -> f64 {
        match &self.rule {
            BasisRule::Constant(d) => (*d as f64).ln(),
            BasisRule::Periodic(ds) => (ds[(n - 1) % ds.len()] as f64).ln(),
            BasisRule::Power { base } => n as f64 * (*base as f64).ln(),
            BasisRule::Linear { slope, offset } => (*slope as f64 * n as f64 + *offset as f64).ln(),
        }
    }

    /// Length of the period if the basis is eventually constant or periodic.
    pub fn period_len(&self) -> Option<usize> {
        match &self.rule {
            BasisRule::Constant(_) => Some(1),
            BasisRule::Periodic(ds) => Some(ds.len()),
            BasisRule::Power { .. } => None,
            BasisRule::Linear { slope, .. } => (*slope == 0).then_some(1),
        }
    }
}

/// Gap sequence `(m_n)` of a nega-s-adic (Cantor) series; `k_n = m_1 + … + m_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapSequence {
    rule: GapRule,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GapRule {
    Explicit(Vec<u32>),
    Periodic(Vec<u32>),
    Constant(u32),
    /// `m_n = first + (n - 1) * step`
    Arithmetic {
        first: u32,
        step: u32,
    },
}

impl GapSequence {
    fn check(ms: &[u32]) -> Result<()> {
        match ms.iter().position(|&m| m == 0) {
            Some(i) => Err(Error::NonPositiveGap { position: i + 1 }),
            None => Ok(()),
        }
    }

    pub fn explicit(ms: Vec<u32>) -> Result<Self> {
        Self::check(&ms)?;
        Ok(Self {
            rule: GapRule::Explicit(ms),
        })
    }

    pub fn periodic(ms: Vec<u32>) -> Result<Self> {
        if ms.is_empty() {
            return Err(Error::InvalidArgument("empty gap period".into()));
        }
        Self::check(&ms)?;
        Ok(Self {
            rule: GapRule::Periodic(ms),
        })
    }

    pub fn constant(m: u32) -> Result<Self> {
        Self::check(&[m])?;
        Ok(Self {
            rule: GapRule::Constant(m),
        })
    }

    pub fn arithmetic(first: u32, step: u32) -> Result<Self> {
        Self::check(&[first])?;
        Ok(Self {
            rule: GapRule::Arithmetic { first, step },
        })
    }

    pub fn rule(&self) -> &GapRule {
        &self.rule
    }

    /// `m_n` for `n >= 1`, or `None` past the end of an explicit list.
    pub fn get(&self, n: usize) -> Option<u32> {
        assert!(n >= 1, "gap sequences are indexed from 1");
        match &self.rule {
            GapRule::Explicit(ms) => ms.get(n - 1).copied(),
            GapRule::Periodic(ms) => Some(ms[(n - 1) % ms.len()]),
            GapRule::Constant(m) => Some(*m),
            GapRule::Arithmetic { first, step } => Some(first.saturating_add(step.saturating_mul((n - 1) as u32))),
        }
    }

    fn require(&self, n: usize) -> Result<u32> {
        self.get(n).ok_or_else(|| Error::SequenceExhausted {
            defined: n - 1,
            requested: n,
        })
    }
}

/// Value of `Σ ε_n / (d_1⋯d_n)`, or `Σ (-1)^n ε_n / (d_1⋯d_n)` when `alternating`.
pub fn eval_cantor(eps: &[u64], basis: &CantorBasis, alternating: bool) -> Result<Rational> {
    let mut acc = Rational::zero();
    let mut prod = BigInt::one();
    for (i, &e) in eps.iter().enumerate() {
        let n = i + 1;
        let d = basis.d(n);
        if BigUint::from(e) >= d {
            return Err(Error::InvalidDigit {
                position: n,
                digit: e,
                bound: d.to_string(),
            });
        }
        prod *= BigInt::from(d);
        let term = Rational::new(BigInt::from(e), prod.clone());
        if alternating && n % 2 == 1 {
            acc -= term;
        } else {
            acc += term;
        }
    }
    Ok(acc)
}

/// Value of the nega-s-adic Cantor series `Σ (-1)^n ε_n / s^{m_1+…+m_n}`.
pub fn eval_negas_cantor(eps: &[u32], gaps: &GapSequence, s: u32) -> Result<Rational> {
    check_base(s)?;
    check_digits(eps, s, 0)?;
    let mut acc = Rational::zero();
    let mut k = 0u64;
    for (i, &e) in eps.iter().enumerate() {
        let n = i + 1;
        k += gaps.require(n)? as u64;
        let term = inv_pow(s as u64, k) * int(e as i64);
        if n % 2 == 1 {
            acc -= term;
        } else {
            acc += term;
        }
    }
    Ok(acc)
}

/// Value of the nega-s-adic series `Σ α_n / (-s)^{m_1+…+m_n}`.
pub fn eval_nega_series(alphas: &[u32], gaps: &GapSequence, s: u32) -> Result<Rational> {
    check_base(s)?;
    check_digits(alphas, s, 0)?;
    let mut acc = Rational::zero();
    let mut k = 0u64;
    for (i, &a) in alphas.iter().enumerate() {
        k += gaps.require(i + 1)? as u64;
        acc += neg_inv_pow(s as u64, k) * int(a as i64);
    }
    Ok(acc)
}

/// Finite-horizon check that every `m_n`, `n <= horizon`, is odd, which is
/// when a nega-s-adic series is an alternating Cantor series. Terms past the
/// end of an explicit gap list count as failures.
pub fn lemma1_check(gaps: &GapSequence, horizon: usize) -> bool {
    (1..=horizon).all(|n| matches!(gaps.get(n), Some(m) if m % 2 == 1))
}

/// First `n` digits of the canonical (greedy) s-adic or nega-s-adic
/// expansion of `x`.
pub fn digits_from_rational(x: &Rational, s: u32, n: usize, negative: bool) -> Result<DigitString> {
    check_base(s)?;
    if n == 0 {
        return Err(Error::InvalidArgument("digit count must be at least 1".into()));
    }
    let (lo, hi) = if negative {
        negasadic_range(s)
    } else {
        (Rational::zero(), Rational::one())
    };
    if x < &lo || x > &hi {
        return Err(Error::OutOfRange {
            value: fmt_rational(x),
            lo: fmt_rational(&lo),
            hi: fmt_rational(&hi),
        });
    }
    let sr = int(s as i64);
    let mut digits = Vec::with_capacity(n);
    let mut r = x.clone();
    if negative {
        // x = (-1/s)(α + x'), with x' again in [lo, hi]
        let shift = rat(1, s as i64 + 1);
        for _ in 0..n {
            let scaled = -(&r * &sr);
            let d = (&scaled - &shift).ceil().to_integer();
            let d = d.clamp(BigInt::zero(), BigInt::from(s - 1));
            r = &scaled - Rational::from_integer(d.clone());
            digits.push(d.to_u32().expect("digit below base"));
        }
    } else {
        if x.is_one() {
            return Err(Error::NonCanonical(fmt_rational(x)));
        }
        for _ in 0..n {
            let scaled = &r * &sr;
            let d = scaled.floor().to_integer();
            r = &scaled - Rational::from_integer(d.clone());
            digits.push(d.to_u32().expect("digit below base"));
        }
    }
    DigitString::new(s, digits)
}

/// Round-trip bound `s^{-n} · s/(s-1)` for `n`-digit truncations.
pub fn truncation_bound(s: u32, n: usize) -> Rational {
    inv_pow(s as u64, n as u64) * rat(s as i64, s as i64 - 1)
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a.lcm(&b)
}

pub(crate) fn abs_diff(a: &Rational, b: &Rational) -> Rational {
    (a - b).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds(s: u32, d: &[u32]) -> DigitString {
        DigitString::new(s, d.to_vec()).unwrap()
    }

    /// Partial sums of the periodic expansion, for checking the closed-form tail.
    fn partial_sum(s: u32, prefix: &[u32], period: &[u32], terms: usize, nega: bool) -> Rational {
        let digits: Vec<u32> = prefix
            .iter()
            .copied()
            .chain(period.iter().copied().cycle())
            .take(terms)
            .collect();
        let d = ds(s, &digits);
        if nega {
            eval_negasadic(&d)
        } else {
            eval_sadic(&d)
        }
    }

    #[test]
    fn sadic_examples() {
        assert_eq!(eval_sadic(&ds(3, &[1, 0, 2])), rat(11, 27));
        assert_eq!(eval_sadic(&ds(3, &[])), int(0));
        let twos = ds(3, &[]).with_period(vec![2]).unwrap();
        assert_eq!(eval_sadic(&twos), int(1));
        let approx = partial_sum(3, &[], &[2], 40, false);
        assert!(abs_diff(&approx, &int(1)) <= inv_pow(3, 40));
    }

    #[test]
    fn negasadic_examples() {
        assert_eq!(eval_negasadic(&ds(3, &[1])), rat(-1, 3));
        let lo = ds(3, &[]).with_period(vec![2, 0]).unwrap();
        let hi = ds(3, &[]).with_period(vec![0, 2]).unwrap();
        assert_eq!(eval_negasadic(&lo), rat(-3, 4));
        assert_eq!(eval_negasadic(&hi), rat(1, 4));
        for (closed, period) in [(rat(-3, 4), [2, 0]), (rat(1, 4), [0, 2])] {
            let approx = partial_sum(3, &[], &period, 40, true);
            assert!(abs_diff(&approx, &closed) <= inv_pow(3, 39));
        }
        assert_eq!(negasadic_range(3), (rat(-3, 4), rat(1, 4)));
    }

    #[test]
    fn invalid_digit_is_rejected() {
        assert!(matches!(
            DigitString::new(3, vec![1, 3]),
            Err(Error::InvalidDigit {
                position: 2,
                digit: 3,
                ..
            })
        ));
        assert!(matches!(DigitString::new(1, vec![]), Err(Error::InvalidBase(1))));
    }

    #[test]
    fn cantor_series_examples() {
        let basis = CantorBasis::periodic(vec![2, 3, 4]).unwrap();
        assert_eq!(eval_cantor(&[1, 2, 3], &basis, false).unwrap(), rat(23, 24));
        assert_eq!(eval_cantor(&[1, 2, 3], &basis, true).unwrap(), rat(-7, 24));
        assert!(matches!(
            eval_cantor(&[1, 3], &basis, false),
            Err(Error::InvalidDigit { position: 2, .. })
        ));
        let three = CantorBasis::constant(3).unwrap();
        assert_eq!(
            eval_cantor(&[2, 0, 1, 1], &three, false).unwrap(),
            eval_sadic(&ds(3, &[2, 0, 1, 1]))
        );
    }

    #[test]
    fn negas_cantor_examples() {
        let ones = GapSequence::constant(1).unwrap();
        assert_eq!(eval_negas_cantor(&[1, 1, 1], &ones, 3).unwrap(), rat(-7, 27));
        let threes = GapSequence::explicit(vec![3, 3]).unwrap();
        assert_eq!(eval_negas_cantor(&[1, 1], &threes, 2).unwrap(), rat(-7, 64));
        assert_eq!(eval_negas_cantor(&[0, 0, 0], &ones, 7).unwrap(), int(0));
        assert!(matches!(
            eval_negas_cantor(&[1, 1, 1], &threes, 2),
            Err(Error::SequenceExhausted { requested: 3, .. })
        ));
        assert!(matches!(
            GapSequence::explicit(vec![1, 0]),
            Err(Error::NonPositiveGap { position: 2 })
        ));
    }

    #[test]
    fn lemma1_examples() {
        let odd = GapSequence::arithmetic(3, 2).unwrap();
        assert!(lemma1_check(&odd, 50));
        assert!(lemma1_check(&GapSequence::constant(1).unwrap(), 50));
        let mixed = GapSequence::explicit(vec![3, 4, 5]).unwrap();
        assert!(!lemma1_check(&mixed, 3));
        assert!(lemma1_check(&mixed, 1));
    }

    #[test]
    fn digits_from_rational_examples() {
        let d = digits_from_rational(&rat(1, 3), 3, 3, false).unwrap();
        assert_eq!(d.digits(), &[1, 0, 0]);
        let z = digits_from_rational(&int(0), 5, 6, true).unwrap();
        assert!(z.digits().iter().all(|&x| x == 0));
        let x = rat(-1, 4);
        let d = digits_from_rational(&x, 3, 4, true).unwrap();
        assert!(abs_diff(&eval_negasadic(&d), &x) <= truncation_bound(3, 4));
        assert!(matches!(
            digits_from_rational(&rat(1, 2), 3, 4, true),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            digits_from_rational(&int(1), 3, 4, false),
            Err(Error::NonCanonical(_))
        ));
    }

    #[test]
    fn basis_logs_match_values() {
        let b = CantorBasis::power(2).unwrap();
        assert_eq!(b.d(5), BigUint::from(32u32));
        assert!((b.ln_d(5) - 32f64.ln()).abs() < 1e-12);
        assert_eq!(b.d_u64(70), None);
        let l = CantorBasis::linear(1, 1).unwrap();
        assert_eq!(l.d(4), BigUint::from(5u32));
    }
}
