//! Text grammar for family descriptors, e.g. `S(s=3)`, `Su(s=5,u=2)`,
//! `MDper(s=3,m=[3,5])`, `Blocks(s=3,B=[0 2;1])`, `Cantor(d=[3],I=[{0,2}])`.
//!
//! Cantor bases may also be written `d=[2,3,4]` (periodic), `d=pow(2)`
//! (`d_n = 2^n`) or `d=lin(a,b)` (`d_n = a·n + b`). Block digits are separated
//! by spaces; in bases up to 10 a block may also be written compactly (`02`).

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::families::FamilySpec;
use crate::radix::CantorBasis;

/// Split on `sep` at bracket depth zero.
fn split_top(text: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '[' | '{' | '(' => depth += 1,
            ']' | '}' | ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
}

fn strip(text: &str, open: char, close: char) -> Option<&str> {
    text.trim().strip_prefix(open)?.strip_suffix(close).map(str::trim)
}

struct Parser<'a> {
    text: &'a str,
}

impl<'a> Parser<'a> {
    fn err(&self, reason: impl Into<String>) -> Error {
        Error::Parse {
            text: self.text.to_string(),
            reason: reason.into(),
        }
    }

    fn number<T: FromStr>(&self, key: &str, v: &str) -> Result<T> {
        v.trim()
            .parse()
            .map_err(|_| self.err(format!("`{key}` expects a nonnegative integer, got `{}`", v.trim())))
    }

    fn list<T: FromStr>(&self, key: &str, v: &str) -> Result<Vec<T>> {
        let inner = strip(v, '[', ']').ok_or_else(|| self.err(format!("`{key}` expects a list [..]")))?;
        if inner.is_empty() {
            return Ok(Vec::new());
        }
        inner.split(',').map(|x| self.number(key, x)).collect()
    }

    fn blocks(&self, s: u32, v: &str) -> Result<Vec<Vec<u32>>> {
        let inner = strip(v, '[', ']').ok_or_else(|| self.err("`B` expects a block list [..;..]"))?;
        inner
            .split(';')
            .map(|block| {
                let block = block.trim();
                let tokens: Vec<&str> = block.split_whitespace().collect();
                if tokens.is_empty() {
                    return Err(self.err("empty block"));
                }
                if tokens.len() == 1 && block.len() > 1 && s <= 10 {
                    block
                        .chars()
                        .map(|c| c.to_digit(10).ok_or_else(|| self.err(format!("bad digit `{c}`"))))
                        .collect()
                } else {
                    tokens.iter().map(|t| self.number("B", t)).collect()
                }
            })
            .collect()
    }

    fn basis(&self, v: &str) -> Result<CantorBasis> {
        let v = v.trim();
        if let Some(arg) = v.strip_prefix("pow").and_then(|r| strip(r, '(', ')')) {
            return CantorBasis::power(self.number("d", arg)?);
        }
        if let Some(args) = v.strip_prefix("lin").and_then(|r| strip(r, '(', ')')) {
            let ab: Vec<&str> = args.split(',').collect();
            if ab.len() != 2 {
                return Err(self.err("lin(a,b) takes two arguments"));
            }
            return CantorBasis::linear(self.number("d", ab[0])?, self.number("d", ab[1])?);
        }
        let ds: Vec<u64> = self.list("d", v)?;
        match ds.as_slice() {
            [] => Err(self.err("`d` needs at least one entry")),
            [d] => CantorBasis::constant(*d),
            _ => CantorBasis::periodic(ds),
        }
    }

    fn subsets(&self, v: &str) -> Result<Vec<Vec<u64>>> {
        let inner = strip(v, '[', ']').ok_or_else(|| self.err("`I` expects a list of sets [{..},..]"))?;
        split_top(inner, ',')
            .into_iter()
            .map(|set| {
                let body = strip(set, '{', '}').ok_or_else(|| self.err("digit sets are written {a,b,..}"))?;
                if body.is_empty() {
                    return Ok(Vec::new());
                }
                body.split(',').map(|x| self.number("I", x)).collect()
            })
            .collect()
    }

    fn parse(&self) -> Result<FamilySpec> {
        let text = self.text.trim();
        let open = text.find('(').ok_or_else(|| self.err("expected Name(key=value,...)"))?;
        if !text.ends_with(')') {
            return Err(self.err("missing closing parenthesis"));
        }
        let name = text[..open].trim();
        let body = &text[open + 1..text.len() - 1];
        let mut args: BTreeMap<&str, &str> = BTreeMap::new();
        for part in split_top(body, ',') {
            if part.trim().is_empty() {
                continue;
            }
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| self.err(format!("expected key=value, got `{}`", part.trim())))?;
            if args.insert(k.trim(), v.trim()).is_some() {
                return Err(self.err(format!("duplicate key `{}`", k.trim())));
            }
        }
        let allowed: &[&str] = match name {
            "S" | "Sminus" | "Tilde" | "MD" => &["s"],
            "Su" | "NSu" => &["s", "u"],
            "MDper" => &["s", "m"],
            "Blocks" => &["s", "B"],
            "Cantor" => &["d", "I"],
            _ => return Err(self.err(format!("unknown family `{name}`"))),
        };
        if let Some(k) = args.keys().find(|k| !allowed.contains(k)) {
            return Err(self.err(format!("unexpected key `{k}` for {name}")));
        }
        let get = |k: &str| {
            args.get(k)
                .copied()
                .ok_or_else(|| self.err(format!("{name} requires `{k}`")))
        };
        let wrap = |e: Error| match e {
            Error::Parse { .. } => e,
            other => self.err(other.to_string()),
        };
        let fam = match name {
            "Cantor" => FamilySpec::cantor(self.basis(get("d")?)?, self.subsets(get("I")?)?),
            _ => {
                let s: u32 = self.number("s", get("s")?)?;
                match name {
                    "S" => FamilySpec::s(s),
                    "Sminus" => FamilySpec::sminus(s),
                    "Tilde" => FamilySpec::tilde(s),
                    "MD" => FamilySpec::md(s),
                    "Su" => FamilySpec::su(s, self.number("u", get("u")?)?),
                    "NSu" => FamilySpec::nsu(s, self.number("u", get("u")?)?),
                    "MDper" => FamilySpec::md_periodic(s, self.list("m", get("m")?)?),
                    "Blocks" => FamilySpec::blocks(s, self.blocks(s, get("B")?)?),
                    _ => unreachable!("names filtered above"),
                }
            }
        };
        fam.map_err(wrap)
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        Parser { text }.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::BlockSet;

    #[test]
    fn parses_every_family_kind() {
        assert_eq!("S(s=3)".parse::<FamilySpec>().unwrap(), FamilySpec::S { s: 3 });
        assert_eq!(
            "Su(s=5,u=2)".parse::<FamilySpec>().unwrap(),
            FamilySpec::SU { s: 5, u: 2 }
        );
        assert_eq!(
            " NSu( s=5 , u=2 ) ".parse::<FamilySpec>().unwrap(),
            FamilySpec::NegaSU { s: 5, u: 2 }
        );
        assert_eq!(
            "Sminus(s=3)".parse::<FamilySpec>().unwrap(),
            FamilySpec::SMinus { s: 3 }
        );
        assert_eq!("Tilde(s=4)".parse::<FamilySpec>().unwrap(), FamilySpec::Tilde { s: 4 });
        assert_eq!("MD(s=2)".parse::<FamilySpec>().unwrap(), FamilySpec::Md { s: 2 });
        assert_eq!(
            "MDper(s=3,m=[3,5])".parse::<FamilySpec>().unwrap(),
            FamilySpec::MdPeriodic {
                s: 3,
                period: vec![3, 5]
            }
        );
        assert_eq!(
            "Blocks(s=3,B=[0 2;1])".parse::<FamilySpec>().unwrap(),
            FamilySpec::Blocks {
                blocks: BlockSet::finite(3, vec![vec![1], vec![0, 2]]).unwrap()
            }
        );
        assert_eq!(
            "Blocks(s=3,B=[02;1])".parse::<FamilySpec>().unwrap(),
            "Blocks(s=3,B=[0 2;1])".parse::<FamilySpec>().unwrap()
        );
        let c = "Cantor(d=[3],I=[{0,2}])".parse::<FamilySpec>().unwrap();
        assert_eq!(
            c,
            FamilySpec::cantor(CantorBasis::constant(3).unwrap(), vec![vec![0, 2]]).unwrap()
        );
        let p = "Cantor(d=pow(2),I=[{0,1}])".parse::<FamilySpec>().unwrap();
        assert_eq!(
            p,
            FamilySpec::cantor(CantorBasis::power(2).unwrap(), vec![vec![0, 1]]).unwrap()
        );
    }

    #[test]
    fn rejects_malformed_text() {
        for bad in [
            "S",
            "S(s=3",
            "Q(s=3)",
            "S(s=x)",
            "S(t=3)",
            "Su(s=5)",
            "S(s=2)",
            "Su(s=5,u=7)",
            "MDper(s=3,m=[4])",
            "Blocks(s=3,B=[0 3])",
            "Cantor(d=[3],I=[{0,3}])",
            "S(s=3,s=4)",
        ] {
            assert!(matches!(bad.parse::<FamilySpec>(), Err(Error::Parse { .. })), "{bad}");
        }
    }
}
