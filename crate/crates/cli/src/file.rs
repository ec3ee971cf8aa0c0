//! The arrangement file format.
//!
//! A line-oriented text document:
//!
//! ```text
//! conic-zariski arrangement 1
//! precision 128
//! period 4
//! meta family k=1.125 h=0.0625
//! conic C1 <x^2> <xy> <y^2> <xz> <yz> <z^2>
//! conic C2 ...
//! point N1 <x> <y> <z>
//! line T1 <a> <b> <c>
//! pairing T1 T2 T3 T4
//! ```
//!
//! Each number is `re` or `re,im`, every part a hexadecimal float
//! `[-]0x<hex digits>[.<hex digits>]p<exponent>` or a decimal, optionally
//! followed by `~<radius>` with the radius in decimal. Blank lines and lines
//! starting with `#` are ignored. `pairing A B C D` records that `{A, B}`
//! and `{C, D}` each share a degenerate transverse. Output is written with
//! exact hexadecimal midpoints so reading it back reproduces every ball.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use conic_zariski::geometry::{Conic, ProjLine, ProjPoint};
use conic_zariski::numeric::CertNumber;

use crate::error::CliError;

pub const HEADER: &str = "conic-zariski arrangement 1";

#[derive(Clone, Debug)]
pub struct ArrangementFile {
    pub precision: usize,
    pub period: Option<usize>,
    /// Free-form `meta <key> <value>` entries.
    pub meta: BTreeMap<String, String>,
    pub conics: Vec<(String, Conic)>,
    pub points: Vec<(String, ProjPoint)>,
    pub lines: Vec<(String, ProjLine)>,
    pub pairing: Option<[String; 4]>,
}

impl ArrangementFile {
    pub fn new(precision: usize) -> Self {
        ArrangementFile {
            precision,
            period: None,
            meta: BTreeMap::new(),
            conics: Vec::new(),
            points: Vec::new(),
            lines: Vec::new(),
            pairing: None,
        }
    }

    pub fn conic(&self, label: &str) -> Option<&Conic> {
        self.conics.iter().find(|c| c.0 == label).map(|c| &c.1)
    }

    pub fn line(&self, label: &str) -> Option<&ProjLine> {
        self.lines.iter().find(|c| c.0 == label).map(|c| &c.1)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        match lines.next() {
            Some((_, h)) if h == HEADER => {}
            _ => return Err(CliError::Parse(format!("missing header line {HEADER:?}"))),
        }
        let mut out = ArrangementFile::new(128);
        let mut have_precision = false;
        for (no, line) in lines {
            let err = |m: &str| CliError::Parse(format!("line {no}: {m}"));
            let words: Vec<&str> = line.split_whitespace().collect();
            match words[0] {
                "precision" => {
                    if words.len() != 2 {
                        return Err(err("expected `precision <bits>`"));
                    }
                    if !out.conics.is_empty() || !out.points.is_empty() || !out.lines.is_empty() {
                        return Err(err("precision must precede every number"));
                    }
                    out.precision = words[1].parse().map_err(|_| err("bad precision"))?;
                    have_precision = true;
                }
                "period" => {
                    if words.len() != 2 {
                        return Err(err("expected `period <n>`"));
                    }
                    out.period = Some(words[1].parse().map_err(|_| err("bad period"))?);
                }
                "meta" => {
                    if words.len() < 2 {
                        return Err(err("expected `meta <key> <value>`"));
                    }
                    out.meta.insert(words[1].to_string(), words[2..].join(" "));
                }
                "conic" => {
                    let (label, nums) = labeled(&words, 6, out.precision).map_err(|m| err(&m))?;
                    let c: [CertNumber; 6] = nums.try_into().expect("six numbers");
                    out.conics.push((label, Conic::from_coeffs_unchecked(c)));
                }
                "point" => {
                    let (label, nums) = labeled(&words, 3, out.precision).map_err(|m| err(&m))?;
                    out.points.push((label, ProjPoint::from_vec(nums.try_into().expect("three numbers"))));
                }
                "line" => {
                    let (label, nums) = labeled(&words, 3, out.precision).map_err(|m| err(&m))?;
                    out.lines.push((label, ProjLine::from_vec(nums.try_into().expect("three numbers"))));
                }
                "pairing" => {
                    if words.len() != 5 {
                        return Err(err("expected `pairing A B C D`"));
                    }
                    out.pairing = Some(std::array::from_fn(|i| words[i + 1].to_string()));
                }
                w => return Err(err(&format!("unknown keyword {w:?}"))),
            }
        }
        if !have_precision {
            return Err(CliError::Parse("missing `precision` line".into()));
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{HEADER}");
        let _ = writeln!(s, "precision {}", self.precision);
        if let Some(n) = self.period {
            let _ = writeln!(s, "period {n}");
        }
        for (k, v) in &self.meta {
            let _ = writeln!(s, "meta {k} {v}");
        }
        for (label, c) in &self.conics {
            let _ = writeln!(s, "conic {label} {}", numbers(&c.coeffs()));
        }
        for (label, p) in &self.points {
            let _ = writeln!(s, "point {label} {}", numbers(p.coords()));
        }
        for (label, l) in &self.lines {
            let _ = writeln!(s, "line {label} {}", numbers(l.coords()));
        }
        if let Some(p) = &self.pairing {
            let _ = writeln!(s, "pairing {}", p.join(" "));
        }
        s
    }
}

fn labeled(words: &[&str], count: usize, prec: usize) -> Result<(String, Vec<CertNumber>), String> {
    if words.len() != count + 2 {
        return Err(format!("expected `{} <label>` and {count} numbers", words[0]));
    }
    let nums = words[2..]
        .iter()
        .map(|w| parse_number(w, prec))
        .collect::<Result<Vec<_>, String>>()?;
    Ok((words[1].to_string(), nums))
}

pub fn parse_number(w: &str, prec: usize) -> Result<CertNumber, String> {
    let (mid, rad) = match w.split_once('~') {
        Some((m, r)) => {
            let r: f64 = r.parse().map_err(|_| format!("bad radius in {w:?}"))?;
            if !(r >= 0.0) || !r.is_finite() {
                return Err(format!("radius in {w:?} must be finite and nonnegative"));
            }
            (m, Some(r))
        }
        None => (w, None),
    };
    let x = CertNumber::parse(mid, prec).ok_or_else(|| format!("bad number {w:?}"))?;
    Ok(match rad {
        // a literal that needed rounding keeps its rounding error on top
        Some(r) => x.with_radius(if x.radius() == 0.0 { r } else { x.radius() + r }),
        None => x,
    })
}

pub fn format_number(x: &CertNumber) -> String {
    if x.radius() == 0.0 {
        x.to_literal()
    } else {
        format!("{}~{:e}", x.to_literal(), x.radius())
    }
}

fn numbers(xs: &[CertNumber]) -> String {
    xs.iter().map(format_number).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let mut f = ArrangementFile::new(128);
        f.period = Some(4);
        f.meta.insert("family".into(), "test".into());
        let third = CertNumber::one(128).try_div(&CertNumber::from_i64(3, 128)).unwrap();
        let z = &third + &CertNumber::parse("0,0.7", 128).unwrap();
        f.conics.push(("C1".into(), Conic::from_coeffs_unchecked(std::array::from_fn(|i| z.scale(i as f64 + 1.0)))));
        f.lines.push(("T1".into(), ProjLine::from_vec([third.clone(), z.clone(), CertNumber::from_f64(-2.5, 128)])));
        f.pairing = Some(["T1".into(), "T2".into(), "T3".into(), "T4".into()]);
        let text = f.to_text();
        let g = ArrangementFile::parse(&text).unwrap();
        assert_eq!(g.to_text(), text);
        let a = &f.lines[0].1.coords()[1];
        let b = &g.lines[0].1.coords()[1];
        assert_eq!(a.to_literal(), b.to_literal());
        assert_eq!(a.radius(), b.radius());
    }

    #[test]
    fn malformed_input_is_reported_with_a_line_number() {
        let e = ArrangementFile::parse("conic-zariski arrangement 1\nprecision 128\nline T1 1 2\n").unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");
        assert!(ArrangementFile::parse("hello").is_err());
        assert!(ArrangementFile::parse("conic-zariski arrangement 1\nprecision 64\npoint P 1 2 x\n").is_err());
    }
}
