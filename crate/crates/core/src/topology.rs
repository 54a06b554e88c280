//! Poincaré polynomials of equal-rank quotients `G/H` from the degrees of the
//! basic Weyl-group invariants,
//!
//! ```text
//! P(t) = Π (1 − t^{2n_j}) / Π (1 − t^{2m_j}),
//! ```
//!
//! evaluated in exact integer arithmetic.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    G2,
    F4,
    E6,
    E7,
    E8,
    U1,
}

/// One simple (or torus) factor of a compact group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Factor {
    pub series: Series,
    pub rank: usize,
}

impl Factor {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let fixed = match series {
            Series::G2 => Some(2),
            Series::F4 => Some(4),
            Series::E6 => Some(6),
            Series::E7 => Some(7),
            Series::E8 => Some(8),
            Series::U1 => Some(1),
            _ => None,
        };
        let ok = match (series, fixed) {
            (_, Some(r)) => rank == r,
            (Series::D, _) => rank >= 2,
            _ => rank >= 1,
        };
        if !ok {
            return Err(Error::InvalidRank(format!("{series:?}{rank}")));
        }
        Ok(Factor { series, rank })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `D₂ = A₁ × A₁` is not simple; accepted but flagged.
    pub fn is_flagged(&self) -> bool {
        self.series == Series::D && self.rank == 2
    }

    pub fn degrees(&self) -> Vec<u32> {
        let n = self.rank as u32;
        match self.series {
            Series::A => (2..=n + 1).collect(),
            Series::B | Series::C => (1..=n).map(|k| 2 * k).collect(),
            Series::D => {
                let mut d: Vec<u32> = (1..n).map(|k| 2 * k).collect();
                d.push(n);
                d
            }
            Series::G2 => vec![2, 6],
            Series::F4 => vec![2, 6, 8, 12],
            Series::E6 => vec![2, 5, 6, 8, 9, 12],
            Series::E7 => vec![2, 6, 8, 10, 12, 14, 18],
            Series::E8 => vec![2, 8, 12, 14, 18, 20, 24, 30],
            Series::U1 => vec![1],
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.series {
            Series::A | Series::B | Series::C | Series::D => write!(f, "{:?}{}", self.series, self.rank),
            Series::U1 => f.write_str("U1"),
            s => write!(f, "{s:?}"),
        }
    }
}

/// A product of simple factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupSpec {
    pub factors: Vec<Factor>,
}

impl GroupSpec {
    pub fn rank(&self) -> usize {
        self.factors.iter().map(Factor::rank).sum()
    }

    pub fn weyl_degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.factors.iter().flat_map(Factor::degrees).collect();
        d.sort_unstable();
        d
    }

    pub fn caveats(&self) -> Vec<String> {
        self.factors
            .iter()
            .filter(|f| f.is_flagged())
            .map(|f| format!("{f} is not simple (D2 = A1 x A1)"))
            .collect()
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("×"))
    }
}

pub fn weyl_degrees(g: &GroupSpec) -> Vec<u32> {
    g.weyl_degrees()
}

fn parse_factor(name: &str) -> Result<Vec<Factor>> {
    let s: String = name.chars().filter(|c| !c.is_whitespace()).collect();
    let unknown = || Error::UnknownGroup(name.to_string());
    let upper = s.to_ascii_uppercase();
    let arg = |prefix: &str| -> Option<usize> {
        let rest = upper.strip_prefix(prefix)?;
        let rest = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(rest);
        rest.parse().ok()
    };
    for (label, series) in [
        ("G2", Series::G2),
        ("F4", Series::F4),
        ("E6", Series::E6),
        ("E7", Series::E7),
        ("E8", Series::E8),
        ("U1", Series::U1),
        ("U(1)", Series::U1),
        ("SO(2)", Series::U1),
        ("SO2", Series::U1),
    ] {
        if upper == label {
            return Ok(vec![Factor::new(series, if series == Series::U1 { 1 } else { label[1..2].parse().unwrap() })?]);
        }
    }
    if let Some(n) = arg("SU") {
        // SU(1) is trivial and contributes no factor
        return match n {
            0 => Err(unknown()),
            1 => Ok(Vec::new()),
            n => Ok(vec![Factor::new(Series::A, n - 1)?]),
        };
    }
    if let Some(n) = arg("SO") {
        return match n {
            0 | 1 => Err(unknown()),
            2 => Ok(vec![Factor::new(Series::U1, 1)?]),
            n if n % 2 == 1 => Ok(vec![Factor::new(Series::B, n / 2)?]),
            n => Ok(vec![Factor::new(Series::D, n / 2)?]),
        };
    }
    if let Some(n) = arg("SP") {
        return Ok(vec![Factor::new(Series::C, n)?]);
    }
    if let Some(n) = arg("U") {
        return match n {
            0 => Err(unknown()),
            1 => Ok(vec![Factor::new(Series::U1, 1)?]),
            n => Ok(vec![Factor::new(Series::A, n - 1)?, Factor::new(Series::U1, 1)?]),
        };
    }
    for (p, series) in [('A', Series::A), ('B', Series::B), ('C', Series::C), ('D', Series::D)] {
        if let Some(rest) = upper.strip_prefix(p) {
            let rest = rest.trim_start_matches('_');
            if let Ok(n) = rest.parse::<usize>() {
                return Ok(vec![Factor::new(series, n)?]);
            }
        }
    }
    Err(unknown())
}

/// Parses a product such as `SU(2)xSU(2)xU(1)` or `A1×U1`.
pub fn parse_group(text: &str) -> Result<GroupSpec> {
    let mut factors = Vec::new();
    for part in text.split(['x', '×', '*']) {
        if part.trim().is_empty() {
            return Err(Error::UnknownGroup(text.to_string()));
        }
        factors.extend(parse_factor(part)?);
    }
    Ok(GroupSpec { factors })
}

/// Parses `G/H`.
pub fn parse_quotient(text: &str) -> Result<(GroupSpec, GroupSpec)> {
    let (g, h) = text.split_once('/').ok_or_else(|| Error::Parse(format!("expected G/H, got {text:?}")))?;
    Ok((parse_group(g)?, parse_group(h)?))
}

/// Betti numbers `b_0, …, b_N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PoincarePolynomial {
    pub coefficients: Vec<i64>,
}

impl PoincarePolynomial {
    pub fn new(mut coefficients: Vec<i64>) -> Self {
        while coefficients.len() > 1 && coefficients.last() == Some(&0) {
            coefficients.pop();
        }
        PoincarePolynomial { coefficients }
    }

    /// `Π_k P_{n_k}` with `P_n = 1 + t² + … + t^{2n}`.
    pub fn product_of_projective(ns: &[usize]) -> Self {
        let mut acc = vec![1i64];
        for &n in ns {
            let mut f = vec![0i64; 2 * n + 1];
            for k in 0..=n {
                f[2 * k] = 1;
            }
            acc = multiply(&acc, &f);
        }
        Self::new(acc)
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn eval(&self, t: i64) -> i64 {
        self.coefficients.iter().rev().fold(0, |acc, &c| acc * t + c)
    }

    pub fn render(&self) -> String {
        let mut terms = Vec::new();
        for (k, &c) in self.coefficients.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => "t".into(),
                k => format!("t^{k}"),
            };
            terms.push(match (c, k) {
                (c, 0) => c.to_string(),
                (1, _) => mono,
                (c, _) => format!("{c}{mono}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

fn multiply(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `1 − t^{2m}`.
fn cyclo(m: u32) -> Vec<i64> {
    let mut v = vec![0i64; 2 * m as usize + 1];
    v[0] = 1;
    v[2 * m as usize] = -1;
    v
}

/// Exact division by `1 − t^d`; `None` if the remainder is nonzero.
fn divide_one_minus(p: &[i64], d: usize) -> Option<Vec<i64>> {
    if p.len() <= d {
        return None;
    }
    // p = (1 − t^d) q  ⇒  q_k = p_k + q_{k−d}
    let qlen = p.len() - d;
    let mut q = vec![0i64; qlen];
    for k in 0..qlen {
        q[k] = p[k] + if k >= d { q[k - d] } else { 0 };
    }
    // the top d coefficients must match −q shifted
    for k in qlen..p.len() {
        let lhs = p[k];
        let rhs = if k >= d { -q[k - d] } else { 0 };
        if lhs != rhs {
            return None;
        }
    }
    Some(q)
}

pub fn hirsch_polynomial(g_degrees: &[u32], h_degrees: &[u32]) -> Result<PoincarePolynomial> {
    if g_degrees.len() != h_degrees.len() {
        return Err(Error::RankMismatch { g: g_degrees.len(), h: h_degrees.len() });
    }
    if g_degrees.iter().chain(h_degrees).any(|&d| d == 0) {
        return Err(Error::InvalidRank("degree zero".into()));
    }
    let mut num = vec![1i64];
    for &n in g_degrees {
        num = multiply(&num, &cyclo(n));
    }
    for &m in h_degrees {
        num = divide_one_minus(&num, 2 * m as usize).ok_or(Error::NonDivisible)?;
    }
    Ok(PoincarePolynomial::new(num))
}

/// Poincaré polynomial of a quotient written as `G/H`.
pub fn poincare(quotient: &str) -> Result<PoincarePolynomial> {
    let (g, h) = parse_quotient(quotient)?;
    if g.rank() != h.rank() {
        return Err(Error::RankMismatch { g: g.rank(), h: h.rank() });
    }
    hirsch_polynomial(&g.weyl_degrees(), &h.weyl_degrees())
}

/// Outcome of [`betti_validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiReport {
    pub unit_constant: bool,
    pub odd_vanish: bool,
    pub palindromic: bool,
    pub even_nonzero: bool,
    pub nonnegative: bool,
    pub violations: Vec<String>,
}

impl BettiReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn betti_validate(p: &PoincarePolynomial) -> BettiReport {
    let c = &p.coefficients;
    let n = c.len() - 1;
    let unit_constant = c[0] == 1;
    let odd_vanish = c.iter().skip(1).step_by(2).all(|&x| x == 0);
    let palindromic = (0..=n).all(|k| c[k] == c[n - k]);
    let even_nonzero = c.iter().step_by(2).all(|&x| x != 0);
    let nonnegative = c.iter().all(|&x| x >= 0);
    let mut violations = Vec::new();
    if !unit_constant {
        violations.push(format!("b_0 = {}, expected 1", c[0]));
    }
    for (k, &x) in c.iter().enumerate() {
        if k % 2 == 1 && x != 0 {
            violations.push(format!("odd Betti number b_{k} = {x}"));
        }
    }
    if !palindromic {
        violations.push("Betti numbers are not palindromic".into());
    }
    if !even_nonzero {
        violations.push("an even Betti number below the top degree vanishes".into());
    }
    if !nonnegative {
        violations.push("negative Betti number".into());
    }
    BettiReport { unit_constant, odd_vanish, palindromic, even_nonzero, nonnegative, violations }
}

/// Minimal nonzero coadjoint orbit of a simple factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinOrbit {
    pub dimension: usize,
    pub isotropy: String,
    pub caveat: Option<String>,
}

/// Tabulated minimal-orbit dimension and isotropy subgroup.
///
/// The symplectic row is the tabulated `2(2n − 2)`; the orbit `CP^{2n−1}`
/// of `Sp(n)/(Sp(n−1) × U(1))` has real dimension `2(2n − 1)`, which is what
/// [`hirsch_polynomial`] returns for that quotient.
pub fn min_orbit(g: &Factor) -> Result<MinOrbit> {
    let n = g.rank;
    let (dimension, isotropy) = match g.series {
        Series::A => (2 * n, format!("A{}×U(1)", n - 1)),
        Series::B => (2 * (2 * n - 1), format!("B{}×SO(2)", n - 1)),
        Series::C => (2 * (2 * n - 2), format!("C{}×U(1)", n - 1)),
        Series::D => (2 * (2 * n - 2), format!("D{}×SO(2)", n - 1)),
        Series::G2 => (10, "A1×SO(2)".into()),
        Series::F4 => (30, "C3×SO(2)".into()),
        Series::E6 => (32, "D5×SO(2)".into()),
        Series::E7 => (54, "E6×SO(2)".into()),
        Series::E8 => (114, "E7×SO(2)".into()),
        Series::U1 => return Err(Error::UnknownGroup("U1 has no nonzero coadjoint orbit".into())),
    };
    let caveat = g.is_flagged().then(|| "D2 = A1 x A1 is not simple; row listed for n != 2".to_string());
    Ok(MinOrbit { dimension, isotropy, caveat })
}

/// Looks up a single simple factor by name.
pub fn parse_simple(text: &str) -> Result<Factor> {
    let g = parse_group(text)?;
    match g.factors.as_slice() {
        [f] if f.series != Series::U1 => Ok(*f),
        _ => Err(Error::UnknownGroup(text.to_string())),
    }
}
