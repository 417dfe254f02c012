//! Aggregated reports: full Chow reports for zip data and F-zip types,
//! `p`-localized reports for truncated Barsotti-Tate groups, and the
//! compatibility check against `A^*(M_{1,1}) = Z[t]/(12t)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::chow::{graded_chow_with, present, relations, ChowError, ChowOptions, ChowPresentation};
use crate::poly::Poly;
use crate::weyl::{is_prime, Parabolic, ZipDatum};
use crate::zlinalg::{AbelianGroup, GradedAbelianGroup};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub max_degree: u32,
    pub top_degree_bound: u32,
    /// Torsion may continue above `max_degree`; it is never claimed complete.
    pub torsion_complete: bool,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChowReport {
    pub datum: ZipDatum,
    pub presentation: ChowPresentation,
    pub graded: GradedAbelianGroup,
    pub picard: AbelianGroup,
    /// `None` when `q = 1`, where the quotient is infinite dimensional.
    pub rational_dimension: Option<u64>,
    #[serde(with = "crate::serde_util::biguint")]
    pub orbit_count: BigUint,
    pub metadata: ReportMetadata,
}

pub fn report(z: &ZipDatum, max_degree: u32) -> Result<ChowReport, ChowError> {
    report_with(z, max_degree, &ChowOptions::default())
}

pub fn report_with(z: &ZipDatum, max_degree: u32, opts: &ChowOptions) -> Result<ChowReport, ChowError> {
    let par = z.parabolic();
    let top = par.top_degree_bound();
    let finite = z.q() >= 2;
    let needed = if finite { max_degree.max(top) } else { max_degree };
    let full = graded_chow_with(z, needed.max(1), opts)?;
    let picard = full.degree(1).cloned().expect("degree 1 computed");
    let orbit_count = par.coset_count();

    let rational_dimension = finite.then(|| full.free_ranks()[..=top as usize].iter().map(|&r| r as u64).sum::<u64>());
    if let Some(dim) = rational_dimension {
        if BigUint::from(dim) != orbit_count {
            return Err(ChowError::Inconsistent(format!(
                "rational dimension {dim} differs from orbit count {orbit_count}"
            )));
        }
    }

    let mut notes = Vec::new();
    if finite {
        notes.push(format!("free ranks vanish above degree {top}"));
    }
    Ok(ChowReport {
        datum: z.clone(),
        presentation: present(z),
        graded: full.truncate(max_degree as usize),
        picard,
        rational_dimension,
        orbit_count,
        metadata: ReportMetadata {
            max_degree,
            top_degree_bound: top,
            torsion_complete: false,
            notes,
        },
    })
}

/// Type `tau: Z -> Z_{>=0}` of an F-zip, stored as its support with multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FzipType {
    parts: BTreeMap<i64, usize>,
}

impl FzipType {
    pub fn new(entries: impl IntoIterator<Item = (i64, usize)>) -> Result<Self, ChowError> {
        let mut parts = BTreeMap::new();
        for (i, n) in entries {
            if n == 0 {
                continue;
            }
            if parts.insert(i, n).is_some() {
                return Err(ChowError::InvalidType(format!("support point {i} given twice")));
            }
        }
        if parts.is_empty() {
            return Err(ChowError::InvalidType("empty support".into()));
        }
        Ok(FzipType { parts })
    }

    /// Block sizes placed on the support `0, 1, ..., r - 1`.
    pub fn from_composition(parts: &[usize]) -> Result<Self, ChowError> {
        if parts.contains(&0) {
            return Err(ChowError::InvalidType(format!("zero block in {parts:?}")));
        }
        Self::new(parts.iter().enumerate().map(|(i, &n)| (i as i64, n)))
    }

    /// `(n_1, ..., n_r)` in increasing order of support.
    pub fn composition(&self) -> Vec<usize> {
        self.parts.values().copied().collect()
    }

    pub fn height(&self) -> usize {
        self.parts.values().sum()
    }

    /// `(h, d) = (tau(0) + tau(1), tau(1))` when the support lies in `{0, 1}`.
    pub fn display_parameters(&self) -> Option<(usize, usize)> {
        if self.parts.keys().any(|&i| i != 0 && i != 1) {
            return None;
        }
        let at = |i| self.parts.get(&i).copied().unwrap_or(0);
        Some((at(0) + at(1), at(1)))
    }
}

fn multinomial(parts: &[usize]) -> BigUint {
    let h: usize = parts.iter().sum();
    let mut acc: BigUint = (1..=h as u64).map(BigUint::from).product();
    for &n in parts {
        acc /= (1..=n as u64).map(BigUint::from).product::<BigUint>();
    }
    acc
}

/// Report for `GL(h)` with the Levi of `tau` and `q = p`, checked against
/// `Pic = Z^{r-1} + Z/(p-1)`, the multinomial dimension and, for support in
/// `{0, 1}`, the display report.
pub fn fzip_report(tau: &FzipType, p: u64, max_degree: u32) -> Result<ChowReport, ChowError> {
    fzip_report_with(tau, p, max_degree, &ChowOptions::default())
}

pub fn fzip_report_with(tau: &FzipType, p: u64, max_degree: u32, opts: &ChowOptions) -> Result<ChowReport, ChowError> {
    if !is_prime(p) {
        return Err(ChowError::NotPrime(p));
    }
    let parts = tau.composition();
    let z = ZipDatum::new(Parabolic::gl(&parts)?, p, Some(p))?;
    let rep = report_with(&z, max_degree, opts)?;

    let torsion: &[u64] = if p > 2 { &[p - 1] } else { &[] };
    let expected_pic = AbelianGroup::new(parts.len() - 1, torsion);
    if rep.picard != expected_pic {
        return Err(ChowError::Inconsistent(format!(
            "Pic = {} but expected {expected_pic}",
            rep.picard
        )));
    }
    let dim = multinomial(&parts);
    if rep.rational_dimension.map(BigUint::from) != Some(dim.clone()) {
        return Err(ChowError::Inconsistent(format!(
            "rational dimension {:?} but expected {dim}",
            rep.rational_dimension
        )));
    }
    if let Some((h, d)) = tau.display_parameters() {
        let disp = graded_chow_with(&ZipDatum::display(h, d, p)?, max_degree.max(1), opts)?;
        if disp.truncate(max_degree as usize) != rep.graded || disp.degree(1) != Some(&rep.picard) {
            return Err(ChowError::Inconsistent(format!(
                "F-zip type differs from the display stack ({h}, {d})"
            )));
        }
    }
    Ok(rep)
}

/// Chow groups with `p` inverted: free ranks kept, `p`-primary torsion removed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalizedReport {
    pub prime: u64,
    pub graded: GradedAbelianGroup,
}

pub fn localize(g: &GradedAbelianGroup, p: u64) -> Result<LocalizedReport, ChowError> {
    if !is_prime(p) {
        return Err(ChowError::NotPrime(p));
    }
    Ok(LocalizedReport {
        prime: p,
        graded: g.localize_away(p),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BtReport {
    pub h: usize,
    pub d: usize,
    /// Truncation level; the localized groups do not depend on it.
    pub level: u32,
    pub localized: LocalizedReport,
}

/// `A^*(BT_n^{h,d})` with `p` inverted, via the level-one display stack.
pub fn bt_report(h: usize, d: usize, level: u32, p: u64, max_degree: u32) -> Result<BtReport, ChowError> {
    bt_report_with(h, d, level, p, max_degree, &ChowOptions::default())
}

pub fn bt_report_with(
    h: usize,
    d: usize,
    level: u32,
    p: u64,
    max_degree: u32,
    opts: &ChowOptions,
) -> Result<BtReport, ChowError> {
    if h == 0 || d > h {
        return Err(ChowError::InvalidDisplay { h, d });
    }
    if level == 0 {
        return Err(ChowError::ZeroLevel);
    }
    if !is_prime(p) {
        return Err(ChowError::NotPrime(p));
    }
    let z = ZipDatum::display(h, d, p)?;
    let graded = graded_chow_with(&z, max_degree, opts)?;
    Ok(BtReport {
        h,
        d,
        level,
        localized: localize(&graded, p)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct M11Image {
    pub relation: String,
    /// Image under `t1 -> -t`, `t2 -> t`.
    pub image: String,
    /// Reduction modulo the ideal `(12t)`.
    pub residue: String,
    pub in_ideal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct M11Certificate {
    pub prime: u64,
    pub compatible: bool,
    pub images: Vec<M11Image>,
}

/// Remainder of a polynomial in `Z[t]` modulo `(12t)`: positive-degree
/// coefficients reduced into `[0, 12)`, the constant term untouched.
fn reduce_mod_12t(p: &Poly) -> Poly {
    let twelve = BigInt::from(12);
    Poly::from_terms(
        p.nvars(),
        p.terms().map(|(m, c)| {
            let c = if m.degree() == 0 { c.clone() } else { c.mod_floor(&twelve) };
            (m.clone(), c)
        }),
    )
}

/// Whether `t1 -> -t`, `t2 -> t` induces a map from the `(2, 1)` display
/// ring at `p` to `Z[t]/(12t)`.
pub fn m11_compatibility(p: u64) -> Result<M11Certificate, ChowError> {
    if !is_prime(p) {
        return Err(ChowError::NotPrime(p));
    }
    let z = ZipDatum::display(2, 1, p)?;
    let t = Poly::var(1, 0);
    let images = relations(&z)
        .iter()
        .map(|rel| {
            let image = rel.substitute(&[-&t, t.clone()]).expect("two variables");
            let residue = reduce_mod_12t(&image);
            M11Image {
                relation: rel.to_string(),
                image: image.format_with(&["t"]),
                residue: residue.format_with(&["t"]),
                in_ideal: residue.is_zero(),
            }
        })
        .collect::<Vec<_>>();
    Ok(M11Certificate {
        prime: p,
        compatible: images.iter().all(|i| i.in_ideal),
        images,
    })
}

impl fmt::Display for ChowReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "datum: {}", self.datum)?;
        write!(f, "{}", self.presentation)?;
        for (d, g) in self.graded.iter() {
            writeln!(f, "A^{d} = {g}")?;
        }
        writeln!(f, "Pic = {}", self.picard)?;
        match self.rational_dimension {
            Some(dim) => writeln!(f, "rational dimension = {dim}")?,
            None => writeln!(f, "rational dimension = infinite")?,
        }
        writeln!(f, "orbit count = {}", self.orbit_count)?;
        writeln!(f, "top degree bound = {}", self.metadata.top_degree_bound)
    }
}

impl fmt::Display for LocalizedReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (d, g) in self.graded.iter() {
            writeln!(f, "A^{d}[1/{}] = {}", self.prime, display_localized(g, self.prime))?;
        }
        Ok(())
    }
}

fn display_localized(g: &AbelianGroup, p: u64) -> String {
    let ring = format!("Z[1/{p}]");
    let mut parts = Vec::new();
    match g.free_rank {
        0 => {}
        1 => parts.push(ring.clone()),
        r => parts.push(format!("{ring}^{r}")),
    }
    parts.extend(g.torsion.iter().map(|d| format!("Z/{d}")));
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

impl fmt::Display for BtReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BT_{}^({},{}) at p = {}", self.level, self.h, self.d, self.localized.prime)?;
        write!(f, "{}", self.localized)
    }
}

impl fmt::Display for M11Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p = {}: compatible = {}", self.prime, self.compatible)?;
        for i in &self.images {
            writeln!(
                f,
                "  {} -> {} = {} mod (12t){}",
                i.relation,
                i.image,
                i.residue,
                if i.in_ideal { "" } else { "  (not in ideal)" }
            )?;
        }
        Ok(())
    }
}
