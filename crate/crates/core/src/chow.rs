//! Integral Chow rings `S^{W_L} / (f - phi(f) : f in S_+^{W_G})` degree by degree.
//!
//! The relation ideal is generated by homogeneous `W_L`-invariants, so its
//! degree-`d` piece is spanned as a lattice by `b * g` with `b` running over
//! the orbit-sum basis in degree `d - deg g`. Each degree is then a cokernel
//! computation over the orbit-sum basis of `S^{W_L}_d`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{Monomial, Poly};
use crate::weyl::{invariant_generators, GroupSpec, Parabolic, WeylError, ZipDatum};
use crate::zlinalg::{
    cokernel_with, AbelianGroup, GradedAbelianGroup, IntMatrix, LinalgError, SmithOptions, DEFAULT_MATRIX_CAP,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChowError {
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("degree {degree}: {product} is not a combination of W_L orbit sums")]
    Decomposition { degree: u32, product: String },
    #[error("relation {0} is not a homogeneous W_L-invariant")]
    BadRelation(String),
    #[error("quotient not finite-dimensional for q = 1")]
    NotFiniteDimensional,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid display parameters h = {h}, d = {d}")]
    InvalidDisplay { h: usize, d: usize },
    #[error("truncation level must be at least 1")]
    ZeroLevel,
    #[error("invalid F-zip type: {0}")]
    InvalidType(String),
    #[error("consistency check failed: {0}")]
    Inconsistent(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChowOptions {
    pub matrix_cap: usize,
}

impl Default for ChowOptions {
    fn default() -> Self {
        ChowOptions {
            matrix_cap: DEFAULT_MATRIX_CAP,
        }
    }
}

impl ChowOptions {
    fn smith(&self) -> SmithOptions {
        SmithOptions {
            certificates: false,
            matrix_cap: self.matrix_cap,
        }
    }
}

/// One generator `(q^e - 1) f` of the relation ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    /// Name of the invariant `f`: `c2` for `GL`, `c2(t^2)` for `Sp`.
    pub generator: String,
    pub degree: u32,
    /// `q^e - 1`.
    pub factor: BigUint,
    pub poly: Poly,
}

/// Relation ideal generators: `f - twist(f)` for each fundamental invariant,
/// sign-normalized to a positive leading coefficient. Empty when `q = 1`.
pub fn relations(z: &ZipDatum) -> Vec<Poly> {
    relation_data(z).into_iter().map(|r| r.poly).collect()
}

pub fn relation_data(z: &ZipDatum) -> Vec<Relation> {
    let q = z.q();
    invariant_generators(z.group())
        .into_iter()
        .enumerate()
        .filter_map(|(i, (f, degree))| {
            let twisted = f.frobenius_twist(q).expect("q >= 1 by construction");
            let mut rel = &f - &twisted;
            if rel.is_zero() {
                return None;
            }
            if rel.leading_term().is_some_and(|(_, c)| c.is_negative()) {
                rel = -&rel;
            }
            let generator = match z.group() {
                GroupSpec::Gl { .. } => format!("c{}", i + 1),
                GroupSpec::Sp { .. } => format!("c{}(t^2)", i + 1),
            };
            Some(Relation {
                generator,
                degree,
                factor: num_traits::pow(BigUint::from(q), degree as usize) - 1u32,
                poly: rel,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeviBlock {
    /// 1-based indices of the Chern roots in this block.
    pub variables: Vec<usize>,
    /// Degrees of the block's elementary symmetric generators.
    pub generator_degrees: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub chern_label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPresentation", into = "RawPresentation")]
pub struct ChowPresentation {
    pub variables: usize,
    pub blocks: Vec<LeviBlock>,
    pub relations: Vec<Relation>,
    pub notes: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct RawRelation {
    generator: String,
    degree: u32,
    #[serde(with = "crate::serde_util::biguint")]
    factor: BigUint,
    poly: String,
}

#[derive(Serialize, Deserialize)]
struct RawPresentation {
    variables: usize,
    blocks: Vec<LeviBlock>,
    relations: Vec<RawRelation>,
    notes: Vec<String>,
}

impl From<ChowPresentation> for RawPresentation {
    fn from(p: ChowPresentation) -> Self {
        RawPresentation {
            variables: p.variables,
            blocks: p.blocks,
            relations: p
                .relations
                .into_iter()
                .map(|r| RawRelation {
                    generator: r.generator,
                    degree: r.degree,
                    factor: r.factor,
                    poly: r.poly.to_string(),
                })
                .collect(),
            notes: p.notes,
        }
    }
}

impl TryFrom<RawPresentation> for ChowPresentation {
    type Error = crate::poly::PolyError;
    fn try_from(raw: RawPresentation) -> Result<Self, Self::Error> {
        let relations = raw
            .relations
            .into_iter()
            .map(|r| {
                Ok(Relation {
                    poly: Poly::parse(&r.poly, raw.variables)?,
                    generator: r.generator,
                    degree: r.degree,
                    factor: r.factor,
                })
            })
            .collect::<Result<_, Self::Error>>()?;
        Ok(ChowPresentation {
            variables: raw.variables,
            blocks: raw.blocks,
            relations,
            notes: raw.notes,
        })
    }
}

pub const LIE_LABEL: &str = "Lie";
pub const DUAL_LIE_LABEL: &str = "tLie^v";

pub fn present(z: &ZipDatum) -> ChowPresentation {
    let par = z.parabolic();
    let blocks = par.blocks();
    let two_block_gl = matches!(par.group(), GroupSpec::Gl { .. }) && blocks.len() == 2;
    let blocks = blocks
        .into_iter()
        .enumerate()
        .map(|(i, b)| LeviBlock {
            generator_degrees: (1..=b.len() as u32).collect(),
            variables: b.map(|v| v + 1).collect(),
            chern_label: two_block_gl.then(|| [LIE_LABEL, DUAL_LIE_LABEL][i].to_string()),
        })
        .collect();
    let mut notes = vec![format!(
        "relations are (q^e - 1) f for the degree-e generators f of S^W_G, q = {}",
        z.q()
    )];
    if two_block_gl {
        notes.push(
            "first block carries the Chern roots of Lie, second those of tLie^v; swapping the blocks gives an isomorphic ring"
                .to_string(),
        );
    }
    if let Some(p) = z.p() {
        notes.push(format!("characteristic p = {p}"));
    }
    ChowPresentation {
        variables: par.rank(),
        blocks,
        relations: relation_data(z),
        notes,
    }
}

impl fmt::Display for ChowPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> = (1..=self.variables).map(|i| format!("t{i}")).collect();
        let young: Vec<String> = self.blocks.iter().map(|b| format!("S{}", b.variables.len())).collect();
        let rels: Vec<String> = self.relations.iter().map(|r| r.poly.to_string()).collect();
        writeln!(
            f,
            "Z[{}]^({}) / ({})",
            vars.join(","),
            young.join(" x "),
            rels.join(", ")
        )?;
        for (i, b) in self.blocks.iter().enumerate() {
            let roots: Vec<String> = b.variables.iter().map(|v| format!("t{v}")).collect();
            write!(f, "  block {}: {}", i + 1, roots.join(","))?;
            if let Some(label) = &b.chern_label {
                write!(f, " (Chern roots of {label})")?;
            }
            let degs: Vec<String> = b.generator_degrees.iter().map(u32::to_string).collect();
            writeln!(f, ", generators in degrees {}", degs.join(","))?;
        }
        for r in &self.relations {
            writeln!(f, "  degree {}: {}*{} = {}", r.degree, r.factor, r.generator, r.poly)?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

/// Coordinates of a `W_L`-invariant `p` over the orbit sums indexed by `index`.
fn decompose(par: &Parabolic, p: &Poly, index: &HashMap<Monomial, usize>, degree: u32) -> Result<Vec<BigInt>, ChowError> {
    let fail = || ChowError::Decomposition {
        degree,
        product: p.to_string(),
    };
    let mut coords = vec![BigInt::zero(); index.len()];
    let mut covered = 0u64;
    for (m, c) in p.terms() {
        let rep = par.orbit_representative(m);
        let &col = index.get(&rep).ok_or_else(fail)?;
        if *m == rep {
            coords[col] = c.clone();
            covered += par.orbit_size(&rep);
        } else if p.coefficient(&rep) != *c {
            return Err(fail());
        }
    }
    if covered != p.num_terms() as u64 {
        return Err(fail());
    }
    Ok(coords)
}

fn degree_piece(par: &Parabolic, relations: &[Poly], degree: u32, opts: &ChowOptions) -> Result<AbelianGroup, ChowError> {
    let reps = par.orbit_representatives(degree);
    let index: HashMap<Monomial, usize> = reps.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows = Vec::new();
    for rel in relations {
        let Some(e) = rel.degree() else { continue };
        if e > degree {
            continue;
        }
        for b in par.invariant_basis(degree - e) {
            let prod = &b * rel;
            if prod.is_zero() {
                continue;
            }
            rows.push(decompose(par, &prod, &index, degree)?);
        }
    }
    let m = IntMatrix::from_row_vectors(reps.len(), rows);
    Ok(cokernel_with(&m, reps.len(), opts.smith())?)
}

/// `S^{W_L} / (relations)` in degrees `0..=max_degree`. Every relation must
/// be a homogeneous `W_L`-invariant.
pub fn graded_quotient(
    par: &Parabolic,
    relations: &[Poly],
    max_degree: u32,
    opts: &ChowOptions,
) -> Result<GradedAbelianGroup, ChowError> {
    let gens = par.levi_generators();
    for rel in relations {
        if rel.nvars() != par.rank() || !rel.is_homogeneous() || gens.iter().any(|g| g.apply(rel) != *rel) {
            return Err(ChowError::BadRelation(rel.to_string()));
        }
    }
    let degrees = (0..=max_degree)
        .into_par_iter()
        .map(|d| degree_piece(par, relations, d, opts))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GradedAbelianGroup::new(degrees))
}

pub fn graded_chow(z: &ZipDatum, max_degree: u32) -> Result<GradedAbelianGroup, ChowError> {
    graded_chow_with(z, max_degree, &ChowOptions::default())
}

pub fn graded_chow_with(z: &ZipDatum, max_degree: u32, opts: &ChowOptions) -> Result<GradedAbelianGroup, ChowError> {
    graded_quotient(z.parabolic(), &relations(z), max_degree, opts)
}

/// `Pic = A^1`.
pub fn picard(z: &ZipDatum) -> Result<AbelianGroup, ChowError> {
    picard_with(z, &ChowOptions::default())
}

pub fn picard_with(z: &ZipDatum, opts: &ChowOptions) -> Result<AbelianGroup, ChowError> {
    let graded = graded_chow_with(z, 1, opts)?;
    Ok(graded.degree(1).cloned().expect("degree 1 computed"))
}

/// Rational dimension: the sum of free ranks up to the top degree bound.
pub fn q_dimension(z: &ZipDatum) -> Result<u64, ChowError> {
    q_dimension_with(z, &ChowOptions::default())
}

pub fn q_dimension_with(z: &ZipDatum, opts: &ChowOptions) -> Result<u64, ChowError> {
    if z.q() < 2 {
        return Err(ChowError::NotFiniteDimensional);
    }
    let graded = graded_chow_with(z, z.parabolic().top_degree_bound(), opts)?;
    Ok(graded.free_ranks().iter().map(|&r| r as u64).sum())
}
