//! Free differential graded algebras, augmentations, and linearized homology.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::freealg::{Alphabet, AlgebraMap, Derivation, GenId, NCPoly, PolyDegree, Word};
use crate::linalg::Matrix;
use crate::scalar::{Field, Scalar};

/// A free graded algebra together with a degree `-1` differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeDga {
    field: Field,
    alphabet: Alphabet,
    differential: Derivation,
}

impl FreeDga {
    pub fn new(field: Field, alphabet: Alphabet, differential: Vec<NCPoly>) -> Result<Self> {
        if differential.len() != alphabet.len() {
            return Err(Error::BasisMismatch(format!(
                "{} differentials for {} generators",
                differential.len(),
                alphabet.len()
            )));
        }
        for p in &differential {
            if p.field() != field {
                return Err(Error::FieldMismatch {
                    left: field,
                    right: p.field(),
                });
            }
            for g in p.generators() {
                alphabet.get(g)?;
            }
        }
        Ok(FreeDga {
            field,
            alphabet,
            differential: Derivation::new(-1, differential),
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn differential(&self) -> &Derivation {
        &self.differential
    }

    /// `∂g`.
    pub fn d(&self, g: GenId) -> &NCPoly {
        self.differential.image(g).expect("generator of this algebra")
    }

    pub fn d_of(&self, name: &str) -> Option<&NCPoly> {
        self.alphabet.id(name).map(|g| self.d(g))
    }

    pub fn apply_differential(&self, x: &NCPoly) -> Result<NCPoly> {
        self.differential.apply(&self.alphabet, x)
    }

    pub fn num_generators(&self) -> usize {
        self.alphabet.len()
    }

    /// Base change along `Q -> F_p` (or the identity).
    pub fn reduce_to(&self, target: Field) -> Result<FreeDga> {
        let diffs = self
            .differential
            .images()
            .iter()
            .map(|p| p.reduce_to(target))
            .collect::<Result<Vec<_>>>()?;
        FreeDga::new(target, self.alphabet.clone(), diffs)
    }

    /// Longest word appearing in any `∂g`.
    pub fn max_word_length(&self) -> usize {
        self.differential
            .images()
            .iter()
            .map(NCPoly::max_word_length)
            .max()
            .unwrap_or(0)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorCheck {
    pub name: String,
    pub degree: i64,
    /// `None` when every word of `∂g` has degree `|g| - 1`.
    pub degree_problem: Option<String>,
    /// `∂²g` rendered with generator names; `"0"` when it vanishes.
    pub d_squared: String,
    pub d_squared_vanishes: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DgaReport {
    pub generators: Vec<GeneratorCheck>,
}

impl DgaReport {
    pub fn passed(&self) -> bool {
        self.generators
            .iter()
            .all(|g| g.degree_problem.is_none() && g.d_squared_vanishes)
    }

    pub fn failures(&self) -> impl Iterator<Item = &GeneratorCheck> {
        self.generators
            .iter()
            .filter(|g| g.degree_problem.is_some() || !g.d_squared_vanishes)
    }
}

/// Checks that `∂` lowers degree by one on every generator and that `∂² = 0`.
pub fn verify_dga(d: &FreeDga) -> DgaReport {
    let generators = d
        .alphabet
        .iter()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|g| {
            let dg = d.d(g.id);
            let degree_problem = match dg.degree(&d.alphabet) {
                Ok(PolyDegree::Zero) => None,
                Ok(PolyDegree::Homogeneous(k)) if k == g.degree - 1 => None,
                Ok(PolyDegree::Homogeneous(k)) => {
                    Some(format!("∂{} has degree {k}, expected {}", g.name, g.degree - 1))
                }
                Ok(PolyDegree::Mixed(ks)) => Some(format!("∂{} mixes degrees {ks:?}", g.name)),
                Err(e) => Some(e.to_string()),
            };
            let dd = d
                .apply_differential(dg)
                .unwrap_or_else(|_| NCPoly::zero(d.field));
            GeneratorCheck {
                name: g.name.clone(),
                degree: g.degree,
                degree_problem,
                d_squared: dd.display(&d.alphabet).to_string(),
                d_squared_vanishes: dd.is_zero(),
            }
        })
        .collect();
    DgaReport { generators }
}

/// A map from generators to the field, extended to a unital algebra map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Augmentation {
    values: Vec<Scalar>,
}

impl Augmentation {
    pub fn zero(field: Field, num_generators: usize) -> Self {
        Augmentation {
            values: vec![field.zero(); num_generators],
        }
    }

    pub fn new(values: Vec<Scalar>) -> Self {
        Augmentation { values }
    }

    pub fn value(&self, g: GenId) -> &Scalar {
        &self.values[g.index()]
    }

    pub fn set(&mut self, g: GenId, v: Scalar) {
        self.values[g.index()] = v;
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Scalar::is_zero)
    }

    /// `ε̂(x)`: the unital multiplicative extension evaluated on `x`.
    pub fn evaluate(&self, x: &NCPoly) -> Scalar {
        let mut acc = x.field().zero();
        for (w, c) in x.terms() {
            let mut t = c.clone();
            for g in w.letters() {
                t = &t * self.value(*g);
                if t.is_zero() {
                    break;
                }
            }
            acc += &t;
        }
        acc
    }

    /// The algebra automorphism `g ↦ g + sign·ε(g)`.
    fn shift_map(&self, field: Field, sign: i64) -> AlgebraMap {
        let mut phi = AlgebraMap::identity(field, self.values.len());
        for (i, v) in self.values.iter().enumerate() {
            if !v.is_zero() {
                let g = GenId(i as u32);
                let image = NCPoly::generator(field, g)
                    .add(&NCPoly::constant(&field.from_i64(sign) * v))
                    .expect("same field");
                phi.set_image(g, image).expect("in range");
            }
        }
        phi
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AugmentationReport {
    /// Generators of nonzero degree with a nonzero value.
    pub degree_violations: Vec<String>,
    /// Generators `g` with `ε̂(∂g) ≠ 0`, with the offending value.
    pub nonvanishing: Vec<(String, Scalar)>,
}

impl AugmentationReport {
    pub fn passed(&self) -> bool {
        self.degree_violations.is_empty() && self.nonvanishing.is_empty()
    }
}

pub fn verify_augmentation(d: &FreeDga, eps: &Augmentation) -> AugmentationReport {
    let mut degree_violations = Vec::new();
    let mut nonvanishing = Vec::new();
    for g in d.alphabet.iter() {
        if g.degree != 0 && !eps.value(g.id).is_zero() {
            degree_violations.push(g.name.clone());
        }
        let v = eps.evaluate(d.d(g.id));
        if !v.is_zero() {
            nonvanishing.push((g.name.clone(), v));
        }
    }
    AugmentationReport {
        degree_violations,
        nonvanishing,
    }
}

/// Conjugates the differential by `φ_ε : g ↦ g + ε(g)`, producing `∂^ε = φ_ε ∂ φ_ε⁻¹`.
pub fn twist(d: &FreeDga, eps: &Augmentation) -> Result<FreeDga> {
    if eps.values.len() != d.num_generators() {
        return Err(Error::NotAnAugmentation(
            "ε".into(),
            "wrong number of generator values".into(),
        ));
    }
    let report = verify_augmentation(d, eps);
    if !report.passed() {
        return Err(Error::NotAnAugmentation(
            "ε".into(),
            format!(
                "degree violations {:?}, ε∘∂ ≠ 0 on {:?}",
                report.degree_violations,
                report.nonvanishing.iter().map(|(n, _)| n).collect::<Vec<_>>()
            ),
        ));
    }
    let phi = eps.shift_map(d.field, 1);
    let phi_inv = eps.shift_map(d.field, -1);
    let twisted = conjugate(d, &phi, &phi_inv)?;
    if let Some(g) = twisted
        .alphabet
        .iter()
        .find(|g| !twisted.d(g.id).constant_term().is_zero())
    {
        return Err(Error::ConstantTerm(g.name.clone()));
    }
    Ok(twisted)
}

fn conjugate(d: &FreeDga, phi: &AlgebraMap, phi_inv: &AlgebraMap) -> Result<FreeDga> {
    let diffs = d
        .alphabet
        .iter()
        .map(|g| {
            let pre = phi_inv.image(g.id)?;
            phi.apply(&d.apply_differential(pre)?)
        })
        .collect::<Result<Vec<_>>>()?;
    FreeDga::new(d.field, d.alphabet.clone(), diffs)
}

/// Replaces `∂` by `φ ∘ ∂ ∘ φ_inv` after checking that the two maps are
/// mutually inverse and degree preserving on generators.
pub fn change_generators(d: &FreeDga, phi: &AlgebraMap, phi_inv: &AlgebraMap) -> Result<FreeDga> {
    let n = d.num_generators();
    if phi.len() != n || phi_inv.len() != n {
        return Err(Error::BasisMismatch("map size differs from generator count".into()));
    }
    for map in [phi, phi_inv] {
        for g in d.alphabet.iter() {
            match map.image(g.id)?.degree(&d.alphabet)? {
                PolyDegree::Homogeneous(k) if k == g.degree => {}
                _ => return Err(Error::DegreeNotPreserved(g.name.clone())),
            }
        }
    }
    let left = phi.compose(phi_inv)?;
    let right = phi_inv.compose(phi)?;
    for g in d.alphabet.iter() {
        let x = NCPoly::generator(d.field, g.id);
        if *left.image(g.id)? != x || *right.image(g.id)? != x {
            return Err(Error::InverseCheckFailed(g.name.clone()));
        }
    }
    conjugate(d, phi, phi_inv)
}

/// The word-length-one part `∂₁` of an augmented differential, organised as
/// one matrix per degree.
#[derive(Clone, Debug)]
pub struct LinearizedComplex {
    field: Field,
    /// Generators of each degree, in alphabet order.
    bases: BTreeMap<i64, Vec<GenId>>,
    names: Vec<String>,
    /// `∂₁ : C_k → C_{k-1}`; rows index `C_{k-1}`, columns index `C_k`.
    matrices: BTreeMap<i64, Matrix>,
}

impl LinearizedComplex {
    /// A complex given directly by bases and matrices; `matrices[k]` maps
    /// degree `k` to degree `k - 1`.
    pub fn from_parts(
        field: Field,
        dims: BTreeMap<i64, usize>,
        matrices: BTreeMap<i64, Matrix>,
    ) -> Self {
        let mut next = 0u32;
        let mut names = Vec::new();
        let bases = dims
            .into_iter()
            .map(|(k, n)| {
                let ids = (0..n)
                    .map(|i| {
                        names.push(format!("c{k}_{i}"));
                        next += 1;
                        GenId(next - 1)
                    })
                    .collect();
                (k, ids)
            })
            .collect();
        LinearizedComplex {
            field,
            bases,
            names,
            matrices,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.bases.keys().copied()
    }

    pub fn dim(&self, k: i64) -> usize {
        self.bases.get(&k).map_or(0, Vec::len)
    }

    pub fn basis_names(&self, k: i64) -> Vec<&str> {
        self.bases
            .get(&k)
            .map(|v| v.iter().map(|g| self.names[g.index()].as_str()).collect())
            .unwrap_or_default()
    }

    pub fn matrix(&self, k: i64) -> Option<&Matrix> {
        self.matrices.get(&k)
    }

    /// True when consecutive matrices compose to zero.
    pub fn is_complex(&self) -> bool {
        self.matrices.iter().all(|(k, m)| match self.matrices.get(&(k - 1)) {
            Some(next) if next.cols() == m.rows() => next.mul(m).is_zero(),
            _ => true,
        })
    }

    fn rank(&self, k: i64) -> usize {
        self.matrices.get(&k).map_or(0, Matrix::rank)
    }

    /// `dim ker ∂_k − rank ∂_{k+1}` for every degree with a nonzero chain group.
    pub fn homology_dims(&self) -> BTreeMap<i64, usize> {
        let ranks: BTreeMap<i64, usize> = self
            .matrices
            .par_iter()
            .map(|(k, m)| (*k, m.rank()))
            .collect();
        self.bases
            .iter()
            .map(|(&k, basis)| {
                let out = ranks.get(&k).copied().unwrap_or_else(|| self.rank(k));
                let inc = ranks.get(&(k + 1)).copied().unwrap_or(0);
                (k, basis.len() - out - inc)
            })
            .collect()
    }
}

pub fn linear_part(d: &FreeDga) -> Result<LinearizedComplex> {
    let mut bases: BTreeMap<i64, Vec<GenId>> = BTreeMap::new();
    for g in d.alphabet.iter() {
        if !d.d(g.id).constant_term().is_zero() {
            return Err(Error::ConstantTerm(g.name.clone()));
        }
        bases.entry(g.degree).or_default().push(g.id);
    }
    let position = |g: GenId, k: i64| bases.get(&k).and_then(|v| v.iter().position(|h| *h == g));
    let mut matrices = BTreeMap::new();
    for (&k, basis) in &bases {
        let Some(target) = bases.get(&(k - 1)) else {
            continue;
        };
        let mut m = Matrix::zeros(d.field, target.len(), basis.len());
        for (j, g) in basis.iter().enumerate() {
            for (w, c) in d.d(*g).component(1).terms() {
                let h = w.letters()[0];
                let i = position(h, k - 1).ok_or_else(|| {
                    Error::DegreeMismatch(format!(
                        "linear term {} in ∂{}",
                        d.alphabet.name(h),
                        d.alphabet.name(*g)
                    ))
                })?;
                m.set(i, j, c.clone());
            }
        }
        matrices.insert(k, m);
    }
    Ok(LinearizedComplex {
        field: d.field,
        bases,
        names: d.alphabet.iter().map(|g| g.name.clone()).collect(),
        matrices,
    })
}

/// A tame elementary automorphism `g ↦ g + c·w` (with `g ∉ w`) and its inverse.
pub fn elementary_automorphism(
    d: &FreeDga,
    g: GenId,
    word: Word,
    c: Scalar,
) -> Result<(AlgebraMap, AlgebraMap)> {
    if word.letters().contains(&g) {
        return Err(Error::InverseCheckFailed(d.alphabet.name(g).to_string()));
    }
    let field = d.field;
    let mut phi = AlgebraMap::identity(field, d.num_generators());
    let mut inv = phi.clone();
    let x = NCPoly::generator(field, g);
    let delta = NCPoly::monomial(word, c);
    phi.set_image(g, x.add(&delta)?)?;
    inv.set_image(g, x.sub(&delta)?)?;
    Ok((phi, inv))
}
