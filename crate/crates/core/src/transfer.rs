//! Homotopy transfer of an A∞ structure to a minimal model.
//!
//! Given a splitting `B = A ⊕ C` with inclusion `F¹`, basis projection `G¹`
//! and homotopy `T¹` satisfying `μ¹T¹ + T¹μ¹ = F¹G¹ − id`, the transferred
//! products and morphism components are
//!
//! ```text
//! p^d(x₁,…,x_d) = Σ_{r≥2} Σ_{d₁+…+d_r=d} μ_B^r(F^{d₁}(x₁,…), …, F^{d_r}(…,x_d))
//! F^d = T¹ ∘ p^d,   μ_A^d = G¹ ∘ p^d      (d ≥ 2)
//! ```
//!
//! With the left-to-right reduced-degree convention of [`crate::ainfty`] no
//! extra signs appear. `F` is returned as a [`MorphismCandidate`] `A → B`, so
//! the morphism equations can be checked independently.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::ainfty::{compositions, AInfinityAlgebra, MorphismCandidate, Vector};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Contraction {
    source: AInfinityAlgebra,
    /// B-indices of the A-part, in A-basis order.
    a_part: Vec<usize>,
    /// B-index → A-index for elements of the A-part.
    a_index: Vec<Option<usize>>,
    /// `T¹` on every B basis element.
    homotopy: Vec<Vector>,
}

impl Contraction {
    /// `homotopy` lists `T¹(e_i)` for every basis element of `source`.
    pub fn new(source: AInfinityAlgebra, a_part: Vec<usize>, homotopy: Vec<Vector>) -> Result<Self> {
        let n = source.dim();
        if homotopy.len() != n {
            return Err(Error::BasisMismatch(format!(
                "homotopy given on {} elements, basis has {n}",
                homotopy.len()
            )));
        }
        let mut a_index = vec![None; n];
        for (k, &i) in a_part.iter().enumerate() {
            if i >= n {
                return Err(Error::BasisOutOfRange(i));
            }
            if a_index[i].replace(k).is_some() {
                return Err(Error::BasisMismatch(format!(
                    "`{}` listed twice in the A-part",
                    source.name(i)
                )));
            }
        }
        if a_index[source.unit()].is_none() {
            return Err(Error::InvalidContraction("the unit must lie in the A-part".into()));
        }
        for (i, t) in homotopy.iter().enumerate() {
            for (j, _) in t.iter() {
                if j >= n {
                    return Err(Error::BasisOutOfRange(j));
                }
                if source.degree(j) != source.degree(i) - 1 {
                    return Err(Error::DegreeMismatch(format!(
                        "T¹({}) contains {} of degree {}, expected {}",
                        source.name(i),
                        source.name(j),
                        source.degree(j),
                        source.degree(i) - 1
                    )));
                }
            }
        }
        Ok(Contraction {
            source,
            a_part,
            a_index,
            homotopy,
        })
    }

    pub fn source(&self) -> &AInfinityAlgebra {
        &self.source
    }

    pub fn a_part(&self) -> &[usize] {
        &self.a_part
    }

    pub fn c_part(&self) -> Vec<usize> {
        (0..self.source.dim())
            .filter(|&i| self.a_index[i].is_none())
            .collect()
    }

    pub fn homotopy(&self, i: usize) -> &Vector {
        &self.homotopy[i]
    }

    pub fn apply_t(&self, v: &Vector) -> Vector {
        v.map(&self.homotopy)
    }

    /// `G¹` as a map to A-coordinates.
    pub fn project(&self, v: &Vector) -> Vector {
        Vector::from_terms(
            v.iter()
                .filter_map(|(i, c)| self.a_index[i].map(|k| (k, c.clone()))),
        )
    }

    /// `F¹G¹` on B-vectors.
    fn fg(&self, v: &Vector) -> Vector {
        Vector::from_terms(
            v.iter()
                .filter(|(i, _)| self.a_index[*i].is_some())
                .map(|(i, c)| (i, c.clone())),
        )
    }

    fn mu1(&self, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (i, c) in v.iter() {
            if let Some(w) = self.source.product(&[i]) {
                out.add_scaled(w, c);
            }
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HomotopyResidual {
    pub element: String,
    pub residual: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SideConditions {
    /// Elements `x` with `T¹T¹x ≠ 0`.
    pub tt: Vec<String>,
    /// Elements `x` with `G¹T¹x ≠ 0`.
    pub gt: Vec<String>,
    /// A-part elements with `T¹F¹x ≠ 0`.
    pub tf: Vec<String>,
}

impl SideConditions {
    pub fn hold(&self) -> bool {
        self.tt.is_empty() && self.gt.is_empty() && self.tf.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ContractionReport {
    pub homotopy_residuals: Vec<HomotopyResidual>,
    pub side_conditions: SideConditions,
}

impl ContractionReport {
    pub fn homotopy_holds(&self) -> bool {
        self.homotopy_residuals.is_empty()
    }

    pub fn passed(&self) -> bool {
        self.homotopy_holds() && self.side_conditions.hold()
    }
}

pub fn verify_contraction(c: &Contraction) -> ContractionReport {
    let b = &c.source;
    let mut homotopy_residuals = Vec::new();
    let mut side = SideConditions::default();
    let minus = b.field().from_i64(-1);
    for x in 0..b.dim() {
        let ex = Vector::basis(x, b.field());
        let tx = c.apply_t(&ex);
        let mut r = c.mu1(&tx);
        r.add_scaled(&c.apply_t(&c.mu1(&ex)), &b.field().one());
        r.add_scaled(&c.fg(&ex), &minus);
        r.add_scaled(&ex, &b.field().one());
        if !r.is_zero() {
            homotopy_residuals.push(HomotopyResidual {
                element: b.name(x).to_string(),
                residual: b.vector_string(&r),
            });
        }
        if !c.apply_t(&tx).is_zero() {
            side.tt.push(b.name(x).to_string());
        }
        if !c.project(&tx).is_zero() {
            side.gt.push(b.name(x).to_string());
        }
        if c.a_index[x].is_some() && !tx.is_zero() {
            side.tf.push(b.name(x).to_string());
        }
    }
    ContractionReport {
        homotopy_residuals,
        side_conditions: side,
    }
}

/// Replaces `T¹` by a homotopy satisfying all side conditions:
/// `T' = πT¹π` with `π = id − F¹G¹`, then `T'' = −T'μ¹T'`.
pub fn repair_side_conditions(c: &Contraction) -> Contraction {
    let b = &c.source;
    let minus = b.field().from_i64(-1);
    let pi = |v: &Vector| {
        let mut w = v.clone();
        w.add_scaled(&c.fg(v), &minus);
        w
    };
    let t1: Vec<Vector> = (0..b.dim())
        .map(|x| pi(&c.apply_t(&pi(&Vector::basis(x, b.field())))))
        .collect();
    let apply1 = |v: &Vector| v.map(&t1);
    let t2: Vec<Vector> = t1
        .iter()
        .map(|tx| apply1(&c.mu1(tx)).scaled(&minus))
        .collect();
    Contraction {
        source: c.source.clone(),
        a_part: c.a_part.clone(),
        a_index: c.a_index.clone(),
        homotopy: t2,
    }
}

#[derive(Clone, Debug)]
pub struct Transfer {
    /// The minimal model, with basis the A-part of the contraction.
    pub minimal: AInfinityAlgebra,
    /// `F : A → B`; keys are A-indices, values B-vectors.
    pub morphism: MorphismCandidate,
    pub contraction: ContractionReport,
    /// Whether the homotopy had to be modified to satisfy the side conditions.
    pub repaired: bool,
}

/// Prefixes of the argument lists of `μ^r`, for pruning.
fn prefix_sets(b: &AInfinityAlgebra, max_arity: usize) -> Vec<BTreeSet<Vec<usize>>> {
    (0..=max_arity)
        .map(|r| {
            let mut s = BTreeSet::new();
            for (k, _) in b.entries(r) {
                for i in 1..=k.len() {
                    s.insert(k[..i].to_vec());
                }
            }
            s
        })
        .collect()
}

struct Engine<'a> {
    c: &'a Contraction,
    /// `f[d]`: nonzero values of `F^d` on A-tuples, as B-vectors.
    f: Vec<HashMap<Vec<usize>, Vector>>,
    prefixes: Vec<BTreeSet<Vec<usize>>>,
}

impl Engine<'_> {
    fn value(&self, t: &[usize]) -> Option<&Vector> {
        self.f.get(t.len()).and_then(|m| m.get(t))
    }

    /// Tuples of length `d` on which some term of `p^d` can be nonzero.
    fn candidates(&self, d: usize) -> BTreeSet<Vec<usize>> {
        let b = &self.c.source;
        let mut out = BTreeSet::new();
        for comp in compositions(d, 2) {
            let r = comp.len();
            if b.num_entries(r) == 0 {
                continue;
            }
            let mut tuple = Vec::with_capacity(d);
            self.extend(&comp, 0, vec![Vec::new()], &mut tuple, &mut out);
        }
        out
    }

    fn extend(
        &self,
        comp: &[usize],
        part: usize,
        alive: Vec<Vec<usize>>,
        tuple: &mut Vec<usize>,
        out: &mut BTreeSet<Vec<usize>>,
    ) {
        if part == comp.len() {
            out.insert(tuple.clone());
            return;
        }
        let prefixes = &self.prefixes[comp.len()];
        for (t, v) in &self.f[comp[part]] {
            let next: Vec<Vec<usize>> = alive
                .iter()
                .flat_map(|pre| {
                    v.iter().filter_map(move |(j, _)| {
                        let mut p = pre.clone();
                        p.push(j);
                        prefixes.contains(&p).then_some(p)
                    })
                })
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            if next.is_empty() {
                continue;
            }
            let len = tuple.len();
            tuple.extend_from_slice(t);
            self.extend(comp, part + 1, next, tuple, out);
            tuple.truncate(len);
        }
    }

    fn p(&self, t: &[usize]) -> Vector {
        let lookup = |args: &[usize]| self.value(args).cloned();
        crate::ainfty::composed_sum(&self.c.source, &lookup, t, 2)
    }
}

/// Runs the transfer recursion up to `max_arity`.
pub fn transfer_products(c: &Contraction, max_arity: usize) -> Result<Transfer> {
    if max_arity < 2 {
        return Err(Error::ArityTooSmall(max_arity));
    }
    let report = verify_contraction(c);
    if !report.homotopy_holds() {
        let r = &report.homotopy_residuals[0];
        return Err(Error::InvalidContraction(format!(
            "homotopy identity fails on {}: {}",
            r.element, r.residual
        )));
    }
    let repaired_contraction;
    let (c, repaired) = if report.side_conditions.hold() {
        (c, false)
    } else {
        repaired_contraction = repair_side_conditions(c);
        let again = verify_contraction(&repaired_contraction);
        if !again.passed() {
            return Err(Error::InvalidContraction(
                "side conditions still fail after repair".into(),
            ));
        }
        (&repaired_contraction, true)
    };

    let b = &c.source;
    let field = b.field();
    if c.a_index[b.unit()] != Some(0) {
        return Err(Error::InvalidContraction(
            "the unit must be the first element of the A-part".into(),
        ));
    }
    let mut minimal = AInfinityAlgebra::new(field);
    for &i in &c.a_part[1..] {
        minimal.add_basis(b.name(i), b.degree(i));
    }

    let mut f1 = HashMap::new();
    for (k, &i) in c.a_part.iter().enumerate() {
        f1.insert(vec![k], Vector::basis(i, field));
    }
    let mut engine = Engine {
        c,
        f: vec![HashMap::new(), f1],
        prefixes: prefix_sets(b, max_arity),
    };
    let mut products: BTreeMap<Vec<usize>, Vector> = BTreeMap::new();

    for k in 0..c.a_part.len() {
        let v = c.project(&c.mu1(&Vector::basis(c.a_part[k], field)));
        if !v.is_zero() {
            products.insert(vec![k], v);
        }
    }
    for d in 2..=max_arity {
        let cands: Vec<Vec<usize>> = engine.candidates(d).into_iter().collect();
        let values: Vec<(Vec<usize>, Vector, Vector)> = cands
            .into_par_iter()
            .filter_map(|t| {
                let p = engine.p(&t);
                if p.is_zero() {
                    return None;
                }
                let mu = c.project(&p);
                let f = c.apply_t(&p);
                Some((t, mu, f))
            })
            .collect();
        let mut level = HashMap::new();
        for (t, mu, f) in values {
            if !mu.is_zero() {
                products.insert(t.clone(), mu);
            }
            if !f.is_zero() {
                level.insert(t, f);
            }
        }
        engine.f.push(level);
    }

    for (k, v) in products {
        minimal.set_product(&k, v)?;
    }
    let mut morphism = MorphismCandidate::new(field);
    for level in engine.f.iter().skip(1) {
        for (k, v) in level {
            morphism.set(k, v.clone());
        }
    }
    Ok(Transfer {
        minimal,
        morphism,
        contraction: verify_contraction(c),
        repaired,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainfty::{check_ainfty_relations, check_morphism_relations, CheckMode};
    use crate::scalar::Field;

    /// Basis `1, a, b, x, y` of degrees `0, 1, 2, 1, 2` with `μ¹(x) = y`,
    /// `μ²(a,a) = y`, `μ²(x,a) = b`. C = {x, y} is acyclic and A = {1, a, b}.
    fn toy(field: Field) -> AInfinityAlgebra {
        let mut b = AInfinityAlgebra::new(field);
        let a = b.add_basis("a", 1);
        let bb = b.add_basis("b", 2);
        let x = b.add_basis("x", 1);
        let y = b.add_basis("y", 2);
        b.add_unit_products();
        b.set_product(&[x], Vector::basis(y, field)).unwrap();
        b.set_product(&[a, a], Vector::basis(y, field)).unwrap();
        b.set_product(&[x, a], Vector::basis(bb, field)).unwrap();
        b
    }

    fn toy_contraction(field: Field) -> Contraction {
        let mut h = vec![Vector::new(); 5];
        h[4] = Vector::term(3, field.from_i64(-1));
        Contraction::new(toy(field), vec![0, 1, 2], h).unwrap()
    }

    #[test]
    fn toy_is_an_ainfty_algebra() {
        let b = toy(Field::Rationals);
        assert!(check_ainfty_relations(&b, 1..=4, CheckMode::Exhaustive).passed());
    }

    #[test]
    fn toy_contraction_verifies() {
        let rep = verify_contraction(&toy_contraction(Field::Rationals));
        assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn zero_homotopy_on_acyclic_part_fails() {
        let q = Field::Rationals;
        let c = Contraction::new(toy(q), vec![0, 1, 2], vec![Vector::new(); 5]).unwrap();
        assert!(!verify_contraction(&c).homotopy_holds());
        assert!(matches!(
            transfer_products(&c, 3),
            Err(Error::InvalidContraction(_))
        ));
    }

    #[test]
    fn homotopy_of_wrong_degree_is_rejected() {
        let q = Field::Rationals;
        let mut h = vec![Vector::new(); 5];
        h[4] = Vector::basis(2, q);
        let err = Contraction::new(toy(q), vec![0, 1, 2], h).unwrap_err();
        assert!(matches!(err, Error::DegreeMismatch(_)));
    }

    #[test]
    fn arity_below_two_is_rejected() {
        let c = toy_contraction(Field::Rationals);
        assert_eq!(transfer_products(&c, 1).unwrap_err(), Error::ArityTooSmall(1));
    }

    #[test]
    fn transfer_produces_a_triple_product() {
        for field in [Field::Rationals, Field::F2, Field::prime(3).unwrap()] {
            let c = toy_contraction(field);
            let t = transfer_products(&c, 5).unwrap();
            assert!(!t.repaired);
            let a = &t.minimal;
            assert!(a.product(&[1, 1]).is_none());
            let m3 = a.product(&[1, 1, 1]).expect("μ³(a,a,a)");
            assert_eq!(m3, &Vector::term(2, field.from_i64(-1)));
            assert!(check_ainfty_relations(a, 1..=5, CheckMode::Exhaustive).passed());
            let m = check_morphism_relations(a, c.source(), &t.morphism, 1..=5, CheckMode::Exhaustive);
            assert!(m.passed(), "{m:?}");
        }
    }

    #[test]
    fn repair_restores_side_conditions() {
        // 1, a (deg 0), x (deg 1), y (deg 2); μ¹(x) = y; T(y) = −x, T(x) = a.
        let q = Field::Rationals;
        let mut b = AInfinityAlgebra::new(q);
        let a = b.add_basis("a", 0);
        let x = b.add_basis("x", 1);
        let y = b.add_basis("y", 2);
        b.add_unit_products();
        b.set_product(&[x], Vector::basis(y, q)).unwrap();
        let mut h = vec![Vector::new(); 4];
        h[y] = Vector::term(x, q.from_i64(-1));
        h[x] = Vector::basis(a, q);
        let c = Contraction::new(b, vec![0, a], h).unwrap();
        let rep = verify_contraction(&c);
        assert!(rep.homotopy_holds());
        assert_eq!(rep.side_conditions.gt, vec!["x".to_string()]);
        assert_eq!(rep.side_conditions.tt, vec!["y".to_string()]);
        let fixed = repair_side_conditions(&c);
        assert!(verify_contraction(&fixed).passed());
        assert!(transfer_products(&c, 3).unwrap().repaired);
    }
}
