//! Finite dg-algebra models of the cochains on a closed genus-`g` surface
//! over F₂, and the zig-zag `H → Ĉ ← C′ → C` of quasi-isomorphisms.
//!
//! Subscripts of `θ`, `γ` are read modulo `4g` (so `γ₀ = γ_{4g}`,
//! `θ_{4g+1} = θ₁`). Products not listed are zero.
//!
//! `Ĉ` as listed is not associative: `(ε_{2j}ψ_j)ψ_j = ξ_{4j−2}ψ_j ≠ 0` is
//! computed inside `C′`, while `ψ_jψ_j = 0`. No choice of the unlisted
//! products repairs this, so [`verify_dg_algebra`] reports it.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::ainfty::{vector_string, BasisElement, Vector};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Field;

#[derive(Clone, Debug)]
pub struct DgAlgebra {
    name: String,
    field: Field,
    basis: Vec<BasisElement>,
    index: BTreeMap<String, usize>,
    unit: Vector,
    differential: Vec<Vector>,
    products: BTreeMap<(usize, usize), Vector>,
}

impl DgAlgebra {
    fn new(name: &str, field: Field) -> Self {
        DgAlgebra {
            name: name.into(),
            field,
            basis: Vec::new(),
            index: BTreeMap::new(),
            unit: Vector::new(),
            differential: Vec::new(),
            products: BTreeMap::new(),
        }
    }

    fn add(&mut self, name: String, degree: i64) -> usize {
        let i = self.basis.len();
        self.index.insert(name.clone(), i);
        self.basis.push(BasisElement { name, degree });
        self.differential.push(Vector::new());
        i
    }

    fn vec(&self, names: &[String]) -> Vector {
        let mut v = Vector::new();
        for n in names {
            v.add_term(self.idx(n), self.field.one());
        }
        v
    }

    fn set_d(&mut self, x: &str, value: &[String]) {
        let v = self.vec(value);
        let i = self.idx(x);
        self.differential[i] = v;
    }

    fn set_mul(&mut self, x: &str, y: &str, value: &[String]) {
        let v = self.vec(value);
        let key = (self.idx(x), self.idx(y));
        if v.is_zero() {
            self.products.remove(&key);
        } else {
            self.products.insert(key, v);
        }
    }

    /// Makes `u` a two-sided identity on every basis element.
    fn set_identity(&mut self, u: &str) {
        let ui = self.idx(u);
        for x in 0..self.dim() {
            let v = Vector::basis(x, self.field);
            self.products.insert((ui, x), v.clone());
            self.products.insert((x, ui), v);
        }
        self.unit = Vector::basis(ui, self.field);
    }

    fn idx(&self, name: &str) -> usize {
        *self
            .index
            .get(name)
            .unwrap_or_else(|| panic!("{}: no basis element `{name}`", self.name))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.basis[i].degree
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn d(&self, v: &Vector) -> Vector {
        v.map(&self.differential)
    }

    pub fn mul(&self, u: &Vector, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (i, a) in u.iter() {
            for (j, b) in v.iter() {
                if let Some(w) = self.products.get(&(i, j)) {
                    out.add_scaled(w, &(a * b));
                }
            }
        }
        out
    }

    pub fn product(&self, i: usize, j: usize) -> Vector {
        self.products.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn vector_string(&self, v: &Vector) -> String {
        vector_string(v, |i| self.basis[i].name.clone())
    }

    fn e(&self, i: usize) -> Vector {
        Vector::basis(i, self.field)
    }

    fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.basis.iter().map(|b| b.degree).collect();
        d.sort();
        d.dedup();
        d
    }

    fn of_degree(&self, k: i64) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degree(i) == k).collect()
    }

    /// Matrix of `∂ : P^k → P^{k+1}` in the bases of the two degrees.
    fn d_matrix(&self, k: i64) -> Matrix {
        let src = self.of_degree(k);
        let tgt = self.of_degree(k + 1);
        let pos: BTreeMap<usize, usize> = tgt.iter().enumerate().map(|(r, &i)| (i, r)).collect();
        let mut m = Matrix::zeros(self.field, tgt.len(), src.len());
        for (c, &i) in src.iter().enumerate() {
            for (j, a) in self.differential[i].iter() {
                if let Some(&r) = pos.get(&j) {
                    m.set(r, c, a.clone());
                }
            }
        }
        m
    }
}

fn names<I: IntoIterator<Item = String>>(it: I) -> Vec<String> {
    it.into_iter().collect()
}

fn range(prefix: &str, lo: usize, hi: usize) -> Vec<String> {
    (lo..=hi).map(|l| format!("{prefix}{l}")).collect()
}

fn check_genus(g: usize) -> Result<()> {
    if g == 0 {
        Err(Error::InvalidGenus(g))
    } else {
        Ok(())
    }
}

/// `k` modulo `n`, as a representative in `1..=n`.
fn wrap(k: i64, n: usize) -> usize {
    ((k - 1).rem_euclid(n as i64) + 1) as usize
}

/// Simplicial cochains `C` of the triangulated surface.
pub fn build_c(g: usize) -> Result<DgAlgebra> {
    check_genus(g)?;
    let n = 4 * g;
    let mut c = DgAlgebra::new("C", Field::F2);
    c.add("e1".into(), 0);
    c.add("e2".into(), 0);
    for j in 1..=g {
        c.add(format!("alpha{j}"), 1);
        c.add(format!("beta{j}"), 1);
    }
    for k in 1..=n {
        c.add(format!("theta{k}"), 1);
    }
    for k in 1..=n {
        c.add(format!("gamma{k}"), 2);
    }
    let theta = |k: i64| format!("theta{}", wrap(k, n));
    let gamma = |k: i64| format!("gamma{}", wrap(k, n));
    let all_theta = range("theta", 1, n);
    c.set_d("e1", &all_theta);
    c.set_d("e2", &all_theta);
    for j in 1..=g as i64 {
        c.set_d(&format!("alpha{j}"), &[gamma(4 * j - 3), gamma(4 * j - 1)]);
        c.set_d(&format!("beta{j}"), &[gamma(4 * j - 2), gamma(4 * j)]);
    }
    for k in 1..=n as i64 {
        c.set_d(&theta(k), &[gamma(k - 1), gamma(k)]);
    }
    c.set_mul("e1", "e1", &names(["e1".into()]));
    c.set_mul("e2", "e2", &names(["e2".into()]));
    for k in 1..=n as i64 {
        c.set_mul("e1", &theta(k), &[theta(k)]);
        c.set_mul("e1", &gamma(k), &[gamma(k)]);
        c.set_mul(&theta(k), "e2", &[theta(k)]);
        c.set_mul(&gamma(k), "e2", &[gamma(k)]);
    }
    for j in 1..=g as i64 {
        let (a, b) = (format!("alpha{j}"), format!("beta{j}"));
        c.set_mul("e2", &a, std::slice::from_ref(&a));
        c.set_mul(&a, "e2", std::slice::from_ref(&a));
        c.set_mul("e2", &b, std::slice::from_ref(&b));
        c.set_mul(&b, "e2", std::slice::from_ref(&b));
        c.set_mul(&theta(4 * j - 3), &a, &[gamma(4 * j - 3)]);
        c.set_mul(&theta(4 * j - 2), &b, &[gamma(4 * j - 2)]);
        c.set_mul(&theta(4 * j), &a, &[gamma(4 * j - 1)]);
        c.set_mul(&theta(4 * j + 1), &b, &[gamma(4 * j)]);
    }
    c.unit = c.vec(&names(["e1".into(), "e2".into()]));
    Ok(c)
}

/// `ν + ν₁ + … + ν_m`, or `ν₁ + … + ν_m` without the leading `ν`.
fn nu_sum(m: usize, with_nu: bool) -> Vec<String> {
    let mut v = range("nu", 1, m);
    if with_nu {
        v.insert(0, "nu".into());
    }
    v
}

fn add_cprime_generators(c: &mut DgAlgebra, g: usize) {
    c.add("e".into(), 0);
    for j in 1..=g {
        c.add(format!("phi{j}"), 1);
        c.add(format!("psi{j}"), 1);
    }
    c.add("nu".into(), 2);
    c.add("eps1".into(), 0);
    c.add("zeta1".into(), 1);
    for l in 1..4 * g {
        c.add(format!("xi{l}"), 1);
    }
    for l in 1..4 * g {
        c.add(format!("nu{l}"), 2);
    }
}

fn add_cprime_structure(c: &mut DgAlgebra, g: usize) {
    let n = 4 * g;
    c.set_d("eps1", &names(["zeta1".into()]));
    for l in 1..n {
        c.set_d(&format!("xi{l}"), &[format!("nu{l}")]);
    }
    for j in 1..=g {
        let (phi, psi) = (format!("phi{j}"), format!("psi{j}"));
        c.set_mul(&phi, &psi, &nu_sum(4 * j - 2, true));
        c.set_mul(&psi, &phi, &nu_sum(4 * j - 1, true));
        c.set_mul(&format!("xi{}", 4 * j - 3), &phi, &nu_sum(4 * j - 3, true));
        c.set_mul(&format!("xi{}", 4 * j - 2), &psi, &nu_sum(4 * j - 2, true));
        if j < g {
            c.set_mul(&format!("xi{}", 4 * j), &phi, &nu_sum(4 * j - 1, true));
            c.set_mul(&format!("xi{}", 4 * j + 1), &psi, &nu_sum(4 * j, true));
        }
        c.set_mul(
            "eps1",
            &phi,
            &[format!("xi{}", 4 * j - 2), format!("xi{}", 4 * j - 1)],
        );
        c.set_mul(
            "zeta1",
            &phi,
            &[format!("nu{}", 4 * j - 2), format!("nu{}", 4 * j - 1)],
        );
        if j < g {
            c.set_mul(
                "eps1",
                &psi,
                &[format!("xi{}", 4 * j - 1), format!("xi{}", 4 * j)],
            );
            c.set_mul(
                "zeta1",
                &psi,
                &[format!("nu{}", 4 * j - 1), format!("nu{}", 4 * j)],
            );
        }
    }
    let psi_g = format!("psi{g}");
    c.set_mul("xi1", &psi_g, &names(["nu".into()]));
    let mut v = vec!["zeta1".to_string()];
    v.extend(range("xi", 1, n - 2));
    c.set_mul("eps1", &psi_g, &v);
    c.set_mul("zeta1", &psi_g, &range("nu", 1, n - 2));
    c.set_mul("eps1", "eps1", &names(["eps1".into()]));
    c.set_mul("eps1", "nu", &names(["nu".into()]));
    c.set_mul("eps1", "zeta1", &names(["zeta1".into()]));
    for l in 1..n {
        c.set_mul("eps1", &format!("xi{l}"), &[format!("xi{l}")]);
        c.set_mul("eps1", &format!("nu{l}"), &[format!("nu{l}")]);
    }
}

pub fn build_cprime(g: usize) -> Result<DgAlgebra> {
    check_genus(g)?;
    let mut c = DgAlgebra::new("C'", Field::F2);
    add_cprime_generators(&mut c, g);
    add_cprime_structure(&mut c, g);
    c.set_identity("e");
    Ok(c)
}

fn chat_base(g: usize) -> DgAlgebra {
    let mut c = DgAlgebra::new("Ĉ", Field::F2);
    add_cprime_generators(&mut c, g);
    for k in 2..=2 * g + 1 {
        c.add(format!("eps{k}"), 0);
    }
    for k in 2..=2 * g + 1 {
        c.add(format!("zeta{k}"), 1);
    }
    add_cprime_structure(&mut c, g);
    for k in 2..=2 * g + 1 {
        c.set_d(&format!("eps{k}"), &[format!("zeta{k}")]);
    }
    for j in 1..=g {
        let (phi, psi) = (format!("phi{j}"), format!("psi{j}"));
        c.set_mul(&format!("eps{}", 2 * j), &psi, &range("xi", 1, 4 * j - 2));
        c.set_mul(&format!("eps{}", 2 * j + 1), &phi, &range("xi", 1, 4 * j - 1));
        c.set_mul(&format!("zeta{}", 2 * j), &psi, &nu_sum(4 * j - 2, false));
        c.set_mul(&format!("zeta{}", 2 * j + 1), &phi, &nu_sum(4 * j - 1, false));
    }
    c
}

pub fn build_chat(g: usize) -> Result<DgAlgebra> {
    check_genus(g)?;
    let mut c = chat_base(g);
    c.set_identity("e");
    Ok(c)
}

/// The cohomology algebra `H` with zero differential.
pub fn build_h(g: usize) -> Result<DgAlgebra> {
    check_genus(g)?;
    let mut h = DgAlgebra::new("H", Field::F2);
    h.add("e".into(), 0);
    for j in 1..=g {
        h.add(format!("phibar{j}"), 1);
        h.add(format!("psibar{j}"), 1);
    }
    h.add("nu".into(), 2);
    for j in 1..=g {
        let (a, b) = (format!("phibar{j}"), format!("psibar{j}"));
        h.set_mul(&a, &b, &names(["nu".into()]));
        h.set_mul(&b, &a, &names(["nu".into()]));
    }
    h.set_identity("e");
    Ok(h)
}

#[derive(Clone, Debug)]
pub struct DgMorphism {
    pub name: String,
    pub source: DgAlgebra,
    pub target: DgAlgebra,
    images: Vec<Vector>,
}

impl DgMorphism {
    pub fn new(name: &str, source: DgAlgebra, target: DgAlgebra, images: Vec<Vector>) -> Result<Self> {
        if images.len() != source.dim() {
            return Err(Error::BasisMismatch(format!(
                "{name}: {} images for {} basis elements",
                images.len(),
                source.dim()
            )));
        }
        Ok(DgMorphism {
            name: name.into(),
            source,
            target,
            images,
        })
    }

    pub fn identity(p: &DgAlgebra) -> Self {
        let images = (0..p.dim()).map(|i| p.e(i)).collect();
        DgMorphism {
            name: format!("id_{}", p.name),
            source: p.clone(),
            target: p.clone(),
            images,
        }
    }

    pub fn zero(source: &DgAlgebra, target: &DgAlgebra) -> Self {
        DgMorphism {
            name: "0".into(),
            source: source.clone(),
            target: target.clone(),
            images: vec![Vector::new(); source.dim()],
        }
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        v.map(&self.images)
    }

    pub fn image(&self, i: usize) -> &Vector {
        &self.images[i]
    }
}

fn morphism_from_names(
    name: &str,
    source: DgAlgebra,
    target: DgAlgebra,
    rules: &[(String, Vec<String>)],
) -> Result<DgMorphism> {
    let mut images = vec![Vector::new(); source.dim()];
    for (x, ys) in rules {
        images[source.idx(x)] = target.vec(ys);
    }
    DgMorphism::new(name, source, target, images)
}

/// `Φ : C′ → C`.
pub fn build_phi(g: usize) -> Result<DgMorphism> {
    let (src, tgt) = (build_cprime(g)?, build_c(g)?);
    let n = 4 * g;
    let theta = |k: usize| format!("theta{}", wrap(k as i64, n));
    let gamma = |k: usize| format!("gamma{}", wrap(k as i64, n));
    let mut rules = vec![
        ("e".to_string(), names(["e1".into(), "e2".into()])),
        ("eps1".to_string(), names(["e1".into()])),
        ("zeta1".to_string(), range("theta", 1, n)),
        ("nu".to_string(), vec![gamma(n)]),
    ];
    for j in 1..=g {
        rules.push((format!("phi{j}"), vec![format!("alpha{j}"), theta(4 * j - 2), theta(4 * j - 1)]));
        rules.push((format!("psi{j}"), vec![format!("beta{j}"), theta(4 * j - 1), theta(4 * j)]));
    }
    for l in 1..n {
        rules.push((format!("xi{l}"), vec![theta(l)]));
        rules.push((format!("nu{l}"), vec![gamma(l + n - 1), gamma(l)]));
    }
    morphism_from_names("Phi", src, tgt, &rules)
}

/// The inclusion `C′ → Ĉ`.
pub fn build_inclusion(g: usize) -> Result<DgMorphism> {
    let (src, tgt) = (build_cprime(g)?, build_chat(g)?);
    let rules: Vec<(String, Vec<String>)> = src
        .basis
        .iter()
        .map(|b| (b.name.clone(), vec![b.name.clone()]))
        .collect();
    morphism_from_names("inclusion", src, tgt, &rules)
}

/// `Φ̂ : H → Ĉ`.
pub fn build_phihat(g: usize) -> Result<DgMorphism> {
    let (src, tgt) = (build_h(g)?, build_chat(g)?);
    let mut rules = vec![
        ("e".to_string(), names(["e".into()])),
        ("nu".to_string(), names(["nu".into()])),
    ];
    for j in 1..=g {
        rules.push((format!("phibar{j}"), vec![format!("phi{j}"), format!("zeta{}", 2 * j)]));
        rules.push((format!("psibar{j}"), vec![format!("psi{j}"), format!("zeta{}", 2 * j + 1)]));
    }
    morphism_from_names("PhiHat", src, tgt, &rules)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct DgAlgebraReport {
    pub name: String,
    pub dim: usize,
    pub degree_errors: Vec<String>,
    pub d_squared: Vec<String>,
    pub leibniz: Vec<String>,
    pub associativity: Vec<String>,
    pub unit: Vec<String>,
}

impl DgAlgebraReport {
    pub fn passed(&self) -> bool {
        self.degree_errors.is_empty()
            && self.d_squared.is_empty()
            && self.leibniz.is_empty()
            && self.associativity.is_empty()
            && self.unit.is_empty()
    }
}

const MAX_LISTED: usize = 20;

fn push_limited(v: &mut Vec<String>, s: String) {
    if v.len() < MAX_LISTED {
        v.push(s);
    }
}

/// Exhaustive checks of `∂² = 0`, degrees, Leibniz, associativity and the unit.
pub fn verify_dg_algebra(p: &DgAlgebra) -> DgAlgebraReport {
    let f = p.field;
    let n = p.dim();
    let mut r = DgAlgebraReport {
        name: p.name.clone(),
        dim: n,
        ..Default::default()
    };
    let name = |i: usize| p.basis[i].name.as_str();
    for x in 0..n {
        let dx = &p.differential[x];
        if let Some((j, _)) = dx.iter().find(|(j, _)| p.degree(*j) != p.degree(x) + 1) {
            push_limited(&mut r.degree_errors, format!("∂{} ∋ {}", name(x), name(j)));
        }
        let dd = p.d(dx);
        if !dd.is_zero() {
            push_limited(&mut r.d_squared, format!("∂²{} = {}", name(x), p.vector_string(&dd)));
        }
    }
    for (&(x, y), v) in &p.products {
        if let Some((j, _)) = v.iter().find(|(j, _)| p.degree(*j) != p.degree(x) + p.degree(y)) {
            push_limited(&mut r.degree_errors, format!("{}·{} ∋ {}", name(x), name(y), name(j)));
        }
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect();
    let leibniz: Vec<String> = pairs
        .par_iter()
        .filter_map(|&(x, y)| {
            let (ex, ey) = (p.e(x), p.e(y));
            let lhs = p.d(&p.product(x, y));
            let mut rhs = p.mul(&p.d(&ex), &ey);
            rhs.add_scaled(&p.mul(&ex, &p.d(&ey)), &f.sign(p.degree(x)));
            (lhs != rhs).then(|| {
                format!(
                    "∂({}·{}) = {} but ∂x·y ± x·∂y = {}",
                    name(x),
                    name(y),
                    p.vector_string(&lhs),
                    p.vector_string(&rhs)
                )
            })
        })
        .collect();
    for s in leibniz {
        push_limited(&mut r.leibniz, s);
    }
    let assoc: Vec<String> = (0..n * n * n)
        .into_par_iter()
        .filter_map(|code| {
            let (x, y, z) = (code / (n * n), (code / n) % n, code % n);
            let (ex, ez) = (p.e(x), p.e(z));
            let left = p.mul(&p.product(x, y), &ez);
            let right = p.mul(&ex, &p.product(y, z));
            (left != right).then(|| {
                format!(
                    "({}·{})·{} = {} but {}·({}·{}) = {}",
                    name(x),
                    name(y),
                    name(z),
                    p.vector_string(&left),
                    name(x),
                    name(y),
                    name(z),
                    p.vector_string(&right)
                )
            })
        })
        .collect();
    for s in assoc {
        push_limited(&mut r.associativity, s);
    }
    for x in 0..n {
        let ex = p.e(x);
        if p.mul(&p.unit, &ex) != ex || p.mul(&ex, &p.unit) != ex {
            push_limited(&mut r.unit, format!("unit does not fix {}", name(x)));
        }
    }
    if !p.d(&p.unit).is_zero() {
        push_limited(&mut r.unit, "∂(unit) ≠ 0".into());
    }
    r
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct DgMorphismReport {
    pub name: String,
    pub degree_errors: Vec<String>,
    pub chain_map: Vec<String>,
    pub multiplicative: Vec<String>,
    pub unital: bool,
}

impl DgMorphismReport {
    pub fn passed(&self) -> bool {
        self.degree_errors.is_empty()
            && self.chain_map.is_empty()
            && self.multiplicative.is_empty()
            && self.unital
    }
}

pub fn verify_dg_morphism(m: &DgMorphism) -> DgMorphismReport {
    let (s, t) = (&m.source, &m.target);
    let n = s.dim();
    let mut r = DgMorphismReport {
        name: m.name.clone(),
        ..Default::default()
    };
    let name = |i: usize| s.basis[i].name.as_str();
    for x in 0..n {
        if let Some((j, _)) = m.images[x].iter().find(|(j, _)| t.degree(*j) != s.degree(x)) {
            push_limited(
                &mut r.degree_errors,
                format!("{}({}) ∋ {}", m.name, name(x), t.basis[j].name),
            );
        }
        let lhs = m.apply(&s.d(&s.e(x)));
        let rhs = t.d(&m.images[x]);
        if lhs != rhs {
            push_limited(
                &mut r.chain_map,
                format!(
                    "f(∂{}) = {} but ∂f({}) = {}",
                    name(x),
                    t.vector_string(&lhs),
                    name(x),
                    t.vector_string(&rhs)
                ),
            );
        }
    }
    let bad: Vec<String> = (0..n * n)
        .into_par_iter()
        .filter_map(|code| {
            let (x, y) = (code / n, code % n);
            let lhs = m.apply(&s.product(x, y));
            let rhs = t.mul(&m.images[x], &m.images[y]);
            (lhs != rhs).then(|| {
                format!(
                    "f({}·{}) = {} but f({})·f({}) = {}",
                    name(x),
                    name(y),
                    t.vector_string(&lhs),
                    name(x),
                    name(y),
                    t.vector_string(&rhs)
                )
            })
        })
        .collect();
    for b in bad {
        push_limited(&mut r.multiplicative, b);
    }
    r.unital = m.apply(&s.unit) == t.unit;
    r
}

/// Cohomology dimensions per degree.
pub fn cohomology(p: &DgAlgebra) -> BTreeMap<i64, usize> {
    p.degrees()
        .into_iter()
        .map(|k| {
            let dim = p.of_degree(k).len();
            let out = p.d_matrix(k).rank();
            let inc = p.d_matrix(k - 1).rank();
            (k, dim - out - inc)
        })
        .collect()
}

/// Cohomology dimensions as a vector over degrees `0..=max`.
pub fn cohomology_vector(p: &DgAlgebra) -> Vec<usize> {
    let h = cohomology(p);
    let max = h.keys().copied().max().unwrap_or(0).max(0);
    (0..=max).map(|k| h.get(&k).copied().unwrap_or(0)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct QuasiIsoReport {
    /// Per degree: (dim H(source), dim H(target), rank of the induced map).
    pub degrees: BTreeMap<i64, (usize, usize, usize)>,
}

impl QuasiIsoReport {
    pub fn is_quasi_iso(&self) -> bool {
        self.degrees.values().all(|&(a, b, r)| a == b && r == a)
    }
}

/// Rank of `H(f)` in each degree: `rank[f(Z_src) | B_tgt] − rank B_tgt`.
pub fn induced_map_ranks(m: &DgMorphism) -> QuasiIsoReport {
    let (s, t) = (&m.source, &m.target);
    let hs = cohomology(s);
    let ht = cohomology(t);
    let mut degrees = BTreeMap::new();
    let mut all: Vec<i64> = hs.keys().chain(ht.keys()).copied().collect();
    all.sort();
    all.dedup();
    for k in all {
        let src = s.of_degree(k);
        let tgt = t.of_degree(k);
        let pos: BTreeMap<usize, usize> = tgt.iter().enumerate().map(|(r, &i)| (i, r)).collect();
        let to_tgt_coords = |v: &Vector| {
            let mut w = Vector::new();
            for (i, c) in v.iter() {
                w.add_term(pos[&i], c.clone());
            }
            w
        };
        let cycles: Vec<Vector> = s
            .d_matrix(k)
            .kernel()
            .into_iter()
            .map(|coeffs| {
                let mut v = Vector::new();
                for (c, &i) in coeffs.iter().zip(&src) {
                    v.add_term(i, c.clone());
                }
                to_tgt_coords(&m.apply(&v))
            })
            .collect();
        let boundaries = t.d_matrix(k - 1);
        let fz = Matrix::from_columns(t.field, tgt.len(), cycles.iter());
        let rank_b = boundaries.rank();
        let rank = boundaries.hconcat(&fz).rank() - rank_b;
        degrees.insert(
            k,
            (
                hs.get(&k).copied().unwrap_or(0),
                ht.get(&k).copied().unwrap_or(0),
                rank,
            ),
        );
    }
    QuasiIsoReport { degrees }
}

pub fn is_quasi_iso(m: &DgMorphism) -> bool {
    induced_map_ranks(m).is_quasi_iso()
}

/// Everything needed to certify the zig-zag for one genus.
#[derive(Clone, Debug, Serialize)]
pub struct FormalityReport {
    pub genus: usize,
    pub algebras: Vec<DgAlgebraReport>,
    pub cohomology: BTreeMap<String, Vec<usize>>,
    pub morphisms: Vec<DgMorphismReport>,
    pub quasi_isos: BTreeMap<String, QuasiIsoReport>,
}

impl FormalityReport {
    pub fn passed(&self) -> bool {
        let expected = vec![1, 2 * self.genus, 1];
        self.algebras.iter().all(DgAlgebraReport::passed)
            && self.morphisms.iter().all(DgMorphismReport::passed)
            && self.quasi_isos.values().all(QuasiIsoReport::is_quasi_iso)
            && self.cohomology.values().all(|v| *v == expected)
    }
}

pub fn formality_check(g: usize) -> Result<FormalityReport> {
    let algebras = [build_c(g)?, build_cprime(g)?, build_chat(g)?, build_h(g)?];
    let morphisms = [build_phi(g)?, build_inclusion(g)?, build_phihat(g)?];
    Ok(FormalityReport {
        genus: g,
        algebras: algebras.iter().map(verify_dg_algebra).collect(),
        cohomology: algebras
            .iter()
            .map(|a| (a.name.clone(), cohomology_vector(a)))
            .collect(),
        morphisms: morphisms.iter().map(verify_dg_morphism).collect(),
        quasi_isos: morphisms
            .iter()
            .map(|m| (m.name.clone(), induced_map_ranks(m)))
            .collect(),
    })
}
