//! Finite-dimensional strictly unital A∞-algebras.
//!
//! # Conventions
//!
//! Products are written with arguments in word order: a word `g₁g₂…g_d`
//! occurring with coefficient `c` in `∂a` of a free DGA contributes `c·a` to
//! `μ^d(g₁,…,g_d)` of the dual algebra, with no extra sign. The A∞ relations
//! checked here are, for every tuple `(x₁,…,x_n)`,
//!
//! ```text
//! Σ_{i,m} (-1)^{‖x₁‖+…+‖x_i‖} μ^{n-m+1}(x₁,…,x_i, μ^m(x_{i+1},…,x_{i+m}), …, x_n) = 0
//! ```
//!
//! where `‖x‖ = |x| - 1` is the reduced degree. This is the usual
//! reduced-degree sign rule with arguments listed left to right, and it is
//! exactly what `∂² = 0` becomes under dualization. Strict unitality reads
//! `μ²(1,x) = x`, `μ²(x,1) = (-1)^{|x|} x`, and `μ^d` vanishes on tuples
//! containing `1` for `d ≠ 2`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dga::FreeDga;
use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// A sparse vector: basis index → nonzero coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Vector(BTreeMap<usize, Scalar>);

impl Vector {
    pub fn new() -> Self {
        Vector(BTreeMap::new())
    }

    pub fn basis(i: usize, field: Field) -> Self {
        Self::term(i, field.one())
    }

    pub fn term(i: usize, c: Scalar) -> Self {
        let mut v = Vector::new();
        v.add_term(i, c);
        v
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        let mut v = Vector::new();
        for (i, c) in terms {
            v.add_term(i, c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Scalar> {
        self.0.get(&i)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.0.iter().map(|(i, c)| (*i, c))
    }

    pub fn add_term(&mut self, i: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(i) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &Vector, c: &Scalar) {
        for (i, a) in other.iter() {
            self.add_term(i, a * c);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Vector {
        let mut v = Vector::new();
        v.add_scaled(self, c);
        v
    }

    pub fn reduce_to(&self, target: Field) -> Result<Vector> {
        let mut v = Vector::new();
        for (i, c) in self.iter() {
            v.add_term(i, c.reduce_to(target)?);
        }
        Ok(v)
    }

    /// Linear map given by its values on basis vectors.
    pub fn map(&self, images: &[Vector]) -> Vector {
        let mut v = Vector::new();
        for (i, c) in self.iter() {
            v.add_scaled(&images[i], c);
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisElement {
    pub name: String,
    pub degree: i64,
}

type ProductTable = BTreeMap<Vec<usize>, Vector>;

/// A finite graded basis with a distinguished unit and sparse products `μ^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInfinityAlgebra {
    field: Field,
    basis: Vec<BasisElement>,
    unit: usize,
    /// `products[d]` holds `μ^d`; index 0 is unused.
    products: Vec<ProductTable>,
}

impl AInfinityAlgebra {
    /// An algebra whose only basis element is the unit `1`, with `μ²(1,1) = 1`.
    pub fn new(field: Field) -> Self {
        let mut a = AInfinityAlgebra {
            field,
            basis: vec![BasisElement {
                name: "1".into(),
                degree: 0,
            }],
            unit: 0,
            products: vec![ProductTable::new(); 3],
        };
        a.products[2].insert(vec![0, 0], Vector::basis(0, field));
        a
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.basis[i].degree
    }

    pub fn name(&self, i: usize) -> &str {
        &self.basis[i].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    /// Index by name; panics if absent.
    pub fn expect_index(&self, name: &str) -> usize {
        self.index_of(name)
            .unwrap_or_else(|| panic!("no basis element named `{name}`"))
    }

    /// Adds a basis element with no products; unit products are added by
    /// [`AInfinityAlgebra::add_unit_products`].
    pub fn add_basis(&mut self, name: impl Into<String>, degree: i64) -> usize {
        self.basis.push(BasisElement {
            name: name.into(),
            degree,
        });
        self.basis.len() - 1
    }

    /// Highest arity with a stored entry.
    pub fn max_arity(&self) -> usize {
        (1..self.products.len())
            .rev()
            .find(|&d| !self.products[d].is_empty())
            .unwrap_or(0)
    }

    fn table_mut(&mut self, arity: usize) -> &mut ProductTable {
        if self.products.len() <= arity {
            self.products.resize(arity + 1, ProductTable::new());
        }
        &mut self.products[arity]
    }

    fn check_entry(&self, args: &[usize], value: &Vector) -> Result<()> {
        for &i in args.iter().chain(value.iter().map(|(i, _)| i).collect::<Vec<_>>().iter()) {
            if i >= self.basis.len() {
                return Err(Error::BasisOutOfRange(i));
            }
        }
        let expected = args.iter().map(|&i| self.degree(i)).sum::<i64>() + 2 - args.len() as i64;
        if let Some((bad, _)) = value.iter().find(|(i, _)| self.degree(*i) != expected) {
            return Err(Error::InhomogeneousProduct(format!(
                "{} ∋ {} (degree {}, expected {expected})",
                self.tuple_name(args),
                self.name(bad),
                self.degree(bad)
            )));
        }
        Ok(())
    }

    /// Sets `μ^d(args)`; rejects values that are not of degree `Σ|args| + 2 − d`.
    pub fn set_product(&mut self, args: &[usize], value: Vector) -> Result<()> {
        if args.is_empty() {
            return Err(Error::InhomogeneousProduct("μ⁰ is not supported".into()));
        }
        self.check_entry(args, &value)?;
        let table = self.table_mut(args.len());
        if value.is_zero() {
            table.remove(args);
        } else {
            table.insert(args.to_vec(), value);
        }
        Ok(())
    }

    /// `μ^d(args) += c · e_out`.
    pub fn add_to_product(&mut self, args: &[usize], out: usize, c: Scalar) -> Result<()> {
        let mut v = self.product(args).cloned().unwrap_or_default();
        v.add_term(out, c);
        self.set_product(args, v)
    }

    pub fn product(&self, args: &[usize]) -> Option<&Vector> {
        self.products.get(args.len()).and_then(|t| t.get(args))
    }

    /// Stored entries of `μ^d`, in lexicographic order of arguments.
    pub fn entries(&self, arity: usize) -> impl Iterator<Item = (&Vec<usize>, &Vector)> {
        self.products.get(arity).into_iter().flat_map(|t| t.iter())
    }

    pub fn num_entries(&self, arity: usize) -> usize {
        self.products.get(arity).map_or(0, BTreeMap::len)
    }

    /// Installs `μ²(1,x) = x` and `μ²(x,1) = (-1)^{|x|} x` for every basis element.
    pub fn add_unit_products(&mut self) {
        let field = self.field;
        let u = self.unit;
        for x in 0..self.basis.len() {
            let sign = field.sign(self.degree(x));
            self.table_mut(2).insert(vec![u, x], Vector::basis(x, field));
            self.table_mut(2).insert(vec![x, u], Vector::term(x, sign));
        }
    }

    /// Multilinear extension of `μ^r` to vector arguments.
    pub fn mu(&self, args: &[&Vector]) -> Vector {
        let r = args.len();
        let mut out = Vector::new();
        if r == 0 || self.num_entries(r) == 0 || args.iter().any(|v| v.is_zero()) {
            return out;
        }
        let mut idx = Vec::with_capacity(r);
        self.mu_rec(args, &mut idx, self.field.one(), &mut out);
        out
    }

    fn mu_rec(&self, args: &[&Vector], idx: &mut Vec<usize>, coef: Scalar, out: &mut Vector) {
        let k = idx.len();
        if k == args.len() {
            if let Some(v) = self.product(idx) {
                out.add_scaled(v, &coef);
            }
            return;
        }
        for (i, c) in args[k].iter() {
            idx.push(i);
            self.mu_rec(args, idx, &coef * c, out);
            idx.pop();
        }
    }

    pub fn reduce_to(&self, target: Field) -> Result<AInfinityAlgebra> {
        let mut out = AInfinityAlgebra {
            field: target,
            basis: self.basis.clone(),
            unit: self.unit,
            products: vec![ProductTable::new(); self.products.len()],
        };
        for (d, table) in self.products.iter().enumerate() {
            for (k, v) in table {
                let r = v.reduce_to(target)?;
                if !r.is_zero() {
                    out.products[d].insert(k.clone(), r);
                }
            }
        }
        Ok(out)
    }

    pub fn tuple_name(&self, args: &[usize]) -> String {
        let names: Vec<&str> = args.iter().map(|&i| self.name(i)).collect();
        format!("μ{}({})", superscript(args.len()), names.join(", "))
    }

    /// Renders a vector with basis names, e.g. `-a_0 + ax_0`.
    pub fn vector_string(&self, v: &Vector) -> String {
        vector_string(v, |i| self.name(i).to_string())
    }
}

pub(crate) fn superscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).unwrap() as usize])
        .collect()
}

pub(crate) fn vector_string(v: &Vector, name: impl Fn(usize) -> String) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, (i, c)) in v.iter().enumerate() {
        let text = c.to_string();
        let (neg, mag) = match text.strip_prefix('-') {
            Some(m) => (true, m.to_string()),
            None => (false, text),
        };
        match (k, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        if mag == "1" {
            s.push_str(&name(i));
        } else {
            let _ = write!(s, "{mag}*{}", name(i));
        }
    }
    s
}

/// The strictly unital A∞-algebra dual to an augmented free DGA.
///
/// Basis: the unit `1` followed by the generators in alphabet order, with
/// degrees shifted up by one.
pub fn dualize(d: &FreeDga) -> Result<AInfinityAlgebra> {
    let field = d.field();
    let mut a = AInfinityAlgebra::new(field);
    for g in d.alphabet().iter() {
        if !d.d(g.id).constant_term().is_zero() {
            return Err(Error::ConstantTerm(g.name.clone()));
        }
        a.add_basis(g.name.clone(), g.degree + 1);
    }
    for g in d.alphabet().iter() {
        let out = g.id.index() + 1;
        for (w, c) in d.d(g.id).terms() {
            let args: Vec<usize> = w.letters().iter().map(|h| h.index() + 1).collect();
            a.add_to_product(&args, out, c.clone())?;
        }
    }
    a.add_unit_products();
    Ok(a)
}

/// Which tuples a relation check visits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CheckMode {
    Exhaustive,
    Random { seed: u64, samples: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub tuple: Vec<String>,
    pub residual: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ArityResult {
    pub arity: usize,
    pub exhaustive: bool,
    pub tuples_checked: u64,
    pub violations: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub arities: Vec<ArityResult>,
    /// The first few violations, for diagnostics.
    pub examples: Vec<Violation>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.arities.iter().all(|a| a.violations == 0)
    }

    pub fn total_violations(&self) -> u64 {
        self.arities.iter().map(|a| a.violations).sum()
    }

    pub fn tuples_checked(&self) -> u64 {
        self.arities.iter().map(|a| a.tuples_checked).sum()
    }
}

const MAX_EXAMPLES: usize = 10;

/// The left-hand side of the A∞ relation at `tuple`.
pub fn relation_residual(a: &AInfinityAlgebra, tuple: &[usize]) -> Vector {
    let n = tuple.len();
    let mut out = Vector::new();
    let mut buf = Vec::with_capacity(n);
    let mut prefix = 0i64;
    for i in 0..n {
        let sign = a.field.sign(prefix);
        for m in 1..=n - i {
            let Some(inner) = a.product(&tuple[i..i + m]) else {
                continue;
            };
            for (b, c) in inner.iter() {
                buf.clear();
                buf.extend_from_slice(&tuple[..i]);
                buf.push(b);
                buf.extend_from_slice(&tuple[i + m..]);
                if let Some(v) = a.product(&buf) {
                    out.add_scaled(v, &(c * &sign));
                }
            }
        }
        prefix += a.degree(tuple[i]) - 1;
    }
    out
}

pub(crate) fn decode_tuple(mut code: u64, base: usize, n: usize) -> Vec<usize> {
    let mut t = vec![0; n];
    for slot in t.iter_mut().rev() {
        *slot = (code % base as u64) as usize;
        code /= base as u64;
    }
    t
}

/// Random tuples for arity `n`: half uniform, half stitched together from
/// argument lists of stored products so that nontrivial compositions occur.
pub(crate) fn sample_tuples(
    dim: usize,
    keys: &[Vec<usize>],
    n: usize,
    seed: u64,
    samples: usize,
) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((n as u64) << 32));
    (0..samples)
        .map(|s| {
            if s % 2 == 0 || keys.is_empty() {
                (0..n).map(|_| rng.random_range(0..dim)).collect()
            } else {
                let mut t = Vec::with_capacity(n);
                while t.len() < n {
                    if rng.random_bool(0.2) {
                        t.push(rng.random_range(0..dim));
                    } else {
                        let k = &keys[rng.random_range(0..keys.len())];
                        t.extend(k.iter().copied());
                    }
                }
                t.truncate(n);
                t
            }
        })
        .collect()
}

/// Tuples to visit for one arity, streamed as `(count, evaluator)` without
/// materialising the exhaustive list.
pub(crate) fn run_tuples<F>(
    dim: usize,
    keys: &[Vec<usize>],
    n: usize,
    mode: CheckMode,
    check: F,
) -> (u64, Vec<(Vec<usize>, Vector)>, u64)
where
    F: Fn(&[usize]) -> Vector + Sync,
{
    match mode {
        CheckMode::Exhaustive => {
            let total = (dim as u64).pow(n as u32);
            let bad: Vec<(Vec<usize>, Vector)> = (0..total)
                .into_par_iter()
                .filter_map(|code| {
                    let t = decode_tuple(code, dim, n);
                    let r = check(&t);
                    (!r.is_zero()).then_some((t, r))
                })
                .collect();
            let count = bad.len() as u64;
            (total, bad.into_iter().take(MAX_EXAMPLES).collect(), count)
        }
        CheckMode::Random { seed, samples } => {
            let tuples = sample_tuples(dim, keys, n, seed, samples);
            let bad: Vec<(Vec<usize>, Vector)> = tuples
                .par_iter()
                .filter_map(|t| {
                    let r = check(t);
                    (!r.is_zero()).then(|| (t.clone(), r))
                })
                .collect();
            let count = bad.len() as u64;
            (samples as u64, bad.into_iter().take(MAX_EXAMPLES).collect(), count)
        }
    }
}

fn stored_keys(a: &AInfinityAlgebra) -> Vec<Vec<usize>> {
    (1..a.products.len())
        .flat_map(|d| a.entries(d).map(|(k, _)| k.clone()))
        .collect()
}

/// Evaluates the A∞ relations on the requested arities.
pub fn check_ainfty_relations(
    a: &AInfinityAlgebra,
    arities: RangeInclusive<usize>,
    mode: CheckMode,
) -> RelationReport {
    let keys = stored_keys(a);
    let mut report = RelationReport {
        arities: Vec::new(),
        examples: Vec::new(),
    };
    for n in arities {
        let (checked, bad, count) = run_tuples(a.dim(), &keys, n, mode, |t| relation_residual(a, t));
        for (t, r) in bad {
            if report.examples.len() < MAX_EXAMPLES {
                report.examples.push(Violation {
                    tuple: t.iter().map(|&i| a.name(i).to_string()).collect(),
                    residual: a.vector_string(&r),
                });
            }
        }
        report.arities.push(ArityResult {
            arity: n,
            exhaustive: matches!(mode, CheckMode::Exhaustive),
            tuples_checked: checked,
            violations: count,
        });
    }
    report
}

#[derive(Clone, Debug, Serialize)]
pub struct UnitalityReport {
    pub problems: Vec<String>,
}

impl UnitalityReport {
    pub fn passed(&self) -> bool {
        self.problems.is_empty()
    }
}

pub fn check_strict_unitality(a: &AInfinityAlgebra) -> UnitalityReport {
    let u = a.unit;
    let f = a.field;
    let mut problems = Vec::new();
    if a.degree(u) != 0 {
        problems.push("unit is not in degree 0".into());
    }
    for x in 0..a.dim() {
        let left = a.product(&[u, x]).cloned().unwrap_or_default();
        if left != Vector::basis(x, f) {
            problems.push(format!(
                "{} = {}, expected {}",
                a.tuple_name(&[u, x]),
                a.vector_string(&left),
                a.name(x)
            ));
        }
        let right = a.product(&[x, u]).cloned().unwrap_or_default();
        let expected = Vector::term(x, f.sign(a.degree(x)));
        if right != expected {
            problems.push(format!(
                "{} = {}, expected {}",
                a.tuple_name(&[x, u]),
                a.vector_string(&right),
                a.vector_string(&expected)
            ));
        }
    }
    for d in 1..a.products.len() {
        if d == 2 {
            continue;
        }
        for (k, v) in a.entries(d) {
            if k.contains(&u) {
                problems.push(format!("{} = {} ≠ 0", a.tuple_name(k), a.vector_string(v)));
            }
        }
    }
    UnitalityReport { problems }
}

/// Multilinear maps `F^d` from tuples of source basis elements to target
/// vectors, of degree `1 − d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismCandidate {
    field: Field,
    components: Vec<ProductTable>,
}

impl MorphismCandidate {
    pub fn new(field: Field) -> Self {
        MorphismCandidate {
            field,
            components: vec![ProductTable::new(); 2],
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn set(&mut self, args: &[usize], value: Vector) {
        let d = args.len();
        if self.components.len() <= d {
            self.components.resize(d + 1, ProductTable::new());
        }
        if value.is_zero() {
            self.components[d].remove(args);
        } else {
            self.components[d].insert(args.to_vec(), value);
        }
    }

    pub fn get(&self, args: &[usize]) -> Option<&Vector> {
        self.components.get(args.len()).and_then(|t| t.get(args))
    }

    pub fn max_arity(&self) -> usize {
        (1..self.components.len())
            .rev()
            .find(|&d| !self.components[d].is_empty())
            .unwrap_or(0)
    }

    pub fn entries(&self, arity: usize) -> impl Iterator<Item = (&Vec<usize>, &Vector)> {
        self.components.get(arity).into_iter().flat_map(|t| t.iter())
    }

    /// Checks `|F^d(x₁,…,x_d)| = Σ|x_i| + 1 − d` on every stored entry.
    pub fn check_degrees(&self, source: &AInfinityAlgebra, target: &dyn GradedBasis) -> Result<()> {
        for d in 1..self.components.len() {
            for (k, v) in &self.components[d] {
                let expected = k.iter().map(|&i| source.degree(i)).sum::<i64>() + 1 - d as i64;
                for (j, _) in v.iter() {
                    if target.degree(j) != expected {
                        return Err(Error::DegreeMismatch(format!(
                            "F{}({}) has a component of degree {}, expected {expected}",
                            superscript(d),
                            k.iter().map(|&i| source.name(i)).collect::<Vec<_>>().join(", "),
                            target.degree(j)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Degrees of a target basis, used for morphism degree checks.
pub trait GradedBasis {
    fn degree(&self, i: usize) -> i64;
}

impl GradedBasis for AInfinityAlgebra {
    fn degree(&self, i: usize) -> i64 {
        self.basis[i].degree
    }
}

/// Compositions of `n` into `r ≥ min_parts` positive parts, in lexicographic order.
pub(crate) fn compositions(n: usize, min_parts: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for k in 1..=rest {
            cur.push(k);
            rec(rest - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut out);
    out.retain(|c| c.len() >= min_parts);
    out
}

/// `Σ_r Σ μ_target^r(F^{d₁}(…), …, F^{d_r}(…))` over compositions with at least
/// `min_parts` parts.
pub(crate) fn composed_sum(
    target: &AInfinityAlgebra,
    f: &dyn Fn(&[usize]) -> Option<Vector>,
    tuple: &[usize],
    min_parts: usize,
) -> Vector {
    let mut out = Vector::new();
    for comp in compositions(tuple.len(), min_parts) {
        if target.num_entries(comp.len()) == 0 {
            continue;
        }
        let mut vals = Vec::with_capacity(comp.len());
        let mut pos = 0;
        let mut zero = false;
        for &k in &comp {
            match f(&tuple[pos..pos + k]) {
                Some(v) if !v.is_zero() => vals.push(v),
                _ => {
                    zero = true;
                    break;
                }
            }
            pos += k;
        }
        if zero {
            continue;
        }
        let refs: Vec<&Vector> = vals.iter().collect();
        let v = target.mu(&refs);
        out.add_scaled(&v, &target.field.one());
    }
    out
}

/// Residual of the A∞-morphism equation for `f : source → target` at `tuple`:
///
/// `Σ μ_target^r(F^{d₁}, …, F^{d_r}) − Σ (-1)^{‖x₁‖+…+‖x_i‖} F(x₁,…,x_i, μ_source^m(…), …)`.
pub fn morphism_residual(
    source: &AInfinityAlgebra,
    target: &AInfinityAlgebra,
    f: &MorphismCandidate,
    tuple: &[usize],
) -> Vector {
    let lookup = |args: &[usize]| f.get(args).cloned();
    let mut out = composed_sum(target, &lookup, tuple, 1);
    let minus = source.field.from_i64(-1);
    let n = tuple.len();
    let mut buf = Vec::with_capacity(n);
    let mut prefix = 0i64;
    for i in 0..n {
        let sign = &source.field.sign(prefix) * &minus;
        for m in 1..=n - i {
            let Some(inner) = source.product(&tuple[i..i + m]) else {
                continue;
            };
            for (b, c) in inner.iter() {
                buf.clear();
                buf.extend_from_slice(&tuple[..i]);
                buf.push(b);
                buf.extend_from_slice(&tuple[i + m..]);
                if let Some(v) = f.get(&buf) {
                    out.add_scaled(v, &(c * &sign));
                }
            }
        }
        prefix += source.degree(tuple[i]) - 1;
    }
    out
}

/// Checks the A∞-morphism equations of `f` on the requested arities.
pub fn check_morphism_relations(
    source: &AInfinityAlgebra,
    target: &AInfinityAlgebra,
    f: &MorphismCandidate,
    arities: RangeInclusive<usize>,
    mode: CheckMode,
) -> RelationReport {
    let keys = stored_keys(source);
    let mut report = RelationReport {
        arities: Vec::new(),
        examples: Vec::new(),
    };
    for n in arities {
        let (checked, bad, count) = run_tuples(source.dim(), &keys, n, mode, |t| {
            morphism_residual(source, target, f, t)
        });
        for (t, r) in bad {
            if report.examples.len() < MAX_EXAMPLES {
                report.examples.push(Violation {
                    tuple: t.iter().map(|&i| source.name(i).to_string()).collect(),
                    residual: target.vector_string(&r),
                });
            }
        }
        report.arities.push(ArityResult {
            arity: n,
            exhaustive: matches!(mode, CheckMode::Exhaustive),
            tuples_checked: checked,
            violations: count,
        });
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::{Alphabet, NCPoly, Word};

    #[test]
    fn trivial_algebra_is_strictly_unital() {
        let a = AInfinityAlgebra::new(Field::Rationals);
        assert!(check_strict_unitality(&a).passed());
        assert!(check_ainfty_relations(&a, 1..=4, CheckMode::Exhaustive).passed());
    }

    #[test]
    fn higher_product_on_unit_breaks_unitality() {
        let f = Field::F2;
        let mut a = AInfinityAlgebra::new(f);
        let x = a.add_basis("x", 1);
        let y = a.add_basis("y", 1);
        a.add_unit_products();
        assert!(check_strict_unitality(&a).passed());
        a.set_product(&[0, x, y], Vector::basis(x, f)).unwrap();
        assert!(!check_strict_unitality(&a).passed());
    }

    #[test]
    fn non_associative_product_violates_relations() {
        let f = Field::Rationals;
        let mut a = AInfinityAlgebra::new(f);
        let x = a.add_basis("x", 1);
        let y = a.add_basis("y", 1);
        let z = a.add_basis("z", 2);
        a.add_unit_products();
        a.set_product(&[x, y], Vector::basis(z, f)).unwrap();
        let r = relation_residual(&a, &[x, y, 0]);
        assert!(r.is_zero());
        let mut b = AInfinityAlgebra::new(f);
        let u = b.add_basis("u", 0);
        let v = b.add_basis("v", 0);
        b.add_unit_products();
        b.set_product(&[u, u], Vector::basis(v, f)).unwrap();
        b.set_product(&[u, v], Vector::basis(u, f)).unwrap();
        let rep = check_ainfty_relations(&b, 3..=3, CheckMode::Exhaustive);
        assert!(!rep.passed());
    }

    #[test]
    fn inhomogeneous_entries_are_rejected() {
        let f = Field::F2;
        let mut a = AInfinityAlgebra::new(f);
        let x = a.add_basis("x", 1);
        let err = a.set_product(&[x, x], Vector::basis(x, f)).unwrap_err();
        assert!(matches!(err, Error::InhomogeneousProduct(_)));
    }

    #[test]
    fn linear_dga_dualizes_to_mu1_only() {
        let q = Field::Rationals;
        let mut al = Alphabet::new();
        let a = al.push("a", 1).unwrap();
        let x = al.push("x", 0).unwrap();
        let _ = a;
        let d = FreeDga::new(q, al, vec![NCPoly::generator(q, x), NCPoly::zero(q)]).unwrap();
        let b = dualize(&d).unwrap();
        assert_eq!(b.max_arity(), 2);
        assert_eq!(b.num_entries(1), 1);
        // only unit products in arity 2
        assert!(b.entries(2).all(|(k, _)| k.contains(&0)));
        assert!(check_ainfty_relations(&b, 1..=3, CheckMode::Exhaustive).passed());
    }

    fn cubic_dga(field: Field, c_sign: i64) -> FreeDga {
        // ∂a = xyx, ∂c = ayx ± xya; ∂²c = 0 exactly when the sign is minus.
        let mut al = Alphabet::new();
        let a = al.push("a", 1).unwrap();
        let c = al.push("c", 2).unwrap();
        let x = al.push("x", 0).unwrap();
        let y = al.push("y", 0).unwrap();
        let _ = c;
        let da = NCPoly::monomial(Word::new(vec![x, y, x]), field.one());
        let dc = NCPoly::from_terms(
            field,
            [
                (field.one(), Word::new(vec![a, y, x])),
                (field.from_i64(c_sign), Word::new(vec![x, y, a])),
            ],
        );
        let zero = NCPoly::zero(field);
        FreeDga::new(field, al, vec![da, dc, zero.clone(), zero]).unwrap()
    }

    #[test]
    fn dual_relations_hold_iff_d_squared_vanishes() {
        let q = Field::Rationals;
        let good = dualize(&cubic_dga(q, -1)).unwrap();
        assert!(check_ainfty_relations(&good, 1..=5, CheckMode::Exhaustive).passed());
        let bad = dualize(&cubic_dga(q, 1)).unwrap();
        let rep = check_ainfty_relations(&bad, 1..=5, CheckMode::Exhaustive);
        assert!(!rep.passed());
        assert_eq!(rep.arities[4].violations, 1);
        // Over F₂ the two signs agree.
        let f2 = dualize(&cubic_dga(Field::F2, 1)).unwrap();
        assert!(check_ainfty_relations(&f2, 1..=5, CheckMode::Exhaustive).passed());
    }

    #[test]
    fn random_mode_finds_structured_violations() {
        let bad = dualize(&cubic_dga(Field::Rationals, 1)).unwrap();
        let rep = check_ainfty_relations(
            &bad,
            5..=5,
            CheckMode::Random {
                seed: 7,
                samples: 2000,
            },
        );
        assert!(!rep.passed());
    }

    #[test]
    fn compositions_enumerate_correctly() {
        assert_eq!(compositions(3, 1).len(), 4);
        assert_eq!(compositions(4, 2).len(), 7);
        assert_eq!(compositions(2, 2), vec![vec![1, 1]]);
    }

    #[test]
    fn superscripts_render() {
        assert_eq!(superscript(4), "⁴");
        assert_eq!(superscript(12), "¹²");
    }
}
